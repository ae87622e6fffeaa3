#include "mahler/body.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mahler;

namespace {

Vec random_vec(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  Vec v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = g(rng);
  return v;
}

QVector random_normal(std::mt19937_64& rng, std::size_t d) {
  std::uniform_int_distribution<int> k(-5, 5);
  for (;;) {
    QVector u(d);
    bool nonzero = false;
    for (auto& x : u) {
      x = k(rng);
      nonzero |= !is_zero(x);
    }
    if (nonzero) return u;
  }
}

}  // namespace

TEST_CASE("gauge and support examples") {
  ConvexBody cube = make_cube(3);
  ConvexBody cross = make_cross(3);
  CHECK(cube.polytope()->facets().rows() == 6);
  CHECK(support(cube, Vec::Constant(3, 1.0)) == doctest::Approx(3));
  CHECK(support(cross, Vec::Constant(3, 1.0)) == doctest::Approx(1));
  Vec x(3);
  x << 0.5, -0.5, 0.25;
  CHECK(gauge(cube, x) == doctest::Approx(0.5));
  CHECK(gauge(make_lp_ball(1, 2), Vec::Constant(2, 0.3)) == doctest::Approx(0.6));
  CHECK(gauge(make_lp_ball(2, 3), Vec::Zero(3)) == 0);
  Vec u(3);
  u << 3, -4, 0;
  CHECK(support(make_lp_ball(2, 3), u) == doctest::Approx(5));

  ConvexBody l15 = make_lp_ball(1.5, 4);
  Vec y(4);
  y << 0.1, -0.2, 0.3, 0.05;
  double s = 0;
  for (double c : y) s += std::pow(std::abs(c), 1.5);
  CHECK(gauge(l15, y) == doctest::Approx(std::pow(s, 1 / 1.5)));
  CHECK_THROWS(make_lp_ball(0.5, 3));
}

TEST_CASE("polar of cube and l_p balls") {
  CHECK(*polar(make_cube(3)).polytope() == Polytope::cross(3));
  CHECK(lp_exponent(polar(make_lp_ball(3, 4))).value() == doctest::Approx(1.5));
  CHECK(lp_exponent(polar(make_lp_ball(2, 4))).value() == doctest::Approx(2));
  std::mt19937_64 rng(1);
  for (double p : {1.5, 3.0, 6.0}) {
    ConvexBody k = make_lp_ball(p, 4);
    ConvexBody kpp = polar(polar(k));
    ConvexBody kp = polar(k);
    for (int t = 0; t < 50; ++t) {
      Vec x = random_vec(rng, 4);
      CHECK(kpp.gauge(x) == doctest::Approx(k.gauge(x)).epsilon(1e-12));
      CHECK(kp.gauge(x) == doctest::Approx(k.support(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear image covariance") {
  std::mt19937_64 rng(2);
  QMatrix m(3, 3);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 1) = Rational(1, 3);
  m(2, 0) = -1;
  m(2, 2) = 1;
  Mat md(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) md(i, j) = to_double(m(i, j));
  for (ConvexBody k : {make_cube(3), make_lp_ball(3, 3)}) {
    ConvexBody mk = linear_image(k, m);
    ConvexBody mkp = polar(mk);
    ConvexBody kp = polar(k);
    const Mat inv_t = md.inverse().transpose();
    for (int t = 0; t < 30; ++t) {
      Vec u = random_vec(rng, 3);
      CHECK(mk.support(u) == doctest::Approx(k.support(md.transpose() * u)).epsilon(1e-12));
      // polar(MK) = M^{-T} K-polar
      CHECK(mkp.gauge(u) == doctest::Approx(kp.gauge(md.transpose() * u)).epsilon(1e-12));
      CHECK(mkp.gauge(u) == doctest::Approx(kp.gauge(inv_t.inverse() * u)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(linear_image(make_cube(3), QMatrix(3, 3)), std::domain_error);
  QMatrix box = QMatrix::identity(3);
  box(0, 0) = 2;
  Vec e(3);
  e << 1, 0, 0;
  CHECK(linear_image(make_cube(3), box).support(e) == doctest::Approx(2));
  CHECK(*linear_image(make_cube(3), QMatrix::identity(3)).polytope() == Polytope::cube(3));
}

TEST_CASE("sections of l_p balls") {
  // Coordinate section is the lower-dimensional ball.
  ConvexBody k = make_lp_ball(3, 4);
  ConvexBody s = hyperplane_section(k, {0, 0, 0, 1});
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    Vec y = random_vec(rng, 3);
    CHECK(s.gauge(y) == doctest::Approx(make_lp_ball(3, 3).gauge(y)).epsilon(1e-12));
  }
  CHECK_THROWS(hyperplane_section(k, {0, 0, 0, 0}));

  // Oracle for a skew section in R^3: support by angular scan of the boundary.
  ConvexBody b = make_lp_ball(1.5, 3);
  QVector u{1, 2, -1};
  ConvexBody sec = hyperplane_section(b, u);
  Vec n(3);
  n << 1, 2, -1;
  Mat basis = orthonormal_hyperplane_basis(n);
  CHECK((basis.transpose() * basis - Mat::Identity(2, 2)).norm() < 1e-14);
  CHECK((basis.transpose() * n).norm() < 1e-14);
  for (int t = 0; t < 5; ++t) {
    Vec eta = random_vec(rng, 2);
    double best = 0;
    for (int i = 0; i < 200000; ++i) {
      const double a = 2 * std::numbers::pi * i / 200000.0;
      Vec y(2);
      y << std::cos(a), std::sin(a);
      best = std::max(best, eta.dot(y) / b.gauge(basis * y));
    }
    CHECK(sec.support(eta) == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("slicing duality for functional bodies") {
  std::mt19937_64 rng(5);
  for (double p : {1.5, 3.0, 6.0}) {
    ConvexBody k = make_lp_ball(p, 4);
    for (int t = 0; t < 5; ++t) {
      QVector u = random_normal(rng, 4);
      ConvexBody sec = hyperplane_section(k, u);
      ConvexBody proj = hyperplane_projection(polar(k), u);
      for (int j = 0; j < 10; ++j) {
        Vec eta = random_vec(rng, 3);
        // (K cap u-perp)-polar = projection of K-polar, so their gauges agree.
        CHECK(sec.support(eta) == doctest::Approx(proj.gauge(eta)).epsilon(1e-10));
        CHECK(polar(sec).gauge(eta) == doctest::Approx(proj.gauge(eta)).epsilon(1e-10));
        CHECK(proj.support(eta) == doctest::Approx(sec.gauge(eta)).epsilon(1e-10));
        // Membership agrees with the gauge away from the boundary.
        const double g = proj.gauge(eta);
        CHECK(proj.contains(eta * (0.999 / g)));
        CHECK_FALSE(proj.contains(eta * (1.001 / g)));
      }
    }
  }
}

TEST_CASE("polytope sections and projections through bodies") {
  ConvexBody cube = make_cube(3);
  ConvexBody sq = hyperplane_section(cube, {0, 0, 1});
  CHECK(*sq.polytope() == Polytope::cube(2));
  ConvexBody diamond = hyperplane_projection(make_cross(3), {0, 0, 1});
  CHECK(*diamond.polytope() == Polytope::cross(2));
}

TEST_CASE("lagrangian products") {
  LagrangianProduct s = lagrangian_product(make_cross(3));
  Vec pq(6);
  pq << 0.9, -0.9, 0.9, 0.3, 0.3, -0.3;
  CHECK(s.contains(pq));
  pq[3] = 0.5;
  CHECK_FALSE(s.contains(pq));
  pq << 1.1, 0, 0, 0, 0, 0;
  CHECK_FALSE(s.contains(pq));
  ConvexBody body = s.body();
  CHECK(body.dim() == 6);
  Vec v(6);
  v << 1, 1, 1, 1, 0, 0;
  // p-block cube, q-block cross.
  CHECK(body.support(v) == doctest::Approx(3 + 1));

  LagrangianProduct seg = lagrangian_product(make_cube(1));
  CHECK(seg.body().polytope() == nullptr);
  Vec w(2);
  w << 1, 1;
  CHECK(seg.body().support(w) == doctest::Approx(2));
}

TEST_CASE("line minimum") {
  const double m = line_minimum(
      [](double t, double* d) {
        if (d) *d = 2 * (t - 0.3);
        return (t - 0.3) * (t - 0.3) + 1;
      },
      2.0);
  CHECK(m == doctest::Approx(1));
}
