#include "mahler/symplectic.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mahler;

namespace {

Mat circle(int m, double r = 1.0) {
  Mat pts(m, 2);
  for (int i = 0; i < m; ++i) {
    const double a = 2 * std::numbers::pi * i / m;
    pts(i, 0) = r * std::cos(a);
    pts(i, 1) = r * std::sin(a);
  }
  return pts;
}

// Random linear symplectic map: products of shears (p + S q, q), (p, q + T p)
// with S, T symmetric, and (A p, A^{-T} q).
Mat random_symplectic(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0, 0.5);
  auto sym = [&] {
    Mat s(n, n);
    for (auto& x : s.reshaped()) x = g(rng);
    return Mat(0.5 * (s + s.transpose()));
  };
  Mat a = Mat::Identity(n, n);
  for (auto& x : a.reshaped()) x += g(rng);
  Mat m1 = Mat::Identity(2 * n, 2 * n), m2 = m1, m3 = Mat::Zero(2 * n, 2 * n);
  m1.topRightCorner(n, n) = sym();
  m2.bottomLeftCorner(n, n) = sym();
  m3.topLeftCorner(n, n) = a;
  m3.bottomRightCorner(n, n) = a.inverse().transpose();
  return m1 * m2 * m3;
}

}  // namespace

TEST_CASE("omega") {
  SymplecticSpace s{2};
  Vec p1 = Vec::Unit(4, 0), q1 = Vec::Unit(4, 2), q2 = Vec::Unit(4, 3);
  CHECK(s.omega(p1, q1) == 1);
  CHECK(s.omega(q1, p1) == -1);
  CHECK(s.omega(p1, p1) == 0);
  CHECK(s.omega(q1, q2) == 0);
  CHECK_THROWS(s.omega(p1, Vec::Zero(3)));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Vec v(4), z(4);
  for (auto& x : v) x = g(rng);
  for (auto& x : z) x = g(rng);
  CHECK(s.j(v).dot(z) == doctest::Approx(s.omega(v, z)));
  CHECK(v.dot(s.form() * z) == doctest::Approx(s.omega(v, z)));
}

TEST_CASE("polygon action") {
  Mat c = circle(256);
  CHECK(polygon_action(c) == doctest::Approx(std::numbers::pi).epsilon(1e-3));
  // Shoelace oracle for the inscribed 256-gon.
  CHECK(polygon_action(c) == doctest::Approx(128 * std::sin(2 * std::numbers::pi / 256)).epsilon(1e-14));
  CHECK(polygon_action(Mat(c.colwise().reverse())) == doctest::Approx(-polygon_action(c)));
  Mat diamond(4, 2);
  diamond << 1, 0, 0, 1, -1, 0, 0, -1;
  CHECK(polygon_action(diamond) == doctest::Approx(2));
  CHECK_THROWS(polygon_action(Mat(diamond.topRows(2))));

  std::mt19937_64 rng(2);
  Mat loop(7, 6);
  std::normal_distribution<double> g;
  for (auto& x : loop.reshaped()) x = g(rng);
  for (int t = 0; t < 10; ++t) {
    Mat m = random_symplectic(rng, 3);
    CHECK((m.transpose() * SymplecticSpace{3}.form() * m - SymplecticSpace{3}.form()).norm() < 1e-9);
    CHECK(polygon_action(Mat(loop * m.transpose())) == doctest::Approx(polygon_action(loop)).epsilon(1e-9));
  }

  PolygonalLoop sym = PolygonalLoop::centrally_symmetric(circle(8).topRows(4));
  CHECK(sym.size() == 8);
  CHECK(polygon_action(sym) == doctest::Approx(polygon_action(circle(8))));
  CHECK(polygon_action(sym.subdivided()) == doctest::Approx(polygon_action(sym)));
  CHECK(sym.subdivided().size() == 16);
}

TEST_CASE("coisotropic complements") {
  Vec ell = Vec::Zero(4);
  ell[2] = 1;
  ReductionSpec s = coisotropic_complement(2, ell);
  CHECK(s.lomega_normal.isApprox(Vec::Unit(4, 0)));
  Vec d = Vec::Zero(4);
  d[2] = d[3] = 1;
  ReductionSpec t = coisotropic_complement(2, d);
  Vec expected(4);
  expected << 1, 1, 0, 0;
  CHECK(t.lomega_normal.isApprox(expected / std::sqrt(2.0)));
  // L^omega by direct evaluation: omega(ell, x) = 0 iff normal . x = 0.
  Mat basis = t.quotient_basis();
  CHECK(basis.cols() == 2);
  for (Eigen::Index c = 0; c < basis.cols(); ++c) CHECK(std::abs(omega(t.ell, basis.col(c))) < 1e-15);
  CHECK(std::abs(omega(t.ell, t.ell)) == 0);
  CHECK_THROWS(coisotropic_complement(2, Vec::Unit(4, 0)));
  CHECK_THROWS(coisotropic_complement(2, Vec::Zero(4)));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int variant : {0, 1}) {
    Vec l = Vec::Zero(8);
    for (int i = 4; i < 8; ++i) l[i] = g(rng);
    Mat q = coisotropic_complement(4, l).quotient_basis(variant);
    Mat restricted = q.transpose() * SymplecticSpace{4}.form() * q;
    CHECK((restricted - SymplecticSpace{3}.form()).norm() < 1e-12);
  }
}

TEST_CASE("reduced balls") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (std::size_t n : {2u, 3u, 4u}) {
    const double expected = std::pow(std::numbers::pi, n - 1.0) / std::tgamma(static_cast<double>(n));
    for (int t = 0; t < 5; ++t) {
      Vec l = Vec::Zero(2 * n);
      for (std::size_t i = n; i < 2 * n; ++i) l[static_cast<Eigen::Index>(i)] = g(rng);
      ReductionSpec spec = coisotropic_complement(n, l);
      const double a = reduce_ball(spec).value;
      const double b = reduce_ball(spec, 1.0, 1).value;
      CHECK(a == doctest::Approx(expected).epsilon(1e-12));
      CHECK(b == doctest::Approx(a).epsilon(1e-12));
      CHECK(reduce_ball(spec, 2.0).value == doctest::Approx(std::pow(4.0, n - 1.0) * expected).epsilon(1e-12));
    }
  }
  Vec l = Vec::Zero(4);
  l[2] = 1;
  CHECK(reduce_ball(coisotropic_complement(2, l)).value == doctest::Approx(std::numbers::pi));
}

TEST_CASE("reduced products") {
  // cross2 x square reduced along e_1 is the square [-1,1]^2 of area 4.
  LagrangianProduct s = lagrangian_product(make_cross(2));
  LagrangianProduct r = reduce_product(s, QVector{1, 0});
  CHECK(r.n() == 1);
  CHECK(exact_product_volume(r) == 4);

  for (std::size_t n = 2; n <= 5; ++n) {
    LagrangianProduct c = lagrangian_product(make_cross(n));
    std::vector<QVector> normals;
    for (std::size_t k = n; k > 1; --k) {
      QVector u(k, 0);
      for (std::size_t i = 0; i < k; ++i) u[i] = static_cast<long>(i % 3) - 1;
      u[0] = 2;
      normals.push_back(u);
    }
    LagrangianProduct one = reduce_product(c, normals);
    CHECK(one.n() == 1);
    CHECK(exact_product_volume(one) == 4);
  }

  // Factors of the reduction are polar to each other and match the section/projection ops.
  ConvexBody k = make_lp_ball(3, 3);
  LagrangianProduct red = reduce_product(lagrangian_product(k), QVector{1, -2, 1});
  ConvexBody proj = hyperplane_projection(k, {1, -2, 1});
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    Vec eta(2);
    eta << g(rng), g(rng);
    CHECK(red.base.support(eta) == doctest::Approx(proj.support(eta)).epsilon(1e-12));
    CHECK(red.dual.gauge(eta) == doctest::Approx(red.base.support(eta)).epsilon(1e-10));
  }

  // Ball of R^4 as disc x disc reduced along any line gives disc x disc in R^2.
  LagrangianProduct ball = lagrangian_product(make_lp_ball(2, 2));
  LagrangianProduct rb = reduce_product(ball, QVector{3, 4});
  Vec e(1);
  e << 1;
  CHECK(rb.base.support(e) == doctest::Approx(1).epsilon(1e-12));
  CHECK(rb.dual.support(e) == doctest::Approx(1).epsilon(1e-12));
  CHECK_THROWS(reduce_product(ball, QVector{0, 0}));
}
