#include "mahler/capacity.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mahler;

namespace {

PolygonalLoop circle(int m, double r = 1.0, int dim = 2) {
  Mat pts = Mat::Zero(m, dim);
  for (int i = 0; i < m; ++i) {
    const double a = 2 * std::numbers::pi * i / m;
    pts(i, 0) = r * std::cos(a);
    pts(i, dim / 2) = r * std::sin(a);
  }
  return PolygonalLoop::closed(pts);
}

CapacityConfig quick(std::size_t starts = 4, std::size_t iters = 4000) {
  CapacityConfig c;
  c.points = 32;
  c.starts = starts;
  c.max_iterations = iters;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("body norm and loop length") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  ConvexBody ball = make_lp_ball(2, 4);
  Vec v(4);
  for (auto& x : v) x = g(rng);
  CHECK(body_norm(ball, v) == doctest::Approx(v.norm()));
  CHECK(body_norm(ball, 2 * v) == doctest::Approx(2 * body_norm(ball, v)));
  // Square: vertex maximisation of omega(v, z) over (+-1, +-1).
  ConvexBody sq = make_cube(2);
  for (int t = 0; t < 10; ++t) {
    Vec w(2);
    w << g(rng), g(rng);
    double best = -1e300;
    for (double a : {-1.0, 1.0})
      for (double b : {-1.0, 1.0}) best = std::max(best, w[0] * b - a * w[1]);
    CHECK(body_norm(sq, w) == doctest::Approx(best));
    CHECK(body_norm(sq, w) == doctest::Approx(std::abs(w[0]) + std::abs(w[1])));
  }
  CHECK_THROWS(body_norm(sq, Vec::Zero(3)));

  CHECK(loop_length(make_lp_ball(2, 2), circle(256)) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-3));
  CHECK(loop_length(make_lp_ball(2, 2), circle(256, 3.0)) ==
        doctest::Approx(3 * loop_length(make_lp_ball(2, 2), circle(256))));
  Mat diamond(4, 2);
  diamond << 1, 0, 0, 1, -1, 0, 0, -1;
  CHECK(loop_length(sq, PolygonalLoop::closed(diamond)) == doctest::Approx(8));
  // The circle calibrates the constant: length^2 / (4 action) -> pi.
  CHECK(clarke_value(make_lp_ball(2, 2), circle(4096)) == doctest::Approx(std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("capacity of balls and scaling") {
  CapacityConfig c = quick();
  c.points = 64;
  CapacityEstimate b = capacity_estimate(make_lp_ball(2, 4), c);
  // Regular 64-gon in a complex line: 64 tan(pi/64).
  CHECK(b.value == doctest::Approx(64 * std::tan(std::numbers::pi / 64)).epsilon(1e-7));
  CHECK(b.value == doctest::Approx(std::numbers::pi).epsilon(0.01));
  CHECK(b.loop.size() == 64);
  CHECK(polygon_action(b.loop) > 0);

  QMatrix twice = QMatrix::identity(4);
  for (int i = 0; i < 4; ++i) twice(i, i) = 2;
  CapacityEstimate b2 = capacity_estimate(linear_image(make_lp_ball(2, 4), twice), c);
  CHECK(b2.value == doctest::Approx(4 * b.value).epsilon(1e-9));

  CapacityConfig q = quick(2, 2000);
  const double base = capacity_estimate(make_cube(2), q).value;
  CHECK(capacity_estimate(make_cube(2), q).value == base);  // same seed, same result
  QMatrix two = QMatrix::identity(2);
  two(0, 0) = two(1, 1) = 2;
  CHECK(capacity_estimate(linear_image(make_cube(2), two), q).value == doctest::Approx(4 * base).epsilon(1e-9));
}

TEST_CASE("two-dimensional bodies give their area") {
  CapacityConfig c = quick();
  CHECK(capacity_estimate(make_cube(2), c).value == doctest::Approx(4).epsilon(0.01));
  ConvexBody hex = hyperplane_section(make_cube(3), {1, 1, 1});
  // omega is the standard form of the section's own (non-orthonormal)
  // coordinates, where the hexagon has area 3 rather than 3 sqrt 3.
  CHECK(hex.polytope()->coordinate_volume() == 3);
  CHECK(capacity_estimate(hex, c).value == doctest::Approx(3).epsilon(0.01));
  // l_3 disc: area 4 Gamma(4/3)^2 / Gamma(5/3).
  const double area = 4 * std::pow(std::tgamma(4.0 / 3), 2) / std::tgamma(5.0 / 3);
  CapacityEstimate l3 = capacity_estimate(make_lp_ball(3, 2), c);
  CHECK(l3.value >= area * (1 - 1e-9));
  CHECK(l3.value == doctest::Approx(area).epsilon(0.01));
}

TEST_CASE("lagrangian products of a body and its polar") {
  CapacityConfig c = quick();
  CHECK(capacity_estimate(lagrangian_product(make_cross(2)).body(), c).value == doctest::Approx(4).epsilon(0.02));
  CHECK(symmetric_capacity_estimate(lagrangian_product(make_cross(2)).body(), c).value ==
        doctest::Approx(4).epsilon(0.02));
}

TEST_CASE("refinement never increases the estimate") {
  CapacityConfig c = quick(2, 2000);
  ConvexBody s = lagrangian_product(make_cross(2)).body();
  CapacityEstimate e = capacity_estimate(s, c);
  CapacityEstimate f = refine(s, e, c);
  CHECK(f.m == 2 * e.m);
  CHECK(f.value <= e.value);
  CHECK(clarke_value(s, f.loop) == doctest::Approx(f.value));
}

TEST_CASE("symmetric minimisers of smooth bodies") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> k(-3, 3);
  CapacityConfig c = quick(4, 20000);
  for (int t = 0; t < 3; ++t) {
    QMatrix m = QMatrix::identity(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) m(i, j) = Rational(k(rng), 4);
    if (is_zero(determinant(m))) continue;
    ConvexBody s = linear_image(make_lp_ball(2, 4), m);
    CapacityEstimate full = capacity_estimate(s, c);
    CapacityEstimate sym = symmetric_capacity_estimate(s, c);
    CHECK(sym.value == doctest::Approx(full.value).epsilon(0.02));
    // Recentred argmin is centrally symmetric.
    Mat z = full.loop.points();
    const Vec centre = z.colwise().mean().transpose();
    z.rowwise() -= centre.transpose();
    const Eigen::Index half = z.rows() / 2;
    double diam = 0, asym = 0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      for (Eigen::Index j = 0; j < z.rows(); ++j) diam = std::max(diam, (z.row(i) - z.row(j)).norm());
      asym = std::max(asym, (z.row(i) + z.row((i + half) % z.rows())).norm());
    }
    CHECK(asym <= 1e-3 * diam);
  }
}

TEST_CASE("monotonicity experiment") {
  MonotonicityReport r = reduction_monotonicity_experiment(lagrangian_product(make_cross(3)), 2, 7, quick(2, 2000));
  CHECK(r.original == doctest::Approx(4).epsilon(0.02));
  CHECK(r.trials.size() == 2);
  CHECK(r.all_hold);
}
