#include "mahler/hanner.hpp"
#include "mahler/polytope.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace mahler;

namespace {

QMatrix rows(std::vector<std::vector<int>> r) {
  std::vector<QVector> q;
  for (auto& v : r) {
    QVector x;
    for (int a : v) x.push_back(a);
    q.push_back(x);
  }
  return QMatrix::from_rows(q, r.front().size());
}

// Shoelace area of a convex polygon given by unordered points (sorted by angle).
double shoelace(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x()); });
  double s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % pts.size()];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * std::abs(s);
}

// Brute-force facet count: hyperplanes through d affinely independent vertices
// with every vertex on one side.
std::size_t brute_facets(const Eigen::MatrixXd& v) {
  const int n = static_cast<int>(v.rows()), d = static_cast<int>(v.cols());
  std::set<std::vector<long>> seen;
  std::vector<int> idx(d);
  std::function<void(int, int)> rec = [&](int k, int start) {
    if (k == d) {
      Eigen::MatrixXd a(d, d);
      for (int i = 0; i < d; ++i) a.row(i) = v.row(idx[i]);
      if (std::abs(a.determinant()) < 1e-9) return;
      Eigen::VectorXd normal = a.fullPivLu().solve(Eigen::VectorXd::Ones(d));
      if (((v * normal).array() > 1 + 1e-9).any()) return;
      std::vector<long> key;
      for (int i = 0; i < d; ++i) key.push_back(std::lround(normal[i] * 1e6));
      seen.insert(key);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[k] = i;
      rec(k + 1, i + 1);
    }
  };
  rec(0, 0);
  return seen.size();
}

}  // namespace

TEST_CASE("cube and cross-polytope") {
  for (std::size_t n = 1; n <= 6; ++n) {
    Polytope c = Polytope::cube(n);
    CHECK(c.vertices().rows() == (1u << n));
    CHECK(c.facets().rows() == 2 * n);
    Rational vol = 1;
    for (std::size_t i = 0; i < n; ++i) vol *= 2;
    CHECK(c.coordinate_volume() == vol);
    Rational fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= i;
    CHECK(Polytope::cross(n).coordinate_volume() == vol / fact);
    CHECK(c.polar().polar() == c);
  }
}

TEST_CASE("vertex enumeration matches the cube") {
  QMatrix a = rows({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}, {1, 1, 1}, {-1, -1, -1}});
  Polytope p = Polytope::from_facets(a);
  // The planes x+y+z = +-1 pass through three cube vertices each and cut off
  // the corners (1,1,1) and (-1,-1,-1), each a tetrahedron with legs 2.
  CHECK(p.facets().rows() == 8);
  CHECK(p.vertices().rows() == 6);
  CHECK(p.coordinate_volume() == Rational(8) - 2 * Rational(8, 6));
}

TEST_CASE("non-symmetric and unbounded input is rejected") {
  CHECK_THROWS(Polytope::from_facets(rows({{1, 0}, {-1, 0}, {0, 1}})));
  CHECK_THROWS(Polytope::from_facets(rows({{1, 0}, {-1, 0}})));
  CHECK_THROWS(Polytope::from_vertices(rows({{1, 0}, {-1, 0}, {0, 1}})));
}

TEST_CASE("hexagon section of the cube") {
  Polytope cube = Polytope::cube(3);
  QVector u{1, 1, 1};
  Polytope hex = cube.section(u);
  CHECK(hex.dim() == 2);
  CHECK(hex.vertices().rows() == 6);

  // Oracle: intersect cube edges with the plane, shoelace in an orthonormal frame.
  std::vector<Eigen::Vector3d> pts;
  for (int axis = 0; axis < 3; ++axis)
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) {
        Eigen::Vector3d x;
        const int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
        x[o1] = s1;
        x[o2] = s2;
        x[axis] = -(s1 + s2);
        if (std::abs(x[axis]) <= 1) pts.push_back(x);
      }
  Eigen::Vector3d e1 = Eigen::Vector3d(1, -1, 0).normalized();
  Eigen::Vector3d e2 = Eigen::Vector3d(1, 1, -2).normalized();
  std::vector<Eigen::Vector2d> flat;
  for (auto& x : pts) flat.emplace_back(x.dot(e1), x.dot(e2));
  const double area = shoelace(flat);
  CHECK(area == doctest::Approx(3 * std::sqrt(3.0)).epsilon(1e-12));

  const double coord = to_double(hex.coordinate_volume());
  const double metric = std::sqrt(to_double(determinant(hex.metric())));
  CHECK(coord * metric == doctest::Approx(area).epsilon(1e-12));

  // The polar hexagon lives in the inverse frame; the Mahler product is rational.
  Polytope dual = hex.polar();
  CHECK(hex.coordinate_volume() * dual.coordinate_volume() == 9);
}

TEST_CASE("projections by duality and by vertices agree") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int t = 0; t < 20; ++t) {
    QVector u{d(rng), d(rng), d(rng), d(rng)};
    if (std::all_of(u.begin(), u.end(), [](const Rational& x) { return is_zero(x); })) continue;
    for (const Polytope& p : {Polytope::cube(4), Polytope::cross(4)}) {
      Polytope a = p.projection(u);
      Polytope b = p.projection_by_vertices(u);
      CHECK(a == b);
    }
  }
}

TEST_CASE("projection areas") {
  QVector u{1, 1, 1};
  auto area = [](const Polytope& p) {
    return to_double(p.coordinate_volume()) * std::sqrt(to_double(determinant(p.metric())));
  };
  CHECK(area(Polytope::cross(3).projection(u)) == doctest::Approx(std::sqrt(3.0)));
  // Shadow oracle: three lit faces of area 4 with |n.u| = 1/sqrt3.
  CHECK(area(Polytope::cube(3).projection(u)) == doctest::Approx(3 * 4 / std::sqrt(3.0)));
}

TEST_CASE("linear images") {
  QMatrix m = rows({{1, 1}, {-1, 1}});
  Polytope sq = Polytope::cross(2).linear_image(m);
  CHECK(sq == Polytope::cube(2));
  QMatrix s = rows({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(Polytope::cube(3).linear_image(s).coordinate_volume() == 16);
}

TEST_CASE("hanner counts against hulls") {
  CHECK(hanner_counts(HannerTree::parse("X(S,S,S)")) == HannerCounts{8, 6});
  CHECK(hanner_counts(HannerTree::parse("L(S,S,S)")) == HannerCounts{6, 8});
  CHECK(hanner_counts(HannerTree::parse("X(S, L(S,S))")) == HannerCounts{8, 6});
  CHECK_THROWS(HannerTree::parse("X(S)"));
  CHECK_THROWS(HannerTree::parse("Q"));

  std::mt19937_64 rng(11);
  for (std::size_t leaves = 1; leaves <= 6; ++leaves)
    for (int t = 0; t < 4; ++t) {
      HannerTree tree = random_hanner_tree(leaves, rng);
      Polytope closed = tree.polytope();
      Polytope hull = Polytope::from_vertices(closed.vertices());
      CHECK(hull == closed);
      HannerCounts c = hanner_counts(tree);
      CHECK(c.vertices == Integer(closed.vertices().rows()));
      CHECK(c.facets == Integer(closed.facets().rows()));
      if (leaves <= 4) CHECK(brute_facets(closed.vertices_d()) == closed.facets().rows());
    }
}
