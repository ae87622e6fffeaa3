// Acceptance gate: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include "mahler/capacity.hpp"
#include "mahler/crofton.hpp"
#include "mahler/embedding.hpp"
#include "mahler/symplectic.hpp"
#include "mahler/volume.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mahler;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

QVector random_normal(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
  for (;;) {
    QVector u(n);
    bool zero = true;
    for (auto& x : u) {
      x = Rational(num(rng), den(rng));
      zero = zero && is_zero(x);
    }
    if (!zero) return u;
  }
}

std::string str(const QVector& u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + to_string(u[i]);
  return s + ")";
}

double shoelace(const Eigen::MatrixXd& v) {
  // Vertices of a centrally symmetric polygon, sorted by angle.
  std::vector<std::pair<double, Eigen::Vector2d>> pts;
  for (Eigen::Index i = 0; i < v.rows(); ++i) pts.push_back({std::atan2(v(i, 1), v(i, 0)), v.row(i).transpose()});
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double a = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i].second;
    const auto& q = pts[(i + 1) % pts.size()].second;
    a += p[0] * q[1] - p[1] * q[0];
  }
  return a / 2;
}

// 1. Cubes and cross-polytopes are equality cases.
void equality_cases(Verdict& v) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const ConvexBody& k : {make_cube(n), make_cross(n)}) {
      const MahlerReport m = mahler_product(k);
      v.require(m.exact_ratio && *m.exact_ratio == 1, k.description().dump());
    }
  }
  v.detail << "12 bodies, ratio exactly 1";
}

// 2. Hanner polytopes are equality cases.
void hanner_exactness(Verdict& v) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> leaves(1, 6);
  for (int t = 0; t < 30; ++t) {
    const HannerTree tree = random_hanner_tree(leaves(rng), rng);
    const MahlerReport m = mahler_product(make_hanner(tree));
    v.require(m.exact_ratio && *m.exact_ratio == 1, tree.str());
  }
  v.detail << "30 trees, ratio exactly 1";
}

// 3. Sections of cubes, exactly.
void cube_sections(Verdict& v) {
  std::mt19937_64 rng(3);
  Rational worst = 1000;
  for (std::size_t n : {3, 4, 5}) {
    const Rational bound = mahler_bound(n - 1);
    for (int t = 0; t < 200; ++t) {
      const QVector u = random_normal(n, rng);
      const Rational ratio = exact_mahler_product(Polytope::cube(n).section(u)) / bound;
      worst = std::min(worst, ratio);
      v.require(ratio >= 1, "cube" + std::to_string(n) + " normal " + str(u));
    }
  }
  const Polytope hex = Polytope::cube(3).section({1, 1, 1});
  v.require(exact_mahler_product(hex) == 9, "hexagon product is not 9");
  const double numeric = shoelace(hex.vertices_d()) * shoelace(hex.polar().vertices_d());
  v.require(std::abs(numeric - 9) <= 1e-9, "hexagon shoelace product " + std::to_string(numeric));
  v.detail << "600 sections, min ratio " << to_double(worst) << "; hexagon 9 exact, shoelace |err| "
           << std::abs(numeric - 9);
}

// 4. Sections of l_p balls, Monte Carlo.
void lp_sections(Verdict& v) {
  std::mt19937_64 rng(4);
  double worst = 1e300;
  std::uint64_t index = 0;
  for (double p : {1.5, 3.0, 6.0}) {
    for (std::size_t n : {3, 4}) {
      const double bound = to_double(mahler_bound(n - 1));
      for (int t = 0; t < 50; ++t, ++index) {
        const QVector u = random_normal(n, rng);
        const MahlerReport m = mahler_product(hyperplane_section(make_lp_ball(p, n), u), {1'000'000, 400 + index, 0});
        const double margin = (m.product - bound) / m.ci_halfwidth;
        worst = std::min(worst, margin);
        v.require(m.product >= bound - 3 * m.ci_halfwidth,
                  "p=" + std::to_string(p) + " n=" + std::to_string(n) + " normal " + str(u));
      }
    }
  }
  v.detail << "300 sections, min (product - bound) / CI = " << worst;
}

// 5. Capacity calibration.
void capacity_calibration(Verdict& v) {
  const CapacityConfig config;  // defaults: m = 64, 16 starts
  auto check = [&](const std::string& name, const ConvexBody& s, double exact, double rel) {
    const double c = capacity_estimate(s, config).value;
    v.require(std::abs(c - exact) <= rel * exact, name + " gave " + std::to_string(c));
    v.detail << name << " " << c << "; ";
  };
  check("B4", make_lp_ball(2, 4), kPi, 0.01);
  check("B6", make_lp_ball(2, 6), kPi, 0.01);
  check("cross2xcube2", lagrangian_product(make_cross(2)).body(), 4, 0.02);
  check("cross3xcube3", lagrangian_product(make_cross(3)).body(), 4, 0.02);
  // Areas in each body's own coordinates.
  check("square", make_cube(2), 4, 0.01);
  const ConvexBody hex = hyperplane_section(make_cube(3), {1, 1, 1});
  check("hexagon", hex, to_double(hex.polytope()->coordinate_volume()), 0.01);
  check("l3-disc", make_lp_ball(3, 2), 4 * std::pow(std::tgamma(4.0 / 3), 2) / std::tgamma(5.0 / 3), 0.01);
  check("disc", make_lp_ball(2, 2), kPi, 0.01);
}

// 6. Monotonicity under one-step reductions.
void capacity_monotonicity(Verdict& v) {
  CapacityConfig config;
  config.points = 32;
  config.starts = 4;
  config.max_iterations = 4000;
  config.seed = 6;
  const MonotonicityReport base = reduction_monotonicity_experiment(lagrangian_product(make_cross(3)), 50, 6, config);
  double worst = 1e300;
  auto tally = [&](const MonotonicityReport& r, const std::string& name) {
    for (const auto& t : r.trials) {
      worst = std::min(worst, t.reduced / r.original - 1);
      v.require(t.holds, name + " normal " + str(t.normal));
    }
  };
  tally(base, "cross3 x cube3");
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int i = 0; i < 5; ++i) {
    QMatrix m(3, 3);
    do {
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(r, c) = entry(rng);
    } while (is_zero(determinant(m)));
    tally(reduction_monotonicity_experiment(lagrangian_product(linear_image(make_cross(3), m)), 10, 60 + i, config),
          "linear image " + std::to_string(i));
  }
  v.detail << "100 reductions, min relative change " << worst;
}

// 7. The reduced ball.
void reduced_ball(Verdict& v) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double err = 0;
  for (std::size_t n : {2, 3, 4}) {
    const double expected = std::pow(kPi, n - 1) / std::tgamma(static_cast<double>(n));
    for (int t = 0; t < 20; ++t) {
      Vec ell = Vec::Zero(static_cast<Eigen::Index>(2 * n));
      for (std::size_t i = 0; i < n; ++i) ell[static_cast<Eigen::Index>(n + i)] = g(rng);
      const ReductionSpec spec = coisotropic_complement(n, ell);
      for (int variant : {0, 1}) {
        const double got = reduce_ball(spec, 1.0, variant).value;
        err = std::max(err, std::abs(got - expected));
        v.require(std::abs(got - expected) <= 1e-10, "N=" + std::to_string(n) + " gave " + std::to_string(got));
      }
    }
  }
  v.detail << "120 reductions, max |err| " << err;
}

// 8. Crofton identity in C^2.
void crofton(Verdict& v) {
  const CroftonReport lin = crofton_check(OddHamiltonian::linear(2), 1.0, 100'000, 8);
  v.require(std::abs(lin.lhs - lin.rhs) <= 1e-6 + lin.ci_halfwidth, "linear case");
  v.detail << "linear |lhs-rhs| " << std::abs(lin.lhs - lin.rhs) << "; ";
  const std::pair<double, const char*> cases[] = {{0.05, "q2^3"}, {0.05, "p2^3 + q1^2*q2"}, {0.03, "q1^3 + 2*q2*p2^2"}};
  for (const auto& [eps, g] : cases) {
    const CroftonReport r = crofton_check(OddHamiltonian(2, eps, Polynomial::parse(g, 2)), 1.0, 100'000, 8);
    v.require(r.agrees(3.0), std::string(g) + " disagrees");
    v.require(r.lhs >= kPi - 1e-3, std::string(g) + " area below pi");
    v.detail << g << " " << std::abs(r.lhs - r.rhs) / r.ci_halfwidth << " CI; ";
  }
}

// 9. Ball embedding into the l_alpha x l_beta product.
void embedding(Verdict& v) {
  const double rmax = std::sqrt(4 / kPi);
  for (double alpha : {2.0, 1.5}) {
    const EmbeddingProfile pr = build_profile(alpha, 8);
    const double eps = eps_rect_check(pr, rmax);
    const double radius = std::sqrt((4 / kPi) * (1 - 2 * eps));
    const EmbeddingReport r = product_embedding_check(pr, 2, radius, 1'000'000, 9);
    const PlanarChecks c = planar_checks(pr, rmax, 64, 1e-3, 9);
    const std::string a = "alpha=" + std::to_string(alpha);
    v.require(r.contained == r.samples, a + " containment " + std::to_string(r.fraction()));
    v.require(c.jacobian_max_dev <= 1e-3, a + " jacobian");
    v.require(c.odd_max_dev <= 1e-10, a + " oddness");
    v.require(c.area_max_rel_dev <= 1e-6, a + " area normalisation");
    v.require(c.level_max_dev <= 1e-8, a + " levels");
    v.detail << a << ": eps " << eps << ", R " << radius << ", fraction " << r.fraction() << ", |det-1| "
             << c.jacobian_max_dev << "; ";
  }
}

// 10. Volume bound for reductions of Hanner products.
void reduction_bound(Verdict& v) {
  std::mt19937_64 rng(10);
  const std::size_t dims[] = {3, 4, 5};
  std::size_t equalities = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = dims[t % 3];
    const HannerTree tree = random_hanner_tree(n, rng);
    const QVector u = random_normal(n, rng);
    const ReductionBoundReport r = reduction_volume_bound(tree.polytope(), u);
    v.require(r.holds, tree.str() + " normal " + str(u));
  }
  for (std::size_t n : dims) {
    for (std::size_t i = 0; i < n; ++i) {
      QVector e(n, 0);
      e[i] = 1;
      const ReductionBoundReport r = reduction_volume_bound(Polytope::cube(n), e);
      v.require(r.holds && r.equality, "cube" + std::to_string(n) + " coordinate normal");
      equalities += r.equality;
    }
  }
  v.detail << "100 random normals hold; " << equalities << "/12 coordinate normals give equality";
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no time limit
    std::function<void(Verdict&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "equality cases cube_n, cross_n (n <= 6)", 10, equality_cases},
      {2, "Hanner trees with <= 6 leaves are equality cases", 60, hanner_exactness},
      {3, "sections of cube_n, n = 3,4,5, exact", 0, cube_sections},
      {4, "sections of l_p balls, Monte Carlo", 1800, lp_sections},
      {5, "capacity calibration", 0, capacity_calibration},
      {6, "capacity monotone under reduction", 0, capacity_monotonicity},
      {7, "reduced ball volume", 0, reduced_ball},
      {8, "Crofton identity at N = 2", 0, crofton},
      {9, "ball embedding into l_alpha x l_beta", 0, embedding},
      {10, "reduction volume bound over Hanner trees", 0, reduction_bound},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) v.require(false, "time limit " + std::to_string(c.limit_s) + " s exceeded");
    std::printf("%s %2d  %-48s %8.1f s  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.str().c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
