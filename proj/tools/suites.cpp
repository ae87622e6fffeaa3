#include "suites.hpp"

#include "mahler/capacity.hpp"
#include "mahler/crofton.hpp"
#include "mahler/embedding.hpp"
#include "mahler/random.hpp"
#include "mahler/symplectic.hpp"
#include "mahler/volume.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mahler::lab {

namespace {

json rationals(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

QMatrix random_invertible(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-3, 3);
  for (;;) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
    if (!is_zero(determinant(m))) return m;
  }
}

SuiteResult sections_lp(const SuiteParams& sp) {
  SuiteResult r;
  const std::size_t n = sp.n.value_or(3), trials = sp.trials.value_or(10);
  const std::vector<double> ps = sp.p.empty() ? std::vector<double>{1.5, 3, 6} : sp.p;
  std::mt19937_64 rng(sp.seed);
  std::uint64_t index = 0;
  for (double p : ps) {
    const ConvexBody ball = make_lp_ball(p, n);
    for (std::size_t t = 0; t < trials; ++t, ++index) {
      const QVector u = random_rational_normal(n, rng);
      VolumeConfig vc;
      vc.samples = sp.samples.value_or(1'000'000);
      vc.seed = mix64(sp.seed + index);
      vc.threads = sp.threads;
      const MahlerReport m = mahler_product(hyperplane_section(ball, u), vc);
      const double bound = to_double(m.bound);
      const bool pass = m.product >= bound - 3 * m.ci_halfwidth;
      r.add({{"p", p}, {"n", n}, {"normal", rationals(u)}, {"product", m.product}, {"bound", bound},
             {"ci_halfwidth", m.ci_halfwidth}, {"ratio", m.ratio}, {"seed", vc.seed}},
            pass);
    }
  }
  return r;
}

SuiteResult sections_hanner(const SuiteParams& sp) {
  SuiteResult r;
  const std::size_t n = sp.n.value_or(4), trials = sp.trials.value_or(100);
  if (n < 2 || n > 8) throw std::invalid_argument("sections-hanner: n must be in [2, 8]");
  std::mt19937_64 rng(sp.seed);
  const Rational bound = mahler_bound(n - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const HannerTree tree = random_hanner_tree(n, rng);
    const QVector u = random_rational_normal(n, rng);
    const Rational product = exact_mahler_product(tree.polytope().section(u));
    const Rational ratio = product / bound;
    r.add({{"tree", tree.str()}, {"normal", rationals(u)}, {"product", to_string(product)},
           {"bound", to_string(bound)}, {"ratio", to_double(ratio)}},
          ratio >= 1);
  }
  return r;
}

SuiteResult polytopes_2n2(const SuiteParams& sp) {
  // Symmetric polytopes with 2n+2 facets are linear images of central
  // sections of the (n+1)-cube; their polars have 2n+2 vertices.
  SuiteResult r;
  const std::size_t n = sp.n.value_or(3), trials = sp.trials.value_or(50);
  if (n < 1 || n > 7) throw std::invalid_argument("polytopes-2n2: n must be in [1, 7]");
  std::mt19937_64 rng(sp.seed);
  const Rational bound = mahler_bound(n);
  for (std::size_t t = 0; t < trials; ++t) {
    const QVector u = random_rational_normal(n + 1, rng);
    const QMatrix m = random_invertible(n, rng);
    const Polytope k = Polytope::cube(n + 1).section(u).linear_image(m);
    const Rational product = exact_mahler_product(k);
    const bool shape = k.facets().rows() <= 2 * n + 2 && k.polar().vertices().rows() <= 2 * n + 2;
    r.add({{"normal", rationals(u)}, {"facets", k.facets().rows()}, {"vertices", k.vertices().rows()},
           {"product", to_string(product)}, {"ratio", to_double(product / bound)}},
          shape && product >= bound);
  }
  return r;
}

SuiteResult reduction_bound(const SuiteParams& sp) {
  SuiteResult r;
  const Rational action = parse_rational(sp.action);
  if (sign(action) <= 0) throw std::invalid_argument("reduction-bound: action must be positive");
  const std::vector<std::size_t> dims = sp.n ? std::vector<std::size_t>{*sp.n} : std::vector<std::size_t>{3, 4, 5};
  const std::size_t trials = sp.trials.value_or(100);
  std::mt19937_64 rng(sp.seed);
  for (std::size_t n : dims) {
    if (n < 2 || n > 7) throw std::invalid_argument("reduction-bound: n must be in [2, 7]");
    QVector e(n, 0);
    e[n - 1] = 1;
    const ReductionBoundReport b = reduction_volume_bound(Polytope::cube(n), e, action);
    json c = b.to_json();
    c["body"] = "cube";
    c["normal"] = rationals(e);
    r.add(c, b.holds && (action != 4 || b.equality));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = dims[t % dims.size()];
    const HannerTree tree = random_hanner_tree(n, rng);
    const QVector u = random_rational_normal(n, rng);
    const ReductionBoundReport b = reduction_volume_bound(tree.polytope(), u, action);
    json c = b.to_json();
    c["body"] = tree.str();
    c["normal"] = rationals(u);
    r.add(c, b.holds);
  }
  return r;
}

SuiteResult capacity_monotone(const SuiteParams& sp) {
  SuiteResult r;
  const std::size_t n = sp.n.value_or(3), trials = sp.trials.value_or(10);
  CapacityConfig cc;
  cc.points = 32;
  cc.starts = 4;
  cc.max_iterations = 4000;
  cc.seed = sp.seed;
  cc.threads = sp.threads;
  std::mt19937_64 rng(sp.seed);
  std::vector<std::pair<std::string, ConvexBody>> bodies{{"cross", make_cross(n)}};
  for (int i = 0; i < 2; ++i) {
    const QMatrix m = random_invertible(n, rng);
    bodies.emplace_back("linimg", linear_image(make_cross(n), m));
  }
  std::uint64_t index = 0;
  for (const auto& [name, k] : bodies) {
    const MonotonicityReport rep =
        reduction_monotonicity_experiment(lagrangian_product(k), trials, mix64(sp.seed + index++), cc);
    for (const MonotonicityTrial& t : rep.trials) {
      r.add({{"body", name}, {"base", k.description()}, {"normal", rationals(t.normal)}, {"original", rep.original},
             {"reduced", t.reduced}, {"slack", rep.slack}},
            t.holds);
    }
  }
  return r;
}

SuiteResult crofton(const SuiteParams& sp) {
  SuiteResult r;
  const std::size_t samples = sp.samples.value_or(100'000);
  const CroftonReport lin = crofton_check(OddHamiltonian::linear(2), 1.0, samples, sp.seed);
  json c = lin.to_json();
  c["g"] = "0";
  c["epsilon"] = 0.0;
  r.add(c, std::abs(lin.lhs - lin.rhs) <= 1e-6 + lin.ci_halfwidth);
  const std::pair<double, const char*> perturbations[] = {
      {0.05, "q2^3"}, {0.05, "p2^3 + q1^2*q2"}, {0.03, "q1^3 + 2*q2*p2^2"}};
  for (const auto& [eps, g] : perturbations) {
    const OddHamiltonian h(2, eps, Polynomial::parse(g, 2));
    const CroftonReport rep = crofton_check(h, 1.0, samples, sp.seed);
    json e = rep.to_json();
    e["g"] = g;
    e["epsilon"] = eps;
    r.add(e, rep.agrees(3.0) && rep.lhs >= std::numbers::pi - 1e-3);
  }
  return r;
}

SuiteResult embedding(const SuiteParams& sp) {
  SuiteResult r;
  const std::vector<double> alphas = sp.alpha.empty() ? std::vector<double>{2.0, 1.5} : sp.alpha;
  const std::size_t copies = sp.n.value_or(2);
  const std::uint64_t samples = sp.samples.value_or(1'000'000);
  const double rmax = std::sqrt(4 / std::numbers::pi);
  for (double alpha : alphas) {
    const EmbeddingProfile pr = build_profile(alpha, 8);
    const PlanarChecks pc = planar_checks(pr, rmax, 64, 1e-3, sp.seed);
    json planar = pc.to_json();
    planar["alpha"] = alpha;
    planar["check"] = "planar";
    r.add(planar, pc.jacobian_max_dev <= 1e-3 && pc.odd_max_dev <= 1e-10 && pc.area_max_rel_dev <= 1e-6 &&
                      pc.level_max_dev <= 1e-8 && pc.midpoint_violations == 0 && pc.hessian_min_eig >= -1e-4);
    const double eps = eps_rect_check(pr, rmax);
    const double radius = std::sqrt((4 / std::numbers::pi) * (1 - copies * eps));
    const EmbeddingReport in = product_embedding_check(pr, copies, radius, samples, sp.seed);
    json c = in.to_json();
    c["check"] = "containment";
    r.add(c, in.contained == in.samples && in.convexity_worst <= 1e-12);
    const EmbeddingReport out = product_embedding_check(pr, copies, 1.2 * rmax, std::min<std::uint64_t>(samples, 100'000), sp.seed);
    json o = out.to_json();
    o["check"] = "oversized ball is detected";
    r.add(o, out.contained < out.samples);
  }
  return r;
}

}  // namespace

void SuiteResult::add(json c, bool pass) {
  c["pass"] = pass;
  cases.push_back(std::move(c));
  (pass ? passed : failed) += 1;
}

json SuiteResult::to_json() const {
  json failures = json::array();
  for (const auto& c : cases)
    if (!c.at("pass").get<bool>()) failures.push_back(c);
  return {{"suite", suite}, {"passed", passed}, {"failed", failed}, {"ok", ok()}, {"cases", cases},
          {"failures", failures}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sections-lp",       "sections-hanner", "sections",
                                              "polytopes-2n2",     "reduction-bound", "capacity-monotone",
                                              "crofton",           "embedding"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteParams& params) {
  SuiteResult r;
  if (name == "sections-lp")
    r = sections_lp(params);
  else if (name == "sections-hanner" || name == "sections")
    r = sections_hanner(params);
  else if (name == "polytopes-2n2")
    r = polytopes_2n2(params);
  else if (name == "reduction-bound")
    r = reduction_bound(params);
  else if (name == "capacity-monotone")
    r = capacity_monotone(params);
  else if (name == "crofton")
    r = crofton(params);
  else if (name == "embedding")
    r = embedding(params);
  else
    throw std::invalid_argument("unknown suite '" + name + "'");
  r.suite = name;
  return r;
}

QVector random_rational_normal(std::size_t n, std::mt19937_64& rng) {
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

}  // namespace mahler::lab
