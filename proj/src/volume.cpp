#include "mahler/volume.hpp"

#include "mahler/parallel.hpp"
#include "mahler/random.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mahler {

namespace {

constexpr std::size_t kMaxExactDim = 8;

// Largest s with s^2 | n found by trial division below 10^4, plus a final
// perfect-square test on the cofactor.
void split_square(Integer n, Integer& square_root, Integer& rest) {
  square_root = 1;
  for (unsigned p = 2; p < 10000 && Integer(p) * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      square_root *= p;
    }
  }
  Integer r = boost::multiprecision::sqrt(n);
  if (r * r == n) {
    square_root *= r;
    n = 1;
  }
  rest = n;
}

}  // namespace

QuadraticSurd QuadraticSurd::sqrt_of(const Rational& q) {
  if (q < 0) throw std::domain_error("square root of a negative rational");
  if (is_zero(q)) return {0, 1};
  // sqrt(a/b) = sqrt(a b) / b
  const Integer a = numerator(q), b = denominator(q);
  Integer s, rest;
  split_square(a * b, s, rest);
  return {Rational(s) / Rational(b), rest};
}

double QuadraticSurd::value() const { return to_double(coeff) * std::sqrt(static_cast<double>(radicand)); }

std::string QuadraticSurd::str() const {
  if (radicand == 1 || is_zero(coeff)) return to_string(coeff);
  return to_string(coeff) + "*sqrt(" + radicand.str() + ")";
}

QuadraticSurd QuadraticSurd::operator*(const QuadraticSurd& o) const {
  QuadraticSurd r = sqrt_of(Rational(radicand * o.radicand));
  r.coeff *= coeff * o.coeff;
  return r;
}

std::string to_string(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::Exact: return "exact";
    case VolumeMethod::ClosedForm: return "closed-form";
    case VolumeMethod::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

json VolumeResult::to_json() const {
  json j{{"value", value}, {"method", to_string(method)}, {"ci_halfwidth", ci_halfwidth}};
  if (method == VolumeMethod::MonteCarlo) {
    j["samples"] = samples;
    j["seed"] = seed;
  }
  if (exact) j["exact"] = exact->str();
  return j;
}

QuadraticSurd exact_volume(const Polytope& p) {
  if (p.dim() > kMaxExactDim)
    throw std::invalid_argument("exact volume supports dimension <= " + std::to_string(kMaxExactDim));
  QuadraticSurd v = QuadraticSurd::sqrt_of(p.metric().empty() ? Rational(1) : determinant(p.metric()));
  v.coeff *= p.coordinate_volume();
  return v;
}

VolumeResult exact_polytope_volume(const ConvexBody& k) {
  const Polytope* p = k.polytope();
  if (!p) throw std::invalid_argument("exact volume needs a polytope");
  VolumeResult r;
  r.exact = exact_volume(*p);
  r.value = r.exact->value();
  r.method = VolumeMethod::Exact;
  return r;
}

VolumeResult lp_ball_volume(double p, std::size_t n) {
  if (!(p >= 1.0)) throw std::invalid_argument("l_p ball needs p >= 1");
  if (n == 0) throw std::invalid_argument("dimension must be positive");
  VolumeResult r;
  r.method = VolumeMethod::ClosedForm;
  const double dn = static_cast<double>(n);
  if (std::isinf(p)) {
    r.value = std::pow(2.0, dn);
  } else {
    r.value = std::exp(dn * std::log(2.0) + dn * std::lgamma(1.0 + 1.0 / p) - std::lgamma(1.0 + dn / p));
  }
  return r;
}

VolumeResult mc_volume(const ConvexBody& k, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("mc_volume needs at least one sample");
  const std::size_t d = k.dim();
  Vec half(static_cast<Eigen::Index>(d));
  double box = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    Vec e = Vec::Zero(static_cast<Eigen::Index>(d));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    half[static_cast<Eigen::Index>(i)] = k.support(e);
    box *= 2.0 * half[static_cast<Eigen::Index>(i)];
  }
  const CounterRng rng(seed);
  std::atomic<std::uint64_t> hits{0};
  parallel_for(
      samples,
      [&](std::size_t begin, std::size_t end, std::size_t) {
        Vec x(static_cast<Eigen::Index>(d));
        std::uint64_t local = 0;
        for (std::size_t s = begin; s < end; ++s) {
          for (std::size_t i = 0; i < d; ++i)
            x[static_cast<Eigen::Index>(i)] = half[static_cast<Eigen::Index>(i)] * rng.symmetric(s, i);
          if (k.contains(x)) ++local;
        }
        hits += local;
      },
      threads);
  // Polytopes in a non-orthonormal frame: coordinate volume times sqrt(det G).
  if (const Polytope* p = k.polytope()) box *= std::sqrt(to_double(determinant(p->metric())));
  const double n = static_cast<double>(samples);
  const double f = static_cast<double>(hits.load()) / n;
  VolumeResult r;
  r.method = VolumeMethod::MonteCarlo;
  r.value = box * f;
  r.ci_halfwidth = 1.96 * box * std::sqrt(f * (1.0 - f) / n);
  r.samples = samples;
  r.seed = seed;
  return r;
}

VolumeResult volume(const ConvexBody& k, const VolumeConfig& config) {
  if (k.polytope()) return exact_polytope_volume(k);
  if (auto p = lp_exponent(k)) return lp_ball_volume(*p, k.dim());
  return mc_volume(k, config.samples, config.seed, config.threads);
}

Rational mahler_bound(std::size_t n) {
  Rational b = 1;
  for (std::size_t i = 1; i <= n; ++i) b = b * 4 / Rational(static_cast<long>(i));
  return b;
}

Rational exact_mahler_product(const Polytope& p) {
  if (p.dim() > kMaxExactDim)
    throw std::invalid_argument("exact volume supports dimension <= " + std::to_string(kMaxExactDim));
  return p.coordinate_volume() * p.polar().coordinate_volume();
}

json MahlerReport::to_json() const {
  json j{{"dim", dim},
         {"vol_K", vol_k.to_json()},
         {"vol_Kpolar", vol_polar.to_json()},
         {"product", product},
         {"ci_halfwidth", ci_halfwidth},
         {"bound", to_string(bound)},
         {"bound_value", to_double(bound)},
         {"ratio", ratio}};
  if (exact_product) j["exact_product"] = to_string(*exact_product);
  if (exact_ratio) j["exact_ratio"] = to_string(*exact_ratio);
  return j;
}

MahlerReport mahler_product(const ConvexBody& k, const VolumeConfig& config) {
  MahlerReport r;
  r.dim = k.dim();
  r.bound = mahler_bound(r.dim);
  const ConvexBody kp = polar(k);
  VolumeConfig second = config;
  second.seed = mix64(config.seed ^ 0x5eedULL);
  r.vol_k = volume(k, config);
  r.vol_polar = volume(kp, second);
  if (const Polytope* p = k.polytope()) {
    r.exact_product = exact_mahler_product(*p);
    r.exact_ratio = *r.exact_product / r.bound;
    r.product = to_double(*r.exact_product);
    r.ratio = to_double(*r.exact_ratio);
    return r;
  }
  r.product = r.vol_k.value * r.vol_polar.value;
  r.ci_halfwidth = std::hypot(r.vol_polar.value * r.vol_k.ci_halfwidth, r.vol_k.value * r.vol_polar.ci_halfwidth);
  r.ratio = r.product / to_double(r.bound);
  return r;
}

json ReductionBoundReport::to_json() const {
  return {{"n", n},
          {"lhs", to_string(lhs)},
          {"rhs", to_string(rhs)},
          {"lhs_value", to_double(lhs)},
          {"rhs_value", to_double(rhs)},
          {"holds", holds},
          {"equality", equality}};
}

ReductionBoundReport reduction_volume_bound(const Polytope& k, const QVector& u, const Rational& action) {
  if (!(action > 0)) throw std::invalid_argument("action must be positive");
  ReductionBoundReport r;
  r.n = k.dim();
  // S' = (K/L) x (K-polar cap L-perp), and the two factors are polar to each other.
  r.lhs = exact_mahler_product(k.projection(u));
  r.rhs = Rational(static_cast<long>(r.n)) / action * exact_mahler_product(k);
  r.holds = r.lhs >= r.rhs;
  r.equality = r.lhs == r.rhs;
  return r;
}

}  // namespace mahler
