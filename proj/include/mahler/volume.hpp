// Volumes and Mahler volume products.
//
// Polytope volumes are exact. A polytope written in a non-orthonormal frame
// has Euclidean volume (coordinate volume) * sqrt(det metric), an element of
// Q(sqrt d) kept as a QuadraticSurd. Because a polytope and its polar live in
// frames with inverse metrics, their volume product is always rational.

#pragma once

#include "mahler/body.hpp"
#include "mahler/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace mahler {

/// coeff * sqrt(radicand), radicand a positive integer free of square factors
/// below the trial-division bound.
struct QuadraticSurd {
  Rational coeff = 0;
  Integer radicand = 1;

  static QuadraticSurd sqrt_of(const Rational& q);
  double value() const;
  std::string str() const;
  bool is_rational() const { return radicand == 1; }
  QuadraticSurd operator*(const QuadraticSurd& other) const;
  bool operator==(const QuadraticSurd&) const = default;
};

enum class VolumeMethod { Exact, ClosedForm, MonteCarlo };
std::string to_string(VolumeMethod m);

struct VolumeResult {
  double value = 0.0;
  VolumeMethod method = VolumeMethod::Exact;
  double ci_halfwidth = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<QuadraticSurd> exact;  // set for exact polytope volumes

  json to_json() const;
};

/// Throws std::invalid_argument for non-polytopes and dimension above 8.
VolumeResult exact_polytope_volume(const ConvexBody& p);
QuadraticSurd exact_volume(const Polytope& p);

/// 2^n Gamma(1 + 1/p)^n / Gamma(1 + n/p); p = inf allowed.
VolumeResult lp_ball_volume(double p, std::size_t n);

/// Hit-or-miss in the box [-h(e_i), h(e_i)]. The CI half-width is 1.96
/// standard errors of the binomial estimate. Bit-identical for any thread count.
VolumeResult mc_volume(const ConvexBody& k, std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);

struct VolumeConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Best available method: exact for polytopes, closed form for l_p balls,
/// Monte Carlo otherwise.
VolumeResult volume(const ConvexBody& k, const VolumeConfig& config = {});

/// 4^n / n!.
Rational mahler_bound(std::size_t n);

struct MahlerReport {
  std::size_t dim = 0;
  VolumeResult vol_k;
  VolumeResult vol_polar;
  double product = 0.0;
  std::optional<Rational> exact_product;
  /// Half-width of the product: sqrt((v2 ci1)^2 + (v1 ci2)^2).
  double ci_halfwidth = 0.0;
  Rational bound;
  double ratio = 0.0;
  std::optional<Rational> exact_ratio;

  json to_json() const;
};

MahlerReport mahler_product(const ConvexBody& k, const VolumeConfig& config = {});
/// vol P * vol P-polar as an exact rational.
Rational exact_mahler_product(const Polytope& p);

struct ReductionBoundReport {
  std::size_t n = 0;
  Rational lhs;  // vol S' = vol(K/L) vol(K-polar cap L-perp)
  Rational rhs;  // (n / A) vol S
  bool holds = false;
  bool equality = false;

  json to_json() const;
};

/// Exact check of vol S' >= (n/A) vol S for S = K x K-polar and the
/// reduction along the line spanned by u. K must be a polytope.
ReductionBoundReport reduction_volume_bound(const Polytope& k, const QVector& u, const Rational& action = 4);

}  // namespace mahler
