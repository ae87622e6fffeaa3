// A symplectic embedding of a ball into the Lagrangian product
// {sum |q_i|^alpha <= 1} x {sum |p_i|^beta <= 1}, 1/alpha + 1/beta = 1.
//
// The planar profile is G_N(p, q) = c_N (|q|^{alpha N} + |p|^{beta N})^{1/N}
// with area{G_N <= A} = A. The map f sends the circle |z| = r onto the level
// {G_N = pi r^2}. Writing a = pi |z|^2 and D_a = diag(a^{1/alpha}, a^{1/beta})
// on (q, p), f(z) = D_a gamma(t), where gamma runs over {G_N = 1} and the
// parameter t is the angular fraction of z. The Jacobian of (a, t) -> D_a gamma(t)
// is (1/alpha) q dp/dt - (1/beta) p dq/dt, and on the first-quadrant arc
// q = c^{-1/alpha} (1 - x)^{1/(alpha N)}, p = c^{-1/beta} x^{1/(beta N)} this is
// one exactly when 4 t = I_x(1/(beta N), 1/(alpha N)), a regularised
// incomplete beta function. The other quadrants follow by reflection, which
// makes f odd.
//
// N = 0 stands for the limit G = 4 max(|q|^alpha, |p|^beta), whose levels are
// rectangles.

#pragma once

#include "mahler/body.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mahler {

struct EmbeddingProfile {
  double alpha = 2.0;
  double beta = 2.0;
  unsigned n_exp = 8;  // 0: the limit profile
  double c_n = 0.0;
  /// Level-curve table: x at the quadrant fractions k / grid (and 1 - x),
  /// used to bracket the inversion of the incomplete beta function.
  std::size_t grid = 4096;
  std::vector<double> x_table;
  std::vector<double> y_table;

  bool is_limit() const { return n_exp == 0; }
  /// G_N(p, q).
  double g(double p, double q) const;
  /// First-quadrant point of {G_N = 1} at quadrant fraction s in [0, 1].
  void level_point(double s, double& q, double& p) const;

  void save(const std::string& path) const;
  static EmbeddingProfile load(const std::string& path);
  /// File name keyed by (alpha, n_exp, grid).
  std::string cache_name() const;
};

/// c_N by tanh-sinh quadrature of 4 int_0^1 (1 - t^{alpha N})^{1/(beta N)} dt.
/// Throws for alpha <= 1.
EmbeddingProfile build_profile(double alpha, unsigned n_exp, std::size_t grid = 4096);
/// Loads `dir/cache_name()` when present and matching, else builds and stores it.
EmbeddingProfile cached_profile(double alpha, unsigned n_exp, const std::string& dir, std::size_t grid = 4096);

/// area{G_N <= A} by quadrature of the level curve.
double sublevel_area(const EmbeddingProfile& profile, double level);

/// z = (x, y) = x + i y  ->  (q, p).
Eigen::Vector2d planar_map(const EmbeddingProfile& profile, const Eigen::Vector2d& z);
Eigen::Vector2d planar_map_inverse(const EmbeddingProfile& profile, const Eigen::Vector2d& qp);

/// Smallest epsilon with |q|^alpha, |p|^beta <= pi |z|^2 / 4 + epsilon on a
/// polar grid (radii and angles, axes included) up to |z| = r_max.
double eps_rect_check(const EmbeddingProfile& profile, double r_max, std::size_t grid = 256);
/// The same bound in closed form: pi r_max^2 (1 / c_N - 1/4).
double eps_rect_bound(const EmbeddingProfile& profile, double r_max);

struct PlanarChecks {
  double jacobian_max_dev = 0.0;  // max |det Df - 1| away from the axes
  double odd_max_dev = 0.0;       // max |f(-z) + f(z)|
  double level_max_dev = 0.0;     // max |G_N(f(z)) - pi |z|^2|
  double inverse_max_dev = 0.0;   // max |f^{-1}(f(z)) - z|
  double area_max_rel_dev = 0.0;  // max |area{G_N <= A} - A| / A on a level grid
  double hessian_min_eig = 0.0;   // min eigenvalue of the (scaled) Hessian of G_N away from axes
  std::size_t midpoint_violations = 0;

  json to_json() const;
};

/// Grid checks of the planar map on the disc of radius r_max; a band of
/// width axis_margin around the axes is excluded from the Jacobian and
/// Hessian grids only.
PlanarChecks planar_checks(const EmbeddingProfile& profile, double r_max, std::size_t grid = 64,
                           double axis_margin = 1e-3, std::uint64_t seed = 0);

struct EmbeddingReport {
  double alpha = 0.0;
  unsigned n_exp = 0;
  std::size_t copies = 0;
  double epsilon = 0.0;
  double radius = 0.0;
  double certified_radius = 0.0;  // sqrt((4/pi)(1 - copies * epsilon))
  std::size_t samples = 0;
  std::size_t contained = 0;
  double worst_q = 0.0;  // max sum |q_i|^alpha
  double worst_p = 0.0;  // max sum |p_i|^beta
  double convexity_worst = 0.0;  // max of the midpoint convexity defect of sum G_N
  std::vector<double> worst_point;
  std::uint64_t seed = 0;

  double fraction() const { return samples ? static_cast<double>(contained) / static_cast<double>(samples) : 0.0; }
  json to_json() const;
};

/// Samples B^{2N}(radius) uniformly (coordinates (p_1..p_N, q_1..q_N), with
/// z_j = q_j + i p_j), maps each pair by f and tests membership in the
/// product. epsilon is measured on a grid up to sqrt(4/pi).
EmbeddingReport product_embedding_check(const EmbeddingProfile& profile, std::size_t copies, double radius,
                                        std::size_t samples, std::uint64_t seed);

}  // namespace mahler
