// EHZ capacity estimates from the discretised Clarke problem.
//
// For a loop z_1..z_m in R^{2n} the length is sum ||z_{i+1} - z_i|| with the
// norm ||v|| = sup{omega(v, z) : z in S} = h_S(J v), and the action is
// 1/2 sum omega(z_i, z_{i+1}). The estimate is
//
//     c(S) = min length^2 / (4 action),
//
// normalised so that the unit ball gives pi (a circle of radius r has length
// 2 pi r and action pi r^2). Polygons are a subfamily of loops, so every value
// returned is an upper bound of the continuum minimum.

#pragma once

#include "mahler/body.hpp"
#include "mahler/symplectic.hpp"

#include <cstdint>
#include <vector>

namespace mahler {

/// h_S(J v). Throws on dimension mismatch.
double body_norm(const ConvexBody& s, const Vec& v);
double loop_length(const ConvexBody& s, const PolygonalLoop& loop);
/// length^2 / (4 action), +inf for loops with non-positive action.
double clarke_value(const ConvexBody& s, const PolygonalLoop& loop);

struct CapacityConfig {
  std::size_t points = 64;  // m
  std::size_t starts = 16;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 50'000;
  unsigned threads = 0;
};

struct CapacityEstimate {
  double value = 0.0;
  PolygonalLoop loop;
  std::size_t m = 0;
  std::size_t starts = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::size_t best_start = 0;

  json to_json(bool with_loop = true) const;
};

CapacityEstimate capacity_estimate(const ConvexBody& s, const CapacityConfig& config = {});
/// The same functional over centrally symmetric loops (half the variables).
CapacityEstimate symmetric_capacity_estimate(const ConvexBody& s, const CapacityConfig& config = {});
/// Splits every edge of the argmin loop and re-optimises from it. The value
/// never increases.
CapacityEstimate refine(const ConvexBody& s, const CapacityEstimate& previous, const CapacityConfig& config = {});

struct MonotonicityTrial {
  QVector normal;
  double reduced = 0.0;
  bool holds = false;
};

struct MonotonicityReport {
  double original = 0.0;
  double slack = 0.02;
  std::vector<MonotonicityTrial> trials;
  bool all_hold = true;

  json to_json() const;
};

/// For random integer normals u, compares c(S) with c(S') for the reduction
/// S' of S along u; a trial holds when c(S') >= (1 - slack) c(S).
MonotonicityReport reduction_monotonicity_experiment(const LagrangianProduct& s, std::size_t trials,
                                                     std::uint64_t seed, const CapacityConfig& config = {},
                                                     double slack = 0.02);

}  // namespace mahler
