// Signed intersections of Hopf circles with the slice {H = 0} of a sphere,
// and the Crofton-type identity
//
//     integral over Sigma+ of omega = pi R^2 * E[#(C cap Sigma+)]
//
// in C^2, where C runs over Hopf circles e^{i theta} z with z uniform on
// S^3(R), and Sigma+ is the part of Sigma = S^3(R) cap {H = 0} where H
// increases along the circles. Complex coordinates are z_j = q_j + i p_j and
// points of R^{2N} are stored as (p_1..p_N, q_1..q_N).

#pragma once

#include "mahler/body.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mahler {

/// A real polynomial in the variables p_j, q_j of R^{2N}.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> powers;  // one per coordinate, (p_1..p_N, q_1..q_N)
    int degree() const;
  };

  /// Parses sums of monomials such as "q2^3 - 0.5*q1*p2^2 + 2 q1".
  /// Throws std::invalid_argument on syntax errors or unknown variables.
  static Polynomial parse(std::string_view text, std::size_t n);

  std::size_t n() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_odd() const;
  bool depends_on(std::size_t coordinate) const;
  double operator()(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// Upper bound of |grad g| on the ball of radius r: sum |c| deg r^(deg - 1).
  double lipschitz_bound(double r) const;
  std::string str() const;

 private:
  std::size_t n_ = 0;
  std::vector<Term> terms_;
};

/// H = p_1 + epsilon * g with g odd and independent of p_1.
class OddHamiltonian {
 public:
  OddHamiltonian(std::size_t n, double epsilon = 0.0, Polynomial g = {});
  static OddHamiltonian linear(std::size_t n) { return OddHamiltonian(n); }

  std::size_t n() const { return n_; }
  double epsilon() const { return eps_; }
  const Polynomial& perturbation() const { return g_; }
  double operator()(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// dH/dtheta along the Hopf flow: sum H_{p_j} q_j - H_{q_j} p_j.
  double flow_derivative(const Vec& x) const;
  /// Whether epsilon * |grad g| <= 1/2 on the ball of radius r, which makes
  /// Sigma a graph over the coordinates other than p_1.
  bool graph_condition(double r) const;

 private:
  std::size_t n_;
  double eps_;
  Polynomial g_;
};

/// e^{i theta} z.
Vec hopf_point(const Vec& z, double theta);

/// Base points uniform on S^{2N-1}(R) (normalised Gaussians), one per row.
Mat sample_hopf_circles(std::size_t n, double radius, std::size_t count, std::uint64_t seed);

struct IntersectionCount {
  int positive = 0;
  int negative = 0;
  bool degenerate = false;  // H vanishes identically or has a tangential zero
  int net() const { return positive - negative; }
};

/// Zeros of theta -> H(e^{i theta} z) by a 512-point scan and bisection to
/// 1e-12, signed by dH/dtheta. A zero with |dH/dtheta| < 1e-9 is tangential.
IntersectionCount signed_intersections(const Vec& z, const OddHamiltonian& h);

/// Integral of omega over Sigma+ for N = 2. Sigma is written as the graph
/// p_1 = -epsilon g over spherical coordinates around the q_1 axis; the
/// boundary of Sigma+ is located per meridian and omega integrated by
/// Gauss-Legendre (in the polar angle) times the trapezoid rule (in azimuth).
double sigma_plus_area(const OddHamiltonian& h, double radius = 1.0);

struct CroftonReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double c_n = 0.0;
  double ci_halfwidth = 0.0;
  double mean_positive = 0.0;
  double mean_net = 0.0;
  int min_positive = 0;
  std::size_t samples = 0;
  std::size_t degenerate = 0;
  std::uint64_t seed = 0;

  bool agrees(double half_widths = 3.0, double slack = 1e-6) const;
  json to_json() const;
};

/// c_2 = pi is fixed by the linear case H = p_1, where Sigma+ is a half
/// great sphere of omega-area pi R^2 and every generic circle meets it once.
CroftonReport crofton_check(const OddHamiltonian& h, double radius, std::size_t samples, std::uint64_t seed);

}  // namespace mahler
