// The standard symplectic space R^{2N} with coordinates (p_1..p_N, q_1..q_N),
// omega = sum dp_i ^ dq_i, and linear reduction along lines of the q-space.

#pragma once

#include "mahler/body.hpp"
#include "mahler/volume.hpp"

#include <cstddef>
#include <vector>

namespace mahler {

struct SymplecticSpace {
  std::size_t n = 1;  // half-dimension

  std::size_t dim() const { return 2 * n; }
  /// omega(x, y) = x_p . y_q - y_p . x_q
  double omega(const Vec& x, const Vec& y) const;
  /// J with <J v, z> = omega(v, z), i.e. J(v_p, v_q) = (-v_q, v_p).
  Vec j(const Vec& v) const;
  /// Omega with omega(x, y) = x^T Omega y.
  Mat form() const;
};

double omega(const Vec& x, const Vec& y);

/// A closed polygon. Symmetric loops keep only the first half of the
/// vertices; the second half is their negative.
struct PolygonalLoop {
  Mat free;  // one vertex per row
  bool symmetric = false;

  static PolygonalLoop closed(Mat vertices);
  static PolygonalLoop centrally_symmetric(Mat half);

  std::size_t size() const { return static_cast<std::size_t>(symmetric ? 2 * free.rows() : free.rows()); }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(free.cols()); }
  /// All m vertices.
  Mat points() const;
  /// Every edge split at its midpoint.
  PolygonalLoop subdivided() const;
};

/// 1/2 sum omega(z_i, z_{i+1}) over the closed polygon; the integral of
/// lambda = 1/2 sum (p dq - q dp). Needs at least three vertices.
double polygon_action(const Mat& points);
double polygon_action(const PolygonalLoop& loop);

/// A line L = span(ell) inside the q-subspace, its coisotropic complement
/// L^omega = {x : omega(ell, x) = 0} = {ell . p = 0}, and a basis of
/// L^omega / L.
struct ReductionSpec {
  std::size_t n = 0;  // ambient half-dimension
  Vec ell;            // unit vector of R^{2n}, zero p-part
  Vec lomega_normal;  // unit normal of L^omega in R^{2n}

  /// Columns of a 2n x (2n-2) matrix: p-vectors F^{-T}-dual to q-vectors F,
  /// where F spans ell-perp in the q-space. `variant` 0 takes F orthonormal
  /// (Gram-Schmidt), 1 an unnormalised skew basis with its dual p-basis.
  /// Either way omega restricted to the columns is the standard form.
  Mat quotient_basis(int variant = 0) const;
};

/// Throws std::invalid_argument when ell has a p-component or is zero.
ReductionSpec coisotropic_complement(std::size_t n, const Vec& ell);

/// S' = (K/L) x (K-polar cap L-perp) for L = span(u) in the q-space.
LagrangianProduct reduce_product(const LagrangianProduct& s, const QVector& u);
/// Successive reductions; each normal is written in the coordinates of the
/// previous quotient.
LagrangianProduct reduce_product(const LagrangianProduct& s, const std::vector<QVector>& normals);

/// Symplectic volume of (B^{2n}(radius) cap L^omega) / L computed in the
/// given quotient basis: the ball restricted to L^omega is minimised along L
/// (Schur complement), and the volume of the resulting ellipsoid is
/// multiplied by the Pfaffian of omega on the basis.
VolumeResult reduce_ball(const ReductionSpec& spec, double radius = 1.0, int variant = 0);

/// Symplectic volume of a Lagrangian product of polytopes, exactly.
Rational exact_product_volume(const LagrangianProduct& s);

}  // namespace mahler
