// Exact centrally symmetric polytopes in double description.
//
// A Polytope always carries both descriptions: its vertices and its facet
// normals a with a.x <= 1 (the origin is interior, so every facet can be
// normalised to right-hand side one). Both lists are irredundant and sorted
// lexicographically, which makes the representation canonical.
//
// Coordinates need not be orthonormal. Sections and projections are written
// in a rational orthogonal (not orthonormal) basis of the hyperplane, and the
// frame's Gram matrix is carried along as `metric`. Euclidean volume is the
// coordinate volume times sqrt(det metric). Polarity is taken with respect to
// the plain coordinate pairing, so the polar frame has the inverse metric.

#pragma once

#include "mahler/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mahler {

class Polytope {
 public:
  /// {x : a_i . x <= 1}. Redundant rows are dropped. Throws on unbounded or
  /// non-symmetric input.
  static Polytope from_facets(const QMatrix& normals, QMatrix metric = {});
  /// conv(V). V must be closed under negation and span the space; points that
  /// are not vertices are dropped.
  static Polytope from_vertices(const QMatrix& points, QMatrix metric = {});

  /// Trusts a complete irredundant double description (used when both lists
  /// are known in closed form, e.g. Hanner polytopes). Checks only that every
  /// vertex satisfies every facet inequality.
  static Polytope from_description(const QMatrix& vertices, const QMatrix& facets, QMatrix metric = {});

  static Polytope cube(std::size_t dim);
  static Polytope cross(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const QMatrix& vertices() const { return vertices_; }
  const QMatrix& facets() const { return facets_; }
  const QMatrix& metric() const { return metric_; }
  /// Vertex indices lying on each facet.
  const std::vector<std::vector<std::size_t>>& facet_vertices() const { return incidence_; }

  Polytope polar() const;
  /// M P for invertible M.
  Polytope linear_image(const QMatrix& m) const;
  /// P intersected with {x : normal . x = 0}, in the deterministic basis
  /// returned by `hyperplane_basis(normal, metric())`.
  Polytope section(const QVector& normal) const;
  /// Quotient of P by span(direction), realised as the polar of the section of
  /// the polar. Coordinates are z = B^T x with B = hyperplane_basis(direction,
  /// metric^-1).
  Polytope projection(const QVector& direction) const;
  /// Same quotient computed by pushing vertices through B^T and taking the hull.
  Polytope projection_by_vertices(const QVector& direction) const;

  /// Volume in coordinates (no metric factor), by a lexicographic pulling
  /// triangulation. Exact.
  Rational coordinate_volume() const;

  // Floating-point views, cached at construction.
  const Eigen::MatrixXd& vertices_d() const { return vertices_d_; }
  const Eigen::MatrixXd& facets_d() const { return facets_d_; }
  double gauge(const Eigen::VectorXd& x) const;
  double support(const Eigen::VectorXd& u) const;
  /// Index of a maximising vertex; ties go to the lexicographically first one.
  std::size_t support_vertex(const Eigen::VectorXd& u) const;

  bool operator==(const Polytope& other) const {
    return dim_ == other.dim_ && vertices_ == other.vertices_ && facets_ == other.facets_ &&
           metric_ == other.metric_;
  }

 private:
  Polytope(std::size_t dim, QMatrix vertices, QMatrix facets, QMatrix metric);

  std::size_t dim_ = 0;
  QMatrix vertices_;
  QMatrix facets_;
  QMatrix metric_;
  std::vector<std::vector<std::size_t>> incidence_;
  Eigen::MatrixXd vertices_d_;
  Eigen::MatrixXd facets_d_;
};

/// Rational basis of {x : normal . x = 0}, orthogonal for `metric`, returned as
/// the columns of a dim x (dim-1) matrix. The candidates e_i - (n_i/n_j) e_j
/// (j the first nonzero entry of `normal`) are orthogonalised in index order.
QMatrix hyperplane_basis(const QVector& normal, const QMatrix& metric);

/// Vertices of {x : A x <= 1} by the double-description method. Throws
/// std::domain_error if the region is unbounded.
QMatrix enumerate_vertices(const QMatrix& normals);

}  // namespace mahler
