// Centrally symmetric convex bodies under exact or functional representations.
//
// A ConvexBody is an immutable shared handle. Exact polytopes (cubes,
// cross-polytopes, H/V input, Hanner trees and everything derived from them
// by polarity, sections, projections and rational linear maps) stay exact;
// l_p balls with 1 < p < inf and bodies derived from them are functional and
// evaluated in double precision through their gauge and support functions.

#pragma once

#include "mahler/hanner.hpp"
#include "mahler/polytope.hpp"
#include "mahler/rational.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace mahler {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using json = nlohmann::json;

class ConvexBody;

class BodyImpl {
 public:
  virtual ~BodyImpl() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string kind() const = 0;
  virtual double gauge(const Vec& x) const = 0;
  /// A subgradient of the gauge at x (a point of the polar body).
  virtual Vec gauge_gradient(const Vec& x) const = 0;
  virtual double support(const Vec& u) const = 0;
  /// A maximiser of <u, x> over the body (a subgradient of the support).
  virtual Vec support_point(const Vec& u) const = 0;
  virtual bool contains(const Vec& x) const { return gauge(x) <= 1.0; }
  /// Gauge at x together with its derivative along u.
  virtual double gauge_along(const Vec& x, const Vec& u, double* derivative) const;
  virtual ConvexBody polar() const = 0;
  virtual const Polytope* polytope() const { return nullptr; }
  /// Smooth upper approximation of the support function with its gradient.
  /// Bodies with kinks (polytopes) use a log-sum-exp over vertices at
  /// temperature tau; smooth bodies return the exact support.
  virtual double smoothed_support(const Vec& u, double tau, Vec* grad) const;

  const json& description() const { return description_; }
  void set_description(json d) { description_ = std::move(d); }

 private:
  json description_;
};

class ConvexBody {
 public:
  explicit ConvexBody(std::shared_ptr<const BodyImpl> impl);

  std::size_t dim() const { return impl_->dim(); }
  std::string kind() const { return impl_->kind(); }
  double gauge(const Vec& x) const;
  Vec gauge_gradient(const Vec& x) const { return impl_->gauge_gradient(x); }
  double support(const Vec& u) const;
  Vec support_point(const Vec& u) const { return impl_->support_point(u); }
  double smoothed_support(const Vec& u, double tau, Vec* grad) const { return impl_->smoothed_support(u, tau, grad); }
  bool contains(const Vec& x) const { return impl_->contains(x); }
  const Polytope* polytope() const { return impl_->polytope(); }
  bool is_exact() const { return polytope() != nullptr; }
  const json& description() const { return impl_->description(); }
  const BodyImpl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const BodyImpl> impl_;
};

ConvexBody make_polytope(Polytope p, json description);
ConvexBody make_cube(std::size_t dim);
ConvexBody make_cross(std::size_t dim);
/// p = 1 and p = inf give the exact cross-polytope and cube.
ConvexBody make_lp_ball(double p, std::size_t dim);
ConvexBody make_hanner(const HannerTree& tree);

/// If the body is an l_p ball with 1 < p < inf, its exponent.
std::optional<double> lp_exponent(const ConvexBody& k);
/// Conjugate exponent q with 1/p + 1/q = 1 (inf for p = 1 and vice versa).
double conjugate_exponent(double p);

ConvexBody polar(const ConvexBody& k);
double support(const ConvexBody& k, const Vec& u);
double gauge(const ConvexBody& k, const Vec& x);
/// M K for invertible rational M. Throws std::domain_error if M is singular.
ConvexBody linear_image(const ConvexBody& k, const QMatrix& m);
/// K intersected with normal^perp, in coordinates of a deterministic basis of
/// the hyperplane: rational and orthogonal for polytopes, orthonormal
/// (Gram-Schmidt on the same pivot order) for functional bodies.
ConvexBody hyperplane_section(const ConvexBody& k, const QVector& normal);
/// Quotient K / span(direction); the polar of the section of the polar.
ConvexBody hyperplane_projection(const ConvexBody& k, const QVector& direction);
/// Cartesian product A x B (coordinates of A first).
ConvexBody cartesian_product(const ConvexBody& a, const ConvexBody& b);
/// Convex hull of A and B placed in complementary coordinate subspaces.
ConvexBody l1_sum(const ConvexBody& a, const ConvexBody& b);

/// Orthonormal basis (columns) of normal^perp, same pivot order as
/// hyperplane_basis.
Mat orthonormal_hyperplane_basis(const Vec& normal);

/// S = K x K-polar in R^{2n}, coordinates (p_1..p_n, q_1..q_n): q-block K and
/// p-block K-polar.
struct LagrangianProduct {
  ConvexBody base;  // K, in q-coordinates
  ConvexBody dual;  // polar of K, in p-coordinates

  std::size_t n() const { return base.dim(); }
  /// The product as a body in R^{2n}, p-block first.
  ConvexBody body() const;
  bool contains(const Vec& pq) const;
};

LagrangianProduct lagrangian_product(const ConvexBody& k);

/// Minimum over t of a convex function phi(t) given with its derivative, on
/// [-bound, bound], by bisection on the sign of the derivative.
double line_minimum(const std::function<double(double, double*)>& phi, double bound, double rel_tol = 1e-14);

}  // namespace mahler
