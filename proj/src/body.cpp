#include "mahler/body.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mahler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json rationals_to_json(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json matrix_to_json(const QMatrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) a.push_back(rationals_to_json(m.row(r)));
  return a;
}

Vec to_vec(const QVector& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = to_double(v[i]);
  return out;
}

Mat to_mat(const QMatrix& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = to_double(m(r, c));
  return out;
}

json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

template <class Impl, class... Args>
ConvexBody make_body(json description, Args&&... args) {
  auto impl = std::make_shared<Impl>(std::forward<Args>(args)...);
  impl->set_description(std::move(description));
  return ConvexBody(std::move(impl));
}

// ---------------------------------------------------------------------------

class PolytopeBody final : public BodyImpl {
 public:
  explicit PolytopeBody(Polytope p) : p_(std::move(p)) {}

  std::size_t dim() const override { return p_.dim(); }
  std::string kind() const override { return "polytope"; }
  double gauge(const Vec& x) const override { return p_.gauge(x); }
  Vec gauge_gradient(const Vec& x) const override {
    return p_.polar().vertices_d().row(static_cast<Eigen::Index>(p_.polar().support_vertex(x))).transpose();
  }
  double support(const Vec& u) const override { return p_.support(u); }
  Vec support_point(const Vec& u) const override {
    return p_.vertices_d().row(static_cast<Eigen::Index>(p_.support_vertex(u))).transpose();
  }
  double gauge_along(const Vec& x, const Vec& u, double* derivative) const override {
    Eigen::VectorXd vals = p_.facets_d() * x;
    Eigen::Index best = 0;
    vals.maxCoeff(&best);
    if (derivative) *derivative = p_.facets_d().row(best).dot(u);
    return std::max(0.0, vals[best]);
  }
  ConvexBody polar() const override {
    return make_body<PolytopeBody>(json{{"type", "polar"}, {"body", description()}}, p_.polar());
  }
  const Polytope* polytope() const override { return &p_; }
  double smoothed_support(const Vec& u, double tau, Vec* grad) const override {
    if (tau <= 0.0) return BodyImpl::smoothed_support(u, tau, grad);
    const Mat& v = p_.vertices_d();
    Eigen::VectorXd s = v * u;
    const double m = s.maxCoeff();
    Eigen::VectorXd w = ((s.array() - m) / tau).exp().matrix();
    const double z = w.sum();
    if (grad) *grad = v.transpose() * w / z;
    return m + tau * std::log(z);
  }

 private:
  Polytope p_;
};

// ---------------------------------------------------------------------------

double lp_norm(const Vec& x, double p) {
  if (p == 2.0) return x.norm();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

Vec lp_gradient(const Vec& x, double p) {
  const double n = lp_norm(x, p);
  Vec g = Vec::Zero(x.size());
  if (n == 0.0) return g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) / n;
    if (a > 0.0) g[i] = std::copysign(std::pow(a, p - 1.0), x[i]);
  }
  return g;
}

class LpBallBody final : public BodyImpl {
 public:
  LpBallBody(double p, std::size_t n) : p_(p), q_(conjugate_exponent(p)), n_(n) {}

  std::size_t dim() const override { return n_; }
  std::string kind() const override { return "lp_ball"; }
  double exponent() const { return p_; }
  double gauge(const Vec& x) const override { return lp_norm(x, p_); }
  Vec gauge_gradient(const Vec& x) const override { return lp_gradient(x, p_); }
  double support(const Vec& u) const override { return lp_norm(u, q_); }
  Vec support_point(const Vec& u) const override { return lp_gradient(u, q_); }
  bool contains(const Vec& x) const override {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      s += std::pow(std::abs(x[i]), p_);
      if (s > 1.0) return false;
    }
    return true;
  }
  double gauge_along(const Vec& x, const Vec& u, double* derivative) const override {
    const double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0) {
      if (derivative) *derivative = 0.0;
      return 0.0;
    }
    double s = 0.0, ds = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double a = std::abs(x[i]) / m;
      if (a == 0.0) continue;
      const double ap1 = std::pow(a, p_ - 1.0);
      s += ap1 * a;
      ds += std::copysign(ap1, x[i]) * u[i];
    }
    // d/dt ||x + t u||_p = sum sign(x_i) |x_i|^{p-1} u_i / ||x||^{p-1}
    const double sp = std::pow(s, 1.0 / p_);
    if (derivative) *derivative = ds / std::pow(sp, p_ - 1.0);
    return m * sp;
  }
  ConvexBody polar() const override {
    return make_body<LpBallBody>(json{{"type", "polar"}, {"body", description()}}, q_, n_);
  }

 private:
  double p_, q_;
  std::size_t n_;
};

// ---------------------------------------------------------------------------

class SectionBody;
class ProjectionBody;

// Coordinates y on normal^perp with x = B y, B orthonormal.
class SectionBody final : public BodyImpl {
 public:
  SectionBody(ConvexBody child, Vec normal, Mat basis)
      : child_(std::move(child)), normal_(std::move(normal)), basis_(std::move(basis)) {}

  std::size_t dim() const override { return static_cast<std::size_t>(basis_.cols()); }
  std::string kind() const override { return "section"; }
  double gauge(const Vec& y) const override { return child_.gauge(basis_ * y); }
  Vec gauge_gradient(const Vec& y) const override { return basis_.transpose() * child_.gauge_gradient(basis_ * y); }
  double gauge_along(const Vec& y, const Vec& u, double* derivative) const override {
    return child_.impl().gauge_along(basis_ * y, basis_ * u, derivative);
  }
  bool contains(const Vec& y) const override { return child_.contains(basis_ * y); }
  double support(const Vec& eta) const override { return minimise(eta, nullptr); }
  Vec support_point(const Vec& eta) const override {
    double t = 0.0;
    minimise(eta, &t);
    return basis_.transpose() * child_.support_point(basis_ * eta + t * normal_);
  }
  ConvexBody polar() const override;

  const ConvexBody& child() const { return child_; }
  const Vec& normal() const { return normal_; }
  const Mat& basis() const { return basis_; }

 private:
  // min_t h_K(B eta + t n); the optimum satisfies |t| <= 2 h_K(B eta) / h_K(n).
  double minimise(const Vec& eta, double* argmin) const {
    const Vec x0 = basis_ * eta;
    const double h0 = child_.support(x0);
    const double bound = 2.0 * h0 / child_.support(normal_);
    double best_t = 0.0, best = h0;
    double value = line_minimum(
        [&](double t, double* d) {
          const Vec x = x0 + t * normal_;
          const double h = child_.support(x);
          if (d) *d = child_.support_point(x).dot(normal_);
          if (h < best) {
            best = h;
            best_t = t;
          }
          return h;
        },
        bound);
    if (argmin) *argmin = best_t;
    return std::min(value, best);
  }

  ConvexBody child_;
  Vec normal_;
  Mat basis_;
};

// Coordinates z = B^T x of the orthogonal projection onto normal^perp.
class ProjectionBody final : public BodyImpl {
 public:
  ProjectionBody(ConvexBody child, Vec normal, Mat basis)
      : child_(std::move(child)), normal_(std::move(normal)), basis_(std::move(basis)) {}

  std::size_t dim() const override { return static_cast<std::size_t>(basis_.cols()); }
  std::string kind() const override { return "projection"; }
  double gauge(const Vec& z) const override { return minimise(z, nullptr); }
  Vec gauge_gradient(const Vec& z) const override {
    double t = 0.0;
    minimise(z, &t);
    return basis_.transpose() * child_.gauge_gradient(basis_ * z + t * normal_);
  }
  double support(const Vec& eta) const override { return child_.support(basis_ * eta); }
  Vec support_point(const Vec& eta) const override { return basis_.transpose() * child_.support_point(basis_ * eta); }
  double smoothed_support(const Vec& eta, double tau, Vec* grad) const override {
    Vec g;
    const double h = child_.smoothed_support(basis_ * eta, tau, grad ? &g : nullptr);
    if (grad) *grad = basis_.transpose() * g;
    return h;
  }

  // Decides min_t gauge(B z + t n) <= 1 without resolving the minimum: a
  // cutting-plane search that stops at the first point inside or as soon as the
  // tangent lower bound exceeds one.
  bool contains(const Vec& z) const override {
    const Vec x0 = basis_ * z;
    const BodyImpl& k = child_.impl();
    double da = 0.0;
    const double g0 = k.gauge_along(x0, normal_, &da);
    if (g0 <= 1.0) return true;
    const double bound = 2.0 * g0 / child_.gauge(normal_);
    double a = -bound, b = bound;
    double fa = k.gauge_along(x0 + a * normal_, normal_, &da);
    double db = 0.0;
    double fb = k.gauge_along(x0 + b * normal_, normal_, &db);
    if (fa <= 1.0 || fb <= 1.0) return true;
    for (int it = 0; it < 200; ++it) {
      if (!(da < 0.0) || !(db > 0.0)) return std::min(fa, fb) <= 1.0;
      const double t_cross = (fb - fa + da * a - db * b) / (da - db);
      const double lower = fa + da * (t_cross - a);
      if (lower > 1.0) return false;
      double t = t_cross;
      const double w = b - a;
      if (!(t > a + 0.05 * w && t < b - 0.05 * w)) t = 0.5 * (a + b);
      double dt = 0.0;
      const double ft = k.gauge_along(x0 + t * normal_, normal_, &dt);
      if (ft <= 1.0) return true;
      if (dt < 0.0) {
        a = t, fa = ft, da = dt;
      } else if (dt > 0.0) {
        b = t, fb = ft, db = dt;
      } else {
        return false;
      }
      if (b - a <= 1e-15 * bound) return std::min(fa, fb) <= 1.0;
    }
    return std::min(fa, fb) <= 1.0;
  }
  ConvexBody polar() const override;

 private:
  double minimise(const Vec& z, double* argmin) const {
    const Vec x0 = basis_ * z;
    const double g0 = child_.gauge(x0);
    const double bound = 2.0 * g0 / child_.gauge(normal_);
    double best_t = 0.0, best = g0;
    const BodyImpl& k = child_.impl();
    double value = line_minimum(
        [&](double t, double* d) {
          const double g = k.gauge_along(x0 + t * normal_, normal_, d);
          if (g < best) {
            best = g;
            best_t = t;
          }
          return g;
        },
        bound);
    if (argmin) *argmin = best_t;
    return std::min(value, best);
  }

  ConvexBody child_;
  Vec normal_;
  Mat basis_;
};

ConvexBody SectionBody::polar() const {
  return make_body<ProjectionBody>(json{{"type", "polar"}, {"body", description()}}, mahler::polar(child_), normal_,
                                   basis_);
}

ConvexBody ProjectionBody::polar() const {
  return make_body<SectionBody>(json{{"type", "polar"}, {"body", description()}}, mahler::polar(child_), normal_,
                                basis_);
}

// ---------------------------------------------------------------------------

class LinearImageBody final : public BodyImpl {
 public:
  LinearImageBody(ConvexBody child, Mat m, Mat minv) : child_(std::move(child)), m_(std::move(m)), minv_(std::move(minv)) {}

  std::size_t dim() const override { return child_.dim(); }
  std::string kind() const override { return "linimg"; }
  double gauge(const Vec& x) const override { return child_.gauge(minv_ * x); }
  Vec gauge_gradient(const Vec& x) const override { return minv_.transpose() * child_.gauge_gradient(minv_ * x); }
  double gauge_along(const Vec& x, const Vec& u, double* derivative) const override {
    return child_.impl().gauge_along(minv_ * x, minv_ * u, derivative);
  }
  bool contains(const Vec& x) const override { return child_.contains(minv_ * x); }
  double support(const Vec& u) const override { return child_.support(m_.transpose() * u); }
  Vec support_point(const Vec& u) const override { return m_ * child_.support_point(m_.transpose() * u); }
  double smoothed_support(const Vec& u, double tau, Vec* grad) const override {
    Vec g;
    const double h = child_.smoothed_support(m_.transpose() * u, tau, grad ? &g : nullptr);
    if (grad) *grad = m_ * g;
    return h;
  }
  ConvexBody polar() const override {
    return make_body<LinearImageBody>(json{{"type", "polar"}, {"body", description()}}, mahler::polar(child_),
                                      Mat(minv_.transpose()), Mat(m_.transpose()));
  }

 private:
  ConvexBody child_;
  Mat m_, minv_;
};

// ---------------------------------------------------------------------------

class ProductBody;
class L1SumBody;

class ProductBody final : public BodyImpl {
 public:
  ProductBody(ConvexBody a, ConvexBody b) : a_(std::move(a)), b_(std::move(b)) {}

  std::size_t dim() const override { return a_.dim() + b_.dim(); }
  std::string kind() const override { return "cartesian"; }
  const ConvexBody& first() const { return a_; }
  const ConvexBody& second() const { return b_; }
  double gauge(const Vec& x) const override { return std::max(a_.gauge(head(x)), b_.gauge(tail(x))); }
  Vec gauge_gradient(const Vec& x) const override {
    Vec g = Vec::Zero(x.size());
    const double ga = a_.gauge(head(x)), gb = b_.gauge(tail(x));
    if (ga >= gb)
      g.head(na()) = a_.gauge_gradient(head(x));
    else
      g.tail(nb()) = b_.gauge_gradient(tail(x));
    return g;
  }
  bool contains(const Vec& x) const override { return a_.contains(head(x)) && b_.contains(tail(x)); }
  double support(const Vec& u) const override { return a_.support(head(u)) + b_.support(tail(u)); }
  Vec support_point(const Vec& u) const override {
    Vec s(u.size());
    s.head(na()) = a_.support_point(head(u));
    s.tail(nb()) = b_.support_point(tail(u));
    return s;
  }
  double smoothed_support(const Vec& u, double tau, Vec* grad) const override {
    Vec ga, gb;
    const double h = a_.smoothed_support(head(u), tau, grad ? &ga : nullptr) +
                     b_.smoothed_support(tail(u), tau, grad ? &gb : nullptr);
    if (grad) {
      grad->resize(u.size());
      grad->head(na()) = ga;
      grad->tail(nb()) = gb;
    }
    return h;
  }
  ConvexBody polar() const override;

 private:
  Eigen::Index na() const { return static_cast<Eigen::Index>(a_.dim()); }
  Eigen::Index nb() const { return static_cast<Eigen::Index>(b_.dim()); }
  Vec head(const Vec& x) const { return x.head(na()); }
  Vec tail(const Vec& x) const { return x.tail(nb()); }

  ConvexBody a_, b_;
};

class L1SumBody final : public BodyImpl {
 public:
  L1SumBody(ConvexBody a, ConvexBody b) : a_(std::move(a)), b_(std::move(b)) {}

  std::size_t dim() const override { return a_.dim() + b_.dim(); }
  std::string kind() const override { return "l1sum"; }
  const ConvexBody& first() const { return a_; }
  const ConvexBody& second() const { return b_; }
  double gauge(const Vec& x) const override { return a_.gauge(head(x)) + b_.gauge(tail(x)); }
  Vec gauge_gradient(const Vec& x) const override {
    Vec g(x.size());
    g.head(na()) = a_.gauge_gradient(head(x));
    g.tail(nb()) = b_.gauge_gradient(tail(x));
    return g;
  }
  double support(const Vec& u) const override { return std::max(a_.support(head(u)), b_.support(tail(u))); }
  Vec support_point(const Vec& u) const override {
    Vec s = Vec::Zero(u.size());
    if (a_.support(head(u)) >= b_.support(tail(u)))
      s.head(na()) = a_.support_point(head(u));
    else
      s.tail(nb()) = b_.support_point(tail(u));
    return s;
  }
  ConvexBody polar() const override {
    return make_body<ProductBody>(json{{"type", "polar"}, {"body", description()}}, mahler::polar(a_),
                                  mahler::polar(b_));
  }

 private:
  Eigen::Index na() const { return static_cast<Eigen::Index>(a_.dim()); }
  Eigen::Index nb() const { return static_cast<Eigen::Index>(b_.dim()); }
  Vec head(const Vec& x) const { return x.head(na()); }
  Vec tail(const Vec& x) const { return x.tail(nb()); }

  ConvexBody a_, b_;
};

ConvexBody ProductBody::polar() const {
  return make_body<L1SumBody>(json{{"type", "polar"}, {"body", description()}}, mahler::polar(a_), mahler::polar(b_));
}

}  // namespace

// ---------------------------------------------------------------------------

double BodyImpl::smoothed_support(const Vec& u, double, Vec* grad) const {
  if (grad) *grad = support_point(u);
  return support(u);
}

double BodyImpl::gauge_along(const Vec& x, const Vec& u, double* derivative) const {
  if (derivative) *derivative = gauge_gradient(x).dot(u);
  return gauge(x);
}

ConvexBody::ConvexBody(std::shared_ptr<const BodyImpl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw std::invalid_argument("null body");
}

double ConvexBody::gauge(const Vec& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw std::invalid_argument("gauge: dimension mismatch");
  return impl_->gauge(x);
}

double ConvexBody::support(const Vec& u) const {
  if (static_cast<std::size_t>(u.size()) != dim()) throw std::invalid_argument("support: dimension mismatch");
  return impl_->support(u);
}

ConvexBody make_polytope(Polytope p, json description) { return make_body<PolytopeBody>(std::move(description), std::move(p)); }

ConvexBody make_cube(std::size_t dim) { return make_polytope(Polytope::cube(dim), {{"type", "cube"}, {"dim", dim}}); }

ConvexBody make_cross(std::size_t dim) { return make_polytope(Polytope::cross(dim), {{"type", "cross"}, {"dim", dim}}); }

ConvexBody make_lp_ball(double p, std::size_t dim) {
  if (!(p >= 1.0)) throw std::invalid_argument("l_p ball needs p >= 1");
  if (dim == 0) throw std::invalid_argument("l_p ball of dimension zero");
  json d{{"type", "lp_ball"}, {"p", exponent_to_json(p)}, {"dim", dim}};
  if (p == 1.0) return make_polytope(Polytope::cross(dim), std::move(d));
  if (std::isinf(p)) return make_polytope(Polytope::cube(dim), std::move(d));
  return make_body<LpBallBody>(std::move(d), p, dim);
}

ConvexBody make_hanner(const HannerTree& tree) {
  return make_polytope(tree.polytope(), {{"type", "hanner"}, {"expr", tree.str()}});
}

std::optional<double> lp_exponent(const ConvexBody& k) {
  if (auto* b = dynamic_cast<const LpBallBody*>(&k.impl())) return b->exponent();
  return std::nullopt;
}

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

ConvexBody polar(const ConvexBody& k) { return k.impl().polar(); }
double support(const ConvexBody& k, const Vec& u) { return k.support(u); }
double gauge(const ConvexBody& k, const Vec& x) { return k.gauge(x); }

ConvexBody linear_image(const ConvexBody& k, const QMatrix& m) {
  if (m.rows() != k.dim() || m.cols() != k.dim()) throw std::invalid_argument("linear_image: matrix has wrong shape");
  if (is_zero(determinant(m))) throw std::domain_error("linear_image: singular matrix");
  json d{{"type", "linimg"}, {"body", k.description()}, {"matrix", matrix_to_json(m)}};
  if (const Polytope* p = k.polytope()) return make_polytope(p->linear_image(m), std::move(d));
  return make_body<LinearImageBody>(std::move(d), k, to_mat(m), to_mat(inverse(m)));
}

Mat orthonormal_hyperplane_basis(const Vec& normal) {
  const Eigen::Index d = normal.size();
  Eigen::Index j = 0;
  while (j < d && normal[j] == 0.0) ++j;
  if (j == d) throw std::invalid_argument("zero normal vector");
  Mat b(d, d - 1);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i == j) continue;
    Vec c = Vec::Zero(d);
    c[i] = 1.0;
    c[j] = -normal[i] / normal[j];
    // Two passes of modified Gram-Schmidt keep the basis orthonormal to ~1e-16.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index l = 0; l < col; ++l) c -= b.col(l).dot(c) * b.col(l);
    b.col(col++) = c.normalized();
  }
  return b;
}

ConvexBody hyperplane_section(const ConvexBody& k, const QVector& normal) {
  if (normal.size() != k.dim()) throw std::invalid_argument("section: normal has wrong dimension");
  if (std::all_of(normal.begin(), normal.end(), [](const Rational& x) { return is_zero(x); }))
    throw std::invalid_argument("section: zero normal");
  if (k.dim() < 2) throw std::invalid_argument("section: body must have dimension >= 2");
  json d{{"type", "section"}, {"body", k.description()}, {"normal", rationals_to_json(normal)}};
  if (const Polytope* p = k.polytope()) return make_polytope(p->section(normal), std::move(d));
  Vec n = to_vec(normal);
  Mat b = orthonormal_hyperplane_basis(n);
  return make_body<SectionBody>(std::move(d), k, Vec(n.normalized()), std::move(b));
}

ConvexBody hyperplane_projection(const ConvexBody& k, const QVector& direction) {
  if (direction.size() != k.dim()) throw std::invalid_argument("projection: direction has wrong dimension");
  if (std::all_of(direction.begin(), direction.end(), [](const Rational& x) { return is_zero(x); }))
    throw std::invalid_argument("projection: zero direction");
  if (k.dim() < 2) throw std::invalid_argument("projection: body must have dimension >= 2");
  json d{{"type", "projection"}, {"body", k.description()}, {"normal", rationals_to_json(direction)}};
  if (const Polytope* p = k.polytope()) return make_polytope(p->projection(direction), std::move(d));
  Vec n = to_vec(direction);
  Mat b = orthonormal_hyperplane_basis(n);
  return make_body<ProjectionBody>(std::move(d), k, Vec(n.normalized()), std::move(b));
}

ConvexBody cartesian_product(const ConvexBody& a, const ConvexBody& b) {
  return make_body<ProductBody>(json{{"type", "cartesian"}, {"first", a.description()}, {"second", b.description()}},
                                a, b);
}

ConvexBody l1_sum(const ConvexBody& a, const ConvexBody& b) {
  return make_body<L1SumBody>(json{{"type", "l1sum"}, {"first", a.description()}, {"second", b.description()}}, a,
                              b);
}

ConvexBody LagrangianProduct::body() const {
  return make_body<ProductBody>(json{{"type", "product"}, {"body", base.description()}}, dual, base);
}

bool LagrangianProduct::contains(const Vec& pq) const {
  const auto n = static_cast<Eigen::Index>(this->n());
  if (pq.size() != 2 * n) throw std::invalid_argument("lagrangian product: dimension mismatch");
  return dual.contains(pq.head(n)) && base.contains(pq.tail(n));
}

LagrangianProduct lagrangian_product(const ConvexBody& k) { return {k, polar(k)}; }

double line_minimum(const std::function<double(double, double*)>& phi, double bound, double rel_tol) {
  if (!(bound > 0.0)) return phi(0.0, nullptr);
  double lo = -bound, hi = bound;
  double best = std::numeric_limits<double>::infinity();
  const double stop = rel_tol * bound;
  while (hi - lo > stop) {
    const double m = 0.5 * (lo + hi);
    double d = 0.0;
    const double v = phi(m, &d);
    best = std::min(best, v);
    if (d > 0.0)
      hi = m;
    else if (d < 0.0)
      lo = m;
    else
      break;
  }
  return std::min({best, phi(lo, nullptr), phi(hi, nullptr)});
}

}  // namespace mahler
