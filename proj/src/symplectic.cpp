#include "mahler/symplectic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mahler {

namespace {

std::size_t half_dim(const Vec& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("symplectic vectors have even dimension");
  return static_cast<std::size_t>(x.size() / 2);
}

// Volume of the unit ball in R^{2k}.
double even_ball_volume(std::size_t k) { return std::pow(std::numbers::pi, static_cast<double>(k)) / std::tgamma(k + 1.0); }

}  // namespace

double SymplecticSpace::omega(const Vec& x, const Vec& y) const {
  if (static_cast<std::size_t>(x.size()) != dim() || static_cast<std::size_t>(y.size()) != dim())
    throw std::invalid_argument("omega: dimension mismatch");
  return mahler::omega(x, y);
}

Vec SymplecticSpace::j(const Vec& v) const {
  if (static_cast<std::size_t>(v.size()) != dim()) throw std::invalid_argument("J: dimension mismatch");
  const auto k = static_cast<Eigen::Index>(n);
  Vec out(v.size());
  out.head(k) = -v.tail(k);
  out.tail(k) = v.head(k);
  return out;
}

Mat SymplecticSpace::form() const {
  const auto k = static_cast<Eigen::Index>(n);
  Mat o = Mat::Zero(2 * k, 2 * k);
  o.topRightCorner(k, k) = Mat::Identity(k, k);
  o.bottomLeftCorner(k, k) = -Mat::Identity(k, k);
  return o;
}

double omega(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("omega: dimension mismatch");
  const auto k = static_cast<Eigen::Index>(half_dim(x));
  return x.head(k).dot(y.tail(k)) - y.head(k).dot(x.tail(k));
}

PolygonalLoop PolygonalLoop::closed(Mat vertices) {
  if (vertices.rows() < 3) throw std::invalid_argument("a closed polygon needs at least three vertices");
  return {std::move(vertices), false};
}

PolygonalLoop PolygonalLoop::centrally_symmetric(Mat half) {
  if (half.rows() < 2) throw std::invalid_argument("a symmetric polygon needs at least two free vertices");
  return {std::move(half), true};
}

Mat PolygonalLoop::points() const {
  if (!symmetric) return free;
  Mat all(2 * free.rows(), free.cols());
  all.topRows(free.rows()) = free;
  all.bottomRows(free.rows()) = -free;
  return all;
}

PolygonalLoop PolygonalLoop::subdivided() const {
  const Mat pts = points();
  const Eigen::Index m = pts.rows();
  Mat fine(2 * m, pts.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    fine.row(2 * i) = pts.row(i);
    fine.row(2 * i + 1) = 0.5 * (pts.row(i) + pts.row((i + 1) % m));
  }
  if (!symmetric) return closed(std::move(fine));
  return centrally_symmetric(fine.topRows(m));
}

double polygon_action(const Mat& points) {
  if (points.rows() < 3) throw std::invalid_argument("polygon_action: loop needs at least three vertices");
  if (points.cols() % 2 != 0) throw std::invalid_argument("polygon_action: odd ambient dimension");
  const Eigen::Index m = points.rows(), k = points.cols() / 2;
  double a = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto x = points.row(i), y = points.row((i + 1) % m);
    a += x.head(k).dot(y.tail(k)) - y.head(k).dot(x.tail(k));
  }
  return 0.5 * a;
}

double polygon_action(const PolygonalLoop& loop) { return polygon_action(loop.points()); }

ReductionSpec coisotropic_complement(std::size_t n, const Vec& ell) {
  if (static_cast<std::size_t>(ell.size()) != 2 * n) throw std::invalid_argument("reduction line has wrong dimension");
  const auto k = static_cast<Eigen::Index>(n);
  if (ell.head(k).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("reduction line must lie in the q-subspace");
  const double norm = ell.norm();
  if (norm == 0.0) throw std::invalid_argument("reduction line is zero");
  ReductionSpec s;
  s.n = n;
  s.ell = ell / norm;
  // omega(ell, x) = -ell_q . x_p
  s.lomega_normal = Vec::Zero(2 * k);
  s.lomega_normal.head(k) = s.ell.tail(k);
  return s;
}

Mat ReductionSpec::quotient_basis(int variant) const {
  const auto k = static_cast<Eigen::Index>(n);
  const Vec l = ell.tail(k);
  Mat f;
  if (variant == 0) {
    f = orthonormal_hyperplane_basis(l);
  } else if (variant == 1) {
    // Unnormalised candidates e_i - (l_i / l_j) e_j, sheared so the basis is not orthogonal.
    Eigen::Index j = 0;
    while (l[j] == 0.0) ++j;
    f = Mat::Zero(k, k - 1);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i == j) continue;
      f(i, col) = 1.0;
      f(j, col) = -l[i] / l[j];
      ++col;
    }
    for (Eigen::Index c = 1; c < k - 1; ++c) f.col(c) += 0.5 * f.col(c - 1);
  } else {
    throw std::invalid_argument("unknown quotient basis variant");
  }
  // p-vectors G with G^T F = I and G in ell-perp: G = F (F^T F)^{-1}.
  const Mat g = f * (f.transpose() * f).inverse();
  Mat basis = Mat::Zero(2 * k, 2 * (k - 1));
  basis.topLeftCorner(k, k - 1) = g;
  basis.bottomRightCorner(k, k - 1) = f;
  return basis;
}

LagrangianProduct reduce_product(const LagrangianProduct& s, const QVector& u) {
  if (u.size() != s.n()) throw std::invalid_argument("reduction normal has wrong dimension");
  if (s.n() < 2) throw std::invalid_argument("cannot reduce a product of dimension 2");
  return {hyperplane_projection(s.base, u), hyperplane_section(s.dual, u)};
}

LagrangianProduct reduce_product(const LagrangianProduct& s, const std::vector<QVector>& normals) {
  LagrangianProduct r = s;
  for (const auto& u : normals) r = reduce_product(r, u);
  return r;
}

VolumeResult reduce_ball(const ReductionSpec& spec, double radius, int variant) {
  if (spec.n < 2) throw std::invalid_argument("reduce_ball needs N >= 2");
  const Mat q = spec.quotient_basis(variant);
  const Vec& l = spec.ell;
  // |Q a + t l|^2 minimised over t: a^T (Q^T Q - Q^T l l^T Q / l^T l) a.
  const Vec ql = q.transpose() * l;
  const Mat schur = q.transpose() * q - ql * ql.transpose() / l.squaredNorm();
  const SymplecticSpace space{spec.n};
  const Mat restricted = q.transpose() * space.form() * q;
  const double pfaffian = std::sqrt(std::abs(restricted.determinant()));
  const std::size_t k = spec.n - 1;
  VolumeResult r;
  r.method = VolumeMethod::ClosedForm;
  r.value = even_ball_volume(k) * std::pow(radius, 2.0 * static_cast<double>(k)) / std::sqrt(schur.determinant()) *
            pfaffian;
  return r;
}

Rational exact_product_volume(const LagrangianProduct& s) {
  const Polytope* a = s.base.polytope();
  const Polytope* b = s.dual.polytope();
  if (!a || !b) throw std::invalid_argument("exact volume needs polytope factors");
  return a->coordinate_volume() * b->coordinate_volume();
}

}  // namespace mahler
