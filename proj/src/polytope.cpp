#include "mahler/polytope.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mahler {

namespace {

using Bits = boost::dynamic_bitset<>;

bool lex_less(const QVector& a, const QVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

QVector negate(QVector v) {
  for (auto& x : v) x = -x;
  return v;
}

// Scales a ray so that its first nonzero entry has absolute value one.
void normalize_ray(QVector& r) {
  for (const auto& x : r) {
    if (is_zero(x)) continue;
    Rational s = abs(x);
    for (auto& y : r) y /= s;
    return;
  }
}

std::vector<QVector> sorted_unique_rows(const QMatrix& m) {
  std::vector<QVector> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  std::sort(rows.begin(), rows.end(), lex_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

bool closed_under_negation(const std::vector<QVector>& sorted_rows) {
  for (const auto& r : sorted_rows)
    if (!std::binary_search(sorted_rows.begin(), sorted_rows.end(), negate(r), lex_less)) return false;
  return true;
}

Eigen::MatrixXd to_eigen(const QMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = to_double(m(r, c));
  return out;
}

QMatrix default_metric(QMatrix metric, std::size_t dim) {
  if (metric.empty()) return QMatrix::identity(dim);
  if (metric.rows() != dim || metric.cols() != dim) throw std::invalid_argument("metric has wrong shape");
  return metric;
}

// Keeps the rows whose tight set (entries of `others` with row.o == 1) has
// full rank; these are the facets (resp. vertices) of the polytope.
std::vector<QVector> irredundant(const std::vector<QVector>& rows, const std::vector<QVector>& others,
                                 std::size_t dim) {
  std::vector<QVector> kept;
  for (const auto& r : rows) {
    QMatrix tight;
    for (const auto& o : others)
      if (dot(r, o) == 1) tight.append_row(o);
    if (tight.rows() >= dim && rank(tight) == dim) kept.push_back(r);
  }
  return kept;
}

}  // namespace

QMatrix enumerate_vertices(const QMatrix& normals) {
  const std::size_t d = normals.cols();
  const std::size_t D = d + 1;
  // Homogenised cone {(x, t) : a.x - t <= 0, -t <= 0}.
  std::vector<QVector> cons;
  cons.reserve(normals.rows() + 1);
  for (std::size_t i = 0; i < normals.rows(); ++i) {
    QVector row = normals.row(i);
    row.push_back(Rational(-1));
    cons.push_back(std::move(row));
  }
  QVector t_row(D);
  t_row[d] = -1;
  cons.push_back(std::move(t_row));
  const std::size_t m = cons.size();

  // Initial simplicial cone from D independent constraints.
  std::vector<std::size_t> basis;
  QMatrix probe;
  for (std::size_t i = 0; i < m && basis.size() < D; ++i) {
    QMatrix trial = probe;
    trial.append_row(cons[i]);
    if (rank(trial) == trial.rows()) {
      probe = std::move(trial);
      basis.push_back(i);
    }
  }
  if (basis.size() < D) throw std::domain_error("enumerate_vertices: constraints do not bound a pointed cone");

  QMatrix binv = inverse(probe);
  std::vector<QVector> rays;
  std::vector<Bits> zeros;
  for (std::size_t j = 0; j < D; ++j) {
    QVector r = binv.col(j);
    for (auto& x : r) x = -x;
    normalize_ray(r);
    Bits z(m);
    for (std::size_t k = 0; k < D; ++k)
      if (k != j) z.set(basis[k]);
    rays.push_back(std::move(r));
    zeros.push_back(std::move(z));
  }

  std::vector<bool> processed(m, false);
  for (auto b : basis) processed[b] = true;

  for (std::size_t k = 0; k < m; ++k) {
    if (processed[k]) continue;
    processed[k] = true;
    const QVector& row = cons[k];
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg, zer;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(row, rays[i]);
      if (val[i] > 0)
        pos.push_back(i);
      else if (val[i] < 0)
        neg.push_back(i);
      else
        zer.push_back(i);
    }
    if (pos.empty()) {
      for (auto i : zer) zeros[i].set(k);
      continue;
    }

    std::vector<QVector> next_rays;
    std::vector<Bits> next_zeros;
    for (auto i : neg) {
      next_rays.push_back(rays[i]);
      next_zeros.push_back(zeros[i]);
    }
    for (auto i : zer) {
      next_rays.push_back(rays[i]);
      Bits z = zeros[i];
      z.set(k);
      next_zeros.push_back(std::move(z));
    }
    for (auto ip : pos) {
      for (auto in : neg) {
        Bits common = zeros[ip] & zeros[in];
        if (common.count() + 2 < D) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == ip || o == in) continue;
          if (common.is_subset_of(zeros[o])) adjacent = false;
        }
        if (!adjacent) continue;
        QVector w(D);
        for (std::size_t c = 0; c < D; ++c) w[c] = val[ip] * rays[in][c] - val[in] * rays[ip][c];
        normalize_ray(w);
        common.set(k);
        next_rays.push_back(std::move(w));
        next_zeros.push_back(std::move(common));
      }
    }
    rays = std::move(next_rays);
    zeros = std::move(next_zeros);
  }

  QMatrix verts;
  for (const auto& r : rays) {
    if (is_zero(r[d])) throw std::domain_error("enumerate_vertices: region is unbounded");
    QVector v(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(d));
    for (auto& x : v) x /= r[d];
    verts.append_row(v);
  }
  if (verts.rows() == 0) verts = QMatrix(0, d);
  return verts;
}

QMatrix hyperplane_basis(const QVector& normal, const QMatrix& metric) {
  const std::size_t d = normal.size();
  auto pivot = std::find_if(normal.begin(), normal.end(), [](const Rational& x) { return !is_zero(x); });
  if (pivot == normal.end()) throw std::invalid_argument("zero normal vector");
  const std::size_t j = static_cast<std::size_t>(pivot - normal.begin());
  const QMatrix g = default_metric(metric, d);

  auto inner = [&](const QVector& a, const QVector& b) { return dot(a, g * b); };

  std::vector<QVector> basis;
  std::vector<Rational> norms;
  for (std::size_t i = 0; i < d; ++i) {
    if (i == j) continue;
    QVector c(d);
    c[i] = 1;
    c[j] = -normal[i] / normal[j];
    for (std::size_t l = 0; l < basis.size(); ++l) {
      Rational f = inner(c, basis[l]) / norms[l];
      if (is_zero(f)) continue;
      for (std::size_t k = 0; k < d; ++k) c[k] -= f * basis[l][k];
    }
    norms.push_back(inner(c, c));
    basis.push_back(std::move(c));
  }
  QMatrix b(d, d - 1);
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t r = 0; r < d; ++r) b(r, c) = basis[c][r];
  return b;
}

Polytope::Polytope(std::size_t dim, QMatrix vertices, QMatrix facets, QMatrix metric)
    : dim_(dim), metric_(default_metric(std::move(metric), dim)) {
  auto vrows = sorted_unique_rows(vertices);
  auto frows = sorted_unique_rows(facets);
  vertices_ = QMatrix::from_rows(vrows, dim);
  facets_ = QMatrix::from_rows(frows, dim);
  incidence_.resize(frows.size());
  for (std::size_t f = 0; f < frows.size(); ++f)
    for (std::size_t v = 0; v < vrows.size(); ++v)
      if (dot(frows[f], vrows[v]) == 1) incidence_[f].push_back(v);
  vertices_d_ = to_eigen(vertices_);
  facets_d_ = to_eigen(facets_);
}

Polytope Polytope::from_facets(const QMatrix& normals, QMatrix metric) {
  const std::size_t d = normals.cols();
  if (d == 0) throw std::invalid_argument("polytope of dimension zero");
  std::vector<QVector> rows;
  for (std::size_t r = 0; r < normals.rows(); ++r) {
    QVector row = normals.row(r);
    if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return is_zero(x); })) continue;
    rows.push_back(std::move(row));
  }
  QMatrix nz = QMatrix::from_rows(rows, d);
  QMatrix verts = enumerate_vertices(nz);
  auto vrows = sorted_unique_rows(verts);
  if (!closed_under_negation(vrows)) throw std::invalid_argument("polytope is not centrally symmetric");
  std::sort(rows.begin(), rows.end(), lex_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  auto facets = irredundant(rows, vrows, d);
  return Polytope(d, QMatrix::from_rows(vrows, d), QMatrix::from_rows(facets, d), std::move(metric));
}

Polytope Polytope::from_vertices(const QMatrix& points, QMatrix metric) {
  const std::size_t d = points.cols();
  if (d == 0) throw std::invalid_argument("polytope of dimension zero");
  auto prows = sorted_unique_rows(points);
  if (!closed_under_negation(prows)) throw std::invalid_argument("vertex set is not closed under negation");
  if (rank(QMatrix::from_rows(prows, d)) != d) throw std::invalid_argument("vertex set does not span the space");
  QMatrix facets = enumerate_vertices(QMatrix::from_rows(prows, d));
  auto frows = sorted_unique_rows(facets);
  auto verts = irredundant(prows, frows, d);
  return Polytope(d, QMatrix::from_rows(verts, d), QMatrix::from_rows(frows, d), std::move(metric));
}

Polytope Polytope::from_description(const QMatrix& vertices, const QMatrix& facets, QMatrix metric) {
  const std::size_t d = vertices.cols();
  if (d == 0 || facets.cols() != d) throw std::invalid_argument("from_description: shape mismatch");
  for (std::size_t f = 0; f < facets.rows(); ++f)
    for (std::size_t v = 0; v < vertices.rows(); ++v)
      if (dot(facets.row(f), vertices.row(v)) > 1)
        throw std::invalid_argument("from_description: vertex violates a facet inequality");
  return Polytope(d, vertices, facets, std::move(metric));
}

Polytope Polytope::cube(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("cube of dimension zero");
  QMatrix f(2 * dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    f(2 * i, i) = 1;
    f(2 * i + 1, i) = -1;
  }
  const std::size_t nv = std::size_t{1} << dim;
  QMatrix v(nv, dim);
  for (std::size_t mask = 0; mask < nv; ++mask)
    for (std::size_t i = 0; i < dim; ++i) v(mask, i) = (mask >> i) & 1 ? 1 : -1;
  return Polytope(dim, std::move(v), std::move(f), {});
}

Polytope Polytope::cross(std::size_t dim) { return cube(dim).polar(); }

Polytope Polytope::polar() const { return Polytope(dim_, facets_, vertices_, inverse(metric_)); }

Polytope Polytope::linear_image(const QMatrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw std::invalid_argument("linear_image: matrix has wrong shape");
  QMatrix minv = inverse(m);  // throws on singular input
  QMatrix v = vertices_ * m.transpose();
  QMatrix f = facets_ * minv;
  return Polytope(dim_, std::move(v), std::move(f), metric_);
}

Polytope Polytope::section(const QVector& normal) const {
  if (normal.size() != dim_) throw std::invalid_argument("section: normal has wrong dimension");
  if (dim_ < 2) throw std::invalid_argument("section: polytope must have dimension >= 2");
  QMatrix b = hyperplane_basis(normal, metric_);
  QMatrix restricted = facets_ * b;
  QMatrix g = b.transpose() * (metric_ * b);
  return from_facets(restricted, std::move(g));
}

Polytope Polytope::projection(const QVector& direction) const { return polar().section(direction).polar(); }

Polytope Polytope::projection_by_vertices(const QVector& direction) const {
  if (direction.size() != dim_) throw std::invalid_argument("projection: direction has wrong dimension");
  if (dim_ < 2) throw std::invalid_argument("projection: polytope must have dimension >= 2");
  QMatrix dual_metric = inverse(metric_);
  QMatrix b = hyperplane_basis(direction, dual_metric);
  QMatrix pts = vertices_ * b;
  QMatrix g = inverse(b.transpose() * (dual_metric * b));
  return from_vertices(pts, std::move(g));
}

namespace {

struct Triangulator {
  const QMatrix& verts;
  const std::vector<std::vector<std::size_t>>& incidence;
  std::size_t dim;
  Rational total = 0;

  // Facets of a face: the maximal proper nonempty intersections with facets of
  // the polytope.
  std::vector<std::vector<std::size_t>> subfaces(const std::vector<std::size_t>& face) const {
    std::vector<std::vector<std::size_t>> cand;
    for (const auto& fv : incidence) {
      std::vector<std::size_t> g;
      std::set_intersection(face.begin(), face.end(), fv.begin(), fv.end(), std::back_inserter(g));
      if (g.empty() || g.size() == face.size()) continue;
      cand.push_back(std::move(g));
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<std::vector<std::size_t>> maximal;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < cand.size() && !dominated; ++j) {
        if (i == j || cand[j].size() <= cand[i].size()) continue;
        dominated = std::includes(cand[j].begin(), cand[j].end(), cand[i].begin(), cand[i].end());
      }
      if (!dominated) maximal.push_back(cand[i]);
    }
    return maximal;
  }

  void simplex(const std::vector<std::size_t>& chain) {
    QMatrix m(dim, dim);
    const std::size_t base = chain[0];
    for (std::size_t r = 1; r <= dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m(r - 1, c) = verts(chain[r], c) - verts(base, c);
    total += abs(determinant(std::move(m)));
  }

  void run(const std::vector<std::size_t>& face, std::size_t face_dim, std::vector<std::size_t>& chain) {
    if (face_dim == 0) {
      chain.push_back(face.front());
      simplex(chain);
      chain.pop_back();
      return;
    }
    const std::size_t apex = face.front();
    chain.push_back(apex);
    for (const auto& g : subfaces(face)) {
      if (std::binary_search(g.begin(), g.end(), apex)) continue;
      run(g, face_dim - 1, chain);
    }
    chain.pop_back();
  }
};

}  // namespace

Rational Polytope::coordinate_volume() const {
  Triangulator t{vertices_, incidence_, dim_};
  std::vector<std::size_t> all(vertices_.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> chain;
  t.run(all, dim_, chain);
  Rational fact = 1;
  for (std::size_t k = 2; k <= dim_; ++k) fact *= k;
  return t.total / fact;
}

double Polytope::gauge(const Eigen::VectorXd& x) const {
  double g = (facets_d_ * x).maxCoeff();
  return g > 0.0 ? g : 0.0;
}

double Polytope::support(const Eigen::VectorXd& u) const { return (vertices_d_ * u).maxCoeff(); }

std::size_t Polytope::support_vertex(const Eigen::VectorXd& u) const {
  Eigen::VectorXd vals = vertices_d_ * u;
  const double best = vals.maxCoeff();
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] >= best - tol) return static_cast<std::size_t>(i);
  return 0;
}

}  // namespace mahler
