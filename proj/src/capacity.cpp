#include "mahler/capacity.hpp"

#include "mahler/parallel.hpp"
#include "mahler/random.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mahler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smoothing temperatures relative to the mean edge norm. The last stage is
// fine enough that its bias is far below the reported tolerances.
constexpr double kStages[] = {3e-2, 3e-3, 3e-4, 3e-5};

Vec apply_j(const Vec& v) {
  const Eigen::Index k = v.size() / 2;
  Vec out(v.size());
  out.head(k) = -v.tail(k);
  out.tail(k) = v.head(k);
  return out;
}

// J^T w
Vec apply_jt(const Vec& w) {
  const Eigen::Index k = w.size() / 2;
  Vec out(w.size());
  out.head(k) = w.tail(k);
  out.tail(k) = -w.head(k);
  return out;
}

// The Clarke quotient as a function of the free vertices, flattened row by row.
class Objective {
 public:
  Objective(const ConvexBody& s, Eigen::Index free_rows, bool symmetric)
      : s_(s), d_(static_cast<Eigen::Index>(s.dim())), rows_(free_rows), symmetric_(symmetric) {}

  Eigen::Index size() const { return rows_ * d_; }
  Eigen::Index m() const { return symmetric_ ? 2 * rows_ : rows_; }
  void set_tau(double tau) { tau_ = tau; }

  Mat points(const Vec& x) const {
    Mat z(m(), d_);
    for (Eigen::Index i = 0; i < rows_; ++i) z.row(i) = x.segment(i * d_, d_).transpose();
    if (symmetric_) z.bottomRows(rows_) = -z.topRows(rows_);
    return z;
  }

  // Returns the quotient, its smoothed length, and optionally the gradient.
  double operator()(const Vec& x, Vec* grad, double* length = nullptr) const {
    const Mat z = points(x);
    const Eigen::Index mm = z.rows();
    double len = 0.0, area2 = 0.0;  // area2 = 2 * action
    Mat gl = grad ? Mat::Zero(mm, d_) : Mat();
    Vec h;
    for (Eigen::Index i = 0; i < mm; ++i) {
      const Eigen::Index next = (i + 1) % mm;
      const Vec zi = z.row(i).transpose(), zn = z.row(next).transpose();
      const Vec e = zn - zi;
      len += s_.smoothed_support(apply_j(e), tau_, grad ? &h : nullptr);
      if (grad) {
        const Vec dn = apply_jt(h);
        gl.row(next) += dn.transpose();
        gl.row(i) -= dn.transpose();
      }
      const Eigen::Index k = d_ / 2;
      area2 += zi.head(k).dot(zn.tail(k)) - zn.head(k).dot(zi.tail(k));
    }
    if (length) *length = len;
    const double action = 0.5 * area2;
    if (!(action > 0.0)) return kInf;
    const double f = len * len / (4.0 * action);
    if (grad) {
      // dA/dz_i = 1/2 Omega (z_{i+1} - z_{i-1}) with Omega (a_p, a_q) = (a_q, -a_p).
      const Eigen::Index k = d_ / 2;
      Mat g(mm, d_);
      for (Eigen::Index i = 0; i < mm; ++i) {
        const Vec diff = (z.row((i + 1) % mm) - z.row((i + mm - 1) % mm)).transpose();
        Vec ga(d_);
        ga.head(k) = 0.5 * diff.tail(k);
        ga.tail(k) = -0.5 * diff.head(k);
        g.row(i) = (len / (2.0 * action)) * gl.row(i) - (len * len / (4.0 * action * action)) * ga.transpose();
      }
      grad->resize(size());
      for (Eigen::Index i = 0; i < rows_; ++i) {
        Vec gi = g.row(i).transpose();
        if (symmetric_) gi -= g.row(i + rows_).transpose();
        grad->segment(i * d_, d_) = gi;
      }
    }
    return f;
  }

 private:
  const ConvexBody& s_;
  Eigen::Index d_, rows_;
  bool symmetric_;
  double tau_ = 0.0;
};

struct MinimiseResult {
  double value = kInf;
  std::size_t iterations = 0;
  bool converged = false;
};

// L-BFGS with Armijo backtracking. Stops when the relative improvement over
// the last `window` iterations drops below `rel_tol`.
MinimiseResult lbfgs(const Objective& f, Vec& x, std::size_t max_iter) {
  constexpr std::size_t kMemory = 10, kWindow = 100;
  constexpr double kRelTol = 1e-10;
  MinimiseResult r;
  Vec g;
  double fx = f(x, &g);
  if (!std::isfinite(fx)) return r;
  std::deque<std::pair<Vec, Vec>> hist;
  std::vector<double> trace{fx};
  Vec g_new;
  for (std::size_t it = 0; it < max_iter; ++it) {
    // Two-loop recursion.
    Vec d = -g;
    std::vector<double> alpha(hist.size());
    for (std::size_t j = hist.size(); j-- > 0;) {
      const auto& [s, y] = hist[j];
      alpha[j] = s.dot(d) / y.dot(s);
      d -= alpha[j] * y;
    }
    double step = 1.0;
    if (!hist.empty()) {
      const auto& [s, y] = hist.back();
      d *= s.dot(y) / y.dot(y);
    } else {
      // Scale-equivariant first step: move by 1% of the loop size.
      const double gn = g.norm();
      if (gn == 0.0) break;
      step = 0.01 * x.norm() / gn;
    }
    for (std::size_t j = 0; j < hist.size(); ++j) {
      const auto& [s, y] = hist[j];
      const double beta = y.dot(d) / y.dot(s);
      d += (alpha[j] - beta) * s;
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      hist.clear();
      continue;
    }
    Vec x_new;
    double f_new = kInf;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      x_new = x + step * d;
      f_new = f(x_new, &g_new);
      if (f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (hist.empty()) {
        r.converged = true;  // no descent possible at working precision
        break;
      }
      hist.clear();
      continue;
    }
    Vec s = x_new - x, y = g_new - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      hist.emplace_back(std::move(s), std::move(y));
      if (hist.size() > kMemory) hist.pop_front();
    }
    x = std::move(x_new);
    g = g_new;
    fx = f_new;
    trace.push_back(fx);
    ++r.iterations;
    if (trace.size() > kWindow) {
      const double before = trace[trace.size() - 1 - kWindow];
      if (before - fx <= kRelTol * std::abs(fx)) {
        r.converged = true;
        break;
      }
    }
  }
  r.value = fx;
  return r;
}

struct StartResult {
  double value = kInf;
  Vec x;
  bool converged = false;
};

// Continuation in the smoothing temperature, then exact evaluation.
StartResult optimise(Objective& obj, Vec x, std::size_t max_iter) {
  StartResult r;
  const std::size_t per_stage = std::max<std::size_t>(1, max_iter / std::size(kStages));
  bool converged = false;
  for (double rho : kStages) {
    obj.set_tau(0.0);
    double len = 0.0;
    if (!std::isfinite(obj(x, nullptr, &len))) return r;
    obj.set_tau(rho * len / static_cast<double>(obj.m()));
    converged = lbfgs(obj, x, per_stage).converged;
  }
  obj.set_tau(0.0);
  r.value = obj(x, nullptr);
  r.x = std::move(x);
  r.converged = converged && std::isfinite(r.value);
  return r;
}

// Ellipse in the symplectic plane span(a, J a), radius h_S(a), with a small
// perturbation (restricted to the free half for symmetric loops).
Vec initial_loop(const ConvexBody& s, Eigen::Index rows, bool symmetric, const CounterRng& rng, std::uint64_t index) {
  const Eigen::Index d = static_cast<Eigen::Index>(s.dim());
  Vec a(d);
  for (Eigen::Index i = 0; i < d; ++i) a[i] = rng.normal(index, static_cast<std::uint64_t>(i));
  a.normalize();
  const Vec b = apply_j(a);
  const double r = std::min(s.support(a), s.support(b));
  const Eigen::Index m = symmetric ? 2 * rows : rows;
  Vec x(rows * d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    Vec z = r * (std::cos(t) * a + std::sin(t) * b);
    for (Eigen::Index c = 0; c < d; ++c)
      z[c] += 0.05 * r * rng.normal(index, static_cast<std::uint64_t>(d + i * d + c));
    x.segment(i * d, d) = z;
  }
  return x;
}

void check_body(const ConvexBody& s) {
  if (s.dim() < 2 || s.dim() % 2 != 0) throw std::invalid_argument("capacity needs a body in even dimension");
}

CapacityEstimate run(const ConvexBody& s, const CapacityConfig& config, bool symmetric, const Vec* warm) {
  check_body(s);
  const std::size_t m = config.points;
  if (m < 4 || (symmetric && m % 2 != 0)) throw std::invalid_argument("need m >= 4 (and even for symmetric loops)");
  const std::size_t starts = warm ? 1 : config.starts;
  if (starts == 0) throw std::invalid_argument("need at least one start");
  const Eigen::Index rows = static_cast<Eigen::Index>(symmetric ? m / 2 : m);
  const CounterRng rng(config.seed, symmetric ? 2 : 1);
  std::vector<StartResult> results(starts);
  parallel_for(
      starts,
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
          Objective obj(s, rows, symmetric);
          // A start whose loop collapses is retried from a fresh ellipse.
          for (std::uint64_t attempt = 0; attempt < 4; ++attempt) {
            Vec x0 = warm ? *warm : initial_loop(s, rows, symmetric, rng, i + attempt * 0x100000ULL);
            results[i] = optimise(obj, std::move(x0), config.max_iterations);
            if (std::isfinite(results[i].value) || warm) break;
          }
        }
      },
      config.threads);
  // Deterministic reduction over (value, start index).
  std::size_t best = 0;
  for (std::size_t i = 1; i < starts; ++i)
    if (results[i].value < results[best].value) best = i;
  const StartResult& b = results[best];
  if (!std::isfinite(b.value)) throw std::runtime_error("capacity: every start collapsed to zero action");
  Objective obj(s, rows, symmetric);
  Mat pts = obj.points(b.x);
  CapacityEstimate e;
  e.value = b.value;
  e.loop = symmetric ? PolygonalLoop::centrally_symmetric(pts.topRows(rows)) : PolygonalLoop::closed(pts);
  e.m = m;
  e.starts = starts;
  e.seed = config.seed;
  e.converged = b.converged;
  e.best_start = best;
  return e;
}

}  // namespace

double body_norm(const ConvexBody& s, const Vec& v) {
  if (static_cast<std::size_t>(v.size()) != s.dim() || v.size() % 2 != 0)
    throw std::invalid_argument("body_norm: dimension mismatch");
  return s.support(apply_j(v));
}

double loop_length(const ConvexBody& s, const PolygonalLoop& loop) {
  const Mat z = loop.points();
  double len = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    len += body_norm(s, (z.row((i + 1) % z.rows()) - z.row(i)).transpose());
  return len;
}

double clarke_value(const ConvexBody& s, const PolygonalLoop& loop) {
  const double a = polygon_action(loop);
  if (!(a > 0.0)) return kInf;
  const double l = loop_length(s, loop);
  return l * l / (4.0 * a);
}

json CapacityEstimate::to_json(bool with_loop) const {
  json j{{"value", value},   {"m", m},         {"starts", starts}, {"seed", seed}, {"converged", converged},
         {"symmetric", loop.symmetric}, {"best_start", best_start}};
  if (with_loop) {
    const Mat z = loop.points();
    json pts = json::array();
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < z.cols(); ++c) row.push_back(z(i, c));
      pts.push_back(row);
    }
    j["loop"] = pts;
  }
  return j;
}

CapacityEstimate capacity_estimate(const ConvexBody& s, const CapacityConfig& config) {
  return run(s, config, false, nullptr);
}

CapacityEstimate symmetric_capacity_estimate(const ConvexBody& s, const CapacityConfig& config) {
  return run(s, config, true, nullptr);
}

CapacityEstimate refine(const ConvexBody& s, const CapacityEstimate& previous, const CapacityConfig& config) {
  const PolygonalLoop fine = previous.loop.subdivided();
  Vec warm(fine.free.size());
  for (Eigen::Index i = 0; i < fine.free.rows(); ++i) warm.segment(i * fine.free.cols(), fine.free.cols()) = fine.free.row(i).transpose();
  CapacityConfig c = config;
  c.points = fine.size();
  CapacityEstimate e = run(s, c, fine.symmetric, &warm);
  const double kept = clarke_value(s, fine);
  if (!(e.value <= kept)) {
    e.value = kept;
    e.loop = fine;
  }
  e.starts = previous.starts;
  e.seed = previous.seed;
  return e;
}

json MonotonicityReport::to_json() const {
  json t = json::array();
  for (const auto& tr : trials) {
    json u = json::array();
    for (const auto& x : tr.normal) u.push_back(to_string(x));
    t.push_back({{"normal", u}, {"reduced", tr.reduced}, {"holds", tr.holds}});
  }
  return {{"original", original}, {"slack", slack}, {"all_hold", all_hold}, {"trials", t}};
}

MonotonicityReport reduction_monotonicity_experiment(const LagrangianProduct& s, std::size_t trials,
                                                     std::uint64_t seed, const CapacityConfig& config, double slack) {
  if (s.n() < 2) throw std::invalid_argument("reduction experiment needs n >= 2");
  MonotonicityReport r;
  r.slack = slack;
  CapacityConfig c = config;
  c.seed = seed;
  r.original = capacity_estimate(s.body(), c).value;
  const CounterRng rng(seed, 0xC0FFEE);
  for (std::size_t t = 0; t < trials; ++t) {
    QVector u(s.n());
    bool nonzero = false;
    for (std::size_t i = 0; i < s.n(); ++i) {
      u[i] = static_cast<long>(rng.bits(t, i) % 11) - 5;
      nonzero |= !is_zero(u[i]);
    }
    if (!nonzero) u[t % s.n()] = 1;
    MonotonicityTrial tr;
    tr.normal = u;
    try {
      tr.reduced = capacity_estimate(reduce_product(s, u).body(), c).value;
      tr.holds = tr.reduced >= (1.0 - slack) * r.original;
    } catch (const std::exception&) {
      tr.holds = false;
    }
    r.all_hold = r.all_hold && tr.holds;
    r.trials.push_back(std::move(tr));
  }
  return r;
}

}  // namespace mahler
