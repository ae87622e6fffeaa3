#include "mahler/embedding.hpp"

#include "mahler/parallel.hpp"
#include "mahler/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mahler {

namespace {

constexpr char kMagic[8] = {'M', 'H', 'L', 'P', 'R', 'O', 'F', '1'};
constexpr double kPi = std::numbers::pi;

// Exponents of the first-quadrant arc: q ~ (1 - x)^a1, p ~ x^b1.
double a1(const EmbeddingProfile& pr) { return 1.0 / (pr.alpha * pr.n_exp); }
double b1(const EmbeddingProfile& pr) { return 1.0 / (pr.beta * pr.n_exp); }

// Solves phi(w) = target for increasing phi on [lo, hi], widening to [0, 1]
// if rounding spoils the bracket.
template <class F>
double solve_increasing(F phi, double target, double lo, double hi) {
  auto f = [&](double w) { return phi(w) - target; };
  double flo = f(lo), fhi = f(hi);
  if (flo > 0 || fhi < 0) {
    lo = 0.0;
    hi = 1.0;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo >= 0) return lo;
  if (fhi <= 0) return hi;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double sgn(double v) { return std::signbit(v) ? -1.0 : 1.0; }

}  // namespace

double EmbeddingProfile::g(double p, double q) const {
  const double aq = std::abs(q), ap = std::abs(p);
  if (is_limit()) return 4.0 * std::max(std::pow(aq, alpha), std::pow(ap, beta));
  if (aq == 0.0 && ap == 0.0) return 0.0;
  // c (u^N + v^N)^{1/N} in logarithms, u = |q|^alpha, v = |p|^beta.
  const double lu = aq > 0 ? alpha * std::log(aq) : -std::numeric_limits<double>::infinity();
  const double lv = ap > 0 ? beta * std::log(ap) : -std::numeric_limits<double>::infinity();
  const double m = std::max(lu, lv);
  const double n = n_exp;
  return c_n * std::exp(m + std::log1p(std::exp(n * (std::min(lu, lv) - m))) / n);
}

void EmbeddingProfile::level_point(double s, double& q, double& p) const {
  s = std::clamp(s, 0.0, 1.0);
  if (is_limit()) {
    const double q0 = std::pow(4.0, -1.0 / alpha), p0 = std::pow(4.0, -1.0 / beta);
    if (s <= 1.0 / alpha) {
      q = q0;
      p = s * alpha / (4.0 * q0);
    } else {
      p = p0;
      q = std::max(0.0, q0 - (s - 1.0 / alpha) * beta / (4.0 * p0));
    }
    return;
  }
  const double ea = a1(*this), eb = b1(*this);
  const double cq = std::pow(c_n, -1.0 / alpha), cp = std::pow(c_n, -1.0 / beta);
  if (s == 0.0) {
    q = cq;
    p = 0.0;
    return;
  }
  if (s == 1.0) {
    q = 0.0;
    p = cp;
    return;
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(s * grid), grid - 1);
  const std::size_t lo = k == 0 ? 0 : k - 1, hi = std::min(k + 2, grid);
  const double beta_ab = boost::math::beta(eb, ea);
  if (s <= 0.5) {
    // w = x^{b1}; I_x(b1, a1) is close to linear in w near 0.
    auto phi = [&](double w) {
      const double x = std::pow(w, 1.0 / eb);
      if (x < 1e-280) return w / (eb * beta_ab);
      return boost::math::ibeta(eb, ea, x);
    };
    const double w = solve_increasing(phi, s, std::pow(x_table[lo], eb), std::pow(x_table[hi], eb));
    const double x = std::pow(w, 1.0 / eb);
    p = cp * w;
    q = cq * std::pow(1.0 - x, ea);
  } else {
    // v = y^{a1} with y = 1 - x, solving I_y(a1, b1) = 1 - s.
    auto phi = [&](double v) {
      const double y = std::pow(v, 1.0 / ea);
      if (y < 1e-280) return v / (ea * beta_ab);
      return boost::math::ibeta(ea, eb, y);
    };
    const double v = solve_increasing(phi, 1.0 - s, std::pow(y_table[hi], ea), std::pow(y_table[lo], ea));
    const double y = std::pow(v, 1.0 / ea);
    q = cq * v;
    p = cp * std::pow(1.0 - y, eb);
  }
}

std::string EmbeddingProfile::cache_name() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "profile_a%.17g_n%u_g%zu.bin", alpha, n_exp, grid);
  return buf;
}

void EmbeddingProfile::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    const std::uint32_t n = n_exp;
    const std::uint64_t g = grid, len = x_table.size();
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&alpha), sizeof alpha);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&g), sizeof g);
    out.write(reinterpret_cast<const char*>(&c_n), sizeof c_n);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(reinterpret_cast<const char*>(x_table.data()), static_cast<std::streamsize>(len * sizeof(double)));
    out.write(reinterpret_cast<const char*>(y_table.data()), static_cast<std::streamsize>(len * sizeof(double)));
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

EmbeddingProfile EmbeddingProfile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[sizeof kMagic];
  EmbeddingProfile pr;
  std::uint32_t n = 0;
  std::uint64_t g = 0, len = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&pr.alpha), sizeof pr.alpha);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&g), sizeof g);
  in.read(reinterpret_cast<char*>(&pr.c_n), sizeof pr.c_n);
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0 || len > (1u << 26))
    throw std::runtime_error("not a profile cache: " + path);
  pr.n_exp = n;
  pr.grid = g;
  pr.beta = pr.alpha / (pr.alpha - 1.0);
  pr.x_table.resize(len);
  pr.y_table.resize(len);
  in.read(reinterpret_cast<char*>(pr.x_table.data()), static_cast<std::streamsize>(len * sizeof(double)));
  in.read(reinterpret_cast<char*>(pr.y_table.data()), static_cast<std::streamsize>(len * sizeof(double)));
  if (!in) throw std::runtime_error("truncated profile cache: " + path);
  return pr;
}

EmbeddingProfile build_profile(double alpha, unsigned n_exp, std::size_t grid) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("embedding: alpha must be in (1, inf)");
  if (grid < 4) throw std::invalid_argument("embedding: grid too small");
  EmbeddingProfile pr;
  pr.alpha = alpha;
  pr.beta = alpha / (alpha - 1.0);
  pr.n_exp = n_exp;
  pr.grid = grid;
  if (pr.is_limit()) {
    pr.c_n = 4.0;
    return pr;
  }
  const double an = alpha * n_exp, bn = pr.beta * n_exp;
  boost::math::quadrature::tanh_sinh<double> ts;
  // (1 - t^{aN})^{1/(bN)}, with the distance to t = 1 used near the endpoint.
  auto f = [&](double t, double tc) {
    const double lt = (tc > 0 && tc < 0.5) ? std::log1p(-tc) : std::log(t);
    return std::pow(-std::expm1(an * lt), 1.0 / bn);
  };
  pr.c_n = 4.0 * ts.integrate(f, 0.0, 1.0);
  const double ea = a1(pr), eb = b1(pr);
  pr.x_table.resize(grid + 1);
  pr.y_table.resize(grid + 1);
  pr.x_table[0] = 0.0;
  pr.y_table[0] = 1.0;
  pr.x_table[grid] = 1.0;
  pr.y_table[grid] = 0.0;
  for (std::size_t k = 1; k < grid; ++k) {
    double py = 0.0;
    pr.x_table[k] = boost::math::ibeta_inv(eb, ea, static_cast<double>(k) / grid, &py);
    pr.y_table[k] = py;
  }
  return pr;
}

EmbeddingProfile cached_profile(double alpha, unsigned n_exp, const std::string& dir, std::size_t grid) {
  EmbeddingProfile key;
  key.alpha = alpha;
  key.n_exp = n_exp;
  key.grid = grid;
  const std::filesystem::path path = std::filesystem::path(dir) / key.cache_name();
  if (std::filesystem::exists(path)) {
    try {
      EmbeddingProfile pr = EmbeddingProfile::load(path.string());
      if (pr.alpha == alpha && pr.n_exp == n_exp && pr.grid == grid) return pr;
    } catch (const std::runtime_error&) {
      // Rebuild below.
    }
  }
  EmbeddingProfile pr = build_profile(alpha, n_exp, grid);
  std::filesystem::create_directories(dir);
  pr.save(path.string());
  return pr;
}

double sublevel_area(const EmbeddingProfile& pr, double level) {
  if (level <= 0) return 0.0;
  if (pr.is_limit()) return 4.0 * std::pow(level / 4.0, 1.0 / pr.alpha) * std::pow(level / 4.0, 1.0 / pr.beta);
  const double n = pr.n_exp;
  // |q|^{aN} + |p|^{bN} <= (A / c)^N, integrated over q in [0, q_max].
  const double lr = n * std::log(level / pr.c_n);
  const double qmax = std::exp(lr / (pr.alpha * n));
  auto p_of_q = [&](double q) {
    if (q >= qmax) return 0.0;
    const double rest = std::exp(lr) * -std::expm1(pr.alpha * n * std::log(q) - lr);
    return std::pow(rest, 1.0 / (pr.beta * n));
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return 4.0 * ts.integrate(p_of_q, 0.0, qmax);
}

Eigen::Vector2d planar_map(const EmbeddingProfile& pr, const Eigen::Vector2d& z) {
  const double r2 = z.squaredNorm();
  if (r2 == 0.0) return Eigen::Vector2d::Zero();
  const double a = kPi * r2;
  // Each quadrant is the reflection of the first, which makes the map odd.
  const double s = std::atan2(std::abs(z[1]), std::abs(z[0])) / (kPi / 2);
  double q = 0.0, p = 0.0;
  pr.level_point(s, q, p);
  return {sgn(z[0]) * std::pow(a, 1.0 / pr.alpha) * q, sgn(z[1]) * std::pow(a, 1.0 / pr.beta) * p};
}

Eigen::Vector2d planar_map_inverse(const EmbeddingProfile& pr, const Eigen::Vector2d& qp) {
  const double a = pr.g(qp[1], qp[0]);
  if (a == 0.0) return Eigen::Vector2d::Zero();
  const double qh = std::abs(qp[0]) / std::pow(a, 1.0 / pr.alpha);
  const double ph = std::abs(qp[1]) / std::pow(a, 1.0 / pr.beta);
  double s = 0.0;
  if (pr.is_limit()) {
    const double q0 = std::pow(4.0, -1.0 / pr.alpha), p0 = std::pow(4.0, -1.0 / pr.beta);
    s = qh / q0 >= ph / p0 ? 4.0 * q0 * ph / pr.alpha : 1.0 / pr.alpha + 4.0 * p0 * (q0 - qh) / pr.beta;
  } else {
    const double x = std::pow(ph * std::pow(pr.c_n, 1.0 / pr.beta), pr.beta * pr.n_exp);
    const double y = std::pow(qh * std::pow(pr.c_n, 1.0 / pr.alpha), pr.alpha * pr.n_exp);
    s = x <= y ? boost::math::ibeta(b1(pr), a1(pr), std::min(x, 1.0))
               : 1.0 - boost::math::ibeta(a1(pr), b1(pr), std::min(y, 1.0));
  }
  const double th = std::clamp(s, 0.0, 1.0) * kPi / 2;
  const double r = std::sqrt(a / kPi);
  return {sgn(qp[0]) * r * std::cos(th), sgn(qp[1]) * r * std::sin(th)};
}

double eps_rect_check(const EmbeddingProfile& pr, double r_max, std::size_t grid) {
  // The map commutes with the coordinate reflections, so the first quadrant suffices.
  double eps = 0.0;
  for (std::size_t i = 1; i <= grid; ++i) {
    const double r = r_max * static_cast<double>(i) / grid;
    const double budget = kPi * r * r / 4.0;
    for (std::size_t j = 0; j <= grid; ++j) {
      const double th = (kPi / 2) * static_cast<double>(j) / grid;
      const Eigen::Vector2d w = planar_map(pr, {r * std::cos(th), r * std::sin(th)});
      eps = std::max({eps, std::pow(std::abs(w[0]), pr.alpha) - budget, std::pow(std::abs(w[1]), pr.beta) - budget});
    }
  }
  return eps;
}

double eps_rect_bound(const EmbeddingProfile& pr, double r_max) {
  return std::max(0.0, kPi * r_max * r_max * (1.0 / pr.c_n - 0.25));
}

json PlanarChecks::to_json() const {
  return {{"jacobian_max_dev", jacobian_max_dev}, {"odd_max_dev", odd_max_dev},
          {"level_max_dev", level_max_dev},       {"inverse_max_dev", inverse_max_dev},
          {"area_max_rel_dev", area_max_rel_dev}, {"hessian_min_eig", hessian_min_eig},
          {"midpoint_violations", midpoint_violations}};
}

PlanarChecks planar_checks(const EmbeddingProfile& pr, double r_max, std::size_t grid, double axis_margin,
                           std::uint64_t seed) {
  PlanarChecks c;
  c.hessian_min_eig = std::numeric_limits<double>::infinity();
  const double kink = pr.is_limit() ? 1.0 / pr.alpha : -1.0;  // corner ray of the limit profile
  const double h = 1e-6;
  for (std::size_t i = 0; i <= grid; ++i) {
    for (std::size_t j = 0; j <= grid; ++j) {
      const Eigen::Vector2d z(r_max * (2.0 * i / grid - 1.0), r_max * (2.0 * j / grid - 1.0));
      if (z.norm() > r_max) continue;
      const Eigen::Vector2d w = planar_map(pr, z);
      c.odd_max_dev = std::max(c.odd_max_dev, (planar_map(pr, -z) + w).norm());
      c.level_max_dev = std::max(c.level_max_dev, std::abs(pr.g(w[1], w[0]) - kPi * z.squaredNorm()));
      c.inverse_max_dev = std::max(c.inverse_max_dev, (planar_map_inverse(pr, w) - z).norm());
      if (std::abs(z[0]) < axis_margin || std::abs(z[1]) < axis_margin) continue;
      if (kink > 0) {
        const double s = std::atan2(std::abs(z[1]), std::abs(z[0])) / (kPi / 2);
        if (std::abs(s - kink) * (kPi / 2) * z.norm() < axis_margin) continue;
      }
      Eigen::Matrix2d jac;
      for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e[k] = h;
        jac.col(k) = (planar_map(pr, z + e) - planar_map(pr, z - e)) / (2 * h);
      }
      c.jacobian_max_dev = std::max(c.jacobian_max_dev, std::abs(jac.determinant() - 1.0));
    }
  }
  for (double level : {0.25, 1.0, 2.0, 4.0}) {
    c.area_max_rel_dev = std::max(c.area_max_rel_dev, std::abs(sublevel_area(pr, level) - level) / level);
  }

  // Convexity of G_N: finite-difference Hessians away from the axes and
  // midpoint inequalities everywhere, at random points of [-2, 2]^2.
  const CounterRng rng(seed, 0xC0E);
  auto gq = [&](double q, double p) { return pr.g(p, q); };
  for (std::uint64_t t = 0; t < 2000; ++t) {
    const double q = 2 * rng.symmetric(t, 0), p = 2 * rng.symmetric(t, 1);
    const double q2 = 2 * rng.symmetric(t, 2), p2 = 2 * rng.symmetric(t, 3);
    const double mid = gq(0.5 * (q + q2), 0.5 * (p + p2));
    const double avg = 0.5 * (gq(q, p) + gq(q2, p2));
    if (mid > avg * (1 + 1e-12) + 1e-15) ++c.midpoint_violations;
    if (pr.is_limit() || std::abs(q) < 0.05 || std::abs(p) < 0.05) continue;
    const double d = 1e-4;
    Eigen::Matrix2d hess;
    const double g0 = gq(q, p);
    hess(0, 0) = (gq(q + d, p) - 2 * g0 + gq(q - d, p)) / (d * d);
    hess(1, 1) = (gq(q, p + d) - 2 * g0 + gq(q, p - d)) / (d * d);
    hess(0, 1) = hess(1, 0) = (gq(q + d, p + d) - gq(q + d, p - d) - gq(q - d, p + d) + gq(q - d, p - d)) / (4 * d * d);
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(hess).eigenvalues();
    c.hessian_min_eig = std::min(c.hessian_min_eig, ev[0] / std::max(std::abs(ev[1]), 1e-300));
  }
  if (!std::isfinite(c.hessian_min_eig)) c.hessian_min_eig = 0.0;
  return c;
}

json EmbeddingReport::to_json() const {
  return {{"alpha", alpha},
          {"beta", alpha / (alpha - 1.0)},
          {"N_exp", n_exp},
          {"copies", copies},
          {"epsilon", epsilon},
          {"radius", radius},
          {"certified_radius", certified_radius},
          {"samples", samples},
          {"contained", contained},
          {"fraction", fraction()},
          {"worst_q", worst_q},
          {"worst_p", worst_p},
          {"convexity_worst", convexity_worst},
          {"worst_point", worst_point},
          {"seed", seed}};
}

EmbeddingReport product_embedding_check(const EmbeddingProfile& pr, std::size_t copies, double radius,
                                        std::size_t samples, std::uint64_t seed) {
  if (copies == 0) throw std::invalid_argument("embedding: copies must be positive");
  EmbeddingReport rep;
  rep.alpha = pr.alpha;
  rep.n_exp = pr.n_exp;
  rep.copies = copies;
  rep.radius = radius;
  rep.samples = samples;
  rep.seed = seed;
  rep.epsilon = eps_rect_check(pr, std::sqrt(4.0 / kPi));
  rep.certified_radius = std::sqrt(std::max(0.0, (4.0 / kPi) * (1.0 - copies * rep.epsilon)));

  const std::size_t n = copies, dim = 2 * copies;
  const CounterRng rng(seed, 0xE3B);
  auto sample = [&](std::size_t i, Vec& x) {
    for (std::size_t k = 0; k < dim; ++k) x[static_cast<Eigen::Index>(k)] = rng.normal(i, k);
    const double u = rng.uniform(i, 0x20000);
    x *= radius * std::pow(u, 1.0 / static_cast<double>(dim)) / x.norm();
  };
  struct Chunk {
    std::size_t contained = 0;
    double worst = -1.0, worst_q = 0.0, worst_p = 0.0, convex = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
  };
  std::vector<Chunk> chunks(worker_count());
  parallel_for(
      samples,
      [&](std::size_t b, std::size_t e, std::size_t w) {
        Chunk& ch = chunks[w];
        Vec x(static_cast<Eigen::Index>(dim));
        std::vector<double> prev_q(n), prev_p(n), cur_q(n), cur_p(n);
        bool have_prev = false;
        for (std::size_t i = b; i < e; ++i) {
          sample(i, x);
          double sq = 0.0, sp = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const Eigen::Vector2d img = planar_map(pr, {x[jj + static_cast<Eigen::Index>(n)], x[jj]});
            cur_q[j] = img[0];
            cur_p[j] = img[1];
            sq += std::pow(std::abs(img[0]), pr.alpha);
            sp += std::pow(std::abs(img[1]), pr.beta);
          }
          if (sq <= 1.0 + 1e-12 && sp <= 1.0 + 1e-12) ++ch.contained;
          ch.worst_q = std::max(ch.worst_q, sq);
          ch.worst_p = std::max(ch.worst_p, sp);
          if (std::max(sq, sp) > ch.worst) {
            ch.worst = std::max(sq, sp);
            ch.worst_index = i;
          }
          if (have_prev) {
            // Midpoint convexity of sum_j G_N on consecutive images.
            double mid = 0.0, avg = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              mid += pr.g(0.5 * (cur_p[j] + prev_p[j]), 0.5 * (cur_q[j] + prev_q[j]));
              avg += 0.5 * (pr.g(cur_p[j], cur_q[j]) + pr.g(prev_p[j], prev_q[j]));
            }
            ch.convex = std::max(ch.convex, mid - avg);
          }
          prev_q.swap(cur_q);
          prev_p.swap(cur_p);
          have_prev = true;
        }
      });
  double worst = -1.0;
  std::size_t worst_index = 0;
  rep.convexity_worst = -std::numeric_limits<double>::infinity();
  for (const Chunk& ch : chunks) {
    rep.contained += ch.contained;
    rep.worst_q = std::max(rep.worst_q, ch.worst_q);
    rep.worst_p = std::max(rep.worst_p, ch.worst_p);
    rep.convexity_worst = std::max(rep.convexity_worst, ch.convex);
    if (ch.worst > worst) {
      worst = ch.worst;
      worst_index = ch.worst_index;
    }
  }
  if (!std::isfinite(rep.convexity_worst)) rep.convexity_worst = 0.0;
  if (samples > 0) {
    Vec x(static_cast<Eigen::Index>(dim));
    sample(worst_index, x);
    rep.worst_point.assign(x.data(), x.data() + x.size());
  }
  return rep;
}

}  // namespace mahler
