#include "mahler/crofton.hpp"

#include "mahler/parallel.hpp"
#include "mahler/random.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mahler {

namespace {

constexpr int kScan = 512;
constexpr double kRootTol = 1e-12;
constexpr double kTangent = 1e-9;

class PolyParser {
 public:
  PolyParser(std::string_view s, std::size_t n) : s_(s), n_(n) {}

  std::vector<Polynomial::Term> parse() {
    std::vector<Polynomial::Term> terms;
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      Polynomial::Term t = term();
      t.coeff *= sign;
      terms.push_back(std::move(t));
      skip();
    }
    return terms;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial '" + std::string(s_) + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Polynomial::Term term() {
    Polynomial::Term t;
    t.coeff = 1.0;
    t.powers.assign(2 * n_, 0);
    bool any = false;
    for (;;) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.coeff *= number();
      } else if (c == 'p' || c == 'q') {
        ++pos_;
        const std::size_t j = static_cast<std::size_t>(integer());
        if (j < 1 || j > n_) fail("variable index out of range");
        int e = 1;
        if (peek() == '^') {
          ++pos_;
          e = integer();
        }
        t.powers[(c == 'p' ? 0 : n_) + j - 1] += e;
      } else {
        fail("expected a number or a variable");
      }
      any = true;
      const char next = peek();
      if (next == '*') {
        ++pos_;
        continue;
      }
      // Juxtaposition ("2 q1") also multiplies.
      if (std::isdigit(static_cast<unsigned char>(next)) || next == '.' || next == 'p' || next == 'q') continue;
      break;
    }
    if (!any) fail("empty term");
    return t;
  }

  double number() {
    skip();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(std::string(s_.substr(pos_)), &used);
    } catch (const std::exception&) {
      fail("bad number");
    }
    pos_ += used;
    return v;
  }

  int integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

int Polynomial::Term::degree() const {
  int d = 0;
  for (int e : powers) d += e;
  return d;
}

Polynomial Polynomial::parse(std::string_view text, std::size_t n) {
  Polynomial p;
  p.n_ = n;
  p.terms_ = PolyParser(text, n).parse();
  return p;
}

bool Polynomial::is_odd() const {
  for (const auto& t : terms_)
    if (t.coeff != 0.0 && t.degree() % 2 == 0) return false;
  return true;
}

bool Polynomial::depends_on(std::size_t coordinate) const {
  for (const auto& t : terms_)
    if (t.coeff != 0.0 && t.powers[coordinate] > 0) return true;
  return false;
}

double Polynomial::operator()(const Vec& x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (std::size_t i = 0; i < t.powers.size(); ++i) m *= ipow(x[static_cast<Eigen::Index>(i)], t.powers[i]);
    s += m;
  }
  return s;
}

Vec Polynomial::gradient(const Vec& x) const {
  Vec g = Vec::Zero(static_cast<Eigen::Index>(2 * n_));
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < t.powers.size(); ++k) {
      if (t.powers[k] == 0) continue;
      double m = t.coeff * t.powers[k];
      for (std::size_t i = 0; i < t.powers.size(); ++i)
        m *= ipow(x[static_cast<Eigen::Index>(i)], t.powers[i] - (i == k ? 1 : 0));
      g[static_cast<Eigen::Index>(k)] += m;
    }
  }
  return g;
}

double Polynomial::lipschitz_bound(double r) const {
  double b = 0.0;
  for (const auto& t : terms_) b += std::abs(t.coeff) * t.degree() * ipow(r, t.degree() - 1);
  return b;
}

std::string Polynomial::str() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    os << (k && t.coeff >= 0 ? " + " : (t.coeff < 0 ? (k ? " - " : "-") : "")) << std::abs(t.coeff);
    for (std::size_t i = 0; i < t.powers.size(); ++i) {
      if (!t.powers[i]) continue;
      os << "*" << (i < n_ ? 'p' : 'q') << (i % n_ + 1);
      if (t.powers[i] > 1) os << "^" << t.powers[i];
    }
  }
  return os.str();
}

OddHamiltonian::OddHamiltonian(std::size_t n, double epsilon, Polynomial g) : n_(n), eps_(epsilon), g_(std::move(g)) {
  if (n < 1) throw std::invalid_argument("Hamiltonian needs N >= 1");
  if (g_.terms().empty()) {
    g_ = Polynomial::parse("0*q1", n);
  }
  if (g_.n() != n) throw std::invalid_argument("perturbation lives in the wrong dimension");
  if (!g_.is_odd()) throw std::invalid_argument("perturbation must be an odd polynomial");
  if (g_.depends_on(0)) throw std::invalid_argument("perturbation must not depend on p1");
}

double OddHamiltonian::operator()(const Vec& x) const { return x[0] + eps_ * g_(x); }

Vec OddHamiltonian::gradient(const Vec& x) const {
  Vec g = eps_ * g_.gradient(x);
  g[0] += 1.0;
  return g;
}

double OddHamiltonian::flow_derivative(const Vec& x) const {
  const Vec g = gradient(x);
  const auto k = static_cast<Eigen::Index>(n_);
  return g.head(k).dot(x.tail(k)) - g.tail(k).dot(x.head(k));
}

bool OddHamiltonian::graph_condition(double r) const { return std::abs(eps_) * g_.lipschitz_bound(r) <= 0.5; }

Vec hopf_point(const Vec& z, double theta) {
  const Eigen::Index k = z.size() / 2;
  const double c = std::cos(theta), s = std::sin(theta);
  Vec out(z.size());
  // (q + i p) e^{i theta}
  out.tail(k) = c * z.tail(k) - s * z.head(k);
  out.head(k) = s * z.tail(k) + c * z.head(k);
  return out;
}

Mat sample_hopf_circles(std::size_t n, double radius, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("need at least one circle");
  const CounterRng rng(seed, 0x401F);
  const auto d = static_cast<Eigen::Index>(2 * n);
  Mat z(static_cast<Eigen::Index>(count), d);
  for (std::size_t i = 0; i < count; ++i) {
    Vec g(d);
    for (Eigen::Index c = 0; c < d; ++c) g[c] = rng.normal(i, static_cast<std::uint64_t>(c));
    z.row(static_cast<Eigen::Index>(i)) = (radius / g.norm()) * g.transpose();
  }
  return z;
}

IntersectionCount signed_intersections(const Vec& z, const OddHamiltonian& h) {
  IntersectionCount r;
  const double step = 2.0 * std::numbers::pi / kScan;
  std::vector<double> vals(kScan + 1);
  double scale = 0.0;
  for (int i = 0; i <= kScan; ++i) {
    vals[static_cast<std::size_t>(i)] = i == kScan ? vals[0] : h(hopf_point(z, i * step));
    scale = std::max(scale, std::abs(vals[static_cast<std::size_t>(i)]));
  }
  if (scale <= 1e-14 * std::max(1.0, z.norm())) {
    r.degenerate = true;
    return r;
  }
  auto record = [&](double theta) {
    const double d = h.flow_derivative(hopf_point(z, theta));
    if (std::abs(d) < kTangent) {
      r.degenerate = true;
    } else if (d > 0) {
      ++r.positive;
    } else {
      ++r.negative;
    }
  };
  for (int i = 0; i < kScan; ++i) {
    const double a = vals[static_cast<std::size_t>(i)], b = vals[static_cast<std::size_t>(i) + 1];
    if (a == 0.0) {
      record(i * step);
      continue;
    }
    if (!(a * b < 0.0)) continue;
    double lo = i * step, hi = (i + 1) * step, flo = a;
    while (hi - lo > kRootTol) {
      const double mid = 0.5 * (lo + hi);
      const double fm = h(hopf_point(z, mid));
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    record(0.5 * (lo + hi));
  }
  return r;
}

namespace {

// The point of Sigma over the direction sigma of the (q1, p2, q2)-space.
struct SlicePoint {
  Vec x;      // (p1, p2, q1, q2)
  double s;   // dH/dtheta
};

class Slice {
 public:
  Slice(const OddHamiltonian& h, double radius) : h_(h), r_(radius) {}

  SlicePoint at(double theta, double psi) const {
    const double st = std::sin(theta);
    const double q1 = std::cos(theta), p2 = st * std::cos(psi), q2 = st * std::sin(psi);
    // Solve rho^2 + (eps g(rho sigma))^2 = R^2 by Newton from rho = R.
    Vec x(4);
    double rho = r_;
    for (int it = 0; it < 60; ++it) {
      x << 0.0, rho * p2, rho * q1, rho * q2;
      const double f = h_.epsilon() * h_.perturbation()(x);
      const Vec gg = h_.perturbation().gradient(x);
      const double df = h_.epsilon() * (gg[1] * p2 + gg[2] * q1 + gg[3] * q2);
      const double phi = rho * rho + f * f - r_ * r_;
      const double dphi = 2.0 * rho + 2.0 * f * df;
      const double delta = phi / dphi;
      rho -= delta;
      if (std::abs(delta) <= 1e-16 * r_) break;
    }
    x << 0.0, rho * p2, rho * q1, rho * q2;
    x[0] = -h_.epsilon() * h_.perturbation()(x);
    return {x, h_.flow_derivative(x)};
  }

  // Boundary of Sigma+ on the meridian psi: the first zero of s in theta.
  double boundary(double psi) const {
    constexpr int kSteps = 400;
    const double dt = std::numbers::pi / kSteps;
    if (!(at(0.0, psi).s > 0.0)) throw std::domain_error("sigma_plus_area: Sigma+ does not contain the q1 pole");
    double lo = 0.0, hi = -1.0;
    for (int i = 1; i <= kSteps; ++i) {
      if (at(i * dt, psi).s <= 0.0) {
        lo = (i - 1) * dt;
        hi = i * dt;
        for (int j = i + 1; j <= kSteps; ++j)
          if (at(j * dt, psi).s > 0.0) throw std::domain_error("sigma_plus_area: Sigma+ is not star-shaped");
        break;
      }
    }
    if (hi < 0.0) throw std::domain_error("sigma_plus_area: Sigma+ covers a whole meridian");
    while (hi - lo > 1e-14) {
      const double mid = 0.5 * (lo + hi);
      (at(mid, psi).s > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // omega(d/dtheta x, d/dpsi x) by central differences.
  double density(double theta, double psi) const {
    constexpr double kH = 1e-5;
    const Vec xt = (at(theta + kH, psi).x - at(theta - kH, psi).x) / (2 * kH);
    const Vec xp = (at(theta, psi + kH).x - at(theta, psi - kH).x) / (2 * kH);
    return xt.head(2).dot(xp.tail(2)) - xp.head(2).dot(xt.tail(2));
  }

 private:
  const OddHamiltonian& h_;
  double r_;
};

}  // namespace

double sigma_plus_area(const OddHamiltonian& h, double radius) {
  if (h.n() != 2) throw std::invalid_argument("sigma_plus_area is implemented for N = 2");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!h.graph_condition(radius))
    throw std::domain_error("sigma_plus_area: epsilon too large for the graph condition");
  using Gauss = boost::math::quadrature::gauss<double, 64>;
  constexpr int kAzimuth = 512;
  const Slice slice(h, radius);
  double total = 0.0;
  for (int k = 0; k < kAzimuth; ++k) {
    const double psi = 2.0 * std::numbers::pi * k / kAzimuth;
    const double top = slice.boundary(psi);
    total += Gauss::integrate([&](double t) { return slice.density(t, psi); }, 0.0, top);
  }
  return total * 2.0 * std::numbers::pi / kAzimuth;
}

bool CroftonReport::agrees(double half_widths, double slack) const {
  return std::abs(lhs - rhs) <= half_widths * ci_halfwidth + slack;
}

json CroftonReport::to_json() const {
  return {{"lhs", lhs},
          {"rhs", rhs},
          {"c_N", c_n},
          {"ci_halfwidth", ci_halfwidth},
          {"mean_positive", mean_positive},
          {"mean_net", mean_net},
          {"min_positive", min_positive},
          {"samples", samples},
          {"degenerate", degenerate},
          {"seed", seed}};
}

CroftonReport crofton_check(const OddHamiltonian& h, double radius, std::size_t samples, std::uint64_t seed) {
  CroftonReport r;
  r.c_n = std::numbers::pi;
  r.seed = seed;
  r.lhs = sigma_plus_area(h, radius);
  const Mat z = sample_hopf_circles(h.n(), radius, samples, seed);
  std::vector<IntersectionCount> counts(samples);
  parallel_for(samples, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) counts[i] = signed_intersections(z.row(static_cast<Eigen::Index>(i)).transpose(), h);
  });
  // Aggregation in sample order.
  double sum = 0.0, sum2 = 0.0, net = 0.0;
  std::size_t used = 0;
  r.min_positive = std::numeric_limits<int>::max();
  for (const auto& c : counts) {
    if (c.degenerate) {
      ++r.degenerate;
      continue;
    }
    ++used;
    sum += c.positive;
    sum2 += static_cast<double>(c.positive) * c.positive;
    net += c.net();
    r.min_positive = std::min(r.min_positive, c.positive);
  }
  if (used == 0) throw std::runtime_error("crofton_check: every sampled circle was degenerate");
  const double n = static_cast<double>(used);
  r.samples = used;
  r.mean_positive = sum / n;
  r.mean_net = net / n;
  const double var = std::max(0.0, sum2 / n - r.mean_positive * r.mean_positive) * n / std::max(1.0, n - 1.0);
  const double scale = r.c_n * radius * radius;
  r.rhs = scale * r.mean_positive;
  r.ci_halfwidth = 1.96 * scale * std::sqrt(var / n);
  return r;
}

}  // namespace mahler
