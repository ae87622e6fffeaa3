#include "mahler/body_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mahler {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw BodyParseError("body description: " + msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Rational parse_scalar(const json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const std::invalid_argument& e) {
    fail(std::string("bad rational: ") + e.what());
  }
  fail("expected a rational, got " + j.dump());
}

std::size_t parse_dim(const json& j) {
  const json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) fail("'dim' must be a positive integer");
  return d.get<std::size_t>();
}

double parse_exponent(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    return to_double(parse_scalar(j));
  }
  if (j.is_number()) return j.get<double>();
  fail("'p' must be a number, a rational string or \"inf\"");
}

QVector checked_normal(const json& j, std::size_t dim) {
  QVector u = parse_rational_vector(field(j, "normal"));
  if (u.size() != dim) fail("normal has length " + std::to_string(u.size()) + ", body has dimension " + std::to_string(dim));
  bool zero = true;
  for (const auto& x : u) zero = zero && is_zero(x);
  if (zero) fail("zero normal");
  return u;
}

template <class F>
ConvexBody guarded(F build) {
  try {
    return build();
  } catch (const BodyParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
}

}  // namespace

QVector parse_rational_vector(const json& j) {
  if (!j.is_array() || j.empty()) fail("expected a non-empty array of rationals");
  QVector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(parse_scalar(x));
  return v;
}

QMatrix parse_rational_matrix(const json& j) {
  if (!j.is_array() || j.empty()) fail("expected a non-empty array of rows");
  std::vector<QVector> rows;
  for (const auto& r : j) rows.push_back(parse_rational_vector(r));
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) fail("ragged matrix");
  return QMatrix::from_rows(rows, cols);
}

ConvexBody parse_body(const json& d) {
  const json& t = field(d, "type");
  if (!t.is_string()) fail("'type' must be a string");
  const std::string type = t.get<std::string>();

  if (type == "cube") return make_cube(parse_dim(d));
  if (type == "cross") return make_cross(parse_dim(d));
  if (type == "lp_ball") {
    const double p = parse_exponent(field(d, "p"));
    if (!(p >= 1.0)) fail("l_p ball needs p >= 1");
    return make_lp_ball(p, parse_dim(d));
  }
  if (type == "hpoly") {
    QMatrix a = parse_rational_matrix(field(d, "A"));
    if (d.contains("b")) {
      const QVector b = parse_rational_vector(d.at("b"));
      if (b.size() != a.rows()) fail("'b' length does not match 'A'");
      for (std::size_t r = 0; r < a.rows(); ++r) {
        if (sign(b[r]) <= 0) fail("'b' must be positive (origin in the interior)");
        for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) /= b[r];
      }
    }
    return guarded([&] { return make_polytope(Polytope::from_facets(a), d); });
  }
  if (type == "vpoly") {
    const QMatrix v = parse_rational_matrix(field(d, "vertices"));
    return guarded([&] { return make_polytope(Polytope::from_vertices(v), d); });
  }
  if (type == "hanner") {
    const json& e = field(d, "expr");
    if (!e.is_string()) fail("'expr' must be a string");
    return guarded([&] { return make_hanner(HannerTree::parse(e.get<std::string>())); });
  }
  if (type == "polar") return polar(parse_body(field(d, "body")));
  if (type == "section" || type == "projection") {
    const ConvexBody k = parse_body(field(d, "body"));
    const QVector u = checked_normal(d, k.dim());
    if (k.dim() < 2) fail("cannot cut a one-dimensional body");
    return guarded([&] { return type == "section" ? hyperplane_section(k, u) : hyperplane_projection(k, u); });
  }
  if (type == "linimg") {
    const ConvexBody k = parse_body(field(d, "body"));
    const QMatrix m = parse_rational_matrix(field(d, "matrix"));
    if (m.rows() != k.dim() || m.cols() != k.dim()) fail("matrix must be " + std::to_string(k.dim()) + " x " + std::to_string(k.dim()));
    return guarded([&] { return linear_image(k, m); });
  }
  if (type == "product") return lagrangian_product(parse_body(field(d, "body"))).body();
  if (type == "cartesian") return cartesian_product(parse_body(field(d, "first")), parse_body(field(d, "second")));
  if (type == "l1sum") return l1_sum(parse_body(field(d, "first")), parse_body(field(d, "second")));
  fail("unknown type '" + type + "'");
}

ConvexBody parse_body_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  return parse_body(j);
}

ConvexBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_body_text(ss.str());
}

std::string canonical_json(const json& j) { return j.dump(); }

std::string content_hash(const json& j) {
  const std::string body = canonical_json(j);
  const std::string blob = "blob " + std::to_string(body.size()) + '\0' + body;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("sha1 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

}  // namespace mahler
