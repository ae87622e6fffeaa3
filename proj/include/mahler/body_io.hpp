// JSON body descriptions.
//
//   {"type": "cube", "dim": 3}
//   {"type": "cross", "dim": 3}
//   {"type": "lp_ball", "p": 1.5 | "3/2" | "inf", "dim": 4}
//   {"type": "hpoly", "A": [[...], ...], "b": [...]}        rows a.x <= b, b > 0 (default 1)
//   {"type": "vpoly", "vertices": [[...], ...]}
//   {"type": "hanner", "expr": "X(S, L(S,S))"}
//   {"type": "polar", "body": {...}}
//   {"type": "section" | "projection", "body": {...}, "normal": [...]}
//   {"type": "linimg", "body": {...}, "matrix": [[...], ...]}
//   {"type": "product", "body": {...}}                       K x K-polar
//   {"type": "cartesian" | "l1sum", "first": {...}, "second": {...}}
//
// Rationals are strings such as "3/4" or "0.125"; integers may be plain
// numbers. Every body built by the library carries a description in this
// format, so descriptions round-trip.

#pragma once

#include "mahler/body.hpp"

#include <stdexcept>
#include <string>

namespace mahler {

class BodyParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ConvexBody parse_body(const json& description);
ConvexBody parse_body_text(const std::string& text);
ConvexBody load_body(const std::string& path);

QVector parse_rational_vector(const json& j);
QMatrix parse_rational_matrix(const json& j);

/// Canonical serialisation (sorted keys, no whitespace).
std::string canonical_json(const json& j);
/// Git blob hash of the canonical serialisation: sha1("blob <len>\0" + text).
std::string content_hash(const json& j);

}  // namespace mahler
