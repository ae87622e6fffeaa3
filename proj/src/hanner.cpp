#include "mahler/hanner.hpp"

#include <cctype>
#include <stdexcept>

namespace mahler {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  HannerTree parse_all() {
    HannerTree t = parse_node();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("hanner expression '" + std::string(s_) + "': " + what + " at offset " +
                                std::to_string(pos_));
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  HannerTree parse_node() {
    char c = peek();
    HannerTree t;
    if (c == 'S') {
      ++pos_;
      return t;
    }
    if (c != 'X' && c != 'L') fail("expected S, X or L");
    ++pos_;
    t.kind = c == 'X' ? HannerTree::Kind::Product : HannerTree::Kind::Sum;
    expect('(');
    t.children.push_back(parse_node());
    while (peek() == ',') {
      ++pos_;
      t.children.push_back(parse_node());
    }
    expect(')');
    if (t.children.size() < 2) fail("operator needs at least two operands");
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

QMatrix block_concat(const QMatrix& a, const QMatrix& b) {
  // All pairs (a_i, b_j).
  QMatrix out(a.rows() * b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const std::size_t r = i * b.rows() + j;
      for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(i, c);
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(j, c);
    }
  return out;
}

QMatrix block_union(const QMatrix& a, const QMatrix& b) {
  // (a_i, 0) and (0, b_j).
  QMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t c = 0; c < a.cols(); ++c) out(i, c) = a(i, c);
  for (std::size_t j = 0; j < b.rows(); ++j)
    for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + j, a.cols() + c) = b(j, c);
  return out;
}

struct Description {
  QMatrix vertices;
  QMatrix facets;
};

Description describe(const HannerTree& t) {
  if (t.kind == HannerTree::Kind::Segment) {
    Description d{QMatrix(2, 1), QMatrix(2, 1)};
    d.vertices(0, 0) = 1;
    d.vertices(1, 0) = -1;
    d.facets = d.vertices;
    return d;
  }
  Description acc = describe(t.children.front());
  for (std::size_t i = 1; i < t.children.size(); ++i) {
    Description next = describe(t.children[i]);
    if (t.kind == HannerTree::Kind::Product) {
      acc.vertices = block_concat(acc.vertices, next.vertices);
      acc.facets = block_union(acc.facets, next.facets);
    } else {
      acc.vertices = block_union(acc.vertices, next.vertices);
      acc.facets = block_concat(acc.facets, next.facets);
    }
  }
  return acc;
}

}  // namespace

HannerTree HannerTree::parse(std::string_view expr) { return Parser(expr).parse_all(); }

std::string HannerTree::str() const {
  if (kind == Kind::Segment) return "S";
  std::string s = kind == Kind::Product ? "X(" : "L(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) s += ",";
    s += children[i].str();
  }
  return s + ")";
}

std::size_t HannerTree::leaves() const {
  if (kind == Kind::Segment) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaves();
  return n;
}

Polytope HannerTree::polytope() const {
  Description d = describe(*this);
  return Polytope::from_description(d.vertices, d.facets);
}

HannerCounts hanner_counts(const HannerTree& tree) {
  if (tree.kind == HannerTree::Kind::Segment) return {2, 2};
  HannerCounts acc = hanner_counts(tree.children.front());
  for (std::size_t i = 1; i < tree.children.size(); ++i) {
    HannerCounts c = hanner_counts(tree.children[i]);
    if (tree.kind == HannerTree::Kind::Product) {
      acc.vertices *= c.vertices;
      acc.facets += c.facets;
    } else {
      acc.vertices += c.vertices;
      acc.facets *= c.facets;
    }
  }
  return acc;
}

HannerTree random_hanner_tree(std::size_t leaves, std::mt19937_64& rng) {
  if (leaves == 0) throw std::invalid_argument("hanner tree needs at least one leaf");
  if (leaves == 1) return {};
  std::uniform_int_distribution<std::size_t> split(1, leaves - 1);
  std::bernoulli_distribution product(0.5);
  HannerTree t;
  t.kind = product(rng) ? HannerTree::Kind::Product : HannerTree::Kind::Sum;
  const std::size_t left = split(rng);
  t.children.push_back(random_hanner_tree(left, rng));
  t.children.push_back(random_hanner_tree(leaves - left, rng));
  return t;
}

}  // namespace mahler
