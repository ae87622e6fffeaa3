#include "mahler/body_io.hpp"
#include "mahler/volume.hpp"

#include <doctest.h>

#include <cmath>

using namespace mahler;

TEST_CASE("parse basic bodies") {
  ConvexBody cube = parse_body_text(R"({"type":"cube","dim":3})");
  REQUIRE(cube.polytope());
  CHECK(cube.polytope()->facets().rows() == 6);

  ConvexBody h = parse_body_text(R"j({"type":"hanner","expr":"X(S, L(S,S))"})j");
  CHECK(h.dim() == 3);
  CHECK(h.polytope()->vertices().rows() == 8);
  CHECK(h.polytope()->facets().rows() == 6);

  ConvexBody lp = parse_body_text(R"({"type":"lp_ball","p":"3/2","dim":4})");
  CHECK_FALSE(lp.is_exact());
  Vec x(4);
  x << 0.3, -0.1, 0.5, 0.2;
  double norm = 0;
  for (double v : x) norm += std::pow(std::abs(v), 1.5);
  CHECK(lp.gauge(x) == doctest::Approx(std::pow(norm, 1 / 1.5)));
  CHECK(parse_body_text(R"({"type":"lp_ball","p":"inf","dim":2})").is_exact());
  CHECK(parse_body_text(R"({"type":"lp_ball","p":1,"dim":2})").is_exact());

  // H-form with right-hand sides: the box [-2,2] x [-1,1].
  ConvexBody box = parse_body_text(R"({"type":"hpoly","A":[[1,0],[-1,0],[0,1],[0,-1]],"b":[2,2,1,1]})");
  CHECK(box.polytope()->coordinate_volume() == 8);
  ConvexBody diamond = parse_body_text(R"({"type":"vpoly","vertices":[["1",0],["-1",0],[0,"1/2"],[0,"-1/2"]]})");
  CHECK(diamond.polytope()->coordinate_volume() == 1);
  ConvexBody dec = parse_body_text(R"({"type":"vpoly","vertices":[[0.5,0],[-0.5,0],[0,1],[0,-1]]})");
  CHECK(dec.polytope()->coordinate_volume() == 1);
}

TEST_CASE("derived bodies and round trips") {
  ConvexBody hex = parse_body_text(R"({"type":"section","body":{"type":"cube","dim":3},"normal":["1","1","1"]})");
  CHECK(exact_mahler_product(*hex.polytope()) == 9);
  ConvexBody sq = parse_body_text(R"({"type":"linimg","body":{"type":"cross","dim":2},"matrix":[[1,1],[1,-1]]})");
  CHECK(sq.polytope()->coordinate_volume() == 4);
  ConvexBody prod = parse_body_text(R"({"type":"product","body":{"type":"cross","dim":2}})");
  CHECK(prod.dim() == 4);
  ConvexBody pol = parse_body_text(R"({"type":"polar","body":{"type":"cube","dim":3}})");
  CHECK(*pol.polytope() == Polytope::cross(3));

  // Library descriptions parse back to the same body.
  const ConvexBody bodies[] = {
      hyperplane_projection(make_lp_ball(3, 3), QVector{1, 2, 0}),
      l1_sum(make_cube(2), make_lp_ball(2, 1)),
      cartesian_product(make_cross(2), make_cube(1)),
      polar(linear_image(make_hanner(HannerTree::parse("L(S,X(S,S))")), QMatrix::identity(3))),
      lagrangian_product(make_lp_ball(4, 2)).body(),
  };
  Vec probe(4);
  probe << 0.3, -0.2, 0.7, 0.1;
  for (const ConvexBody& k : bodies) {
    ConvexBody back = parse_body(k.description());
    CHECK(back.dim() == k.dim());
    CHECK(back.description() == k.description());
    const Vec u = probe.head(static_cast<Eigen::Index>(k.dim()));
    CHECK(back.support(u) == doctest::Approx(k.support(u)).epsilon(1e-12));
  }
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(parse_body_text("{"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"dim":3})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"sphere","dim":3})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"cube","dim":0})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"lp_ball","p":0.5,"dim":2})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"hpoly","A":[[1,0],[0,1],[-1,0]]})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"hpoly","A":[[1,0],[-1,0],[0,1],[0,-1]],"b":[1,-1,1,1]})"),
                  BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"vpoly","vertices":[[1,0],[0,1],[-1,-1]]})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"vpoly","vertices":[[1,"x"],[-1,0]]})"), BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"section","body":{"type":"cube","dim":3},"normal":[0,0,0]})"),
                  BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"section","body":{"type":"cube","dim":3},"normal":[1,1]})"),
                  BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"linimg","body":{"type":"cube","dim":2},"matrix":[[1,2],[2,4]]})"),
                  BodyParseError);
  CHECK_THROWS_AS(parse_body_text(R"({"type":"hanner","expr":"X(S,"})"), BodyParseError);
}

TEST_CASE("content hash") {
  // Reference values from `git hash-object --stdin`.
  CHECK(content_hash(json::parse(R"({"type":"cube","dim":3})")) == "e37463c827a1da8d091fc4b0fc8fc3256ba88ac0");
  CHECK(content_hash(json::parse(R"({"dim":3,  "type":"cube"})")) == content_hash(make_cube(3).description()));
  CHECK(content_hash(make_cube(3).description()) != content_hash(make_cross(3).description()));
}
