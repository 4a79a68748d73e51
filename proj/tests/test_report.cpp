#include <doctest.h>

#include "bloch/errors.hpp"
#include "bloch/json_io.hpp"
#include "bloch/report.hpp"

using namespace bloch;
using io::Json;

namespace {

const Check* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void check_schema(const Json& j) {
  REQUIRE(j.contains("version"));
  REQUIRE(j.contains("seed"));
  REQUIRE(j.contains("scenario"));
  REQUIRE(j.contains("summary"));
  REQUIRE(j["checks"].is_array());
  for (const auto& c : j["checks"]) {
    CHECK(c["name"].is_string());
    const std::string st = c["status"];
    CHECK((st == "pass" || st == "fail" || st == "info" || st == "error"));
    const std::string prov = c["provenance"];
    CHECK((prov == "certified" || prov == "heuristic"));
    CHECK(c.contains("margin"));
    CHECK(c.contains("tolerance"));
    CHECK(c["tolerance_name"].is_string());
    CHECK(c["witnesses"].is_object());
  }
}

}  // namespace

TEST_SUITE("json_io") {
  TEST_CASE("points on the boundary are parse errors naming the entry") {
    const Json s = Json::parse(R"([{"lambda": 1, "z": [0.2, 0.1]}, {"lambda": [1, 0], "z": [1.0, 0.0]}])");
    try {
      io::sample_from_json(s, "sample");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("sample[1]") != std::string::npos);
    }
  }

  TEST_CASE("function round trip") {
    const Json f = Json::parse(R"({"kind": "sum", "children": [
        {"kind": "tensor", "x": [[1, 0], [0, 2]], "child": {"kind": "monomial", "k": 2}},
        {"kind": "tensor", "x": [1, 1], "child": {"kind": "precompose_mobius", "rotation": [0, 1],
                                                   "center": [0.2, 0.3], "child": {"kind": "extremal", "a": [0.5, 0]}}}]})");
    const HoloExpr e = io::holo_from_json(f);
    const HoloExpr back = io::holo_from_json(io::to_json(e));
    CHECK(approx_equal(e, back, 1e-15));
    CHECK(e.dimension() == 2);
  }

  TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(io::holo_from_json(Json::parse(R"({"kind": "nope"})")), ParseError);
    CHECK_THROWS_AS(io::holo_from_json(Json::parse(R"({"kind": "monomial"})")), ParseError);
    CHECK_THROWS_AS(io::read_inline_or_file("{not json"), ParseError);
    CHECK_THROWS_AS(io::read_inline_or_file("/no/such/file.json"), ParseError);
    CHECK_THROWS_AS(io::molecule_from_json(Json::parse(R"([{"lambda": 1, "z": [0, 0], "x": [1, 0]},
                                                           {"lambda": 1, "z": [0, 0], "x": [1]}])"),
                                           NormKind::euclidean),
                    Error);
  }

  TEST_CASE("infinite values serialize as strings") {
    CHECK(io::real_to_json(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::real_to_json(0.5) == 0.5);
  }
}

TEST_SUITE("report") {
  TEST_CASE("tolerance overrides") {
    Tolerances t;
    CHECK(t.get("duality") == 1e-7);
    t.set_from_string("duality=1e-5");
    CHECK(t.get("duality") == 1e-5);
    CHECK_THROWS_AS(t.set_from_string("nonsense=1"), InvalidArgument);
    CHECK_THROWS_AS(t.set_from_string("duality"), InvalidArgument);
    CHECK_THROWS_AS(t.set("duality", -1.0), InvalidArgument);
  }

  TEST_CASE("exit codes") {
    Report r;
    CHECK(r.exit_code() == 0);
    r.checks.push_back({"h", CheckStatus::fail, false});
    CHECK(r.exit_code() == 0);
    r.checks.push_back({"c", CheckStatus::fail, true});
    CHECK(r.exit_code() == 1);
    r.checks.push_back({"i", CheckStatus::error, true, 0.0, 0.0, "", Json::object(), "ParseError", "bad"});
    CHECK(r.exit_code() == 2);
  }

  TEST_CASE("bundled scenario passes and is deterministic") {
    const Report a = run_scenario(prop1_inclusions_scenario());
    CHECK(a.exit_code() == 0);
    CHECK_FALSE(a.checks.empty());
    for (const auto& c : a.checks) {
      if (c.certified) CHECK_MESSAGE(c.status == CheckStatus::pass, c.name);
    }
    REQUIRE(find(a, "prop1-inclusions/monotonicity") != nullptr);
    const Report b = run_scenario(prop1_inclusions_scenario());
    CHECK(a.to_json(false).dump() == b.to_json(false).dump());
    check_schema(a.to_json());
  }

  TEST_CASE("scenario with a boundary point reports a parse error") {
    Json s = prop1_inclusions_scenario();
    s["name"] = "boundary";
    s["sample"] = Json::parse(R"([{"lambda": 1, "z": [0.1, 0]}, {"lambda": 1, "z": [1.0, 0.0]}])");
    s["checks"] = {"summing"};
    const Report r = run_scenario(s);
    CHECK(r.exit_code() == 2);
    bool named = false;
    for (const auto& c : r.checks) {
      if (c.status == CheckStatus::error) {
        CHECK(c.error_kind == "ParseError");
        named = named || c.message.find("sample[1]") != std::string::npos;
      }
    }
    CHECK(named);
  }

  TEST_CASE("verify_all flags an injected certificate") {
    const Report ok = verify_all(VerifyOptions{0, 2, false});
    CHECK(ok.exit_code() == 0);
    check_schema(ok.to_json());
    const Report bad = verify_all(VerifyOptions{0, 2, true});
    CHECK(bad.exit_code() == 1);
    const Check* c = find(bad, "family.certificates");
    REQUIRE(c != nullptr);
    CHECK(c->status == CheckStatus::fail);
    CHECK(ok.to_json(false).dump() == verify_all(VerifyOptions{0, 1, false}).to_json(false).dump());
  }
}
