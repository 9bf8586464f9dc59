#include <doctest.h>

#include <cmath>
#include <string>

#include "levylab/error.hpp"
#include "levylab/json_io.hpp"

using namespace levylab;

namespace {

std::string error_path(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 8.0, -2.5e-300, 1e22, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("join_path") {
  CHECK(join_path("$.measure", "terms/0/lambda") == "$.measure.terms[0].lambda");
  CHECK(join_path("$.function", "") == "$.function");
  CHECK(join_path("$", "beta") == "$.beta");
}

TEST_CASE("measure round trips") {
  for (const char* text : {R"({"variant":"symmetric_stable","b":1.5,"beta":0.7})",
                           R"({"variant":"log_damped_stable","b":2,"beta":1.1})",
                           R"({"variant":"finite_discrete","atoms":[{"x":1,"lambda":2},{"x":-0.5,"lambda":0.25}]})",
                           R"({"variant":"generic_density","terms":[{"b":1,"beta":0.7,"lambda":0}]})"}) {
    const auto m = measure_from_json(parse_json_text(text, "test"));
    const auto again = measure_from_json(to_json(m));
    CHECK(to_json(again) == to_json(m));
  }
  const auto s = measure_from_json(parse_json_text(R"({"variant":"symmetric_stable","b":1.5,"beta":0.7})", "t"));
  REQUIRE(std::holds_alternative<SymmetricStable>(s));
  CHECK(std::get<SymmetricStable>(s).beta == 0.7);
}

TEST_CASE("process and function round trips") {
  const auto p = process_from_json(parse_json_text(R"({"variant":"stable","beta":1.2,"c":0.5})", "t"));
  CHECK(to_json(process_from_json(to_json(p))) == to_json(p));
  const auto cp = process_from_json(parse_json_text(R"({"variant":"compound_poisson","atoms":[{"x":1,"lambda":1}]})", "t"));
  CHECK(std::holds_alternative<CompoundPoisson>(cp));
  for (const char* text : {R"({"variant":"ciesielski","alpha":0.5,"ell":1,"truncation":30})",
                           R"({"variant":"indicator","K":0.25})",
                           R"({"variant":"nbv_mixture","atoms":[{"u":0,"w":1}],"pieces":[{"lo":-1,"hi":1,"density":0.5}]})",
                           R"({"variant":"power_cap","alpha":0.3})",
                           R"({"variant":"smoothed_indicator","theta":0.6,"t":0.2,"mixture":{"atoms":[{"u":0,"w":1}],"pieces":[]}})",
                           R"({"variant":"constant","value":2})"}) {
    CAPTURE(text);
    const auto f = function_from_json(parse_json_text(text, "t"));
    CHECK(to_json(function_from_json(to_json(f))) == to_json(f));
  }
}

TEST_CASE("validation errors carry the JSON path") {
  CHECK(error_path([] {
          measure_from_json(parse_json_text(R"({"variant":"generic_density","terms":[{"b":1,"beta":0.7,"lambda":-1}]})", "t"),
                            "$.measure");
        }) == "$.measure.terms[0].lambda");
  CHECK(error_path([] { function_from_json(parse_json_text(R"({"variant":"bogus"})", "t"), "$.function"); }) ==
        "$.function.variant");
  CHECK(error_path([] { process_from_json(parse_json_text(R"({"variant":"stable","beta":3,"c":1})", "t"), "$.process"); })
            .starts_with("$.process"));
  CHECK_THROWS_AS(parse_json_text("{not json", "t"), ValidationError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/levylab.json"), ValidationError);
}

TEST_CASE("sequences") {
  const auto a = sequence_from_json(parse_json_text(R"({"c":[1,0.5,0.25]})", "t"));
  CHECK(a.c.size() == 3);
  CHECK(error_path([] { sequence_from_json(parse_json_text(R"({"c":[1,-2]})", "t"), "$.sequence"); }) ==
        "$.sequence.c[1]");
}

TEST_CASE("report serialization") {
  D12Report r;
  r.d12_norm_sq = INFINITY;
  r.finite = false;
  r.verdict = "not in D12 numerically";
  const auto j = to_json(r);
  CHECK(j.dump().find("\"inf\"") != std::string::npos);
  SmoothnessFit f;
  f.slope = 0.5;
  CHECK(to_json(f).dump().find("0.5") != std::string::npos);
}
