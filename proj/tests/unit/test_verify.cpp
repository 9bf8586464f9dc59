#include <doctest.h>

#include <algorithm>

#include "levylab/error.hpp"
#include "levylab/verify.hpp"

using namespace levylab;

TEST_CASE("acceptance ids") {
  const auto& ids = acceptance_ids();
  REQUIRE(ids.size() == 14);
  CHECK(ids.front() == "AC1");
  CHECK(ids.back() == "AC14");
  for (const auto& u : known_unattainable()) CHECK(std::find(ids.begin(), ids.end(), u) != ids.end());
}

TEST_CASE("single fast checks") {
  const auto r = verify({"AC1", "AC5"}, 1);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].id == "AC1");
  CHECK(r.checks[1].id == "AC5");
  CHECK(r.all_pass());
  for (const auto& c : r.checks) {
    CHECK_FALSE(c.anchor.empty());
    CHECK_FALSE(c.measured.empty());
  }
}

TEST_CASE("canonical order regardless of request order") {
  const auto r = verify({"AC5", "AC1"}, 1);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].id == "AC1");
}

TEST_CASE("empty and unknown suites") {
  const auto r = verify({}, 1);
  CHECK(r.checks.empty());
  CHECK(r.all_pass());
  CHECK_THROWS_AS(verify({"AC99"}, 1), ValidationError);
}

TEST_CASE("report json") {
  const auto j = to_json(verify({"AC1"}, 3));
  CHECK(j["seed"] == 3);
  CHECK(j["all_pass"] == true);
  CHECK(j["checks"].size() == 1);
  CHECK(j["checks"][0]["id"] == "AC1");
  CHECK(to_json(verify({"AC1"}, 3)).dump() == j.dump());
}
