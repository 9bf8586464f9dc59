#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "levylab/error.hpp"
#include "levylab/interpolation.hpp"
#include "levylab/rng.hpp"

using namespace levylab;

namespace {

SequenceElement random_sequence(std::uint64_t seed, std::size_t len) {
  DrawStream s(seed, 3, 0);
  SequenceElement a;
  for (std::size_t n = 0; n < len; ++n) a.c.push_back(s.uniform() * std::pow(0.7, static_cast<double>(n)));
  return a;
}

}  // namespace

TEST_CASE("sequence norms and generating function") {
  const SequenceElement a{{1.0, 2.0, 3.0}};
  CHECK(seq_T(a, 0.5) == doctest::Approx(2.75));
  CHECK(seq_T(a, 1.0) == doctest::Approx(6.0));
  CHECK(seq_norm_l2(a) == doctest::Approx(std::sqrt(6.0)));
  CHECK(seq_norm_d12(a) == doctest::Approx(std::sqrt(14.0)));
  CHECK(seq_split_cost(a, 0.5, {1.0, 0.5, 0.0}) ==
        doctest::Approx(std::sqrt(1.0 + 0.5) + 0.5 * std::sqrt(0.25 * 2 * 2 + 3 * 3)));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(SequenceElement{{}}), ValidationError);
  CHECK_THROWS_AS(validate(SequenceElement{{1.0, -1.0}}), ValidationError);
  CHECK_THROWS_AS(seq_T(SequenceElement{{1.0}}, 1.5), ValidationError);
  CHECK_THROWS_AS(log_grid(1.0, 0.5, 3), ValidationError);
}

TEST_CASE("single coordinate K-functional is exact") {
  for (std::size_t n : {0u, 3u, 15u})
    for (double t : {0.01, 0.2, 0.5, 1.0, 4.0}) {
      SequenceElement a{std::vector<double>(n + 1, 0.0)};
      a.c[n] = 2.0;
      // Linear in s, so the infimum sits at s = 0 or s = 1.
      const double exact = std::sqrt(2.0) * std::min(1.0, t * std::sqrt(n + 1.0));
      const auto k = seq_k_functional(a, t);
      CHECK(k.upper == doctest::Approx(exact).epsilon(1e-12));
      CHECK(k.lower <= k.upper);
    }
}

TEST_CASE("closed-form K agrees with brute force") {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto a = random_sequence(seed, 4);
    for (double t : {0.05, 0.3, 0.6, 1.0, 2.0}) {
      const auto k = seq_k_functional(a, t);
      const auto b = seq_k_bruteforce(a, t);
      CHECK(k.upper <= b.upper * (1 + 1e-12));
      CHECK(k.lower <= b.upper);
      worst = std::max(worst, (k.upper - b.upper) / b.upper);
    }
  }
  CHECK(std::abs(worst) < 1e-9);
}

TEST_CASE("K is nondecreasing and concave in t") {
  const auto a = random_sequence(9, 12);
  const auto g = log_grid(1e-3, 10.0, 8);
  std::vector<double> k;
  for (double t : g) k.push_back(seq_k_functional(a, t).upper);
  for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] >= k[i - 1] * (1 - 1e-12));
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    // K(t)/t is nonincreasing for a concave K with K(0) = 0.
    CHECK(k[i + 1] / g[i + 1] <= k[i] / g[i] * (1 + 1e-12));
  }
  CHECK(k.back() <= seq_norm_l2(a) * (1 + 1e-12));
}

TEST_CASE("log grid") {
  const auto g = log_grid(0.01, 1.0, 2);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == doctest::Approx(0.01));
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(g[2] == doctest::Approx(0.1));
}

TEST_CASE("interpolation norm of a single coordinate") {
  SequenceElement a{std::vector<double>(8, 0.0)};
  a.c[7] = 1.0;
  // sup_t t^{-theta} min(1, t sqrt 8) is attained at t = 8^{-1/2}.
  const double theta = 0.5;
  std::vector<double> grid = log_grid(1e-3, 10.0, 10);
  grid.push_back(1.0 / std::sqrt(8.0));
  std::sort(grid.begin(), grid.end());
  const auto b = seq_interp_norm(a, theta, INFINITY, grid);
  const double exact = std::pow(8.0, theta / 2.0);
  CHECK(b.estimate == doctest::Approx(exact).epsilon(1e-10));
  CHECK(b.lower <= exact * (1 + 1e-12));
  CHECK(b.upper >= exact * (1 - 1e-12));
}

TEST_CASE("geiss-hujo ratio stays in a bounded band") {
  const auto g = log_grid(1e-4, 1e2, 8);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto r = geiss_hujo_check(random_sequence(seed, 20), 0.5, 2.0, g);
    CHECK(r.ratio > 0.1);
    CHECK(r.ratio < 10.0);
    CHECK(r.ratio_lower <= r.ratio_upper);
  }
}

TEST_CASE("reiteration brackets") {
  const auto g = log_grid(1e-4, 1e2, 8);
  const auto r = reiteration_check(random_sequence(2, 8), 0.6, 0.5, g);
  CHECK(r.direct.lower <= r.direct.upper);
  CHECK(r.reiterated.lower <= r.reiterated.upper);
  CHECK(r.intersects);
}

TEST_CASE("holder couple K-functional") {
  const auto k = k_functional_holder(Indicator{0.0}, 0.1);
  CHECK(k.lower == doctest::Approx(0.5));
  CHECK(k.lower <= k.upper);
  for (double alpha : {0.3, 0.7}) {
    const FunctionSpec f = Ciesielski{alpha, 0, -1};
    for (int e = 0; e <= 10; e += 2) {
      const double t = std::ldexp(1.0, -e);
      const auto kc = k_functional_holder(f, t);
      CHECK(kc.lower <= kc.upper);
      CHECK(std::pow(t, -alpha) * kc.upper <= 2.0 * holder_certificate(f, alpha)->norm);
    }
  }
  // A Lipschitz function with constant 1: K(t) <= t.
  const auto lip = k_functional_holder(NBVMixture{{}, {{0.0, 1.0, 1.0}}}, 0.05);
  CHECK(lip.upper <= 0.05 * (1 + 1e-9));
}
