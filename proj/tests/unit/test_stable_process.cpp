#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "levylab/parallel.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/stable_process.hpp"

using namespace levylab;

namespace {
double cauchy_cdf(double x) { return 0.5 + std::atan(x) / std::numbers::pi; }
}  // namespace

TEST_CASE("cauchy sampler: median and central mass") {
  const std::size_t n = 1000000;
  auto b = sample_stable({1.0, 1.0}, 1.0, n, 2024, 0);
  REQUIRE(b.values.size() == n);
  const double inside = static_cast<double>(std::count_if(b.values.begin(), b.values.end(),
                                                          [](double v) { return std::abs(v) <= 1.0; })) / n;
  CHECK(inside == doctest::Approx(0.5).epsilon(0.004));
  std::nth_element(b.values.begin(), b.values.begin() + n / 2, b.values.end());
  CHECK(std::abs(b.values[n / 2]) < 0.01);
}

TEST_CASE("sampling is reproducible") {
  const auto a = sample_stable({0.7, 2.0}, 0.3, 1, 5, 9);
  const auto b = sample_stable({0.7, 2.0}, 0.3, 1, 5, 9);
  CHECK(a.values[0] == b.values[0]);
  CHECK(a.seed == 5);
  CHECK(a.substream == 9);
}

TEST_CASE("sampling does not depend on the thread count") {
  set_thread_count(1);
  const auto a = sample_stable({1.5, 1.0}, 1.0, 300000, 3, 1);
  set_thread_count(4);
  const auto b = sample_stable({1.5, 1.0}, 1.0, 300000, 3, 1);
  set_thread_count(0);
  CHECK(a.values == b.values);
}

TEST_CASE("compound poisson sampler") {
  const std::size_t n = 1000000;
  const Atom one[] = {{1.0, 1.0}};
  const auto a = sample_cpp(one, 1.0, n, 8, 0);
  const double zero = static_cast<double>(std::count(a.values.begin(), a.values.end(), 0.0)) / n;
  CHECK(zero == doctest::Approx(std::exp(-1.0)).epsilon(0.002 / std::exp(-1.0)));

  const auto e = sample_cpp({}, 1.0, 1000, 8, 0);
  CHECK(std::all_of(e.values.begin(), e.values.end(), [](double v) { return v == 0.0; }));

  const Atom two[] = {{2.0, 3.0}};
  const auto m = sample_cpp(two, 0.5, 200000, 8, 1);
  double s = 0.0;
  for (double v : m.values) s += v;
  // Var = 4 * 1.5, so the standard error of the mean is sqrt(6 / n).
  CHECK(std::abs(s / 200000 - 3.0) < 4.0 * std::sqrt(6.0 / 200000));
  REQUIRE(m.big_jump_counts.size() == m.values.size());
  for (std::size_t i = 0; i < 100; ++i) CHECK(m.values[i] == 2.0 * m.big_jump_counts[i]);
}

TEST_CASE("density examples") {
  const StableParams p{1.0, 1.0};
  CHECK(density(p, 1.0, 0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));
  CHECK(std::abs(density(p, 1.0, 1.0) - 1.0 / (2.0 * std::numbers::pi)) < 1e-8);
  for (double x : {0.0, 0.3, 2.0, 17.0}) CHECK(std::abs(density(p, 1.0, x) - 1.0 / (std::numbers::pi * (1 + x * x))) < 1e-8);
  for (double beta : {0.5, 1.3, 1.9})
    for (double x : {0.1, 1.7, 9.0}) CHECK(density({beta, 1.3}, 0.7, x) == doctest::Approx(density({beta, 1.3}, 0.7, -x)));
}

TEST_CASE("density integrates to one") {
  for (double beta : {0.6, 1.0, 1.5}) {
    const StableParams p{beta, 1.0};
    const double R = 20.0;
    const double bp[] = {-R, -1.0, 0.0, 1.0, R};
    const double inner = quad::integrate_pieces([&](double x) { return density(p, 1.0, x); }, bp, 1e-10).value;
    const double tails = 2.0 * (1.0 - cdf(p, 1.0, R));
    CHECK(inner + tails == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("self-similarity against direct inversion") {
  for (double beta : {0.5, 1.0, 1.6})
    for (double t : {0.05, 0.4})
      for (double x : {0.0, 0.2, 1.5}) {
        const StableParams p{beta, 1.0};
        const double via = std::pow(t, -1.0 / beta) * density(p, 1.0, std::pow(t, -1.0 / beta) * x);
        CHECK(density_direct(p, t, x) == doctest::Approx(via).epsilon(1e-8));
      }
}

TEST_CASE("sampler agrees with the binned density (chi-square)") {
  const StableParams p{1.5, 1.0};
  const std::size_t n = 1000000;
  const auto b = sample_stable(p, 1.0, n, 77, 0);
  const int bins = 40;
  const double lo = -5.0, hi = 5.0, w = (hi - lo) / bins;
  std::vector<double> counts(bins + 2, 0.0);
  for (double v : b.values) {
    if (v < lo) counts[0] += 1;
    else if (v >= hi) counts[bins + 1] += 1;
    else counts[1 + std::min(bins - 1, static_cast<int>((v - lo) / w))] += 1;
  }
  double chi2 = 0.0;
  for (int k = 0; k < bins + 2; ++k) {
    const double a = k == 0 ? -INFINITY : lo + (k - 1) * w;
    const double c = k == bins + 1 ? INFINITY : lo + k * w;
    const double prob = (std::isinf(c) ? 1.0 : cdf(p, 1.0, c)) - (std::isinf(a) ? 0.0 : cdf(p, 1.0, a));
    const double e = prob * n;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  const boost::math::chi_squared dist(bins + 1);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.001);
}

TEST_CASE("scaling check examples") {
  const auto a = scaling_check({1.5, 1.0}, 0.3, 100000, 1);
  CHECK(a.critical == doctest::Approx(1.95 * std::sqrt(2.0 / 100000)));
  CHECK(a.pass);
  CHECK(a.statistic < a.critical);
  CHECK(scaling_check({0.7, 2.0}, 0.01, 100000, 2).pass);
  CHECK(scaling_check({1.0, 1.0}, 0.5, 10000, 3).statistic < 1.95 * std::sqrt(2.0 / 10000));
}

TEST_CASE("KS statistics") {
  auto b = sample_stable({1.0, 1.0}, 1.0, 100000, 31, 0);
  CHECK(ks_one_sample(b.values, cauchy_cdf) < 1.36 / std::sqrt(100000.0));
  CHECK(ks_two_sample({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}) == 0.0);
  CHECK(ks_two_sample({0.0, 1.0}, {5.0, 6.0}) == 1.0);
}

TEST_CASE("density assumption check") {
  const double one[] = {1.0};
  const auto e = density_assumption_check({1.0, 1.0}, -1.0, 1.0, one);
  CHECK(e.inf == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-8));
  CHECK(e.sup == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-8));
  const double two[] = {0.5, 1.0};
  CHECK(density_assumption_check({1.0, 1.0}, -1.0, 1.0, two).inf > 0.0);
  const auto d = density_assumption_check({1.5, 1.0}, 0.0, 0.0, one);
  CHECK(d.sup == d.inf);
  CHECK(d.sup == doctest::Approx(density({1.5, 1.0}, 1.0, 0.0)));
}
