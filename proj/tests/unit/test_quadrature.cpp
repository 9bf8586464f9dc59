#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "levylab/quadrature.hpp"

using namespace levylab;

TEST_CASE("gauss-kronrod on smooth and infinite ranges") {
  CHECK(quad::integrate([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Endpoint singularity: the value may be rough, but the reported error must cover it.
  const auto s = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(s.value - 2.0) <= s.abs_error);
}

TEST_CASE("integrate_pieces sums across breakpoints") {
  const double bp[] = {-1.0, 0.0, 2.0};
  const auto r = quad::integrate_pieces([](double x) { return std::abs(x); }, bp);
  CHECK(r.value == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  const auto& rule = quad::gauss_legendre(10);
  double w = 0.0;
  for (double v : rule.weights) w += v;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quad::gauss_fixed([](double x) { return std::pow(x, 19); }, 0.0, 1.0, 10) ==
        doctest::Approx(1.0 / 20.0).epsilon(1e-13));
}

TEST_CASE("wynn epsilon accelerates an alternating series") {
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 0; k < 20; ++k) {
    s += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1);
    partial.push_back(s);
  }
  CHECK(quad::wynn_epsilon(partial).value == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("oscillatory tail of sin(x)/x") {
  // int_1^inf cos(x - pi/2)/x dx = pi/2 - Si(1)
  const double si1 = 0.94608307036718301494;
  const auto r = quad::oscillatory_tail([](double x) { return 1.0 / x; }, 1.0, -std::numbers::pi / 2, 1.0);
  CHECK(r.value == doctest::Approx(std::numbers::pi / 2 - si1).epsilon(1e-9));
}

TEST_CASE("shell sums: geometric converges, harmonic diverges") {
  const auto g = quad::sum_shells([](std::size_t k) { return std::pow(0.5, static_cast<double>(k)); });
  CHECK(g.finite);
  CHECK(g.value == doctest::Approx(2.0).epsilon(1e-10));
  const auto h = quad::sum_shells([](std::size_t) { return 1.0; });
  CHECK_FALSE(h.finite);
  CHECK(std::isinf(h.value));
}
