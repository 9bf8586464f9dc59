#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/malliavin.hpp"
#include "levylab/quadrature.hpp"

using namespace levylab;

TEST_CASE("displacement expectation for the cauchy indicator") {
  const Process p = StableParams{1.0, 1.0};
  // P(-1 <= X_1 < 0) for a standard Cauchy variable.
  CHECK(displacement_expectation(Indicator{0.0}, p, 1.0).value == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(displacement_expectation(Indicator{0.0}, p, -1.0).value == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(displacement_expectation(Indicator{0.0}, p, 0.0).value == 0.0);
  for (double x : {0.1, 2.0, 7.5})
    CHECK(displacement_expectation(Indicator{0.0}, p, x).value ==
          doctest::Approx(std::atan(x) / std::numbers::pi).epsilon(1e-8));
  CHECK(l2_norm_sq(Indicator{0.0}, p).value == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("monte carlo G agrees with the density mode") {
  const Process p = StableParams{1.5, 1.0};
  D12Options mc;
  mc.mode = D12Options::Mode::monte_carlo;
  mc.samples = 200000;
  mc.seed = 3;
  for (double x : {0.05, 0.6}) {
    const auto a = displacement_expectation(Ciesielski{0.5, 0, -1}, p, x);
    const auto b = displacement_expectation(Ciesielski{0.5, 0, -1}, p, x, mc);
    CHECK(std::abs(a.value - b.value) <= 4.0 * b.stderr_ + 1e-6);
  }
}

TEST_CASE("compound poisson indicator has d12 exactly one") {
  const CompoundPoisson cp{{{1.0, 1.0}}};
  D12Options opts;
  opts.mode = D12Options::Mode::monte_carlo;
  opts.samples = 100000;
  const auto r = d12_norm_sq(Indicator{1.0}, cp, opts);
  CHECK(r.finite);
  CHECK(r.d12_norm_sq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.stderr_ < 1e-12);
}

TEST_CASE("constant functions have zero displacement") {
  const auto r = d12_norm_sq(Constant{2.0}, StableParams{0.5, 1.0});
  CHECK(r.finite);
  CHECK(r.displacement_lower == 0.0);
  CHECK(r.d12_lower == doctest::Approx(4.0).epsilon(1e-10));
  // The envelope part of the upper bracket is a bound, not an estimate.
  CHECK(r.d12_norm_sq - r.d12_lower <= r.error + 1e-12);
  CHECK(r.verdict == "finite");
}

TEST_CASE("bracket ordering") {
  for (const FunctionSpec& f : {FunctionSpec{Indicator{0.0}}, FunctionSpec{Ciesielski{0.5, 0, -1}}, FunctionSpec{PowerCap{0.3}}}) {
    const auto r = d12_norm_sq(f, StableParams{0.5, nu_to_char_scale(1.0, 0.5)});
    CHECK(r.finite);
    CHECK(r.displacement_lower <= r.displacement_integral);
    CHECK(r.d12_lower <= r.d12_norm_sq);
    CHECK(r.d12_lower == doctest::Approx(r.l2_norm_sq + r.displacement_lower));
  }
}

TEST_CASE("cauchy indicator is reported outside d12") {
  // G(x) ~ |x| / pi near zero against nu(dx) ~ dx / (pi x^2) diverges logarithmically.
  const auto r = d12_norm_sq(Indicator{0.0}, StableParams{1.0, 1.0});
  CHECK_FALSE(r.finite);
  CHECK(r.verdict == "not in D12 numerically");
}

TEST_CASE("bound formulas") {
  const SymmetricStable m{1.0, 0.5};
  const double m1 = moment(m, 1.0).value;
  CHECK(bv_upper_bound(2.0, m, 0.3) == doctest::Approx((1.0 + m1) * 4.0));
  CHECK(bv_upper_bound(2.0, m, 3.0) == doctest::Approx((1.0 + 3.0 * m1) * 4.0));
  HolderCertificate cert;
  cert.alpha = 0.5;
  cert.norm = 1.5;
  CHECK(holder_upper_bound(cert, m) == doctest::Approx((1.0 + 4.0 * m1) * 2.25));
  cert.alpha = 0.2;
  CHECK(std::isinf(holder_upper_bound(cert, m)));
  // int_{0<|x|<=r} |x| |x|^{-3/2} dx = 4 sqrt r over both signs.
  CHECK(indicator_lower_bound(0.0, 1.0, 0.5, m) == doctest::Approx(0.5 * 4.0).epsilon(1e-8));
  CHECK(indicator_lower_bound(0.0, 0.25, 1.0, m) == doctest::Approx(2.0).epsilon(1e-8));
  const double a = 0.3;
  CHECK(power_cap_displacement_bound(a, 0.4, 0.1) ==
        doctest::Approx(0.4 * std::pow(0.1, 2 * a + 1) * (4 + 2 * a * a / (1 - 2 * a))));
}

TEST_CASE("power cap displacement stays below its bound") {
  const StableParams p{0.5, nu_to_char_scale(1.0, 0.5)};
  const double one[] = {1.0};
  const double sup = density_assumption_check(p, -2.0, 2.0, one).sup;
  for (double alpha : {0.2, 0.4})
    for (double x : {1e-3, 1e-2, 0.1}) {
      const double g = displacement_expectation(PowerCap{alpha}, p, x).value;
      CHECK(g <= power_cap_displacement_bound(alpha, sup, x) * (1 + 1e-6));
    }
}

TEST_CASE("compound poisson membership statistics") {
  const Atom one[] = {{1.0, 1.0}};
  const auto c = cpp_membership_check(Indicator{1.0}, one, 400000, 11);
  // E[(N + 1) 1{N >= 1}] = E[N + 1] - P(N = 0)
  CHECK(std::abs(c.lhs - (2.0 - std::exp(-1.0))) <= 4.0 * c.lhs_stderr);
  CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.verdict == "member");
}

TEST_CASE("big jump term") {
  const Atom big[] = {{2.0, 1.0}};
  const auto b = big_jump_term(Constant{1.0}, big, 200000, 5);
  CHECK(std::abs(b.mean - 1.0) <= 4.0 * b.stderr_);
  const Atom small[] = {{0.5, 3.0}};
  CHECK(big_jump_term(Constant{1.0}, small, 1000, 5).mean == 0.0);
  CHECK_THROWS_AS(big_jump_term(Constant{1.0}, big, 1, 5), ValidationError);
}
