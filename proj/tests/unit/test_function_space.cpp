#include <doctest.h>

#include <cmath>
#include <vector>

#include "levylab/error.hpp"
#include "levylab/function_space.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/rng.hpp"

using namespace levylab;

namespace {

double dist_z(double v) { return std::abs(v - std::nearbyint(v)); }

double g_term(int n, double y) { return dist_z(std::ldexp(y, n)); }

// Composite Simpson on [a, b] with `cells` cells; exact for piecewise quadratics aligned with the cells.
template <class F>
double simpson(F&& f, double a, double b, std::size_t cells) {
  const double h = (b - a) / static_cast<double>(cells);
  double s = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double l = a + h * static_cast<double>(i);
    s += (f(l) + 4.0 * f(l + 0.5 * h) + f(l + h)) * h / 6.0;
  }
  return s;
}

}  // namespace

TEST_CASE("eval examples") {
  const Ciesielski g{0.5, 0, 40};
  CHECK(eval(g, 0.0) == 0.0);
  CHECK(eval(g, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval(Indicator{0.0}, 0.0) == 1.0);
  CHECK(eval(Indicator{0.0}, -1e-9) == 0.0);
  CHECK(eval(PowerCap{0.5}, 0.25) == doctest::Approx(0.5));
  CHECK(eval(PowerCap{0.5}, -4.0) == 1.0);
  CHECK(eval(Constant{2.5}, 3.0) == 2.5);
}

TEST_CASE("ciesielski eval matches direct summation") {
  const Ciesielski g{0.3, 2, 30};
  DrawStream s(4, 0, 0);
  for (int i = 0; i < 200; ++i) {
    const double x = 6.0 * s.uniform() - 3.0;
    double direct = 0.0;
    for (int n = 2; n <= 30; ++n) direct += std::pow(2.0, -0.3 * n) * g_term(n, x);
    CHECK(eval(g, x) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("ciesielski truncation tail bound") {
  const Ciesielski shortg{0.4, 0, 10}, longg{0.4, 0, 80};
  const double bound = ciesielski_tail_bound(shortg);
  CHECK(bound == doctest::Approx(std::pow(2.0, -4.0) / (2.0 * (std::pow(2.0, 0.4) - 1.0))));
  DrawStream s(5, 0, 0);
  for (int i = 0; i < 500; ++i) {
    const double x = s.uniform();
    CHECK(std::abs(eval(longg, x) - eval(shortg, x)) <= bound);
  }
  CHECK(Ciesielski{0.5, 1, -1}.last_term() == 1 + 104);
}

TEST_CASE("eval_batch agrees with eval") {
  const std::vector<FunctionSpec> fs = {Ciesielski{0.25, 0, -1}, Indicator{0.3}, PowerCap{0.7},
                                        NBVMixture{{{0.0, 1.0}, {1.0, -0.5}}, {{-1.0, 0.0, 0.25}}},
                                        SmoothedIndicator{0.6, 0.3, NBVMixture{{{0.0, 1.0}}, {}}}};
  std::vector<double> x(101), out(101);
  for (int i = 0; i <= 100; ++i) x[i] = -2.0 + 0.04 * i;
  for (const auto& f : fs) {
    eval_batch(f, x.data(), out.data(), x.size());
    for (int i = 0; i <= 100; ++i) CHECK(out[i] == doctest::Approx(eval(f, x[i])).epsilon(1e-14));
  }
}

TEST_CASE("holder constant bound") {
  const double r = std::sqrt(2.0);
  CHECK(holder_constant_bound(0.5) == doctest::Approx(1.0 / ((r - 1.0) * (1.0 - 1.0 / r))).epsilon(1e-14));
  CHECK(holder_constant_bound(0.5) == doctest::Approx(8.2426).epsilon(1e-4));
  CHECK(holder_constant_bound(0.999) > 1000.0);
  CHECK_THROWS_AS(holder_constant_bound(1.0), ValidationError);
}

TEST_CASE("holder seminorm bound holds on random pairs") {
  for (double alpha : {0.3, 0.5, 0.8}) {
    const Ciesielski g{alpha, 0, -1};
    const double bound = holder_constant_bound(alpha);
    DrawStream s(6, static_cast<std::uint32_t>(alpha * 10), 0);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
      const double x = s.uniform();
      const double h = std::pow(10.0, -8.0 * s.uniform());
      worst = std::max(worst, std::abs(eval(g, x + h) - eval(g, x)) / std::pow(h, alpha));
    }
    CHECK(worst <= bound);
  }
}

TEST_CASE("norms examples") {
  const auto a = norms(NBVMixture{{{0.0, 1.0}}, {}});
  CHECK(a.bv_norm.value() == 1.0);
  CHECK(a.bv_norm.method == NormValue::Method::exact);
  const auto b = norms(NBVMixture{{{0.0, 1.0}, {1.0, -1.0}}, {}});
  CHECK(b.bv_norm.value() == 2.0);
  CHECK(b.sup_norm.value() == 1.0);
  CHECK(norms(NBVMixture{{}, {{0.0, 2.0, -0.75}}}).bv_norm.value() == doctest::Approx(1.5));
  const auto c = norms(Ciesielski{0.5, 0, -1}, 0.5);
  CHECK(c.sup_norm.upper <= 1.0 / (2.0 * (1.0 - 1.0 / std::sqrt(2.0))) + 1e-12);
  CHECK(c.sup_norm.lower <= c.sup_norm.upper);
  CHECK(c.holder_seminorm.lower <= holder_constant_bound(0.5));
}

TEST_CASE("power cap holder seminorm") {
  const auto n = norms(PowerCap{0.5}, 0.5);
  CHECK(n.holder_seminorm.lower <= 1.0 + 1e-3);
  CHECK(n.holder_seminorm.lower >= 0.9);
  const auto rough = norms(PowerCap{0.5}, 0.7);
  // |x|^{1/2} is not 0.7-Holder at the origin; the grid estimate grows with resolution.
  CHECK(rough.holder_seminorm.lower > 1.5);
}

TEST_CASE("holder certificates") {
  const auto c = holder_certificate(Ciesielski{0.5, 0, -1}, 0.5);
  REQUIRE(c.has_value());
  CHECK(c->norm == doctest::Approx(1.0 / (2.0 * (1.0 - 1.0 / std::sqrt(2.0))) + holder_constant_bound(0.5)));
  CHECK_FALSE(holder_certificate(Indicator{0.0}, 0.5).has_value());
  CHECK(as_mixture(Indicator{2.0}).has_value());
  CHECK_FALSE(as_mixture(Ciesielski{0.5, 0, -1}).has_value());
}

TEST_CASE("nbv mixtures are right-continuous") {
  const NBVMixture m{{{0.0, 1.0}, {1.0, -0.5}}, {{-1.0, 0.5, 0.2}}};
  for (double u : {0.0, 1.0, -1.0, 0.5}) CHECK(eval(m, u) == doctest::Approx(eval(m, u + 1e-13)).epsilon(1e-10));
  CHECK(eval(m, -5.0) == 0.0);
  CHECK(eval(m, 5.0) == doctest::Approx(1.0 - 0.5 + 0.3));
}

TEST_CASE("displacement energy examples") {
  CHECK(displacement_energy(Indicator{0.0}, -1.0, 1.0, 0.25) == doctest::Approx(0.25));
  for (const FunctionSpec& f : {FunctionSpec{Indicator{0.0}}, FunctionSpec{Ciesielski{0.5, 0, -1}}, FunctionSpec{PowerCap{0.3}}})
    CHECK(displacement_energy(f, -1.0, 1.0, 0.0) == 0.0);
  CHECK(displacement_energy(Ciesielski{0.5, 0, -1}, 0.0, 1.0, 1.0 / 16) >= 1.0 / 1024);
}

TEST_CASE("ciesielski energy against exact piecewise-quadratic integration") {
  // For truncation N and dyadic x the integrand is quadratic on cells of width 2^-(N+2).
  for (double alpha : {0.25, 0.5, 0.75})
    for (double x : {1.0 / 8, 3.0 / 64, 1.0 / 256}) {
      const Ciesielski g{alpha, 0, 8};
      auto integrand = [&](double y) {
        double d = 0.0;
        for (int n = 0; n <= 8; ++n) d += std::pow(2.0, -alpha * n) * (g_term(n, y + x) - g_term(n, y));
        return d * d;
      };
      const double oracle = simpson(integrand, 0.0, 1.0, std::size_t{1} << 12);
      CHECK(displacement_energy(g, 0.0, 1.0, x) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("ciesielski cross terms are orthogonal over a period") {
  for (int n = 0; n <= 3; ++n)
    for (int m = n + 1; m <= 6; ++m)
      for (double x : {1.0 / 128, 5.0 / 128, 0.3}) {
        const double P = std::ldexp(1.0, -n);
        auto cross = [&](double y) {
          return (g_term(n, y + x) - g_term(n, y)) * (g_term(m, y + x) - g_term(m, y));
        };
        // Dyadic x: exact; x = 0.3: fine enough for 1e-10.
        const double v = simpson(cross, 0.0, P, std::size_t{1} << 16);
        CHECK(std::abs(v) < 1e-10);
      }
}

TEST_CASE("ciesielski lower bound on a dyadic grid") {
  for (double alpha : {0.2, 0.5, 0.9})
    for (int ell : {0, 2})
      for (int k = ell + 3; k <= ell + 12; ++k) {
        const double x = std::ldexp(1.0, -k);
        const double bound = std::ldexp(1.0, -ell) * std::pow(2.0, 8.0 * alpha - 10.0) * std::pow(x, 2.0 * alpha);
        CHECK(displacement_energy(Ciesielski{alpha, ell, -1}, 0.0, 1.0, x) >= bound);
      }
}

TEST_CASE("nbv energy is exact against quadrature") {
  const NBVMixture m{{{0.0, 1.0}, {0.7, -2.0}}, {{-0.5, 0.5, 1.5}}};
  for (double x : {0.05, 0.4, -0.3}) {
    const double bp[] = {-3.0, -1.2, -0.5, -0.2, 0.0, 0.3, 0.5, 0.7, 1.0, 3.0};
    const double oracle = quad::integrate_pieces(
        [&](double y) {
          const double d = eval(m, y + x) - eval(m, y);
          return d * d;
        },
        bp, 1e-12).value;
    CHECK(displacement_energy(m, -3.0, 3.0, x) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("smoothing decomposition") {
  for (double theta : {0.5, 0.75})
    for (double t : {0.1, 0.6}) {
      CHECK(smoothing_kernel(theta, t, std::pow(t, 2.0 * theta)) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(smoothing_kernel(theta, t, 1e-300) < 1e-100);
      CHECK(smoothing_kernel(theta, t, -1.0) == 0.0);
      const auto d = smoothing_decomposition(NBVMixture{{{0.0, 1.0}}, {}}, theta, t);
      CHECK(d.support_length == doctest::Approx(std::pow(t, 2.0 * theta)));
      for (double x : {0.001, 0.05, 0.3}) {
        const double T = std::pow(t, 2.0 * theta);
        const double bp[] = {-x - 1.0, -x, 0.0, std::max(0.0, T - x), T, T + 1.0};
        std::vector<double> pts(std::begin(bp), std::end(bp));
        std::sort(pts.begin(), pts.end());
        const double energy = quad::integrate_pieces(
            [&](double z) {
              const double v = smoothing_kernel(theta, t, z + x) - smoothing_kernel(theta, t, z);
              return v * v;
            },
            pts, 1e-12).value;
        CHECK(energy <= 2.0 * std::pow(t, 2.0 * (theta - 1.0)) * std::pow(x, 1.0 / theta) * (1 + 1e-9));
        CHECK(energy <= d.energy_bound(x) * (1 + 1e-9));
        CHECK(d.difference_support(x) == doctest::Approx(T + x));
      }
    }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(Ciesielski{1.0, 0, -1}), ValidationError);
  CHECK_THROWS_AS(validate(Ciesielski{0.5, -1, -1}), ValidationError);
  CHECK_THROWS_AS(validate(PowerCap{0.0}), ValidationError);
  CHECK_THROWS_AS(validate(SmoothedIndicator{0.4, 0.5, {}}), ValidationError);
  CHECK_THROWS_AS(validate(SmoothedIndicator{0.5, 1.0, {}}), ValidationError);
  CHECK_THROWS_AS(displacement_energy(Indicator{0.0}, 1.0, 0.5, 0.1), ValidationError);
}
