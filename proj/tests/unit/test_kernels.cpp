#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "levylab/function_space.hpp"
#include "levylab/kernels.hpp"
#include "levylab/smoothness.hpp"

using namespace levylab;

namespace {

std::vector<double> test_points(std::size_t n) {
  std::vector<double> x(n);
  DrawStream s(11, 0, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = 8.0 * s.uniform() - 4.0;
  if (n > 4) {
    x[0] = 0.0;
    x[1] = -0.0;
    x[2] = 0.5;
    x[3] = std::ldexp(1.0, -30);
  }
  return x;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar table is always present") {
  CHECK(kernels::scalar_table().name == "scalar");
  CHECK(kernels::select("scalar"));
  CHECK(kernels::active().name == "scalar");
  CHECK(kernels::select("auto"));
  CHECK_FALSE(kernels::select("nonsense"));
}

TEST_CASE("AVX2 kernels reproduce the scalar reference bit for bit") {
  const kernels::KernelTable* v = kernels::avx2_table();
  if (!v) {
    MESSAGE("AVX2 variants unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& s = kernels::scalar_table();
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 1000u, 4099u}) {
    CAPTURE(n);
    std::vector<double> a0(n), a1(n), b0(n), b1(n);
    s.uniform_pairs(key_from_seed(42), 3, 1, 12345, n, a0.data(), a1.data());
    v->uniform_pairs(key_from_seed(42), 3, 1, 12345, n, b0.data(), b1.data());
    CHECK(same_bits(a0, b0));
    CHECK(same_bits(a1, b1));

    const auto x = test_points(n);
    std::vector<double> ws;
    for (int k = 0; k <= 40; ++k) ws.push_back(std::pow(2.0, -0.3 * k));
    const kernels::CiesielskiTerms terms{0, 40, ws.data()};
    std::vector<double> oa(n), ob(n);
    s.ciesielski(terms, x.data(), oa.data(), n);
    v->ciesielski(terms, x.data(), ob.data(), n);
    CHECK(same_bits(oa, ob));

    s.indicator(0.25, x.data(), oa.data(), n);
    v->indicator(0.25, x.data(), ob.data(), n);
    CHECK(same_bits(oa, ob));

    const auto y = test_points(n + 1);
    const auto ps = s.sq_diff_sums(x.data(), y.data() + 1, n);
    const auto pv = v->sq_diff_sums(x.data(), y.data() + 1, n);
    CHECK(ps.s1 == pv.s1);
    CHECK(ps.s2 == pv.s2);
    const auto ms = s.moment_sums(x.data(), n);
    const auto mv = v->moment_sums(x.data(), n);
    CHECK(ms.s1 == mv.s1);
    CHECK(ms.s2 == mv.s2);
  }
}

TEST_CASE("end-to-end estimates are identical under either kernel table") {
  if (!kernels::avx2_table()) return;
  const StableParams p{1.0, 1.0};
  REQUIRE(kernels::select("scalar"));
  const auto a = psi(Ciesielski{0.25, 0, -1}, p, 0.5, 100000, 5);
  const auto va = variance_estimate(Indicator{0.0}, p, 100000, 5);
  REQUIRE(kernels::select("avx2"));
  const auto b = psi(Ciesielski{0.25, 0, -1}, p, 0.5, 100000, 5);
  const auto vb = variance_estimate(Indicator{0.0}, p, 100000, 5);
  kernels::select("auto");
  CHECK(a.value == b.value);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(va.value == vb.value);
}

TEST_CASE("ciesielski kernel agrees with direct summation") {
  const std::size_t n = 64;
  const auto x = test_points(n);
  std::vector<double> ws;
  for (int k = 0; k <= 30; ++k) ws.push_back(std::pow(2.0, -0.5 * k));
  std::vector<double> out(n);
  kernels::scalar_table().ciesielski({0, 30, ws.data()}, x.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    double direct = 0.0;
    for (int k = 0; k <= 30; ++k) {
      const double y = std::ldexp(x[i], k);
      direct += ws[k] * std::abs(y - std::nearbyint(y));
    }
    CHECK(out[i] == doctest::Approx(direct).epsilon(1e-14));
  }
}
