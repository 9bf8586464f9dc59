#include <doctest.h>

#include <vector>

#include "levylab/rng.hpp"

using namespace levylab;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("to_open_unit stays strictly inside (0, 1)") {
  CHECK(to_open_unit(0) > 0.0);
  CHECK(to_open_unit(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("batch uniforms match the per-draw stream") {
  const std::size_t n = 257;
  std::vector<double> u0(n), u1(n);
  uniform_pairs(99, 5, 0, 1000, n, u0.data(), u1.data());
  for (std::size_t i = 0; i < n; ++i) {
    DrawStream s(99, 5, 1000 + i);
    CHECK(s.uniform() == u0[i]);
    CHECK(s.uniform() == u1[i]);
  }
}

TEST_CASE("batches do not depend on how the index range is split") {
  const std::size_t n = 300;
  std::vector<double> a0(n), a1(n), b0(n), b1(n);
  uniform_pairs(7, 1, 3, 0, n, a0.data(), a1.data());
  uniform_pairs(7, 1, 3, 0, 37, b0.data(), b1.data());
  uniform_pairs(7, 1, 3, 37, n - 37, b0.data() + 37, b1.data() + 37);
  CHECK(a0 == b0);
  CHECK(a1 == b1);
}

TEST_CASE("substreams and seeds give different sequences") {
  DrawStream a(1, 0, 0), b(1, 1, 0), c(2, 0, 0);
  const double x = a.uniform();
  CHECK(x != b.uniform());
  CHECK(x != c.uniform());
}

TEST_CASE("uniform moments") {
  const std::size_t n = 200000;
  std::vector<double> u0(n), u1(n);
  uniform_pairs(3, 0, 0, 0, n, u0.data(), u1.data());
  double s = 0.0, s2 = 0.0;
  for (double v : u0) {
    s += v;
    s2 += v * v;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.005));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}
