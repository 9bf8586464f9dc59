#pragma once

// Symmetric strictly stable processes (characteristic function
// e^{-tc|u|^beta}) and compound Poisson processes with finitely many atoms.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "levylab/levy_model.hpp"

namespace levylab {

struct StableParams {
  double beta = 1.0;
  double c = 1.0;
};

struct CompoundPoisson {
  std::vector<Atom> atoms;
};

using Process = std::variant<StableParams, CompoundPoisson>;

void validate(const StableParams& p);
void validate(const CompoundPoisson& p);
void validate(const Process& p);

/// The Levy measure belonging to a process (stable: b from c).
LevyMeasure levy_measure_of(const Process& p);

struct SampleBatch {
  std::vector<double> values;
  double t = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t substream = 0;
  std::vector<std::uint32_t> jump_counts;      // compound Poisson only
  std::vector<std::uint32_t> big_jump_counts;  // jumps with |x| > 1
};

/// Chambers-Mallows-Stuck: standard symmetric beta-stable variate
/// (characteristic function e^{-|u|^beta}) from two open uniforms.
double standard_stable(double beta, double u0, double u1) noexcept;

SampleBatch sample_stable(const StableParams& p, double t, std::size_t n, std::uint64_t seed,
                          std::uint32_t substream);

/// Draws [first, first + n) of the stream (seed, substream) of X_t.
void sample_stable_range(const StableParams& p, double t, std::uint64_t seed, std::uint32_t substream,
                         std::uint64_t first, std::size_t n, double* out);

SampleBatch sample_cpp(std::span<const Atom> atoms, double t, std::size_t n, std::uint64_t seed,
                       std::uint32_t substream);

/// One compound Poisson draw with its jump counts.
struct CppDraw {
  double value = 0.0;
  std::uint32_t jumps = 0;
  std::uint32_t big_jumps = 0;
};
CppDraw sample_cpp_draw(std::span<const Atom> atoms, double t, std::uint64_t seed, std::uint32_t substream,
                        std::uint64_t index);

/// Draws [first, first + n) of X_t for either process kind.
void sample_range(const Process& p, double t, std::uint64_t seed, std::uint32_t substream, std::uint64_t first,
                  std::size_t n, double* out);

/// Density of the standard law (t c = 1) by Fourier inversion or the
/// large-|s| series.
double standard_density(double beta, double s);

/// P(Z > s) for the standard law.
double standard_upper_tail(double beta, double s);

/// p_t(x), reduced to the standard law by self-similarity.
double density(const StableParams& p, double t, double x);

/// p_t(x) by direct inversion of e^{-tc u^beta} (no scaling reduction).
double density_direct(const StableParams& p, double t, double x);

/// Spline-tabulated density for inner loops (accurate to ~1e-9 relative).
double density_fast(const StableParams& p, double t, double x);

/// P(X_t <= x).
double cdf(const StableParams& p, double t, double x);

/// sup_x p_t(x) = p_t(0).
double density_sup(const StableParams& p, double t);

struct KSResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
  std::size_t n = 0;
};

/// Two-sample KS distance between n draws of X_t and n draws of t^{1/beta} X_1.
KSResult scaling_check(const StableParams& p, double t, std::size_t n, std::uint64_t seed);

double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf);

struct DensityExtremes {
  double sup = 0.0;
  double inf = 0.0;
};

DensityExtremes density_assumption_check(const StableParams& p, double a, double b, std::span<const double> t_grid,
                                         std::size_t points = 101);

}  // namespace levylab
