#pragma once

// Fractional smoothness of f(X_1) through
//   Psi(t) = 1/2 E[(f(X_1) - f(X_t + Xbar_{1-t}))^2],
// decay-exponent fits, grid membership statistics and small-time probes.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "levylab/function_space.hpp"
#include "levylab/malliavin.hpp"
#include "levylab/stable_process.hpp"

namespace levylab {

struct PsiEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Psi(t) from n joint draws. Substreams base, base+1, base+2 carry X_t, X_1 - X_t and Xbar_{1-t}.
PsiEstimate psi(const FunctionSpec& f, const Process& p, double t, std::size_t n, std::uint64_t seed,
                std::uint32_t substream_base = 1);

/// Var f(X_1) with the standard error of the sample variance.
PsiEstimate variance_estimate(const FunctionSpec& f, const Process& p, std::size_t n, std::uint64_t seed,
                              std::uint32_t substream = 1000);

struct PsiCurve {
  std::vector<double> t_grid;
  std::vector<double> psi;
  std::vector<double> stderr_;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// t = 1 - 2^{-k}, k = first..last.
std::vector<double> dyadic_grid(int first = 1, int last = 10);

PsiCurve psi_curve(const FunctionSpec& f, const Process& p, const std::vector<double>& t_grid, std::size_t n,
                   std::uint64_t seed);

struct SmoothnessFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double theta_max = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  std::size_t used_points = 0;
};

/// Weighted least squares of log Psi on log(1 - t) over points with stderr/psi <= 0.1.
SmoothnessFit fit_exponent(const PsiCurve& curve);

struct MembershipStat {
  double theta = 0.0;
  double sup_stat = 0.0;
  std::string verdict;  // bounded-on-grid | growing
  std::string rule;
};

MembershipStat membership_statistic(const PsiCurve& curve, double theta);

struct ExceedanceProbe {
  std::vector<double> t;
  std::vector<double> probability;
  std::vector<double> partial_sums;
  double total = 0.0;
};

/// int_0^{t0} P(|X_t| > c t^{1/beta'}) dt/t by the trapezoid rule in log t over t0 2^{-k}, k = 0..levels.
ExceedanceProbe small_time_exceedance(const Process& p, double beta_prime, double c, double t0, int levels = 40,
                                      std::size_t n_mc = 100000, std::uint64_t seed = 1);

struct BVInterpolation {
  std::vector<double> t_grid;
  std::vector<double> l2_part;   // ||(f - f_t)(X_1)||_{L2}
  std::vector<double> d12_part;  // ||f_t(X_1)||_{D12}, upper bracket
  std::vector<double> values;    // t^{-theta}(l2_part + t d12_part)
  double sup = 0.0;
  double constant = 0.0;  // (sqrt(p_inf) + sqrt(1 + 2 max(p_inf, 1) m_{1/theta})) ||f||_BV
};

BVInterpolation bv_interp_upper(const NBVMixture& mixture, double theta, const StableParams& p,
                                const std::vector<double>& t_grid, const D12Options& opts = {});

}  // namespace levylab
