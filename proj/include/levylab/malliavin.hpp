#pragma once

// D_{1,2} norm of f(X_1) through the difference-quotient formula
//   ||f(X_1)||^2_{L2} + int E[(f(X_1 + x) - f(X_1))^2] nu(dx),
// the upper/lower bounds that accompany it, and the compound Poisson criteria.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levylab/function_space.hpp"
#include "levylab/levy_model.hpp"
#include "levylab/stable_process.hpp"

namespace levylab {

struct D12Options {
  enum class Mode { density, monte_carlo };
  Mode mode = Mode::density;
  std::size_t samples = 1'000'000;  // per G(x) in Monte Carlo mode
  std::uint64_t seed = 1;
  int raw_shells = 24;              // |x| in (2^{-k-1}, 2^{-k}] evaluated directly for k < raw_shells
  int max_raw_shells = 96;          // used when no envelope bounds the remainder
  int big_shells = 40;              // |x| in (2^k, 2^{k+1}]
  std::size_t nodes_per_shell = 64;
};

struct GValue {
  double value = 0.0;
  double stderr_ = 0.0;
  bool mc_fallback = false;
};

/// G(x) = E[(f(X_1 + x) - f(X_1))^2].
GValue displacement_expectation(const FunctionSpec& f, const Process& p, double x, const D12Options& opts = {});

/// E[f(X_1)^2].
GValue l2_norm_sq(const FunctionSpec& f, const Process& p, const D12Options& opts = {});

struct D12Report {
  double l2_norm_sq = 0.0;
  double displacement_integral = 0.0;  // upper bracket (raw part + envelope)
  double displacement_lower = 0.0;     // raw part only
  double d12_norm_sq = 0.0;            // l2 + upper bracket
  double d12_lower = 0.0;
  bool finite = true;
  std::string method;                  // density-quadrature | monte-carlo
  std::string verdict;                 // "finite" | "not in D12 numerically"
  double error = 0.0;                  // bracket width plus MC/quadrature error
  double stderr_ = 0.0;                // MC standard error of d12 (per-sample estimator)
  std::size_t raw_shells = 0;
  std::vector<std::pair<double, double>> g_curve;  // (x, G(x)) at the evaluated nodes
};

D12Report d12_norm_sq(const FunctionSpec& f, const Process& p, const D12Options& opts = {});

/// (1 + 4 m_{2 alpha}) ||f||^2_{C^alpha_b}; +inf when the moment diverges.
double holder_upper_bound(const HolderCertificate& cert, const LevyMeasure& m);

/// (1 + max(1, sup p_1) m_1) ||f||^2_BV.
double bv_upper_bound(double bv_norm, const LevyMeasure& m, double sup_density);

/// c int_{0<|x|<=r} |x| nu(dx).
double indicator_lower_bound(double K, double r, double c_density, const LevyMeasure& m);

/// ||p_1||_inf |x|^{2 alpha + 1} (4 + 2 alpha^2 / (1 - 2 alpha)), alpha < 1/2.
double power_cap_displacement_bound(double alpha, double sup_density, double x);

struct CppMembership {
  double lhs = 0.0;  // E[f^2(X_1)(N + 1)]
  double lhs_stderr = 0.0;
  double rhs = 0.0;  // d12 norm squared
  double rhs_stderr = 0.0;
  std::string verdict;  // member | not-member
};

CppMembership cpp_membership_check(const FunctionSpec& f, std::span<const Atom> atoms, std::size_t n,
                                   std::uint64_t seed);

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

/// E[f^2(X_1) N([0,1] x {|x| > 1})] for a compound Poisson process.
MCEstimate big_jump_term(const FunctionSpec& f, std::span<const Atom> atoms, std::size_t n, std::uint64_t seed);

}  // namespace levylab
