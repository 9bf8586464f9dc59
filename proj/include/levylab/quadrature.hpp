#pragma once

// Numerical integration helpers shared by the measure, density and
// Malliavin modules.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace levylab::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (31 points) on [a, b]; either bound may be infinite.
Result integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12,
                 unsigned max_depth = 18);

/// Integrates over consecutive pieces of a sorted breakpoint list.
Result integrate_pieces(const Integrand& f, std::span<const double> breakpoints,
                        double rel_tol = 1e-12, unsigned max_depth = 18);

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (cached per n).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(std::size_t n);

/// Fixed-order Gauss-Legendre on [a, b].
double gauss_fixed(const Integrand& f, double a, double b, std::size_t n);

/// Wynn epsilon extrapolation of a sequence of partial sums.
Result wynn_epsilon(std::span<const double> partial_sums);

/// int_a^inf g(x) cos(omega x + phase) dx for g eventually monotone and
/// decaying to zero. Integrates between consecutive zeros of the cosine and
/// accelerates the alternating partial sums.
Result oscillatory_tail(const Integrand& g, double omega, double phase, double a,
                        double rel_tol = 1e-12);

/// Summation of nonnegative dyadic shell contributions with the divergence
/// heuristic: the sum is declared infinite when three successive checkpoint
/// doublings (shell counts first_checkpoint, 2x, 4x, ...) each grow the
/// partial sum by at least `growth_threshold`, or when the partial sum
/// exceeds `ceiling`. Early shells are excluded from the test because a
/// slowly converging geometric series also grows quickly at first.
struct ShellOptions {
  std::size_t max_shells = 4096;
  std::size_t min_shells = 8;
  std::size_t first_checkpoint = 64;
  double ceiling = 1e12;
  double rel_tol = 1e-12;
  double growth_threshold = 0.10;
};

struct ShellSum {
  double value = 0.0;      // +inf when divergent
  bool finite = true;
  bool converged = false;  // tail estimate fell below rel_tol
  double abs_error = 0.0;  // tail estimate when finite
  std::size_t shells = 0;
};

ShellSum sum_shells(const std::function<double(std::size_t)>& shell, const ShellOptions& opts = {});

}  // namespace levylab::quad
