#pragma once

// K-functional brackets for the couple (B(R), Lip) and for the weighted
// sequence couple (l2(E), d12(E)) with weights n + 1.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "levylab/function_space.hpp"

namespace levylab {

struct KFunctionalEstimate {
  double t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string witness;
};

/// Upper from the piecewise-linear interpolant on tZ, lower = 1/2 sup_{|x-y|=t} |f(x) - f(y)|.
/// Sup norms are grid estimates with resolution t/64.
KFunctionalEstimate k_functional_holder(const FunctionSpec& f, double t);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;  // sup / integral of the computed K on the grid itself
};

/// Bracket for sup_t t^{-alpha} K(f, t; B, Lip) from a grid of t values.
NormBracket interp_norm_holder(const FunctionSpec& f, double alpha, const std::vector<double>& t_grid);

/// c_n = ||a_n||^2, n = 0..N.
struct SequenceElement {
  std::vector<double> c;
};

void validate(const SequenceElement& a);

/// (Ta)(t) = sum c_n t^n.
double seq_T(const SequenceElement& a, double t);

double seq_norm_l2(const SequenceElement& a);   // (sum c_n)^{1/2}
double seq_norm_d12(const SequenceElement& a);  // (sum (n+1) c_n)^{1/2}

/// sqrt(sum s_n^2 c_n) + t sqrt(sum (1 - s_n)^2 (n+1) c_n)
double seq_split_cost(const SequenceElement& a, double t, const std::vector<double>& s);

/// Exact colinear optimum (upper) and the comparison bound (sum min(1, t^2 (n+1)) c_n)^{1/2} / sqrt 2 (lower).
KFunctionalEstimate seq_k_functional(const SequenceElement& a, double t);

/// Grid search over s in {0, step, ..., 1}^{N+1}, coordinate descent from the best non-corner point,
/// then damped Newton in the plain chart and in logarithmic charts around s = 0 and s = 1.
KFunctionalEstimate seq_k_bruteforce(const SequenceElement& a, double t, double step = 0.125);

/// Log-spaced grid with points_per_decade points.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

/// Bracket for (int (t^{-theta} K)^q dt/t)^{1/q}; q = +inf gives the sup.
NormBracket seq_interp_norm(const SequenceElement& a, double theta, double q, const std::vector<double>& t_grid);

struct GeissHujoReport {
  NormBracket interpolation;
  double t_expression = 0.0;  // ||a||_{l2} + ||(1-t)^{-theta/2} sqrt(T(1) - T(t))||_{L_q(dt/(1-t))}
  double ratio = 0.0;         // t_expression / interpolation.estimate
  double ratio_lower = 0.0;
  double ratio_upper = 0.0;
};

GeissHujoReport geiss_hujo_check(const SequenceElement& a, double theta, double q, const std::vector<double>& t_grid);

struct ReiterationReport {
  NormBracket direct;      // (A0, A1)_{eta theta, inf}
  NormBracket reiterated;  // (A0, (A0, A1)_{eta, inf})_{theta, inf}
  double ratio_lower = 0.0;
  double ratio_upper = 0.0;
  bool intersects = false;  // [ratio_lower, ratio_upper] meets [1, 3]
};

ReiterationReport reiteration_check(const SequenceElement& a, double eta, double theta,
                                    const std::vector<double>& t_grid);

}  // namespace levylab
