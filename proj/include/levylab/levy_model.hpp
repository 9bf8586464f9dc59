#pragma once

// Levy measures on R \ {0}, their moment functionals m_xi and the
// Blumenthal-Getoor index.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levylab {

/// nu(dx) = b |x|^{-1-beta} dx
struct SymmetricStable {
  double b = 1.0;
  double beta = 1.0;
};

/// nu(dx) = b / (|x|^{1+beta} (log^2|x| + 1)) dx; m_beta is finite.
struct LogDampedStable {
  double b = 1.0;
  double beta = 1.0;
};

struct Atom {
  double x = 0.0;
  double lambda = 0.0;
};

struct FiniteDiscrete {
  std::vector<Atom> atoms;
  double total_mass() const;
};

/// One term b |x|^{-1-beta} e^{-lambda |x|} of a generic density.
struct DensityTerm {
  double b = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
};

/// Density given either as a sum of tempered power terms (serializable) or
/// by an arbitrary callable `h` (in-process only). When `h` is set it wins.
struct GenericDensity {
  std::vector<DensityTerm> terms;
  std::function<double(double)> h;
  double integrability_tol = 1e-6;
};

using LevyMeasure = std::variant<SymmetricStable, LogDampedStable, FiniteDiscrete, GenericDensity>;

/// Throws ValidationError; for generic densities also checks
/// int (x^2 ^ 1) nu(dx) < inf numerically.
void validate(const LevyMeasure& m);

std::string variant_name(const LevyMeasure& m);

/// Density of nu at x != 0 (zero for finite discrete measures).
double levy_density(const LevyMeasure& m, double x);

struct MomentValue {
  double xi = 0.0;
  double value = 0.0;
  bool finite = true;
  double abs_error = 0.0;
};

/// m_xi = int (|x|^xi ^ 1) nu(dx).
MomentValue moment(const LevyMeasure& m, double xi);

/// Same as moment() but always takes the quadrature path (no closed forms).
MomentValue moment_quadrature(const LevyMeasure& m, double xi);

/// int_{0<|x|<=r} |x|^xi nu(dx).
MomentValue small_jump_moment(const LevyMeasure& m, double xi, double r = 1.0);

/// nu({|x| > r}).
double tail_mass(const LevyMeasure& m, double r = 1.0);

struct BGIndex {
  enum class Source { analytic, estimated };
  double beta = 0.0;
  Source source = Source::analytic;
  std::optional<bool> boundary_moment_finite;
  double fit_residual = 0.0;  // RMS of the log-mass fit, estimated only
};

BGIndex bg_index(const LevyMeasure& m);

struct HartmanWintner {
  double ratio = 0.0;            // int sin^2(ux) nu(dx) / log|u|
  double numerator = 0.0;
  double remainder = 0.0;        // contribution beyond the exact half-periods
  double remainder_bound = 0.0;  // nu-tail mass beyond the cutoff, over log|u|
  long half_periods = 0;
};

HartmanWintner hartman_wintner_ratio(const LevyMeasure& m, double u);

/// c = 2b int_0^inf (1 - cos v) v^{-1-beta} dv, the scale in e^{-c|u|^beta}.
double nu_to_char_scale(double b, double beta);
double char_scale_to_nu(double c, double beta);

}  // namespace levylab
