#pragma once

// Catalog of test functions f, their norms and displacement energies
// int_a^b (f(y+x) - f(y))^2 dy.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace levylab {

/// g(x) = sum_{n=ell}^{N} 2^{-alpha n} d(2^n x, Z). truncation < 0 selects
/// the default N = ell + ceil(52/alpha).
struct Ciesielski {
  double alpha = 0.5;
  int ell = 0;
  int truncation = -1;
  int last_term() const;
};

/// 1_{[K, inf)}
struct Indicator {
  double K = 0.0;
};

struct WeightedAtom {
  double u = 0.0;
  double w = 0.0;
};

struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

/// f(x) = mu((-inf, x]) for mu = sum w_i delta_{u_i} + piecewise constant density.
struct NBVMixture {
  std::vector<WeightedAtom> atoms;
  std::vector<DensityPiece> pieces;
  double total_variation() const;
};

/// |x|^alpha ^ 1
struct PowerCap {
  double alpha = 0.5;
};

/// f_t(x) = int g_t(x - u) mu(du) with g_t(z) = z^{1/(2 theta)} / t on (0, t^{2 theta}).
struct SmoothedIndicator {
  double theta = 0.5;
  double t = 0.5;
  NBVMixture mixture;
};

struct Constant {
  double value = 1.0;
};

struct Custom {
  std::function<double(double)> f;
  std::optional<double> sup_bound;
  std::string name = "custom";
};

using FunctionSpec =
    std::variant<Ciesielski, Indicator, NBVMixture, PowerCap, SmoothedIndicator, Constant, Custom>;

void validate(const FunctionSpec& f);
std::string variant_name(const FunctionSpec& f);

double eval(const FunctionSpec& f, double x);

/// out[i] = f(x[i]); Ciesielski and Indicator go through the SIMD kernels.
void eval_batch(const FunctionSpec& f, const double* x, double* out, std::size_t n);

/// 1 / ((2^{1-alpha} - 1)(1 - 2^{-alpha})), a C^alpha seminorm bound for g^{alpha, ell}.
double holder_constant_bound(double alpha);

/// sup |g - truncated sum| <= 2^{-alpha N} / (2 (2^alpha - 1)).
double ciesielski_tail_bound(const Ciesielski& c);

/// Bracket for a norm: exact values have lower == upper.
struct NormValue {
  enum class Method { exact, grid_estimate, bound };
  double lower = 0.0;
  double upper = 0.0;
  Method method = Method::exact;
  double resolution = 0.0;  // grid spacing for grid estimates

  double value() const { return method == Method::exact ? lower : upper; }
};

std::string method_name(NormValue::Method m);

struct NormReport {
  NormValue sup_norm;
  std::optional<double> alpha;
  NormValue holder_seminorm;
  NormValue bv_norm;
};

NormReport norms(const FunctionSpec& f, std::optional<double> alpha = std::nullopt);

/// Rigorous upper bound on ||f||_{C^alpha_b} = ||f||_inf + ||f||_{C^alpha}.
struct HolderCertificate {
  double alpha = 0.5;
  double norm = 0.0;
};

/// nullopt for discontinuous functions and customs without declared bounds.
std::optional<HolderCertificate> holder_certificate(const FunctionSpec& f, std::optional<double> alpha = std::nullopt);

/// Finite-measure representation when f is NBV (indicator, mixtures).
std::optional<NBVMixture> as_mixture(const FunctionSpec& f);

/// sup |f| (exact where available, otherwise a rigorous bound or the grid estimate).
double sup_bound(const FunctionSpec& f);

/// int_a^b (f(y+x) - f(y))^2 dy.
double displacement_energy(const FunctionSpec& f, double a, double b, double x);

/// Same integral by plain adaptive quadrature (independent of closed forms).
double displacement_energy_quadrature(const FunctionSpec& f, double a, double b, double x, double tol = 1e-10);

/// g_t(z) for the smoothing family.
double smoothing_kernel(double theta, double t, double z);

struct SmoothingDecomposition {
  SmoothedIndicator f_t;
  double support_length = 0.0;   // t^{2 theta}
  double holder_alpha = 0.0;     // 1 / (2 theta)
  double holder_seminorm = 0.0;  // |mu|(R) / t
  /// Bound on int (g_t(z+x) - g_t(z))^2 dz.
  double energy_bound(double x) const;
  /// Support length of z -> g_t(z+x) - g_t(z).
  double difference_support(double x) const;
};

SmoothingDecomposition smoothing_decomposition(const NBVMixture& mixture, double theta, double t);

}  // namespace levylab
