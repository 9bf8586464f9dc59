#include "levylab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/rng.hpp"

namespace levylab {
namespace {

double sq(double v) { return v * v; }

VerifyCheck check(std::string id, std::string anchor, std::string relation, double tolerance) {
  VerifyCheck c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.relation = std::move(relation);
  c.tolerance = tolerance;
  return c;
}

// One-sample KS critical value at 95%.
double ks_critical(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

VerifyCheck ac1() {
  VerifyCheck c = check("AC1", "m_xi := int(|x|^xi ^ 1) nu(dx)",
                "moment(b=1, beta=0.5, xi=1) = 8 (closed form and quadrature); xi = 0.5 diverges", 1e-6);
  const LevyMeasure m = SymmetricStable{1.0, 0.5};
  const auto closed = moment(m, 1.0);
  const auto quad = moment_quadrature(m, 1.0);
  const auto div = moment(m, 0.5);
  c.measured = {{"closed_form", closed.value}, {"quadrature", quad.value}, {"xi_0.5_finite", div.finite ? 1.0 : 0.0}};
  c.pass = std::abs(closed.value - 8.0) <= 8e-6 && std::abs(quad.value - 8.0) <= 8e-6 && !div.finite;
  return c;
}

VerifyCheck ac2(std::uint64_t seed) {
  VerifyCheck c = check("AC2", "p_1(0) = 1/pi for beta = 1, c = 1",
                "density(0) = 1/pi within 1e-8; KS against the Cauchy CDF below the 95% critical value", 1e-8);
  const StableParams p{1.0, 1.0};
  const double d0 = density(p, 1.0, 0.0);
  const std::size_t n = 100000;
  const auto batch = sample_stable(p, 1.0, n, seed, 0);
  const double ks = ks_one_sample(batch.values, [](double x) { return 0.5 + std::atan(x) / std::numbers::pi; });
  c.measured = {{"density_0", d0}, {"ks", ks}, {"ks_critical", ks_critical(n)}};
  c.pass = std::abs(d0 - std::numbers::inv_pi) <= 1e-8 && ks < ks_critical(n);
  return c;
}

VerifyCheck ac3(std::uint64_t seed) {
  VerifyCheck c = check("AC3", "X_t = t^{1/beta} X_1 in law", "scaling_check passes KS at 95% for 6 (beta, t) pairs", 0.0);
  c.pass = true;
  std::uint64_t k = 0;
  for (double beta : {0.7, 1.0, 1.5}) {
    for (double t : {0.01, 0.3}) {
      const auto r = scaling_check(StableParams{beta, 1.0}, t, 100000, seed + k++);
      c.measured.push_back({"ks_beta" + format_double(beta) + "_t" + format_double(t), r.statistic});
      c.tolerance = r.critical;
      c.pass = c.pass && r.pass;
    }
  }
  return c;
}

VerifyCheck ac4(std::uint64_t seed) {
  VerifyCheck c = check("AC4", "int E[(f(X_1+x) - f(X_1))^2] nu(dx)",
                "nu = delta_1, f = 1_[1,inf): Monte Carlo d12 = Poisson oracle within 3 sigma", 0.0);
  const CompoundPoisson cp{{{1.0, 1.0}}};
  // P(N >= 1) + P(N = 0): f(X_1)^2 is 1 iff a jump occurred, and the shift by 1 changes f iff none did.
  const double oracle = (1.0 - std::exp(-1.0)) + std::exp(-1.0);
  D12Options opts;
  opts.mode = D12Options::Mode::monte_carlo;
  opts.samples = 1000000;
  opts.seed = seed;
  const auto r = d12_norm_sq(Indicator{1.0}, cp, opts);
  c.tolerance = std::max(3.0 * r.stderr_, 1e-12);
  c.measured = {{"d12_mc", r.d12_norm_sq}, {"stderr", r.stderr_}, {"oracle", oracle}};
  c.pass = std::abs(r.d12_norm_sq - oracle) <= c.tolerance;
  return c;
}

VerifyCheck ac5() {
  VerifyCheck c = check("AC5", ">= 2^{-l} 2^{8 alpha - 10} |x|^{2 alpha}",
                "displacement energy over [0,1] >= 2^{8 alpha - 10} x^{2 alpha} for x = 2^-3..2^-10", 1e-8);
  c.pass = true;
  for (double alpha : {0.25, 0.5, 0.75}) {
    double worst = INFINITY;
    for (int k = 3; k <= 10; ++k) {
      const double x = std::ldexp(1.0, -k);
      const double e = displacement_energy(Ciesielski{alpha, 0, -1}, 0.0, 1.0, x);
      const double bound = std::pow(2.0, 8.0 * alpha - 10.0) * std::pow(x, 2.0 * alpha);
      worst = std::min(worst, e / bound);
    }
    c.measured.push_back({"min_ratio_alpha" + format_double(alpha), worst});
    c.pass = c.pass && worst >= 1.0 - c.tolerance;
  }
  return c;
}

VerifyCheck ac6() {
  VerifyCheck c = check("AC6", "(1 + 4 m_{2 alpha}) ||f||^2_{C^alpha_b}",
                "Ciesielski alpha = 0.5 under stable beta = 0.5, b = 1: d12 <= (1 + 4 m_1) ||f||^2", 0.0);
  const StableParams p{0.5, nu_to_char_scale(1.0, 0.5)};
  const FunctionSpec f = Ciesielski{0.5, 0, -1};
  const auto r = d12_norm_sq(f, p, {});
  const auto cert = holder_certificate(f, 0.5);
  const double bound = holder_upper_bound(*cert, levy_measure_of(p));
  c.tolerance = r.error;
  c.measured = {{"d12_lower", r.d12_lower}, {"d12_upper", r.d12_norm_sq}, {"bound", bound}};
  c.pass = r.finite && r.d12_lower <= bound + r.error;
  return c;
}

VerifyCheck ac7() {
  VerifyCheck c = check("AC7", "sqrt(1 + (1 v ||p_1||_inf) m_1) ||f||_BV; >= c int_{0<|x|<=r} |x| nu(dx)",
                "Indicator{0}, stable beta = 0.5, b = 1: d12 within the BV bound, displacement integral above "
                "inf p_1 on [-1,1] times 4",
                0.0);
  const StableParams p{0.5, nu_to_char_scale(1.0, 0.5)};
  const FunctionSpec f = Indicator{0.0};
  const LevyMeasure m = levy_measure_of(p);
  const auto r = d12_norm_sq(f, p, {});
  const double t_one[] = {1.0};
  const auto ext = density_assumption_check(p, -1.0, 1.0, t_one);
  const double bv = norms(f).bv_norm.value();
  const double upper = bv_upper_bound(bv, m, ext.sup);
  const double lower = indicator_lower_bound(0.0, 1.0, ext.inf, m);
  c.tolerance = r.error;
  c.measured = {{"d12_upper", r.d12_norm_sq},
                {"bv_bound", upper},
                {"displacement_lower", r.displacement_lower},
                {"displacement_upper", r.displacement_integral},
                {"indicator_lower_bound", lower}};
  c.pass = r.finite && r.d12_lower <= upper + r.error && r.displacement_integral >= lower - r.error;
  return c;
}

VerifyCheck ac8(std::uint64_t seed) {
  VerifyCheck c = check("AC8", ">= c (1-t)^{eta/beta}; <= 2 (1-t)^{2 alpha/beta}",
                "fitted exponents on 1-t = 2^-1..2^-8: 1.00 +- 0.10, 0.667 +- 0.07, 0.50 +- 0.05, 0.333 +- 0.05", 0.0);
  struct Case {
    const char* name;
    FunctionSpec f;
    double beta, expect, tol;
  };
  const Case cases[] = {{"indicator_beta1", Indicator{0.0}, 1.0, 1.0, 0.10},
                        {"indicator_beta1.5", Indicator{0.0}, 1.5, 2.0 / 3.0, 0.07},
                        {"ciesielski0.25_beta1", Ciesielski{0.25, 0, -1}, 1.0, 0.5, 0.05},
                        {"ciesielski0.25_beta1.5", Ciesielski{0.25, 0, -1}, 1.5, 1.0 / 3.0, 0.05}};
  const auto grid = dyadic_grid(1, 8);
  c.pass = true;
  for (const auto& k : cases) {
    const auto curve = psi_curve(k.f, StableParams{k.beta, 1.0}, grid, 1000000, seed);
    const auto fit = fit_exponent(curve);
    c.measured.push_back({std::string("slope_") + k.name, fit.slope});
    c.measured.push_back({std::string("expected_") + k.name, k.expect});
    c.pass = c.pass && std::abs(fit.slope - k.expect) <= k.tol;
  }
  if (!c.pass) c.note = "finite-grid slopes carry slowly decaying corrections; see README";
  return c;
}

VerifyCheck ac9(std::uint64_t seed) {
  VerifyCheck c = check("AC9", "sum t^n n! ||f_n||^2",
                "Indicator{0}, Cauchy: Psi(0) = Var f(X_1) within 3 sigma; Psi nonincreasing within 3 sigma", 0.0);
  const StableParams p{1.0, 1.0};
  const FunctionSpec f = Indicator{0.0};
  std::vector<double> grid = {0.0, 0.25};
  for (double t : dyadic_grid(1, 8)) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  const auto curve = psi_curve(f, p, grid, 1000000, seed);
  const auto var = variance_estimate(f, p, 1000000, seed);
  const double se0 = std::hypot(curve.stderr_[0], var.stderr_);
  bool monotone = true;
  double worst = -INFINITY;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double rise = curve.psi[i + 1] - curve.psi[i];
    const double se = std::hypot(curve.stderr_[i], curve.stderr_[i + 1]);
    worst = std::max(worst, rise / se);
    monotone = monotone && rise <= 3.0 * se;
  }
  c.tolerance = 3.0 * se0;
  c.measured = {{"psi_0", curve.psi[0]}, {"variance", var.value}, {"max_rise_in_sigma", worst}};
  c.pass = std::abs(curve.psi[0] - var.value) <= c.tolerance && monotone;
  return c;
}

VerifyCheck ac10(std::uint64_t seed) {
  VerifyCheck c = check("AC10", "int_0^{t0} P(|X_t| > c t^{1/beta'}) dt/t < inf",
                "Cauchy: beta' = 2 partial sums converge; beta' = 0.5 total exceeds 10x the beta' = 2 total", 1e-2);
  const Process p = StableParams{1.0, 1.0};
  const auto conv = small_time_exceedance(p, 2.0, 1.0, 1.0, 40, 100000, seed);
  const auto div = small_time_exceedance(p, 0.5, 1.0, 1.0, 40, 100000, seed);
  const auto& ps = conv.partial_sums;
  const double late = ps.back() - ps[ps.size() - 11];
  c.measured = {{"total_beta2", conv.total}, {"last10_increment_beta2", late}, {"total_beta0.5", div.total}};
  c.pass = late <= c.tolerance * conv.total && div.total > 10.0 * conv.total;
  return c;
}

VerifyCheck ac11() {
  VerifyCheck c = check("AC11", "<= 6 ||.||_{C^alpha_b}",
                "Ciesielski alpha = 0.5: t^{-alpha} K_upper <= 2 ||f|| for t = 2^0..2^-12; 3 interp upper >= ||f||", 0.0);
  const FunctionSpec f = Ciesielski{0.5, 0, -1};
  const auto n = norms(f, 0.5);
  const double fnorm = n.sup_norm.value() + n.holder_seminorm.lower;
  std::vector<double> grid;
  for (int k = 12; k >= 0; --k) grid.push_back(std::ldexp(1.0, -k));
  double worst = 0.0;
  for (double t : grid) worst = std::max(worst, std::pow(t, -0.5) * k_functional_holder(f, t).upper);
  const auto b = interp_norm_holder(f, 0.5, grid);
  c.measured = {{"holder_norm", fnorm}, {"max_scaled_k_upper", worst}, {"interp_lower", b.lower},
                {"interp_upper", b.upper}};
  c.pass = worst <= 2.0 * fnorm && 3.0 * b.upper >= fnorm;
  return c;
}

SequenceElement random_sequence(std::uint64_t seed, std::uint32_t substream, std::size_t n) {
  DrawStream s(seed, 7000 + substream, 0);
  SequenceElement a;
  for (std::size_t i = 0; i < n; ++i) a.c.push_back(s.uniform());
  return a;
}

VerifyCheck ac12(std::uint64_t seed) {
  VerifyCheck c = check("AC12", "(Ta)(t) := sum ||a_n||^2 t^n; <= 3 ||f||_{(A0,A1)_{eta theta, inf}}",
                "optimizer = brute force within 1e-6; Geiss-Hujo ratio in [1/10, 10]; reiteration bracket meets [1,3]",
                1e-6);
  double worst = 0.0;
  for (std::uint32_t s = 0; s < 10; ++s) {
    const auto a = random_sequence(seed, s, 7);
    for (double t : {0.05, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 3.0}) {
      const double opt = seq_k_functional(a, t).upper;
      const double bf = seq_k_bruteforce(a, t).upper;
      worst = std::max(worst, std::abs(opt - bf) / std::max(1.0, bf));
    }
  }
  const auto grid = log_grid(1e-6, 1e6, 8);
  double rmin = INFINITY, rmax = 0.0;
  for (int fam = 0; fam < 3; ++fam) {
    SequenceElement a;
    for (int i = 0; i <= 40; ++i)
      a.c.push_back(fam == 0 ? std::pow(4.0, -i) : fam == 1 ? std::pow(2.0, -i) : 1.0 / sq(i + 1.0));
    for (double theta : {0.3, 0.5, 0.9}) {
      const auto r = geiss_hujo_check(a, theta, INFINITY, grid);
      rmin = std::min(rmin, r.ratio);
      rmax = std::max(rmax, r.ratio);
    }
  }
  bool reit = reiteration_check(SequenceElement{{1.0}}, 0.5, 0.5, grid).intersects;
  for (std::uint32_t s = 0; s < 3; ++s) reit = reit && reiteration_check(random_sequence(seed, 100 + s, 5), 0.5, 0.6, grid).intersects;
  c.measured = {{"max_rel_gap_opt_bruteforce", worst}, {"gh_ratio_min", rmin}, {"gh_ratio_max", rmax},
                {"reiteration_intersects", reit ? 1.0 : 0.0}};
  c.pass = worst <= c.tolerance && rmin >= 0.1 && rmax <= 10.0 && reit;
  return c;
}

VerifyCheck ac13() {
  VerifyCheck c = check("AC13", "<= (sqrt(||p||_inf) + sqrt(1 + 2 (||p||_inf v 1) m_{1/theta})) ||f||_BV",
                "Indicator{0}, theta = 0.5, stable beta = 0.5: sup_t t^{-theta}(l2 + t d12) <= constant", 0.0);
  std::vector<double> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back(std::ldexp(1.0, -k));
  const auto r = bv_interp_upper(NBVMixture{{{0.0, 1.0}}, {}}, 0.5, StableParams{0.5, nu_to_char_scale(1.0, 0.5)}, grid);
  c.measured = {{"sup", r.sup}, {"constant", r.constant}};
  c.pass = r.sup <= r.constant;
  return c;
}

VerifyCheck dispatch(const std::string& id, std::uint64_t seed) {
  if (id == "AC1") return ac1();
  if (id == "AC2") return ac2(seed);
  if (id == "AC3") return ac3(seed);
  if (id == "AC4") return ac4(seed);
  if (id == "AC5") return ac5();
  if (id == "AC6") return ac6();
  if (id == "AC7") return ac7();
  if (id == "AC8") return ac8(seed);
  if (id == "AC9") return ac9(seed);
  if (id == "AC10") return ac10(seed);
  if (id == "AC11") return ac11();
  if (id == "AC12") return ac12(seed);
  if (id == "AC13") return ac13();
  throw ValidationError("unknown acceptance id '" + id + "'", "suite");
}

std::vector<VerifyCheck> run_all_but_determinism(std::uint64_t seed) {
  std::vector<VerifyCheck> out;
  for (const auto& id : acceptance_ids())
    if (id != "AC14") out.push_back(dispatch(id, seed));
  return out;
}

std::string dump_checks(const std::vector<VerifyCheck>& checks, std::uint64_t seed) {
  VerifyReport r;
  r.seed = seed;
  r.checks = checks;
  return to_json(r).dump();
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

const std::vector<std::string>& acceptance_ids() {
  static const std::vector<std::string> ids = {"AC1", "AC2", "AC3",  "AC4",  "AC5",  "AC6",  "AC7",
                                               "AC8", "AC9", "AC10", "AC11", "AC12", "AC13", "AC14"};
  return ids;
}

const std::vector<std::string>& known_unattainable() {
  static const std::vector<std::string> ids = {"AC8"};
  return ids;
}

VerifyCheck run_check(const std::string& id, std::uint64_t seed) {
  if (id != "AC14") return dispatch(id, seed);
  VerifyCheck c = check("AC14", "draws addressed by (seed, substream, index)",
                "two full runs with the same seed give byte-identical reports", 0.0);
  const auto a = dump_checks(run_all_but_determinism(seed), seed);
  const auto b = dump_checks(run_all_but_determinism(seed), seed);
  c.measured = {{"report_bytes", static_cast<double>(a.size())}};
  c.pass = a == b;
  return c;
}

VerifyReport verify(const std::vector<std::string>& ids, std::uint64_t seed) {
  const auto& all = acceptance_ids();
  for (const auto& id : ids)
    if (std::find(all.begin(), all.end(), id) == all.end())
      throw ValidationError("unknown acceptance id '" + id + "'", "suite");
  VerifyReport r;
  r.seed = seed;
  const bool want14 = std::find(ids.begin(), ids.end(), "AC14") != ids.end();
  std::vector<VerifyCheck> first;  // the AC1..AC13 run reused as the first AC14 pass
  for (const auto& id : all) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end() && !(want14 && id != "AC14")) continue;
    if (id == "AC14") {
      VerifyCheck c = check("AC14", "draws addressed by (seed, substream, index)",
                    "two full runs with the same seed give byte-identical reports", 0.0);
      const auto a = dump_checks(first, seed);
      const auto b = dump_checks(run_all_but_determinism(seed), seed);
      c.measured = {{"report_bytes", static_cast<double>(a.size())}};
      c.pass = a == b;
      r.checks.push_back(c);
      continue;
    }
    auto c = dispatch(id, seed);
    if (want14) first.push_back(c);
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) r.checks.push_back(std::move(c));
  }
  return r;
}

Json to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json measured = Json::object();
    for (const auto& [k, v] : c.measured) measured[k] = format_double(v);
    Json j = {{"id", c.id},
              {"anchor", c.anchor},
              {"relation", c.relation},
              {"measured", measured},
              {"tolerance", format_double(c.tolerance)},
              {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  return {{"seed", r.seed}, {"all_pass", r.all_pass()}, {"checks", checks}};
}

}  // namespace levylab
