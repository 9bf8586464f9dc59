// levylab command-line front end. Every subcommand is translated into an
// experiment config and handed to the same dispatcher as `run --config`.
//
// Exit codes: 0 success, 2 validation error, 3 numeric-divergence verdict.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levylab/error.hpp"
#include "levylab/json_io.hpp"
#include "levylab/parallel.hpp"
#include "levylab/verify.hpp"

using namespace levylab;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kDivergent = 3;

struct Globals {
  std::uint64_t seed = 1;
  bool seed_set = false;
  unsigned threads = 0;
  std::string out;
  bool no_timestamp = false;
};

struct Output {
  Json report = Json::object();
  std::string csv;
  int code = kOk;
};

void log_stage(const std::string& s) { std::fprintf(stderr, "[levylab] %s\n", s.c_str()); }

// Inline JSON when the text starts with '{' or '[', else a file path.
Json spec_arg(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return parse_json_text(text, what);
  return read_json_file(text);
}

const Json& need(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ValidationError("missing field", "$." + key);
  return cfg.at(key);
}

double num(const Json& obj, const std::string& key, double fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return INFINITY;
  }
  if (!v.is_number()) throw ValidationError("expected a number", path + "." + key);
  return v.get<double>();
}

std::vector<double> num_list(const Json& obj, const std::string& key, const std::string& path) {
  std::vector<double> out;
  if (!obj.is_object() || !obj.contains(key)) return out;
  const auto& v = obj.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ValidationError("expected an array", path + "." + key);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ValidationError("expected a number", path + "." + key + "[" + std::to_string(i) + "]");
    out.push_back(v[i].get<double>());
  }
  return out;
}

// {"lo","hi","n"} or an explicit list.
std::vector<double> grid_arg(const Json& obj, const std::string& key, const std::string& path,
                             std::vector<double> fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_object()) {
    const std::string p = path + "." + key;
    const double lo = num(v, "lo", 0.0, p), hi = num(v, "hi", 1.0, p);
    const double n = num(v, "n", 101, p);
    if (!(n >= 1 && n == std::floor(n))) throw ValidationError("must be a positive integer", p + ".n");
    if (!(hi >= lo)) throw ValidationError("hi must not be below lo", p + ".hi");
    std::vector<double> g;
    const int m = static_cast<int>(n);
    for (int i = 0; i < m; ++i) g.push_back(m == 1 ? lo : lo + (hi - lo) * i / (m - 1));
    return g;
  }
  return num_list(obj, key, path);
}

std::string str(const Json& obj, const std::string& key, const std::string& fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ValidationError("expected a string", path + "." + key);
  return obj.at(key).get<std::string>();
}

std::size_t count(const Json& obj, const std::string& key, std::size_t fallback, const std::string& path) {
  const double v = num(obj, key, static_cast<double>(fallback), path);
  if (!(v >= 1 && v == std::floor(v))) throw ValidationError("must be a positive integer", path + "." + key);
  return static_cast<std::size_t>(v);
}

std::string d(double v) { return format_double(v); }

// Rewrites a library field name into the config path it came from.
template <class F>
auto at_path(const std::string& prefix, F&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    if (e.path().empty() || e.path().rfind("$", 0) == 0) throw;
    std::string msg = e.what();
    if (msg.rfind(e.path() + ": ", 0) == 0) msg = msg.substr(e.path().size() + 2);
    throw ValidationError(msg, join_path(prefix, e.path()));
  }
}

std::vector<double> t_grid_arg(const Json& budget, std::vector<double> fallback) {
  auto g = grid_arg(budget, "t_grid", "$.budget", std::move(fallback));
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(g[i] >= 0.0 && g[i] < 1.0))
      throw ValidationError("t_grid entries must lie in [0, 1)", "$.budget.t_grid[" + std::to_string(i) + "]");
  return g;
}

Output op_moments(const Json& cfg) {
  const auto m = measure_from_json(need(cfg, "measure"), "$.measure");
  const Json& params = cfg.value("params", Json::object());
  auto xis = num_list(params, "xi", "$.params");
  if (xis.empty()) xis = {1.0};
  Output o;
  o.csv = "xi,value,finite\n";
  Json arr = Json::array();
  for (double xi : xis) {
    const auto v = moment(m, xi);
    arr.push_back({{"xi", d(xi)}, {"value", d(v.value)}, {"finite", v.finite}, {"abs_error", d(v.abs_error)}});
    o.csv += d(xi) + "," + d(v.value) + "," + (v.finite ? "1" : "0") + "\n";
    if (!v.finite) o.code = kDivergent;
  }
  o.report = {{"measure", to_json(m)}, {"moments", arr}};
  return o;
}

Output op_bg_index(const Json& cfg) {
  const auto m = measure_from_json(need(cfg, "measure"), "$.measure");
  const auto bg = bg_index(m);
  Output o;
  Json j = {{"beta", d(bg.beta)},
            {"source", bg.source == BGIndex::Source::analytic ? "analytic" : "estimated"},
            {"fit_residual", d(bg.fit_residual)}};
  j["boundary_moment_finite"] = bg.boundary_moment_finite ? Json(*bg.boundary_moment_finite) : Json(nullptr);
  o.report = {{"measure", to_json(m)}, {"bg_index", j}};
  o.csv = "beta\n" + d(bg.beta) + "\n";
  return o;
}

Output op_sample(const Json& cfg, std::uint64_t seed) {
  const auto p = process_from_json(need(cfg, "process"), "$.process");
  const Json& params = cfg.value("params", Json::object());
  const Json& budget = cfg.value("budget", Json::object());
  const double t = num(params, "t", 1.0, "$.params");
  if (!(t > 0.0)) throw ValidationError("must be positive", "$.params.t");
  const std::size_t n = count(budget, "samples", 1000, "$.budget");
  const auto sub = static_cast<std::uint32_t>(count(params, "substream", 1, "$.params") - 1);
  std::vector<double> v(n);
  sample_range(p, t, seed, sub, 0, n, v.data());
  Output o;
  std::ostringstream csv;
  csv << "index,value\n";
  for (std::size_t i = 0; i < n; ++i) csv << i << "," << d(v[i]) << "\n";
  o.csv = csv.str();
  o.report = {{"process", to_json(p)}, {"t", d(t)}, {"n", n}, {"seed", seed}, {"substream", sub}};
  return o;
}

Output op_density(const Json& cfg) {
  const auto p = process_from_json(need(cfg, "process"), "$.process");
  const auto* s = std::get_if<StableParams>(&p);
  if (!s) throw ValidationError("density requires a stable process", "$.process.variant");
  const Json& params = cfg.value("params", Json::object());
  const double t = num(params, "t", 1.0, "$.params");
  if (!(t > 0.0)) throw ValidationError("must be positive", "$.params.t");
  const auto xs = grid_arg(params, "x", "$.params", grid_arg(Json{{"x", {{"lo", -5}, {"hi", 5}, {"n", 101}}}}, "x", "", {}));
  Output o;
  o.csv = "x,p\n";
  for (double x : xs) o.csv += d(x) + "," + d(density(*s, t, x)) + "\n";
  o.report = {{"process", to_json(p)}, {"t", d(t)}, {"points", xs.size()}, {"sup", d(density_sup(*s, t))}};
  return o;
}

Output op_d12(const Json& cfg, std::uint64_t seed) {
  const auto f = function_from_json(need(cfg, "function"), "$.function");
  const auto p = process_from_json(need(cfg, "process"), "$.process");
  const Json& params = cfg.value("params", Json::object());
  const Json& budget = cfg.value("budget", Json::object());
  D12Options opts;
  const auto mode = str(params, "mode", "density", "$.params");
  if (mode == "mc" || mode == "monte_carlo") {
    opts.mode = D12Options::Mode::monte_carlo;
  } else if (mode != "density") {
    throw ValidationError("mode must be density or mc", "$.params.mode");
  }
  opts.samples = count(budget, "samples", opts.samples, "$.budget");
  opts.seed = seed;
  const auto r = at_path("$.params", [&] { return d12_norm_sq(f, p, opts); });
  Output o;
  o.report = {{"function", to_json(f)}, {"process", to_json(p)}, {"d12", to_json(r)}};
  o.csv = "x,G\n";
  for (const auto& [x, g] : r.g_curve) o.csv += d(x) + "," + d(g) + "\n";
  if (!r.finite) o.code = kDivergent;
  return o;
}

PsiCurve curve_from(const Json& cfg, std::uint64_t seed, FunctionSpec& f, Process& p) {
  f = function_from_json(need(cfg, "function"), "$.function");
  p = process_from_json(need(cfg, "process"), "$.process");
  const Json& budget = cfg.value("budget", Json::object());
  const auto grid = t_grid_arg(budget, dyadic_grid(1, 10));
  const std::size_t n = count(budget, "samples", 100000, "$.budget");
  return at_path("$.budget", [&] { return psi_curve(f, p, grid, n, seed); });
}

std::string curve_csv(const PsiCurve& c) {
  std::string s = "t,psi,stderr,n\n";
  for (std::size_t i = 0; i < c.t_grid.size(); ++i)
    s += d(c.t_grid[i]) + "," + d(c.psi[i]) + "," + d(c.stderr_[i]) + "," + std::to_string(c.n) + "\n";
  return s;
}

Output op_psi(const Json& cfg, std::uint64_t seed) {
  FunctionSpec f;
  Process p;
  const auto c = curve_from(cfg, seed, f, p);
  Output o;
  o.csv = curve_csv(c);
  o.report = {{"function", to_json(f)}, {"process", to_json(p)}, {"n", c.n}, {"seed", c.seed}};
  return o;
}

Output op_fit_theta(const Json& cfg, std::uint64_t seed) {
  FunctionSpec f;
  Process p;
  const auto c = curve_from(cfg, seed, f, p);
  Output o;
  o.csv = curve_csv(c);
  o.report = {{"function", to_json(f)}, {"process", to_json(p)}};
  try {
    o.report["fit"] = to_json(fit_exponent(c));
  } catch (const InsufficientData& e) {
    o.report["fit"] = nullptr;
    o.report["fit_error"] = e.what();
    o.code = kDivergent;
  }
  const Json& params = cfg.value("params", Json::object());
  if (params.contains("theta")) {
    const double theta = num(params, "theta", 0.5, "$.params");
    o.report["membership"] = to_json(at_path("$.params", [&] { return membership_statistic(c, theta); }));
  }
  return o;
}

Output op_probe(const Json& cfg, std::uint64_t seed) {
  const auto p = process_from_json(need(cfg, "process"), "$.process");
  const Json& params = cfg.value("params", Json::object());
  const Json& budget = cfg.value("budget", Json::object());
  const double bp = num(params, "beta_prime", 2.0, "$.params");
  const double c = num(params, "c", 1.0, "$.params");
  const double t0 = num(params, "t0", 1.0, "$.params");
  const int levels = static_cast<int>(count(params, "levels", 40, "$.params"));
  const std::size_t n = count(budget, "samples", 100000, "$.budget");
  const auto r = at_path("$.params", [&] { return small_time_exceedance(p, bp, c, t0, levels, n, seed); });
  Output o;
  o.csv = "t,probability,partial_sum\n";
  for (std::size_t i = 0; i < r.t.size(); ++i)
    o.csv += d(r.t[i]) + "," + d(r.probability[i]) + "," + d(r.partial_sums[i]) + "\n";
  o.report = {{"process", to_json(p)}, {"beta_prime", d(bp)}, {"c", d(c)}, {"t0", d(t0)}, {"total", d(r.total)}};
  return o;
}

Output op_kfunc(const Json& cfg) {
  const Json& params = cfg.value("params", Json::object());
  const Json& budget = cfg.value("budget", Json::object());
  const auto couple = str(params, "couple", "holder", "$.params");
  Output o;
  o.csv = "t,lower,upper\n";
  if (couple == "holder") {
    const auto f = function_from_json(need(cfg, "function"), "$.function");
    std::vector<double> fallback;
    for (int k = 12; k >= 0; --k) fallback.push_back(std::ldexp(1.0, -k));
    const auto grid = grid_arg(budget, "t_grid", "$.budget", fallback);
    const double alpha = num(params, "theta", 0.5, "$.params");
    for (double t : grid) {
      const auto k = at_path("$.budget", [&] { return k_functional_holder(f, t); });
      o.csv += d(t) + "," + d(k.lower) + "," + d(k.upper) + "\n";
    }
    const auto b = at_path("$.budget", [&] { return interp_norm_holder(f, alpha, grid); });
    o.report = {{"couple", couple}, {"function", to_json(f)}, {"theta", d(alpha)},
                {"norm", {{"lower", d(b.lower)}, {"upper", d(b.upper)}, {"estimate", d(b.estimate)}}}};
  } else if (couple == "sequence") {
    const auto a = sequence_from_json(need(cfg, "sequence"), "$.sequence");
    const auto grid = grid_arg(budget, "t_grid", "$.budget", log_grid(1e-6, 1e6, 8));
    const double theta = num(params, "theta", 0.5, "$.params");
    const double q = num(params, "q", INFINITY, "$.params");
    for (double t : grid) {
      const auto k = at_path("$.budget", [&] { return seq_k_functional(a, t); });
      o.csv += d(t) + "," + d(k.lower) + "," + d(k.upper) + "\n";
    }
    const auto gh = at_path("$.params", [&] { return geiss_hujo_check(a, theta, q, grid); });
    o.report = {{"couple", couple},
                {"theta", d(theta)},
                {"q", d(q)},
                {"norm",
                 {{"lower", d(gh.interpolation.lower)},
                  {"upper", d(gh.interpolation.upper)},
                  {"estimate", d(gh.interpolation.estimate)}}},
                {"t_expression", d(gh.t_expression)},
                {"ratio", d(gh.ratio)}};
  } else {
    throw ValidationError("couple must be holder or sequence", "$.params.couple");
  }
  return o;
}

Json norm_json(const NormValue& v) {
  return {{"lower", d(v.lower)}, {"upper", d(v.upper)}, {"method", method_name(v.method)},
          {"resolution", d(v.resolution)}};
}

Output op_fn(const Json& cfg) {
  const auto f = function_from_json(need(cfg, "function"), "$.function");
  const Json& params = cfg.value("params", Json::object());
  const auto action = str(params, "action", "eval", "$.params");
  Output o;
  o.report = {{"function", to_json(f)}, {"action", action}};
  if (action == "eval") {
    const auto xs = grid_arg(params, "x", "$.params", grid_arg(Json{{"x", {{"lo", -2}, {"hi", 2}, {"n", 401}}}}, "x", "", {}));
    std::vector<double> ys(xs.size());
    eval_batch(f, xs.data(), ys.data(), xs.size());
    o.csv = "x,value\n";
    for (std::size_t i = 0; i < xs.size(); ++i) o.csv += d(xs[i]) + "," + d(ys[i]) + "\n";
  } else if (action == "norms") {
    std::optional<double> alpha;
    if (params.contains("alpha")) alpha = num(params, "alpha", 0.5, "$.params");
    const auto n = at_path("$.params", [&] { return norms(f, alpha); });
    o.report["sup_norm"] = norm_json(n.sup_norm);
    o.report["holder_seminorm"] = norm_json(n.holder_seminorm);
    o.report["bv_norm"] = norm_json(n.bv_norm);
    o.csv = "norm,lower,upper\nsup," + d(n.sup_norm.lower) + "," + d(n.sup_norm.upper) + "\nholder," +
            d(n.holder_seminorm.lower) + "," + d(n.holder_seminorm.upper) + "\nbv," + d(n.bv_norm.lower) + "," +
            d(n.bv_norm.upper) + "\n";
  } else if (action == "displacement") {
    const double a = num(params, "a", 0.0, "$.params"), b = num(params, "b", 1.0, "$.params");
    if (!(b > a)) throw ValidationError("interval must satisfy a < b", "$.params.b");
    const auto xs = grid_arg(params, "x", "$.params", {0.0625});
    o.csv = "x,energy\n";
    for (double x : xs) o.csv += d(x) + "," + d(displacement_energy(f, a, b, x)) + "\n";
  } else {
    throw ValidationError("action must be eval, norms or displacement", "$.params.action");
  }
  return o;
}

Output op_verify(const Json& cfg, std::uint64_t seed) {
  const Json& params = cfg.value("params", Json::object());
  std::vector<std::string> ids;
  if (params.contains("suite")) {
    const auto& s = params.at("suite");
    if (s.is_string() && s.get<std::string>() == "all") {
      ids = acceptance_ids();
    } else if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].is_string()) throw ValidationError("expected a string", "$.params.suite[" + std::to_string(i) + "]");
        ids.push_back(s[i].get<std::string>());
      }
    } else {
      throw ValidationError("expected \"all\" or an array of ids", "$.params.suite");
    }
  } else {
    ids = acceptance_ids();
  }
  const auto& all = acceptance_ids();
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (std::find(all.begin(), all.end(), ids[i]) == all.end())
      throw ValidationError("unknown acceptance id '" + ids[i] + "'", "$.params.suite[" + std::to_string(i) + "]");
  const auto r = verify(ids, seed);
  Output o;
  o.report = to_json(r);
  o.csv = "id,pass\n";
  for (const auto& c : r.checks) o.csv += c.id + "," + (c.pass ? "1" : "0") + "\n";
  return o;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file", path);
  out << body;
}

int execute(const Json& cfg, const Globals& g) {
  if (!cfg.is_object()) throw ValidationError("config must be an object", "$");
  const std::string op = str(cfg, "operation", "", "$");
  if (op.empty()) throw ValidationError("missing field", "$.operation");
  std::uint64_t seed = g.seed;
  if (!g.seed_set) {
    const Json& budget = cfg.value("budget", Json::object());
    const double s = num(budget, "seed", num(cfg, "seed", 1.0, "$"), "$.budget");
    if (!(s >= 0 && s == std::floor(s))) throw ValidationError("must be a nonnegative integer", "$.budget.seed");
    seed = static_cast<std::uint64_t>(s);
  }
  log_stage("operation " + op);
  Output o;
  if (op == "moments") o = op_moments(cfg);
  else if (op == "bg-index") o = op_bg_index(cfg);
  else if (op == "sample") o = op_sample(cfg, seed);
  else if (op == "density") o = op_density(cfg);
  else if (op == "d12") o = op_d12(cfg, seed);
  else if (op == "psi") o = op_psi(cfg, seed);
  else if (op == "fit-theta") o = op_fit_theta(cfg, seed);
  else if (op == "probe") o = op_probe(cfg, seed);
  else if (op == "kfunc") o = op_kfunc(cfg);
  else if (op == "fn") o = op_fn(cfg);
  else if (op == "verify") o = op_verify(cfg, seed);
  else throw ValidationError("unknown operation '" + op + "'", "$.operation");
  log_stage("done");

  Json report = Json::object();
  if (cfg.contains("name")) report["name"] = cfg.at("name");
  report["operation"] = op;
  report["seed"] = seed;
  if (!g.no_timestamp) report["generated_at"] = timestamp();
  for (auto& [k, v] : o.report.items()) report[k] = v;
  const std::string json_text = report.dump(2) + "\n";
  const std::string csv_text = (g.no_timestamp ? "" : "# generated " + timestamp() + "\n") + o.csv;

  std::string json_path, csv_path;
  if (cfg.contains("output") && cfg.at("output").is_object()) {
    json_path = str(cfg.at("output"), "json", "", "$.output");
    csv_path = str(cfg.at("output"), "csv", "", "$.output");
  }
  if (!g.out.empty()) {
    json_path = g.out + ".json";
    csv_path = g.out + ".csv";
  }
  if (json_path.empty() && csv_path.empty()) {
    // CSV on stdout for the tabular operations, the report otherwise.
    const bool tabular = op == "sample" || op == "density" || op == "psi" || op == "kfunc" || op == "fn";
    std::cout << (tabular ? csv_text : json_text);
  } else {
    if (!json_path.empty()) write_file(json_path, json_text);
    if (!csv_path.empty()) write_file(csv_path, csv_text);
  }
  return o.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levylab: Malliavin smoothness and interpolation numerics for Levy functionals"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed (overrides the config)");
  app.add_option("--threads", g.threads, "Worker threads (default LEVYLAB_THREADS or all cores)");
  app.add_option("--out", g.out, "Output prefix; writes <prefix>.json and <prefix>.csv");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit timestamps so reruns are byte-identical");

  Json cfg = Json::object();
  std::string measure, process, function, sequence, config_path;
  std::string mode = "density", couple = "holder", action = "eval", suite = "all";
  std::vector<double> xi, t_grid, x_grid;
  double t = 1.0, beta_prime = 2.0, c = 1.0, t0 = 1.0, theta = NAN, q = INFINITY, alpha = NAN, a = 0.0, b = 1.0;
  std::size_t samples = 0, levels = 40;

  auto* s_moments = app.add_subcommand("moments", "Moments m_xi of a Levy measure");
  s_moments->add_option("--measure", measure, "Measure JSON or file")->required();
  s_moments->add_option("--xi", xi, "Moment orders")->delimiter(',');

  auto* s_bg = app.add_subcommand("bg-index", "Blumenthal-Getoor index");
  s_bg->add_option("--measure", measure, "Measure JSON or file")->required();

  auto* s_sample = app.add_subcommand("sample", "Draw X_t (CSV index,value)");
  s_sample->add_option("--process", process, "Process JSON or file")->required();
  s_sample->add_option("--t", t, "Time");
  s_sample->add_option("--n", samples, "Number of draws");

  auto* s_density = app.add_subcommand("density", "Stable density p_t (CSV x,p)");
  s_density->add_option("--process", process, "Process JSON or file")->required();
  s_density->add_option("--t", t, "Time");
  s_density->add_option("--x", x_grid, "Evaluation points")->delimiter(',');

  auto* s_d12 = app.add_subcommand("d12", "D_{1,2} norm of f(X_1)");
  s_d12->add_option("--function", function, "Function JSON or file")->required();
  s_d12->add_option("--process", process, "Process JSON or file")->required();
  s_d12->add_option("--mode", mode, "density or mc");
  s_d12->add_option("--samples", samples, "Monte Carlo samples per G(x)");

  auto* s_psi = app.add_subcommand("psi", "Psi(t) curve (CSV t,psi,stderr,n)");
  auto* s_fit = app.add_subcommand("fit-theta", "Fit the decay exponent of Psi");
  for (auto* s : {s_psi, s_fit}) {
    s->add_option("--function", function, "Function JSON or file")->required();
    s->add_option("--process", process, "Process JSON or file")->required();
    s->add_option("--t-grid", t_grid, "Increasing t values in [0,1)")->delimiter(',');
    s->add_option("--samples", samples, "Draws per grid point");
  }
  s_fit->add_option("--theta", theta, "Membership statistic exponent");

  auto* s_probe = app.add_subcommand("probe", "Small-time exceedance integral");
  s_probe->add_option("--process", process, "Process JSON or file")->required();
  s_probe->add_option("--beta-prime", beta_prime, "Exponent beta'");
  s_probe->add_option("--c", c, "Level constant");
  s_probe->add_option("--t0", t0, "Upper time limit");
  s_probe->add_option("--levels", levels, "Dyadic levels");
  s_probe->add_option("--samples", samples, "Monte Carlo draws (compound Poisson)");

  auto* s_kfunc = app.add_subcommand("kfunc", "K-functional brackets (CSV t,lower,upper)");
  s_kfunc->add_option("--couple", couple, "holder or sequence");
  s_kfunc->add_option("--input", function, "Function JSON (holder) or sequence JSON {\"c\": [...]}")->required();
  s_kfunc->add_option("--theta", theta, "Interpolation exponent");
  s_kfunc->add_option("--q", q, "Lorentz exponent (inf for the sup)");
  s_kfunc->add_option("--t-grid", t_grid, "t values")->delimiter(',');

  auto* s_fn = app.add_subcommand("fn", "Catalog functions: eval, norms, displacement");
  s_fn->add_option("action", action, "eval | norms | displacement");
  s_fn->add_option("--function", function, "Function JSON or file")->required();
  s_fn->add_option("--x", x_grid, "Points / shifts")->delimiter(',');
  s_fn->add_option("--alpha", alpha, "Holder exponent for norms");
  s_fn->add_option("--a", a, "Interval start");
  s_fn->add_option("--b", b, "Interval end");

  auto* s_verify = app.add_subcommand("verify", "Run acceptance checks AC1..AC14");
  s_verify->add_option("--suite", suite, "all, or comma-separated ids (empty for none)");

  auto* s_run = app.add_subcommand("run", "Run an experiment config");
  s_run->add_option("--config", config_path, "Config JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }
  g.seed_set = seed_opt->count() > 0;
  if (g.threads > 0) set_thread_count(g.threads);

  try {
    Json params = Json::object(), budget = Json::object();
    if (samples > 0) budget["samples"] = samples;
    if (!t_grid.empty()) budget["t_grid"] = t_grid;
    if (s_run->parsed()) {
      cfg = read_json_file(config_path);
    } else if (s_moments->parsed() || s_bg->parsed()) {
      cfg["operation"] = s_moments->parsed() ? "moments" : "bg-index";
      cfg["measure"] = spec_arg(measure, "--measure");
      if (!xi.empty()) params["xi"] = xi;
    } else if (s_sample->parsed() || s_density->parsed()) {
      cfg["operation"] = s_sample->parsed() ? "sample" : "density";
      cfg["process"] = spec_arg(process, "--process");
      params["t"] = t;
      if (!x_grid.empty()) params["x"] = x_grid;
    } else if (s_d12->parsed()) {
      cfg["operation"] = "d12";
      cfg["function"] = spec_arg(function, "--function");
      cfg["process"] = spec_arg(process, "--process");
      params["mode"] = mode;
    } else if (s_psi->parsed() || s_fit->parsed()) {
      cfg["operation"] = s_psi->parsed() ? "psi" : "fit-theta";
      cfg["function"] = spec_arg(function, "--function");
      cfg["process"] = spec_arg(process, "--process");
      if (!std::isnan(theta)) params["theta"] = theta;
    } else if (s_probe->parsed()) {
      cfg["operation"] = "probe";
      cfg["process"] = spec_arg(process, "--process");
      params = {{"beta_prime", beta_prime}, {"c", c}, {"t0", t0}, {"levels", levels}};
    } else if (s_kfunc->parsed()) {
      cfg["operation"] = "kfunc";
      cfg[couple == "sequence" ? "sequence" : "function"] = spec_arg(function, "--input");
      params["couple"] = couple;
      if (!std::isnan(theta)) params["theta"] = theta;
      params["q"] = std::isinf(q) ? Json("inf") : Json(q);
    } else if (s_fn->parsed()) {
      cfg["operation"] = "fn";
      cfg["function"] = spec_arg(function, "--function");
      params = {{"action", action}, {"a", a}, {"b", b}};
      if (!x_grid.empty()) params["x"] = x_grid;
      if (!std::isnan(alpha)) params["alpha"] = alpha;
    } else if (s_verify->parsed()) {
      cfg["operation"] = "verify";
      if (suite == "all") {
        params["suite"] = "all";
      } else {
        Json ids = Json::array();
        std::stringstream ss(suite);
        for (std::string id; std::getline(ss, id, ',');)
          if (!id.empty()) ids.push_back(id);
        params["suite"] = ids;
      }
    }
    if (!s_run->parsed()) {
      cfg["params"] = params;
      cfg["budget"] = budget;
    }
    return execute(cfg, g);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const InsufficientData& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDivergent;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDivergent;
  }
}
