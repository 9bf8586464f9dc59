#include "levylab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "levylab/error.hpp"

namespace levylab {
namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ValidationError("expected an object", path);
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field", path + "." + key);
  return *it;
}

double number(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number()) throw ValidationError("expected a number", path + "." + key);
  return v.get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  return number(j, key, path);
}

const Json& array(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_array()) throw ValidationError("expected an array", path + "." + key);
  return v;
}

std::string variant_of(const Json& j, const std::string& path) {
  const Json& v = field(j, "variant", path);
  if (!v.is_string()) throw ValidationError("expected a string", path + ".variant");
  return v.get<std::string>();
}

std::string at(const std::string& path, const std::string& key, std::size_t i) {
  return path + "." + key + "[" + std::to_string(i) + "]";
}

std::vector<Atom> atoms_from(const Json& j, const std::string& path) {
  std::vector<Atom> out;
  const Json& arr = array(j, "atoms", path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = at(path, "atoms", i);
    out.push_back({number(arr[i], "x", p), number(arr[i], "lambda", p)});
  }
  return out;
}

Json atoms_json(const std::vector<Atom>& atoms) {
  Json arr = Json::array();
  for (const auto& a : atoms) arr.push_back({{"x", a.x}, {"lambda", a.lambda}});
  return arr;
}

NBVMixture mixture_from(const Json& j, const std::string& path) {
  NBVMixture m;
  if (j.contains("atoms")) {
    const Json& arr = array(j, "atoms", path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at(path, "atoms", i);
      m.atoms.push_back({number(arr[i], "u", p), number(arr[i], "w", p)});
    }
  }
  if (j.contains("pieces")) {
    const Json& arr = array(j, "pieces", path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at(path, "pieces", i);
      m.pieces.push_back({number(arr[i], "lo", p), number(arr[i], "hi", p), number(arr[i], "density", p)});
    }
  }
  return m;
}

Json mixture_json(const NBVMixture& m) {
  Json atoms = Json::array(), pieces = Json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"u", a.u}, {"w", a.w}});
  for (const auto& p : m.pieces) pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"density", p.density}});
  return {{"atoms", atoms}, {"pieces", pieces}};
}

// Re-run validation so range errors carry the JSON path of the spec.
template <class T>
T validated(T value, const std::string& path) {
  try {
    validate(value);
  } catch (const ValidationError& e) {
    const std::string sub = join_path(path, e.path());
    std::string msg = e.what();
    if (!e.path().empty() && msg.rfind(e.path() + ": ", 0) == 0) msg = msg.substr(e.path().size() + 2);
    throw ValidationError(msg, sub);
  }
  return value;
}

}  // namespace

std::string join_path(const std::string& prefix, const std::string& sub) {
  std::string out = prefix;
  std::size_t pos = 0;
  while (pos <= sub.size() && !sub.empty()) {
    const auto next = sub.find('/', pos);
    const std::string seg = sub.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!seg.empty()) {
      const bool index = seg.find_first_not_of("0123456789") == std::string::npos;
      out += index ? "[" + seg + "]" : "." + seg;
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), what);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

LevyMeasure measure_from_json(const Json& j, const std::string& path) {
  const std::string v = variant_of(j, path);
  if (v == "symmetric_stable")
    return validated(LevyMeasure{SymmetricStable{number(j, "b", path), number(j, "beta", path)}}, path);
  if (v == "log_damped_stable")
    return validated(LevyMeasure{LogDampedStable{number(j, "b", path), number(j, "beta", path)}}, path);
  if (v == "finite_discrete") return validated(LevyMeasure{FiniteDiscrete{atoms_from(j, path)}}, path);
  if (v == "generic_density") {
    GenericDensity g;
    const Json& arr = array(j, "terms", path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at(path, "terms", i);
      g.terms.push_back({number(arr[i], "b", p), number(arr[i], "beta", p), number_or(arr[i], "lambda", 0.0, p)});
    }
    g.integrability_tol = number_or(j, "integrability_tol", g.integrability_tol, path);
    return validated(LevyMeasure{g}, path);
  }
  throw ValidationError("unknown variant '" + v + "'", path + ".variant");
}

Json to_json(const LevyMeasure& m) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SymmetricStable>) {
          return {{"variant", "symmetric_stable"}, {"b", v.b}, {"beta", v.beta}};
        } else if constexpr (std::is_same_v<T, LogDampedStable>) {
          return {{"variant", "log_damped_stable"}, {"b", v.b}, {"beta", v.beta}};
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          return {{"variant", "finite_discrete"}, {"atoms", atoms_json(v.atoms)}};
        } else {
          Json terms = Json::array();
          for (const auto& t : v.terms) terms.push_back({{"b", t.b}, {"beta", t.beta}, {"lambda", t.lambda}});
          return {{"variant", "generic_density"}, {"terms", terms}, {"integrability_tol", v.integrability_tol}};
        }
      },
      m);
}

Process process_from_json(const Json& j, const std::string& path) {
  const std::string v = variant_of(j, path);
  if (v == "stable") return validated(Process{StableParams{number(j, "beta", path), number(j, "c", path)}}, path);
  if (v == "compound_poisson") return validated(Process{CompoundPoisson{atoms_from(j, path)}}, path);
  throw ValidationError("unknown variant '" + v + "'", path + ".variant");
}

Json to_json(const Process& p) {
  if (const auto* s = std::get_if<StableParams>(&p)) return {{"variant", "stable"}, {"beta", s->beta}, {"c", s->c}};
  return {{"variant", "compound_poisson"}, {"atoms", atoms_json(std::get<CompoundPoisson>(p).atoms)}};
}

FunctionSpec function_from_json(const Json& j, const std::string& path) {
  const std::string v = variant_of(j, path);
  FunctionSpec f;
  if (v == "ciesielski") {
    Ciesielski c;
    c.alpha = number(j, "alpha", path);
    const double ell = number_or(j, "ell", 0.0, path);
    const double trunc = number_or(j, "truncation", -1.0, path);
    if (ell != std::floor(ell)) throw ValidationError("must be an integer", path + ".ell");
    if (trunc != std::floor(trunc)) throw ValidationError("must be an integer", path + ".truncation");
    c.ell = static_cast<int>(ell);
    c.truncation = static_cast<int>(trunc);
    f = c;
  } else if (v == "indicator") {
    f = Indicator{number(j, "K", path)};
  } else if (v == "nbv_mixture") {
    f = mixture_from(j, path);
  } else if (v == "power_cap") {
    f = PowerCap{number(j, "alpha", path)};
  } else if (v == "smoothed_indicator") {
    f = SmoothedIndicator{number(j, "theta", path), number(j, "t", path),
                          mixture_from(field(j, "mixture", path), path + ".mixture")};
  } else if (v == "constant") {
    f = Constant{number(j, "value", path)};
  } else {
    throw ValidationError("unknown variant '" + v + "'", path + ".variant");
  }
  return validated(f, path);
}

Json to_json(const FunctionSpec& f) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ciesielski>) {
          return {{"variant", "ciesielski"}, {"alpha", v.alpha}, {"ell", v.ell}, {"truncation", v.last_term()}};
        } else if constexpr (std::is_same_v<T, Indicator>) {
          return {{"variant", "indicator"}, {"K", v.K}};
        } else if constexpr (std::is_same_v<T, NBVMixture>) {
          Json j = mixture_json(v);
          j["variant"] = "nbv_mixture";
          return j;
        } else if constexpr (std::is_same_v<T, PowerCap>) {
          return {{"variant", "power_cap"}, {"alpha", v.alpha}};
        } else if constexpr (std::is_same_v<T, SmoothedIndicator>) {
          return {{"variant", "smoothed_indicator"}, {"theta", v.theta}, {"t", v.t}, {"mixture", mixture_json(v.mixture)}};
        } else if constexpr (std::is_same_v<T, Constant>) {
          return {{"variant", "constant"}, {"value", v.value}};
        } else {
          return {{"variant", "custom"}, {"name", v.name}};
        }
      },
      f);
}

SequenceElement sequence_from_json(const Json& j, const std::string& path) {
  SequenceElement a;
  const Json& arr = array(j, "c", path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ValidationError("expected a number", at(path, "c", i));
    a.c.push_back(arr[i].get<double>());
  }
  return validated(a, path);
}

Json to_json(const D12Report& r) {
  return {{"l2_norm_sq", format_double(r.l2_norm_sq)},
          {"displacement_integral", format_double(r.displacement_integral)},
          {"displacement_lower", format_double(r.displacement_lower)},
          {"d12_norm_sq", format_double(r.d12_norm_sq)},
          {"d12_lower", format_double(r.d12_lower)},
          {"method", r.method},
          {"verdict", r.verdict},
          {"error", format_double(r.error)},
          {"stderr", format_double(r.stderr_)},
          {"raw_shells", r.raw_shells}};
}

Json to_json(const SmoothnessFit& f) {
  return {{"slope", format_double(f.slope)},         {"intercept", format_double(f.intercept)},
          {"r_squared", format_double(f.r_squared)}, {"theta_max", format_double(f.theta_max)},
          {"half_width", format_double(f.half_width)}, {"used_points", f.used_points}};
}

Json to_json(const MembershipStat& m) {
  return {{"theta", format_double(m.theta)}, {"sup_stat", format_double(m.sup_stat)}, {"verdict", m.verdict},
          {"rule", m.rule}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace levylab
