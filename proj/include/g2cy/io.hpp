#pragma once

// JSON documents for gluing configurations and reports.
//
// Config schema "g2cy.glue-config/1". Exact quantities (T, L, v, rate,
// amplitude) accept integers, "p/q" strings, decimal strings or JSON numbers;
// numbers are read through their shortest decimal form, so 0.02 is 1/50.
// Report schema "g2cy.glue-report/1".

#include <algorithm>
#include <cctype>
#include <type_traits>
#include <string>
#include <vector>

#include "g2cy/pipeline.hpp"
#include "json.hpp"

namespace g2cy {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "g2cy.glue-config/1";
inline constexpr const char* kReportSchema = "g2cy.glue-report/1";

/// Slot names on the cylinder: theta, cross-section x1..x5, t.
inline const std::vector<std::string>& slot_names() {
  static const std::vector<std::string> n{"theta", "x1", "x2", "x3", "x4", "x5", "t"};
  return n;
}

/// Parses "p/q", "-12", "0.02", "1.5e-3".
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      Rational q(text.substr(slash + 1));
      if (q == 0) throw ConfigError("zero denominator");
      return Rational(text.substr(0, slash)) / q;
    }
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    std::string digits;
    long exp10 = 0;
    bool any = false, dot = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        any = true;
        if (dot) --exp10;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
    }
    if (!any) throw ConfigError("not a number");
    if (i < text.size()) {
      if (text[i] != 'e' && text[i] != 'E') throw ConfigError("trailing characters");
      exp10 += std::stol(text.substr(i + 1));
    }
    Rational r(digits);
    Rational ten(10);
    for (long k = 0; k < std::abs(exp10); ++k) r = exp10 > 0 ? Rational(r * ten) : Rational(r / ten);
    return neg ? Rational(-r) : r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("not a number");
  }
}

namespace detail {

inline Rational rational_field(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected a number or a \"p/q\" string");
}

template <class T>
T typed_field(const Json& j, const std::string& where) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!j.is_number()) throw ConfigError("");
    } else {
      if (!j.is_string()) throw ConfigError("");
    }
    return j.get<T>();
  } catch (const std::exception&) {
    const char* kind = std::is_same_v<T, bool> ? "a boolean" : std::is_integral_v<T> ? "an integer" : std::is_floating_point_v<T> ? "a number" : "a string";
    throw ConfigError(where + ": expected " + kind);
  }
}

inline void reject_unknown(const Json& obj, const std::vector<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == it.key();
    if (!ok) throw ConfigError((where.empty() ? "" : where + ".") + it.key() + ": unknown field");
  }
}

inline std::string rational_text(const Rational& q) { return q.str(); }

}  // namespace detail

inline GluingConfig parse_config(const Json& j) {
  using detail::rational_field;
  using detail::typed_field;
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  detail::reject_unknown(j, {"schema", "T", "twisting", "perturbations", "solver", "positivity_points", "class_tolerance"}, "");
  if (!j.contains("schema") || j["schema"] != kConfigSchema)
    throw ConfigError(std::string("schema: expected \"") + kConfigSchema + "\"");
  GluingConfig c;
  if (j.contains("T")) c.T = rational_field(j["T"], "T");
  if (j.contains("twisting")) {
    const auto& t = j["twisting"];
    if (!t.is_object()) throw ConfigError("twisting: expected an object");
    detail::reject_unknown(t, {"L", "v"}, "twisting");
    if (t.contains("L")) c.L = rational_field(t["L"], "twisting.L");
    if (t.contains("v")) {
      if (!t["v"].is_array()) throw ConfigError("twisting.v: expected an array");
      c.harmonic_v.clear();
      for (std::size_t i = 0; i < t["v"].size(); ++i)
        c.harmonic_v.push_back(rational_field(t["v"][i], "twisting.v[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("perturbations")) {
    if (!j["perturbations"].is_array()) throw ConfigError("perturbations: expected an array");
    for (std::size_t i = 0; i < j["perturbations"].size(); ++i) {
      const auto& p = j["perturbations"][i];
      const std::string w = "perturbations[" + std::to_string(i) + "]";
      if (!p.is_object()) throw ConfigError(w + ": expected an object");
      detail::reject_unknown(p, {"target", "side", "mode", "trig", "power", "rate", "amplitude", "primitive"}, w);
      for (const char* req : {"target", "side", "mode", "amplitude"})
        if (!p.contains(req)) throw ConfigError(w + "." + req + ": missing");
      PerturbationSpec s;
      s.target = typed_field<std::string>(p["target"], w + ".target");
      s.side = typed_field<int>(p["side"], w + ".side");
      if (!p["mode"].is_array()) throw ConfigError(w + ".mode: expected an array");
      for (std::size_t k = 0; k < p["mode"].size(); ++k)
        s.mode.push_back(typed_field<int>(p["mode"][k], w + ".mode[" + std::to_string(k) + "]"));
      if (p.contains("trig")) {
        auto trig = typed_field<std::string>(p["trig"], w + ".trig");
        if (trig != "cos" && trig != "sin") throw ConfigError(w + ".trig: expected \"cos\" or \"sin\"");
        s.cosine = trig == "cos";
      }
      if (p.contains("power")) s.power = typed_field<int>(p["power"], w + ".power");
      if (p.contains("rate")) s.rate = rational_field(p["rate"], w + ".rate");
      s.amplitude = rational_field(p["amplitude"], w + ".amplitude");
      if (p.contains("primitive")) {
        if (!p["primitive"].is_array()) throw ConfigError(w + ".primitive: expected an array of slot names");
        for (std::size_t k = 0; k < p["primitive"].size(); ++k) {
          auto name = typed_field<std::string>(p["primitive"][k], w + ".primitive[" + std::to_string(k) + "]");
          const auto& names = slot_names();
          auto it = std::find(names.begin(), names.end(), name);
          if (it == names.end()) throw ConfigError(w + ".primitive[" + std::to_string(k) + "]: unknown slot '" + name + "'");
          s.primitive.push_back(static_cast<int>(it - names.begin()));
        }
      }
      c.perturbations.push_back(std::move(s));
    }
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (!s.is_object()) throw ConfigError("solver: expected an object");
    detail::reject_unknown(s, {"points", "tolerance", "max_iterations", "line_search", "min_eigenvalue", "gmres_tolerance", "gmres_max", "refine_factor"}, "solver");
    auto& o = c.solver;
    if (s.contains("points")) o.points = typed_field<int>(s["points"], "solver.points");
    if (s.contains("tolerance")) o.tolerance = typed_field<double>(s["tolerance"], "solver.tolerance");
    if (s.contains("max_iterations")) o.max_iterations = typed_field<int>(s["max_iterations"], "solver.max_iterations");
    if (s.contains("line_search")) o.line_search = typed_field<bool>(s["line_search"], "solver.line_search");
    if (s.contains("min_eigenvalue")) o.min_eigenvalue = typed_field<double>(s["min_eigenvalue"], "solver.min_eigenvalue");
    if (s.contains("gmres_tolerance")) o.gmres_tolerance = typed_field<double>(s["gmres_tolerance"], "solver.gmres_tolerance");
    if (s.contains("gmres_max")) o.gmres_max = typed_field<int>(s["gmres_max"], "solver.gmres_max");
    if (s.contains("refine_factor")) o.refine_factor = typed_field<int>(s["refine_factor"], "solver.refine_factor");
  }
  if (j.contains("positivity_points")) c.positivity_points = typed_field<int>(j["positivity_points"], "positivity_points");
  if (j.contains("class_tolerance")) c.class_tolerance = typed_field<double>(j["class_tolerance"], "class_tolerance");
  validate_config(c);
  return c;
}

inline GluingConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline Json config_json(const GluingConfig& c) {
  using detail::rational_text;
  Json j;
  j["schema"] = kConfigSchema;
  j["T"] = rational_text(c.T);
  Json v = Json::array();
  for (const auto& x : c.harmonic_v) v.push_back(rational_text(x));
  j["twisting"] = {{"L", rational_text(c.L)}, {"v", v}};
  Json ps = Json::array();
  for (const auto& p : c.perturbations) {
    Json prim = Json::array();
    for (int s : p.primitive) prim.push_back(slot_names()[static_cast<std::size_t>(s)]);
    ps.push_back({{"target", p.target},
                  {"side", p.side},
                  {"mode", p.mode},
                  {"trig", p.cosine ? "cos" : "sin"},
                  {"power", p.power},
                  {"rate", rational_text(p.rate)},
                  {"amplitude", rational_text(p.amplitude)},
                  {"primitive", prim}});
  }
  j["perturbations"] = ps;
  const auto& o = c.solver;
  j["solver"] = {{"points", o.points},
                 {"tolerance", o.tolerance},
                 {"max_iterations", o.max_iterations},
                 {"line_search", o.line_search},
                 {"min_eigenvalue", o.min_eigenvalue},
                 {"gmres_tolerance", o.gmres_tolerance},
                 {"gmres_max", o.gmres_max},
                 {"refine_factor", o.refine_factor}};
  j["positivity_points"] = c.positivity_points;
  j["class_tolerance"] = c.class_tolerance;
  return j;
}

/// Class vector on the neck torus: slot labels theta, x1..x5, s.
inline Json class_json(const AltForm<double>& a) {
  CohomologyVector<double> v{a, {"theta", "x1", "x2", "x3", "x4", "x5", "s"}};
  return {{"degree", a.degree()}, {"basis", v.basis_labels()}, {"coordinates", v.coordinates()}};
}

struct ReportOptions {
  bool timing = false;  // wall-clock fields break bit-identical output
};

inline Json report_json(const GlueReport& r, const ReportOptions& opt = {}) {
  Json j;
  j["schema"] = kReportSchema;
  j["config"] = config_json(r.config);
  j["passed"] = r.classes.passed() && r.solve.report.converged && r.fields.all_valid;
  j["glued"] = {{"min_eigenvalue", r.glued.min_eigenvalue},
                {"positivity_grid", std::vector<int>(r.glued.positivity_grid.n.begin(), r.glued.positivity_grid.n.end())}};
  const auto& s = r.solve.report;
  Json hist = Json::array();
  for (const auto& h : s.history) {
    Json row = {{"iteration", h.iteration}, {"residual", h.residual}, {"full_residual", h.full_residual}, {"damping", h.damping},
                {"gmres_iterations", h.gmres_iterations}};
    if (opt.timing) row["seconds"] = h.seconds;
    hist.push_back(row);
  }
  j["solver"] = {{"converged", s.converged},
                 {"iterations", s.iterations},
                 {"grid", std::vector<int>(r.solve.base.spec.n.begin(), r.solve.base.spec.n.end())},
                 {"residual", s.residual},
                 {"full_residual", s.full_residual},
                 {"truncation_floor", s.truncation_floor},
                 {"torsion", s.torsion},
                 {"closedness", s.closedness},
                 {"min_eigenvalue", s.min_eigenvalue},
                 {"class_change", s.class_change},
                 {"discretization_dropped", r.discretization_dropped},
                 {"message", s.message},
                 {"history", hist}};
  j["fields"] = {{"s1_defect", r.s1_defect},
                 {"max_su3_residual", r.fields.max_su3_residual},
                 {"all_valid", r.fields.all_valid},
                 {"L_variation", r.fields.L_variation}};
  j["c"] = r.classes.c;
  j["L_measured"] = r.L_measured;
  j["classes"] = {{"phi", class_json(r.phi_class)},
                  {"phi_solved", class_json(r.solved_class)},
                  {"re_omega", class_json(r.re_class)},
                  {"im_omega", class_json(r.im_class)},
                  {"omega", class_json(r.omega_class)},
                  {"z", class_json(r.z_class)},
                  {"v", class_json(r.v_class)},
                  {"glued_re_omega", class_json(r.glued_re)},
                  {"glued_omega", class_json(r.glued_omega)},
                  {"glued_v", class_json(r.glued_v)}};
  Json rel = Json::array();
  for (const auto& x : r.classes.relations)
    rel.push_back({{"name", x.name}, {"statement", x.statement}, {"residual", x.residual}, {"passed", x.passed}});
  j["relations"] = rel;
  if (opt.timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace g2cy
