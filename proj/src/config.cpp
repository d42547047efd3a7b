#include "wavefield/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wavefield/errors.hpp"

namespace wavefield {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::schema, path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) schema_error(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
  if (!parent.contains(key)) schema_error(path, "missing required object");
  const json& v = parent.at(key);
  if (!v.is_object()) schema_error(path, "expected an object");
  return v;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorKind::range, path + ": value is not finite");
  return x;
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) schema_error(path, "missing required number");
  return number_at(obj.at(key), path);
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number_at(obj.at(key), path);
}

bool optional_bool(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) schema_error(path, "expected a boolean");
  return obj.at(key).get<bool>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

LorentzVector four_vector(const json& obj, const std::string& key, const std::string& path,
                          const LorentzVector& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto xs = number_array(obj.at(key), path);
  if (xs.size() != 4) schema_error(path, "expected 4 components");
  return LorentzVector(xs[0], xs[1], xs[2], xs[3]);
}

ProfileKind profile_kind_at(const std::string& name, const std::string& path) {
  try {
    return profile_kind_from_string(name);
  } catch (const Error&) {
    schema_error(path, "unknown profile kind '" + name + "'");
  }
}

PlaneWaveProfile parse_profile(const json& v, const std::string& path) {
  if (v.is_string()) return make_profile(profile_kind_at(v.get<std::string>(), path), {});
  if (!v.is_object()) schema_error(path, "expected a profile name or object");
  reject_unknown(v, path, {"kind", "amplitude", "frequency", "sigma", "table"});
  if (!v.contains("kind") || !v.at("kind").is_string()) schema_error(path + ".kind", "missing profile kind");
  const auto kind = profile_kind_at(v.at("kind").get<std::string>(), path + ".kind");
  ProfileParams p;
  p.amplitude = optional_number(v, "amplitude", path + ".amplitude").value_or(0.0);
  p.frequency = optional_number(v, "frequency", path + ".frequency").value_or(0.0);
  p.sigma = optional_number(v, "sigma", path + ".sigma").value_or(0.0);
  if (v.contains("table")) {
    const json& t = v.at("table");
    if (!t.is_array()) schema_error(path + ".table", "expected an array of [phi, A1, A2] rows");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string rp = path + ".table[" + std::to_string(i) + "]";
      const auto row = number_array(t[i], rp);
      if (row.size() != 3) schema_error(rp, "expected [phi, A1, A2]");
      p.table_phi.push_back(row[0]);
      p.table_a1.push_back(row[1]);
      p.table_a2.push_back(row[2]);
    }
  }
  return make_profile(kind, p);
}

Grid parse_grid(const json& v, const std::string& path) {
  if (!v.is_object()) schema_error(path, "expected an object");
  reject_unknown(v, path, {"param", "values", "start", "stop", "count"});
  if (!v.contains("param") || !v.at("param").is_string()) schema_error(path + ".param", "missing grid parameter");
  Grid g;
  g.param = v.at("param").get<std::string>();
  if (v.contains("values")) {
    if (v.contains("start") || v.contains("stop") || v.contains("count"))
      schema_error(path, "give either values or start/stop/count");
    g.values = number_array(v.at("values"), path + ".values");
  } else {
    const double a = require_number(v, "start", path + ".start");
    const double b = require_number(v, "stop", path + ".stop");
    if (!v.contains("count") || !v.at("count").is_number_integer()) schema_error(path + ".count", "expected an integer");
    const long n = v.at("count").get<long>();
    if (n < 1 || n > 1000000) throw Error(ErrorKind::range, path + ".count: must be in [1, 1e6]");
    for (long i = 0; i < n; ++i) g.values.push_back(n == 1 ? a : a + (b - a) * double(i) / double(n - 1));
  }
  if (g.values.empty()) throw Error(ErrorKind::range, path + ": grid is empty");
  const bool up = std::is_sorted(g.values.begin(), g.values.end(), std::less<>());
  const bool down = std::is_sorted(g.values.begin(), g.values.end(), std::greater<>());
  const bool strict = std::adjacent_find(g.values.begin(), g.values.end()) == g.values.end();
  if (!(up || down) || !strict) throw Error(ErrorKind::range, path + ": grid must be strictly monotone");
  return g;
}

void set_component(LorentzVector& v, const std::string& param, double value) {
  const int mu = param.back() - '0';
  v[mu] = value;
}

}  // namespace

std::vector<std::string> grid_params(const std::string& command) {
  if (command == "kernel" || command == "spinfactor") return {"e0"};
  if (command == "K") return {"phi"};
  std::vector<std::string> p = {"B", "g", "m", "theta"};
  if (command == "limits") return p;
  for (const char* base : {"x_a.", "x_b."})
    for (int mu = 0; mu < 4; ++mu) p.push_back(base + std::to_string(mu));
  p.push_back("pL.2");
  p.push_back("pL.3");
  return p;
}

RunConfig with_grid_value(const RunConfig& cfg, const std::string& param, double value) {
  RunConfig out = cfg;
  if (param == "e0") out.e0 = value;
  else if (param == "phi") out.phi = value;
  else if (param == "B") out.eval.cfg.B = value;
  else if (param == "g") out.eval.cfg.g = value;
  else if (param == "m") out.eval.m = value;
  else if (param == "theta") out.eval.theta = value;
  else if (param.rfind("x_a.", 0) == 0) set_component(out.eval.x_a, param, value);
  else if (param.rfind("x_b.", 0) == 0) set_component(out.eval.x_b, param, value);
  else if (param.rfind("pL.", 0) == 0) set_component(out.eval.pL, param, value);
  else schema_error("command.grid.param", "unknown parameter '" + param + "'");
  return out;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error("<document>", std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("<document>", "expected a JSON object");
  reject_unknown(doc, "", {"field", "eval", "command"});

  RunConfig rc;
  rc.source = doc;

  const json& field = require_object(doc, "field", "field");
  reject_unknown(field, "field", {"g", "B", "profile", "phi0", "profile_sign_toggle"});
  FieldConfig& fc = rc.eval.cfg;
  fc.g = require_number(field, "g", "field.g");
  fc.B = require_number(field, "B", "field.B");
  if (!field.contains("profile")) schema_error("field.profile", "missing required profile");
  fc.profile = parse_profile(field.at("profile"), "field.profile");
  fc.phi0 = optional_number(field, "phi0", "field.phi0");
  fc.profile_sign_toggle = optional_bool(field, "profile_sign_toggle", "field.profile_sign_toggle", false);

  const json& ev = require_object(doc, "eval", "eval");
  reject_unknown(ev, "eval", {"m", "x_a", "x_b", "pL", "theta", "e0_max", "abs_tol", "rel_tol", "max_nodes",
                              "Y0", "e0", "phi"});
  EvalContext& ctx = rc.eval;
  ctx.m = require_number(ev, "m", "eval.m");
  if (ctx.m < 0.0) throw Error(ErrorKind::range, "eval.m: mass must be non-negative");
  ctx.x_a = four_vector(ev, "x_a", "eval.x_a", LorentzVector(0.0, 0.0, 0.0, 0.0));
  ctx.x_b = four_vector(ev, "x_b", "eval.x_b", LorentzVector(1.0, 0.0, 0.0, 0.0));
  ctx.pL = four_vector(ev, "pL", "eval.pL", LorentzVector(0.0, 0.0, 0.0, 2.0));
  if (ctx.pL[0] != 0.0 || ctx.pL[1] != 0.0)
    throw Error(ErrorKind::range, "eval.pL: transverse slots 0 and 1 must be zero");
  ctx.theta = optional_number(ev, "theta", "eval.theta").value_or(std::numbers::pi / 4.0);
  ctx.e0_max = optional_number(ev, "e0_max", "eval.e0_max");
  if (auto t = optional_number(ev, "abs_tol", "eval.abs_tol")) {
    if (*t <= 0.0) throw Error(ErrorKind::range, "eval.abs_tol: must be positive");
    ctx.quad.abs_tol = *t;
  }
  if (auto t = optional_number(ev, "rel_tol", "eval.rel_tol")) {
    if (*t <= 0.0) throw Error(ErrorKind::range, "eval.rel_tol: must be positive");
    ctx.quad.rel_tol = *t;
  }
  if (ev.contains("max_nodes")) {
    if (!ev.at("max_nodes").is_number_integer() || ev.at("max_nodes").get<long>() < 15)
      schema_error("eval.max_nodes", "expected an integer >= 15");
    ctx.quad.max_nodes = ev.at("max_nodes").get<std::size_t>();
  }
  if (ev.contains("Y0")) {
    const auto y = number_array(ev.at("Y0"), "eval.Y0");
    if (y.size() != 2) schema_error("eval.Y0", "expected 2 transverse components");
    ctx.Y0 = LorentzVector(y[0], y[1], 0.0, 0.0);
  }
  rc.e0 = optional_number(ev, "e0", "eval.e0").value_or(1.0);
  rc.phi = optional_number(ev, "phi", "eval.phi").value_or(0.0);

  if (doc.contains("command")) {
    const json& cmd = doc.at("command");
    if (!cmd.is_object()) schema_error("command", "expected an object");
    reject_unknown(cmd, "command", {"name", "output", "grid"});
    if (cmd.contains("name")) {
      if (!cmd.at("name").is_string()) schema_error("command.name", "expected a string");
      rc.command = cmd.at("name").get<std::string>();
    }
    if (cmd.contains("output")) {
      if (!cmd.at("output").is_string()) schema_error("command.output", "expected a string");
      rc.output = cmd.at("output").get<std::string>();
    }
    if (cmd.contains("grid")) rc.grid = parse_grid(cmd.at("grid"), "command.grid");
    if (rc.grid && !rc.command.empty()) {
      const auto allowed = grid_params(rc.command);
      if (std::find(allowed.begin(), allowed.end(), rc.grid->param) == allowed.end())
        schema_error("command.grid.param", "'" + rc.grid->param + "' cannot be swept by '" + rc.command + "'");
    }
  }
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema_error("<file>", "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace wavefield
