#include "wavefield/run.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>

#include "wavefield/errors.hpp"
#include "wavefield/oracles.hpp"
#include "wavefield/verify.hpp"

namespace wavefield {

namespace {

using nlohmann::json;
using Row = std::vector<std::string>;

json vector_json(const LorentzVector& v) {
  json re = json::array(), im = json::array();
  for (int mu = 0; mu < 4; ++mu) {
    re.push_back(v[mu].real());
    im.push_back(v[mu].imag());
  }
  return {{"re", re}, {"im", im}};
}

std::vector<std::string> matrix_columns() {
  std::vector<std::string> c;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      c.push_back("G" + std::to_string(r) + std::to_string(s) + "_re");
      c.push_back("G" + std::to_string(r) + std::to_string(s) + "_im");
    }
  return c;
}

void append_matrix(Row& row, const Matrix4C& m) {
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      row.push_back(format_number(m(r, s).real()));
      row.push_back(format_number(m(r, s).imag()));
    }
}

void append(Row& row, cplx z) {
  row.push_back(format_number(z.real()));
  row.push_back(format_number(z.imag()));
}

// Evaluates `fn(i)` for every grid index concurrently; rows come back in
// grid order and the first failing index (in grid order) is rethrown.
template <class Fn>
std::vector<Row> evaluate_grid(std::size_t n, const Fn& fn) {
  std::vector<Row> rows(n);
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) if (n > 1)
  for (long i = 0; i < count; ++i) {
    try {
      rows[i] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

struct GridView {
  std::optional<std::string> param;
  std::vector<double> values;
};

GridView grid_for(const std::string& command, const RunConfig& cfg, const std::string& scalar_param,
                  double scalar_value) {
  GridView v;
  if (cfg.grid) {
    const auto allowed = grid_params(command);
    if (std::find(allowed.begin(), allowed.end(), cfg.grid->param) == allowed.end()) {
      throw Error(ErrorKind::schema, "command.grid.param: '" + cfg.grid->param + "' is not a parameter of '" +
                                         command + "'");
    }
    v.param = cfg.grid->param;
    v.values = cfg.grid->values;
  } else if (!scalar_param.empty()) {
    v.param = scalar_param;
    v.values = {scalar_value};
  } else {
    v.values = {0.0};
  }
  return v;
}

RunConfig point_config(const RunConfig& cfg, const GridView& grid, std::size_t i) {
  if (!grid.param) return cfg;
  RunConfig out = with_grid_value(cfg, *grid.param, grid.values[i]);
  // Grid points already run concurrently; keep each point's quadrature serial.
  if (grid.values.size() > 1) out.eval.quad.execution = Execution::serial;
  return out;
}

Row identity_row(const std::string& name, double residual, double tol) {
  return {name, format_number(residual), format_number(tol), residual <= tol ? "1" : "0"};
}

RunOutput run_identities(const RunConfig& cfg) {
  RunOutput out;
  out.columns = {"identity", "residual", "tolerance", "pass"};
  const auto& gam = gammas();
  const Matrix4C I = Matrix4C::Identity();
  double cliff = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const double gmn = mu == nu ? kMetric[mu] : 0.0;
      cliff = std::max(cliff, max_abs(anticommutator(gam[mu], gam[nu]) - 2.0 * gmn * I));
    }
  const Matrix4C Pp = projector_plus(), Pm = projector_minus();
  const LorentzVector e = epsilon(), es = epsilon_star(), k = wave_vector();
  const Matrix4C f = cfg.eval.cfg.tensor().as_map();
  const cplx iB(0.0, cfg.eval.cfg.B);
  const auto pair = check_identity_42(cplx(cfg.e0, 0.0));

  out.rows.push_back(identity_row("clifford", cliff, 1e-12));
  out.rows.push_back(identity_row("projector_sum", max_abs(Pp + Pm - I), 4e-16));
  out.rows.push_back(identity_row("projector_plus_idempotent", max_abs(Pp * Pp - Pp), 1e-12));
  out.rows.push_back(identity_row("projector_minus_idempotent", max_abs(Pm * Pm - Pm), 1e-12));
  out.rows.push_back(identity_row("projector_orthogonal", max_abs(Pp * Pm), 1e-12));
  out.rows.push_back(identity_row("eps_eps", std::abs(dot(e, e)), 0.0));
  out.rows.push_back(identity_row("eps_epsstar", std::abs(dot(e, es) - 1.0), 4e-16));
  out.rows.push_back(identity_row("k_k", std::abs(dot(k, k)), 0.0));
  out.rows.push_back(identity_row("k_eps", std::abs(dot(k, e)), 0.0));
  out.rows.push_back(identity_row("k_epsstar", std::abs(dot(k, es)), 0.0));
  out.rows.push_back(identity_row("f_eps", (f * e - iB * e).max_abs(), 1e-12));
  out.rows.push_back(identity_row("f_epsstar", (f * es + iB * es).max_abs(), 1e-12));
  out.rows.push_back(identity_row("tanh_projector_identity", max_abs(pair.lhs - pair.rhs), 1e-10));
  return out;
}

RunOutput run_kernel(const RunConfig& cfg) {
  RunOutput out;
  out.columns = {"e0", "kernel_re", "kernel_im", "near_singularity"};
  const auto grid = grid_for("kernel", cfg, "e0", cfg.e0);
  const auto& ctx = cfg.eval;
  const TransverseEndpoints ep{ctx.x_a[0].real(), ctx.x_a[1].real(), ctx.x_b[0].real(), ctx.x_b[1].real()};
  out.rows = evaluate_grid(grid.values.size(), [&](std::size_t i) {
    const double e0 = grid.values[i];
    Row row{format_number(e0)};
    append(row, schwinger_kernel(cplx(e0, 0.0), ep, ctx.cfg));
    row.push_back(near_caustic(e0, ctx.cfg.g, ctx.cfg.B) ? "1" : "0");
    return row;
  });
  return out;
}

RunOutput run_K(const RunConfig& cfg) {
  RunOutput out;
  out.columns = {"phi", "K_re", "K_im", "Kstar_re", "Kstar_im", "error_estimate", "nodes"};
  const auto grid = grid_for("K", cfg, "phi", cfg.phi);
  const double phi0 = resolved_phi0(cfg.eval);
  out.rows = evaluate_grid(grid.values.size(), [&](std::size_t i) {
    const double phi = grid.values[i];
    const KValue K = K_function(phi, cfg.eval.pL, cfg.eval.cfg, phi0, cfg.eval.inner_quad);
    Row row{format_number(phi)};
    append(row, K.value);
    append(row, K.conj());
    row.push_back(format_number(K.diagnostics.error_estimate));
    row.push_back(std::to_string(K.diagnostics.nodes));
    return row;
  });
  return out;
}

RunOutput run_spinfactor(const RunConfig& cfg) {
  RunOutput out;
  out.columns = {"e0"};
  for (const auto& c : matrix_columns()) out.columns.push_back(c);
  for (const char* c : {"K_b_re", "K_b_im", "K_a_re", "K_a_im"}) out.columns.push_back(c);
  const auto grid = grid_for("spinfactor", cfg, "e0", cfg.e0);
  const auto& ctx = cfg.eval;
  const double phi_a = dot(wave_vector(), ctx.x_a).real();
  const double phi_b = dot(wave_vector(), ctx.x_b).real();
  const double phi0 = resolved_phi0(ctx);
  const cplx K_b = K_function(phi_b, ctx.pL, ctx.cfg, phi0, ctx.inner_quad).value;
  const cplx K_a = K_function(phi_a, ctx.pL, ctx.cfg, phi0, ctx.inner_quad).value;
  out.rows = evaluate_grid(grid.values.size(), [&](std::size_t i) {
    const double e0 = grid.values[i];
    Row row{format_number(e0)};
    append_matrix(row, spin_factor_from_K(cplx(e0, 0.0), ctx.cfg.g * ctx.cfg.B, K_b, K_a));
    append(row, K_b);
    append(row, K_a);
    return row;
  });
  return out;
}

RunOutput run_propagator(const std::string& command, const RunConfig& cfg) {
  RunOutput out;
  const auto grid = grid_for(command, cfg, "", 0.0);
  if (grid.param) out.columns.push_back(*grid.param);
  for (const auto& c : matrix_columns()) out.columns.push_back(c);
  for (const char* c : {"error_estimate", "nodes", "near_singularity", "contour_angle", "e0_max"})
    out.columns.push_back(c);
  out.rows = evaluate_grid(grid.values.size(), [&](std::size_t i) {
    const RunConfig pc = point_config(cfg, grid, i);
    PropagatorValue v;
    if (command == "gf") v = gf_fixed_pL(pc.eval);
    else if (command == "gf-k0") v = gf_k_zero(pc.eval);
    else v = dirac_apply(pc.eval, make_gf_evaluator(pc.eval));
    Row row;
    if (grid.param) row.push_back(format_number(grid.values[i]));
    append_matrix(row, v.matrix);
    row.push_back(format_number(v.diagnostics.error_estimate));
    row.push_back(std::to_string(v.diagnostics.nodes));
    row.push_back(v.diagnostics.near_singularity ? "1" : "0");
    row.push_back(format_number(v.contour_angle));
    row.push_back(format_number(v.e0_max));
    return row;
  });
  return out;
}

double relative_to_free(const Matrix4C& G, cplx free) {
  const Matrix4C ref = free * Matrix4C::Identity();
  return max_abs(G - ref) / max_abs(ref);
}

RunOutput run_limits(const RunConfig& cfg) {
  RunOutput out;
  const auto grid = grid_for("limits", cfg, "B", cfg.eval.cfg.B);
  out.columns = {*grid.param, "free_re", "free_im", "gf_k0_rel_err", "gf_zero_profile_rel_err"};
  out.rows = evaluate_grid(grid.values.size(), [&](std::size_t i) {
    RunConfig pc = point_config(cfg, grid, i);
    pc.eval.cfg.profile = PlaneWaveProfile();
    const auto& c = pc.eval;
    oracles::FreeInput in;
    in.dx1 = (c.x_b[0] - c.x_a[0]).real();
    in.dx2 = (c.x_b[1] - c.x_a[1]).real();
    in.long_phase = dot(c.pL, longitudinal_part(c.x_b - c.x_a)).real();
    in.pL2 = dot(c.pL, c.pL).real();
    in.m = c.m;
    const cplx free = oracles::free_propagator_scalar(in);
    Row row{format_number(grid.values[i])};
    append(row, free);
    row.push_back(format_number(relative_to_free(gf_k_zero(c).matrix, free)));
    row.push_back(format_number(relative_to_free(gf_fixed_pL(c).matrix, free)));
    return row;
  });
  return out;
}

RunOutput run_verify() {
  RunOutput out;
  out.columns = {"criterion", "name", "pass", "measured", "tolerance"};
  const auto results = run_acceptance();
  for (const auto& r : results) {
    out.rows.push_back({std::to_string(r.id), r.name, r.pass ? "1" : "0", format_number(r.measured),
                        format_number(r.tolerance)});
  }
  out.sidecar["report"] = report_json(results);
  out.exit_code = all_passed(results) ? 0 : exit_code(ErrorKind::verification);
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"identities", "kernel", "K",      "spinfactor", "gf",
                                                 "gf-k0",      "dirac",  "verify", "limits"};
  return names;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string RunOutput::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_cell(columns[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

json convention_ledger(const RunConfig& cfg) {
  const auto& ctx = cfg.eval;
  json ledger;
  ledger["metric"] = kMetric;
  ledger["wave_vector"] = vector_json(wave_vector());
  ledger["polarization"] = vector_json(epsilon());
  ledger["contour"] = "e0 = s * exp(+i * theta), s in (0, e0_max]";
  ledger["contour_angle"] = ctx.theta;
  ledger["phi0"] = resolved_phi0(ctx);
  ledger["phi0_rule"] = ctx.cfg.phi0 ? "configured" : "k.x_a";
  ledger["normalization"] = {kNormalization.real(), kNormalization.imag()};
  ledger["profile_sign_toggle"] = ctx.cfg.profile_sign_toggle;
  ledger["Y0"] = {ctx.Y0[0].real(), ctx.Y0[1].real()};
  ledger["csv_schema_version"] = kCsvSchemaVersion;
  return ledger;
}

std::vector<std::string> ledger_mismatches(const json& ledger) {
  std::vector<std::string> bad;
  auto check = [&](const char* key, const json& expected) {
    if (!ledger.contains(key) || ledger.at(key) != expected) bad.push_back(key);
  };
  check("metric", json(kMetric));
  check("wave_vector", vector_json(wave_vector()));
  check("polarization", vector_json(epsilon()));
  check("normalization", json{kNormalization.real(), kNormalization.imag()});
  check("csv_schema_version", kCsvSchemaVersion);
  return bad;
}

RunOutput run(const std::string& command, const RunConfig& cfg) {
  RunOutput out;
  if (command == "identities") out = run_identities(cfg);
  else if (command == "kernel") out = run_kernel(cfg);
  else if (command == "K") out = run_K(cfg);
  else if (command == "spinfactor") out = run_spinfactor(cfg);
  else if (command == "gf" || command == "gf-k0" || command == "dirac") out = run_propagator(command, cfg);
  else if (command == "limits") out = run_limits(cfg);
  else if (command == "verify") out = run_verify();
  else throw Error(ErrorKind::schema, "command: unknown command '" + command + "'");

  out.sidecar["tool"] = "wavefield";
  out.sidecar["version"] = kToolVersion;
  out.sidecar["command"] = command;
  out.sidecar["csv_schema_version"] = kCsvSchemaVersion;
  out.sidecar["columns"] = out.columns;
  out.sidecar["rows"] = out.rows.size();
  out.sidecar["conventions"] = convention_ledger(cfg);
  out.sidecar["config"] = cfg.source;
  out.sidecar["exit_code"] = out.exit_code;
  return out;
}

void write_outputs(const RunOutput& out, const std::string& path) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw Error(ErrorKind::schema, "--out: cannot write '" + path + "'");
  csv << out.csv();
  std::ofstream side(path + ".json", std::ios::binary);
  if (!side) throw Error(ErrorKind::schema, "--out: cannot write '" + path + ".json'");
  side << out.sidecar.dump(2) << '\n';
}

}  // namespace wavefield
