#include "rheograph/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rheograph/channel.hpp"
#include "rheograph/error.hpp"
#include "rheograph/graphcheck.hpp"
#include "rheograph/models.hpp"
#include "rheograph/shear.hpp"

namespace rheo {

namespace {

namespace fs = std::filesystem;

// --- formatting ------------------------------------------------------------

std::string fmt_g(double x, int sig) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", sig, x);
  return buf;
}

// --- config schema plumbing -------------------------------------------------

// Strict field reader: every key must be consumed by exactly one getter and
// every omitted field is materialized with its documented default, so the
// normalized object is the fully-defaulted config --print-config emits.
class Fields {
 public:
  Fields(const json& raw, std::string ctx) : raw_(raw), ctx_(std::move(ctx)) {
    if (!raw_.is_object())
      fail(ErrorCode::InvalidConfig, ctx_ + " must be a JSON object");
  }

  double num(const char* key, double def) {
    const json* v = take(key);
    if (!v) return set(key, def);
    if (!v->is_number())
      fail(ErrorCode::InvalidConfig, where(key) + " must be a number");
    return set(key, v->get<double>());
  }

  long long integer(const char* key, long long def) {
    const json* v = take(key);
    if (!v) return (void)set(key, json(def)), def;
    if (!v->is_number_integer())
      fail(ErrorCode::InvalidConfig, where(key) + " must be an integer");
    long long x = v->get<long long>();
    set(key, json(x));
    return x;
  }

  std::string str(const char* key, const std::string& def) {
    const json* v = take(key);
    if (!v) return (void)set(key, json(def)), def;
    if (!v->is_string())
      fail(ErrorCode::InvalidConfig, where(key) + " must be a string");
    std::string s = v->get<std::string>();
    set(key, json(s));
    return s;
  }

  json object_required(const char* key) {
    const json* v = take(key);
    if (!v || !v->is_object())
      fail(ErrorCode::InvalidConfig, where(key) + " must be a JSON object");
    set(key, *v);
    return *v;
  }

  json object_or_null(const char* key) {
    const json* v = take(key);
    if (!v || v->is_null()) return (void)set(key, json(nullptr)), json(nullptr);
    if (!v->is_object())
      fail(ErrorCode::InvalidConfig,
           where(key) + " must be a JSON object or null");
    set(key, *v);
    return *v;
  }

  json array(const char* key, const json& def) {
    const json* v = take(key);
    if (!v) return (void)set(key, def), def;
    if (!v->is_array())
      fail(ErrorCode::InvalidConfig, where(key) + " must be an array");
    set(key, *v);
    return *v;
  }

  std::string str_required(const char* key) {
    const json* v = take(key);
    if (!v || !v->is_string())
      fail(ErrorCode::InvalidConfig, where(key) + " must be a string");
    set(key, *v);
    return v->get<std::string>();
  }

  // Consume a key whose value is normalized by a nested schema; the caller
  // stores the nested result with put().
  json nested(const char* key) {
    const json* v = take(key);
    return v ? *v : json::object();
  }

  // Store a value normalized outside this reader.
  void put(const char* key, json v) { out_[key] = std::move(v); }

  json finish() {
    for (const auto& item : raw_.items())
      if (!used_.count(item.key()))
        fail(ErrorCode::InvalidConfig,
             "unknown field " + where(item.key().c_str()));
    return out_;
  }

 private:
  const json* take(const char* key) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? nullptr : &*it;
  }
  double set(const char* key, json v) {
    double d = v.is_number() ? v.get<double>() : 0.0;
    out_[key] = std::move(v);
    return d;
  }
  std::string where(const char* key) const { return ctx_ + "." + key; }

  const json& raw_;
  std::string ctx_;
  std::set<std::string> used_;
  json out_ = json::object();
};

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0)) fail(ErrorCode::InvalidConfig, what + " must be positive");
}

// --- nested payload schemas --------------------------------------------------

json normalize_body_force(const json& raw, const std::string& ctx) {
  Fields f(raw, ctx);
  std::string kind = f.str("kind", "Zero");
  if (kind == "Zero") {
  } else if (kind == "Constant") {
    f.num("value", 0.0);
  } else if (kind == "Eigenmode") {
    f.num("amplitude", 1.0);
  } else if (kind == "SineTime") {
    f.num("amplitude", 1.0);
    f.num("omega", 1.0);
  } else {
    fail(ErrorCode::InvalidConfig, ctx + ".kind: unknown kind " + kind);
  }
  return f.finish();
}

json normalize_v0(const json& raw, const std::string& ctx) {
  Fields f(raw, ctx);
  std::string kind = f.str("kind", "Zero");
  if (kind == "Zero") {
  } else if (kind == "Eigenmode") {
    f.num("amplitude", 1.0);
  } else if (kind == "Tent") {
    f.num("slope", 1.0);
  } else if (kind == "Parabola") {
    f.num("amplitude", 1.0);
  } else {
    fail(ErrorCode::InvalidConfig, ctx + ".kind: unknown kind " + kind);
  }
  return f.finish();
}

json normalize_poiseuille_problem(const json& raw) {
  Fields f(raw, "problem");
  require_positive(f.num("L", 1.0), "problem.L");
  f.num("Q", 0.0);
  f.object_required("fluid");
  f.object_required("bc");
  return f.finish();
}

json normalize_channel_problem(const json& raw) {
  Fields f(raw, "problem");
  require_positive(f.num("L", 1.0), "problem.L");
  std::string forcing = f.str("forcing", "GivenC");
  if (forcing != "GivenC" && forcing != "GivenQ")
    fail(ErrorCode::InvalidConfig,
         "problem.forcing must be GivenC or GivenQ, got " + forcing);
  f.num("C", 0.0);
  f.num("Q", 0.0);
  f.object_required("fluid");
  f.object_required("bc");
  f.put("body_force",
        normalize_body_force(f.nested("body_force"), "problem.body_force"));
  f.put("v0", normalize_v0(f.nested("v0"), "problem.v0"));
  return f.finish();
}

void add_solver_fields(Fields& f) {
  require_positive(f.num("tol", 1e-10), "tol");
  if (f.integer("max_iters", 100) < 1)
    fail(ErrorCode::InvalidConfig, "max_iters must be >= 1");
  if (f.integer("max_switches", 50) < 1)
    fail(ErrorCode::InvalidConfig, "max_switches must be >= 1");
  if (f.num("eps_start", 1.0) < 0.0)
    fail(ErrorCode::InvalidConfig, "eps_start must be >= 0");
  double fac = f.num("eps_factor", 0.1);
  if (!(fac > 0.0) || !(fac < 1.0))
    fail(ErrorCode::InvalidConfig, "eps_factor must lie in (0, 1)");
  if (f.num("eps_final", 1e-8) < 0.0)
    fail(ErrorCode::InvalidConfig, "eps_final must be >= 0");
}

// --- declarative functions ----------------------------------------------------

std::function<double(double, double)> body_force_from_json(const json& j,
                                                           double L) {
  std::string kind = j.at("kind").get<std::string>();
  constexpr double pi = std::numbers::pi;
  if (kind == "Zero") return {};
  if (kind == "Constant") {
    double v = j.at("value").get<double>();
    return [v](double, double) { return v; };
  }
  if (kind == "Eigenmode") {
    double a = j.at("amplitude").get<double>();
    return [a, L, pi](double, double y) {
      return a * std::sin(pi * (y + L) / (2.0 * L));
    };
  }
  double a = j.at("amplitude").get<double>();  // SineTime
  double om = j.at("omega").get<double>();
  return [a, om, L, pi](double t, double y) {
    return a * std::sin(om * t) * std::sin(pi * (y + L) / (2.0 * L));
  };
}

std::function<double(double)> v0_from_json(const json& j, double L) {
  std::string kind = j.at("kind").get<std::string>();
  constexpr double pi = std::numbers::pi;
  if (kind == "Zero") return {};
  if (kind == "Eigenmode") {
    double a = j.at("amplitude").get<double>();
    return [a, L, pi](double y) { return a * std::sin(pi * (y + L) / (2.0 * L)); };
  }
  if (kind == "Tent") {
    double m = j.at("slope").get<double>();
    return [m, L](double y) { return m * (L - std::abs(y)); };
  }
  double a = j.at("amplitude").get<double>();  // Parabola
  return [a, L](double y) { return a * (1.0 - (y / L) * (y / L)); };
}

ChannelProblem channel_problem_from_json(const json& jp) {
  ChannelProblem p;
  p.L = jp.at("L").get<double>();
  p.forcing = jp.at("forcing").get<std::string>() == "GivenQ"
                  ? ForcingKind::GivenQ
                  : ForcingKind::GivenC;
  p.C = jp.at("C").get<double>();
  p.Q = jp.at("Q").get<double>();
  p.fluid = bulk_model_from_json(jp.at("fluid"));
  p.bc = boundary_model_from_json(jp.at("bc"));
  p.body_force = body_force_from_json(jp.at("body_force"), p.L);
  p.v0 = v0_from_json(jp.at("v0"), p.L);
  return p;
}

ChannelOpts channel_opts_from_config(const json& cfg) {
  ChannelOpts o;
  o.tol = cfg.at("tol").get<double>();
  o.max_iters = static_cast<int>(cfg.at("max_iters").get<long long>());
  o.max_switches = static_cast<int>(cfg.at("max_switches").get<long long>());
  o.eps_start = cfg.at("eps_start").get<double>();
  o.eps_factor = cfg.at("eps_factor").get<double>();
  o.eps_final = cfg.at("eps_final").get<double>();
  return o;
}

// --- output helpers -------------------------------------------------------------

std::string resolve_out(const json& cfg, const char* key) {
  fs::path dir(cfg.at("out_dir").get<std::string>());
  fs::path rel(cfg.at(key).get<std::string>());
  return (dir / rel).string();
}

void emit(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_text_atomic(p.string(), text);
}

json json_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

// Profile CSV shared by shear / poiseuille / channel commands.
std::string profile_csv(const std::vector<double>& y,
                        const std::vector<double>& u,
                        const std::vector<double>& du,
                        const std::vector<double>& stress) {
  std::string csv = "y,u,du_dy,shear_stress\n";
  for (size_t i = 0; i < y.size(); ++i) {
    csv += fmt_g(y[i], 17);
    csv += ',';
    csv += fmt_g(u[i], 17);
    csv += ',';
    csv += fmt_g(du[i], 17);
    csv += ',';
    csv += fmt_g(stress[i], 17);
    csv += '\n';
  }
  return csv;
}

// --- command runners --------------------------------------------------------------

RunResult run_flowcurve(const json& cfg) {
  BulkModel m = bulk_model_from_json(cfg.at("model"));
  double d_min = cfg.at("d_min").get<double>();
  double d_max = cfg.at("d_max").get<double>();
  long long samples = cfg.at("samples").get<long long>();
  std::string spacing = cfg.at("spacing").get<std::string>();
  if (samples < 1)
    fail(ErrorCode::InvalidConfig, "samples must be >= 1");
  if (!(d_max >= d_min))
    fail(ErrorCode::InvalidConfig, "d_max must be >= d_min");
  if (spacing != "log" && spacing != "linear")
    fail(ErrorCode::InvalidConfig, "spacing must be log or linear");
  if (spacing == "log" && !(d_min > 0.0))
    fail(ErrorCode::InvalidConfig, "log spacing needs d_min > 0");

  std::string csv = "d,s,nu_g\n";
  for (long long i = 0; i < samples; ++i) {
    double f = samples == 1 ? 0.0
                            : static_cast<double>(i) /
                                  static_cast<double>(samples - 1);
    double d = spacing == "log"
                   ? std::exp(std::log(d_min) +
                              f * (std::log(d_max) - std::log(d_min)))
                   : d_min + f * (d_max - d_min);
    double s = flow_curve(m, d);
    double nu_g = d > 0.0 ? generalized_viscosity(m, d) : 0.0;
    csv += fmt_g(d, 15);
    csv += ',';
    csv += fmt_g(s, 15);
    csv += ',';
    csv += fmt_g(nu_g, 15);
    csv += '\n';
  }
  emit(resolve_out(cfg, "out"), csv);
  return {true, json::object()};
}

RunResult run_graphcheck(const json& cfg) {
  SampleDomain dom;
  dom.d_min = cfg.at("d_min").get<double>();
  dom.d_max = cfg.at("d_max").get<double>();
  dom.n_directions =
      static_cast<int>(cfg.at("n_directions").get<long long>());
  dom.seed = cfg.at("seed").get<std::uint64_t>();
  long n_pairs = static_cast<long>(cfg.at("pairs").get<long long>());
  Axiom ax = axiom_from_string(cfg.at("axiom").get<std::string>());

  auto bulk = [&](const char* why) {
    if (cfg.at("model").is_null())
      fail(ErrorCode::InvalidConfig, std::string(why) + " requires a model");
    return bulk_model_from_json(cfg.at("model"));
  };
  auto bc = [&](const char* why) {
    if (cfg.at("boundary").is_null())
      fail(ErrorCode::InvalidConfig,
           std::string(why) + " requires a boundary model");
    return boundary_model_from_json(cfg.at("boundary"));
  };
  auto inverse = [&]() {
    if (cfg.at("inverse").is_null())
      fail(ErrorCode::InvalidConfig,
           "duality checks require an inverse model");
    return bulk_model_from_json(cfg.at("inverse"));
  };

  CertReport rep;
  switch (ax) {
    case Axiom::G1: rep = check_origin(bulk("axiom G1")); break;
    case Axiom::B1: rep = check_origin(bc("axiom B1")); break;
    case Axiom::G2:
      rep = check_monotonicity(bulk("axiom G2"), dom, n_pairs);
      break;
    case Axiom::B2:
      rep = check_monotonicity(bc("axiom B2"), dom, n_pairs);
      break;
    case Axiom::G4:
      rep = check_coercivity(bulk("axiom G4"), cfg.at("r").get<double>(), dom);
      break;
    case Axiom::B4: rep = check_coercivity(bc("axiom B4"), dom); break;
    case Axiom::Duality:
      rep = check_duality(bulk("duality"), inverse(), dom, n_pairs, true);
      break;
    case Axiom::NonInverse:
      rep = check_duality(bulk("duality"), inverse(), dom, n_pairs, false);
      break;
  }
  emit(resolve_out(cfg, "out"), dump_json(to_json(rep)));
  json summary;
  summary["pass"] = rep.pass;
  summary["worst_violation"] = rep.worst_violation;
  return {true, summary};
}

RunResult run_shear(const json& cfg) {
  std::string kind = cfg.at("kind").get<std::string>();
  double C = cfg.at("C").get<double>();
  double y0 = cfg.at("y0").get<double>();
  double u0 = cfg.at("u0").get<double>();
  double nu = cfg.at("nu_star").get<double>();
  double delta = cfg.at("delta_star").get<double>();
  ShearSolution sol =
      kind == "Limit"
          ? whole_space_limit(C, y0, u0, delta, nu)
          : whole_space_regularized(C, y0, u0, cfg.at("eps_star").get<double>(),
                                    delta, nu);

  double y_lo = cfg.at("y_lo").get<double>();
  double y_hi = cfg.at("y_hi").get<double>();
  long long samples = cfg.at("samples").get<long long>();
  if (samples < 2) fail(ErrorCode::InvalidConfig, "samples must be >= 2");
  if (!(y_hi > y_lo)) fail(ErrorCode::InvalidConfig, "y_hi must exceed y_lo");
  std::vector<double> y(samples), u(samples), du(samples), stress(samples);
  for (long long i = 0; i < samples; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(samples - 1);
    y[i] = y_lo + f * (y_hi - y_lo);
    u[i] = eval_profile(sol, y[i]);
    du[i] = eval_profile_slope(sol, y[i]);
    stress[i] = -2.0 * nu * C * (y[i] - y0);
  }
  emit(resolve_out(cfg, "profile_out"), profile_csv(y, u, du, stress));
  emit(resolve_out(cfg, "report_out"), dump_json(to_json(sol)));
  json summary;
  summary["C"] = C;
  return {true, summary};
}

RunResult run_poiseuille(const json& cfg) {
  const json& jp = cfg.at("problem");
  PoiseuilleProblem p;
  p.L = jp.at("L").get<double>();
  p.Q = jp.at("Q").get<double>();
  p.fluid = bulk_model_from_json(jp.at("fluid"));
  p.bc = boundary_model_from_json(jp.at("bc"));
  validate(p);  // mirrors nu_star / delta_star, rejects unsupported fluids

  Thresholds th = poiseuille_thresholds(p);
  ShearSolution sol = poiseuille_solve(p);

  json report;
  report["C"] = sol.C;
  report["regime"] = json{{"bc_block", to_string(sol.regime.bc_block)},
                          {"branch", to_string(sol.regime.branch)}};
  report["thresholds"] =
      json{{"Q_low", json_or_null(th.Q_low)},
           {"Q_high", json_or_null(th.Q_high)}};
  report["family"] = sol.kind == ShearKind::SubthresholdFamily;
  emit(resolve_out(cfg, "report_out"), dump_json(report));

  long long samples = cfg.at("samples").get<long long>();
  if (samples < 2) fail(ErrorCode::InvalidConfig, "samples must be >= 2");
  std::vector<double> y(samples), u(samples), du(samples), stress(samples);
  for (long long i = 0; i < samples; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(samples - 1);
    y[i] = -p.L + f * (2.0 * p.L);
    u[i] = eval_profile(sol, y[i]);
    du[i] = eval_profile_slope(sol, y[i]);
    stress[i] = -2.0 * p.nu_star * sol.C * y[i];
  }
  emit(resolve_out(cfg, "profile_out"), profile_csv(y, u, du, stress));

  json summary;
  summary["C"] = sol.C;
  summary["regime"] = to_string(sol.regime.bc_block) + ":" +
                      to_string(sol.regime.branch);
  return {true, summary};
}

// Node derivatives: central in the interior, one-sided at the walls.
std::vector<double> node_slopes(const std::vector<double>& y,
                                const std::vector<double>& u) {
  size_t n = y.size();
  std::vector<double> du(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    size_t lo = i == 0 ? 0 : i - 1;
    size_t hi = i + 1 == n ? i : i + 1;
    du[i] = (u[hi] - u[lo]) / (y[hi] - y[lo]);
  }
  return du;
}

void write_channel_profile(const json& cfg, const ChannelProblem& p,
                           const SolveReport& rep) {
  auto tau = shear_reduce(p.fluid);
  double eps = cfg.at("eps_final").get<double>();
  double nu = nu_ref(p.fluid);
  std::vector<double> du = node_slopes(rep.y, rep.u);
  std::vector<double> stress(du.size());
  for (size_t i = 0; i < du.size(); ++i)
    stress[i] = eps * nu * du[i] + tau(du[i]);
  emit(resolve_out(cfg, "profile_out"), profile_csv(rep.y, rep.u, du, stress));
}

std::string message_of(const Error& e) {
  std::string msg = e.what();
  std::string prefix = std::string(to_string(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
  return msg;
}

json flagged_failure_report(const Error& e) {
  json report;
  report["converged"] = false;
  report["error"] = json{{"error", std::string(to_string(e.code()))},
                         {"message", message_of(e)}};
  return report;
}

json channel_report(const json& cfg, const ChannelProblem& p,
                    const SolveReport& rep) {
  json report;
  report["converged"] = true;
  report["C"] = rep.C;
  report["residual_norm"] = rep.residual_norm;
  report["newton_iters"] = rep.newton_iters;
  report["eps_schedule"] = rep.eps_schedule;
  report["richardson_flag"] = rep.richardson_flag;
  report["n"] = cfg.at("n").get<long long>();
  report["L"] = p.L;
  report["forcing"] = p.forcing == ForcingKind::GivenQ ? "GivenQ" : "GivenC";
  if (p.forcing == ForcingKind::GivenQ) report["Q"] = p.Q;
  return report;
}

RunResult run_channel_steady(const json& cfg) {
  ChannelProblem p = channel_problem_from_json(cfg.at("problem"));
  Grid grid =
      Grid::uniform(p.L, static_cast<int>(cfg.at("n").get<long long>()));
  ChannelOpts opts = channel_opts_from_config(cfg);

  SolveReport rep;
  try {
    rep = steady_solve(p, grid, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence) throw;
    emit(resolve_out(cfg, "out"), dump_json(flagged_failure_report(e)));
    json summary;
    summary["status"] = "NoConvergence";
    return {false, summary};
  }
  emit(resolve_out(cfg, "out"), dump_json(channel_report(cfg, p, rep)));
  write_channel_profile(cfg, p, rep);
  json summary;
  summary["C"] = rep.C;
  return {true, summary};
}

RunResult run_channel_unsteady(const json& cfg) {
  ChannelProblem p = channel_problem_from_json(cfg.at("problem"));
  p.T = cfg.at("T").get<double>();
  Grid grid =
      Grid::uniform(p.L, static_cast<int>(cfg.at("n").get<long long>()));
  ChannelOpts opts = channel_opts_from_config(cfg);
  double dt = cfg.at("dt").get<double>();

  SolveReport rep;
  try {
    rep = unsteady_solve(p, grid, dt, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence) throw;
    emit(resolve_out(cfg, "out"), dump_json(flagged_failure_report(e)));
    json summary;
    summary["status"] = "NoConvergence";
    return {false, summary};
  }

  std::string csv = "t,kinetic,dissipation,work,slack\n";
  for (const LedgerRow& row : rep.energy_ledger) {
    csv += fmt_g(row.t, 17);
    csv += ',';
    csv += fmt_g(row.kinetic, 17);
    csv += ',';
    csv += fmt_g(row.dissipation, 17);
    csv += ',';
    csv += fmt_g(row.work, 17);
    csv += ',';
    csv += fmt_g(row.slack, 17);
    csv += '\n';
  }
  emit(resolve_out(cfg, "ledger_out"), csv);

  LedgerCheck chk = energy_ledger_check(rep);
  json report = channel_report(cfg, p, rep);
  report["dt"] = dt;
  report["T"] = p.T;
  report["steps"] = rep.energy_ledger.empty()
                        ? 0
                        : static_cast<long long>(rep.energy_ledger.size()) - 1;
  report["ledger_pass"] = chk.pass;
  report["ledger_worst_step"] = chk.worst_step;
  report["ledger_worst_slack"] = chk.worst_slack;
  emit(resolve_out(cfg, "out"), dump_json(report));
  write_channel_profile(cfg, p, rep);

  json summary;
  summary["C"] = rep.C;
  return {true, summary};
}

// --- sweep -------------------------------------------------------------------------

// Walk a dotted path into nested objects; the leaf must exist and be numeric.
json* resolve_axis(json& root, const std::string& axis) {
  json* node = &root;
  size_t pos = 0;
  while (true) {
    size_t dot = axis.find('.', pos);
    std::string key = axis.substr(pos, dot - pos);
    if (key.empty() || !node->is_object() || !node->contains(key))
      fail(ErrorCode::InvalidAxis,
           "axis " + axis + " names no existing config field");
    node = &node->at(key);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (!node->is_number())
    fail(ErrorCode::InvalidAxis, "axis " + axis + " is not a numeric leaf");
  return node;
}

// Output-path fields get a per-row prefix so rows never collide.
void prefix_row_outputs(json& cfg, size_t row) {
  char tag[16];
  std::snprintf(tag, sizeof tag, "row%03zu_", row);
  for (const char* key : {"out", "profile_out", "report_out", "ledger_out"}) {
    if (!cfg.contains(key)) continue;
    fs::path p(cfg.at(key).get<std::string>());
    fs::path renamed = p.parent_path() / (tag + p.filename().string());
    cfg[key] = renamed.string();
  }
}

RunResult run_sweep(const json& cfg) {
  const json& base = cfg.at("base");
  std::string axis = cfg.at("axis").get<std::string>();
  const json& values = cfg.at("values");
  long long jobs = std::max(1LL, cfg.at("jobs").get<long long>());

  struct Row {
    std::string status = "ok";
    json summary = json::object();
  };
  std::vector<Row> rows(values.size());

  auto run_row = [&](size_t k) {
    json rowcfg = base;
    *resolve_axis(rowcfg, axis) = values.at(k);
    rowcfg["out_dir"] = cfg.at("out_dir");
    prefix_row_outputs(rowcfg, k);
    try {
      RunResult r = run_config(rowcfg);
      rows[k].status = r.converged ? "ok" : "NoConvergence";
      rows[k].summary = r.summary;
    } catch (const Error& e) {
      rows[k].status = std::string(to_string(e.code()));
    } catch (const std::exception&) {
      rows[k].status = "Internal";
    }
  };

  if (jobs == 1 || rows.size() <= 1) {
    for (size_t k = 0; k < rows.size(); ++k) run_row(k);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t k = next.fetch_add(1); k < rows.size();
           k = next.fetch_add(1))
        run_row(k);
    };
    std::vector<std::thread> pool;
    for (long long j = 0; j < std::min<long long>(jobs, rows.size()); ++j)
      pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::string csv = "row,value,status,C,regime\n";
  for (size_t k = 0; k < rows.size(); ++k) {
    csv += std::to_string(k);
    csv += ',';
    csv += fmt_g(values.at(k).get<double>(), 17);
    csv += ',';
    csv += rows[k].status;
    csv += ',';
    if (rows[k].summary.contains("C"))
      csv += fmt_g(rows[k].summary.at("C").get<double>(), 17);
    csv += ',';
    if (rows[k].summary.contains("regime"))
      csv += rows[k].summary.at("regime").get<std::string>();
    csv += '\n';
  }
  emit(resolve_out(cfg, "summary_out"), csv);
  json summary;
  summary["rows"] = static_cast<long long>(rows.size());
  return {true, summary};
}

}  // namespace

// --- schema ------------------------------------------------------------------

bool known_command(const std::string& command) {
  static const std::set<std::string> kCommands = {
      "flowcurve",      "graphcheck",      "shear",  "poiseuille",
      "channel-steady", "channel-unsteady", "sweep"};
  return kCommands.count(command) > 0;
}

json normalize_config(const json& raw, const std::string& command) {
  if (!known_command(command))
    fail(ErrorCode::InvalidConfig, "unknown command " + command);
  Fields f(raw, command);
  std::string declared = f.str("command", command);
  if (declared != command)
    fail(ErrorCode::InvalidConfig, "config is for command " + declared +
                                       ", invoked as " + command);
  f.str("out_dir", ".");

  if (command == "flowcurve") {
    f.object_required("model");
    f.num("d_min", 1e-3);
    f.num("d_max", 1e3);
    f.integer("samples", 121);
    f.str("spacing", "log");
    f.str("out", "flowcurve.csv");
  } else if (command == "graphcheck") {
    f.object_or_null("model");
    f.object_or_null("boundary");
    f.object_or_null("inverse");
    f.str("axiom", "G2");
    if (f.integer("pairs", 100000) < 1)
      fail(ErrorCode::InvalidConfig, "pairs must be >= 1");
    f.integer("seed", 1);
    f.num("r", 2.0);
    f.num("d_min", 1e-3);
    f.num("d_max", 1e3);
    if (f.integer("n_directions", 16) < 1)
      fail(ErrorCode::InvalidConfig, "n_directions must be >= 1");
    f.str("out", "report.json");
  } else if (command == "shear") {
    std::string kind = f.str("kind", "Regularized");
    if (kind != "Regularized" && kind != "Limit")
      fail(ErrorCode::InvalidConfig, "kind must be Regularized or Limit");
    f.num("C", 1.0);
    f.num("y0", 0.0);
    f.num("u0", 0.0);
    require_positive(f.num("eps_star", 1.0), "eps_star");
    if (f.num("delta_star", 0.0) < 0.0)
      fail(ErrorCode::InvalidConfig, "delta_star must be >= 0");
    require_positive(f.num("nu_star", 1.0), "nu_star");
    f.num("y_lo", -1.0);
    f.num("y_hi", 1.0);
    f.integer("samples", 201);
    f.str("profile_out", "u.csv");
    f.str("report_out", "shear.json");
  } else if (command == "poiseuille") {
    f.put("problem", normalize_poiseuille_problem(f.nested("problem")));
    f.integer("samples", 201);
    f.str("profile_out", "u.csv");
    f.str("report_out", "regime.json");
  } else if (command == "channel-steady" || command == "channel-unsteady") {
    f.put("problem", normalize_channel_problem(f.nested("problem")));
    if (f.integer("n", 512) < 4)
      fail(ErrorCode::InvalidConfig, "n must be >= 4");
    add_solver_fields(f);
    f.str("out", "report.json");
    f.str("profile_out", "u.csv");
    if (command == "channel-unsteady") {
      require_positive(f.num("dt", 1e-3), "dt");
      require_positive(f.num("T", 1.0), "T");
      f.str("ledger_out", "energy.csv");
    }
  } else {  // sweep
    json base = f.object_required("base");
    if (!base.contains("command") || !base.at("command").is_string())
      fail(ErrorCode::InvalidConfig, "sweep.base.command must name a command");
    std::string inner = base.at("command").get<std::string>();
    if (inner == "sweep")
      fail(ErrorCode::InvalidConfig, "sweep cannot nest another sweep");
    json norm_base = normalize_config(base, inner);
    std::string axis = f.str_required("axis");
    (void)resolve_axis(norm_base, axis);  // existence + numeric leaf
    json values = f.array("values", json::array());
    for (const json& v : values)
      if (!v.is_number())
        fail(ErrorCode::InvalidConfig, "sweep.values must all be numbers");
    f.put("base", norm_base);
    if (f.integer("jobs", 1) < 1)
      fail(ErrorCode::InvalidConfig, "jobs must be >= 1");
    f.str("summary_out", "sweep.csv");
  }
  return f.finish();
}

RunResult run_config(const json& config) {
  std::string command = config.at("command").get<std::string>();
  if (command == "flowcurve") return run_flowcurve(config);
  if (command == "graphcheck") return run_graphcheck(config);
  if (command == "shear") return run_shear(config);
  if (command == "poiseuille") return run_poiseuille(config);
  if (command == "channel-steady") return run_channel_steady(config);
  if (command == "channel-unsteady") return run_channel_unsteady(config);
  if (command == "sweep") return run_sweep(config);
  fail(ErrorCode::InvalidConfig, "unknown command " + command);
}

// --- argv entry ----------------------------------------------------------------

namespace {

struct SubState {
  std::string config_path;
  bool print_config = false;
  json overrides = json::object();
};

// Bind a flag that records its value as a config override on use.
void add_override(CLI::App* cmd, SubState& st, const std::string& flag,
                  const std::string& key, const std::string& kind,
                  const std::string& help) {
  if (kind == "num") {
    cmd->add_option_function<double>(
        flag, [&st, key](double v) { st.overrides[key] = v; }, help);
  } else if (kind == "int") {
    cmd->add_option_function<long long>(
        flag, [&st, key](long long v) { st.overrides[key] = v; }, help);
  } else if (kind == "str") {
    cmd->add_option_function<std::string>(
        flag, [&st, key](const std::string& v) { st.overrides[key] = v; },
        help);
  } else {  // json payload loaded from a file
    cmd->add_option_function<std::string>(
        flag,
        [&st, key](const std::string& path) {
          st.overrides[key] = parse_json_file(path);
        },
        help);
  }
}

int dispatch_parsed(const std::string& command, const SubState& st) {
  json raw = st.config_path.empty() ? json::object()
                                    : parse_json_file(st.config_path);
  if (!raw.is_object())
    fail(ErrorCode::InvalidConfig, "config file must hold a JSON object");
  for (const auto& item : st.overrides.items()) raw[item.key()] = item.value();
  json cfg = normalize_config(raw, command);
  if (st.print_config) {
    std::cout << dump_json(cfg);
    return 0;
  }
  RunResult res = run_config(cfg);
  return res.converged ? 0 : 3;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{
      "rheograph: constitutive graphs, axiom certification, and 1D channel "
      "flows of activated fluids"};
  app.require_subcommand(1);

  std::map<std::string, SubState> states;
  auto common = [&](const std::string& name,
                    const std::string& help) -> CLI::App* {
    CLI::App* cmd = app.add_subcommand(name, help);
    SubState& st = states[name];
    cmd->add_option("--config", st.config_path,
                    "JSON config file for this command");
    cmd->add_flag("--print-config", st.print_config,
                  "print the fully-defaulted config and exit");
    add_override(cmd, st, "--out-dir", "out_dir", "str",
                 "directory that output paths are relative to");
    return cmd;
  };

  {
    CLI::App* c = common("flowcurve", "sample a model's flow curve to CSV");
    SubState& st = states["flowcurve"];
    add_override(c, st, "--model", "model", "file", "bulk model JSON file");
    add_override(c, st, "--d-min", "d_min", "num", "smallest rate magnitude");
    add_override(c, st, "--d-max", "d_max", "num", "largest rate magnitude");
    add_override(c, st, "--samples", "samples", "int", "number of samples");
    add_override(c, st, "--spacing", "spacing", "str", "log or linear");
    add_override(c, st, "--out", "out", "str", "output CSV path");
  }
  {
    CLI::App* c = common("graphcheck", "certify graph axioms numerically");
    SubState& st = states["graphcheck"];
    add_override(c, st, "--model", "model", "file", "bulk model JSON file");
    add_override(c, st, "--boundary", "boundary", "file",
                 "boundary model JSON file");
    add_override(c, st, "--inverse", "inverse", "file",
                 "candidate inverse model JSON file");
    add_override(c, st, "--axiom", "axiom", "str",
                 "G1/G2/G4/B1/B2/B4/Duality/NonInverse");
    add_override(c, st, "--pairs", "pairs", "int", "sample pair count");
    add_override(c, st, "--seed", "seed", "int", "sampling seed");
    add_override(c, st, "--r", "r", "num", "coercivity exponent for G4");
    add_override(c, st, "--d-min", "d_min", "num", "smallest magnitude");
    add_override(c, st, "--d-max", "d_max", "num", "largest magnitude");
    add_override(c, st, "--n-directions", "n_directions", "int",
                 "direction pool size");
    add_override(c, st, "--out", "out", "str", "report JSON path");
  }
  {
    CLI::App* c =
        common("shear", "closed-form whole-space shear profiles to CSV");
    SubState& st = states["shear"];
    add_override(c, st, "--kind", "kind", "str", "Regularized or Limit");
    add_override(c, st, "--C", "C", "num", "pressure constant");
    add_override(c, st, "--y0", "y0", "num", "symmetry center");
    add_override(c, st, "--u0", "u0", "num", "center velocity");
    add_override(c, st, "--eps-star", "eps_star", "num", "regularization");
    add_override(c, st, "--delta-star", "delta_star", "num",
                 "activation threshold");
    add_override(c, st, "--nu-star", "nu_star", "num", "viscosity");
    add_override(c, st, "--y-lo", "y_lo", "num", "CSV window start");
    add_override(c, st, "--y-hi", "y_hi", "num", "CSV window end");
    add_override(c, st, "--samples", "samples", "int", "CSV sample count");
    add_override(c, st, "--profile-out", "profile_out", "str",
                 "profile CSV path");
    add_override(c, st, "--report-out", "report_out", "str",
                 "solution JSON path");
  }
  {
    CLI::App* c = common("poiseuille",
                         "closed-form channel flow at a given flow rate");
    SubState& st = states["poiseuille"];
    add_override(c, st, "--samples", "samples", "int", "CSV sample count");
    add_override(c, st, "--profile-out", "profile_out", "str",
                 "profile CSV path");
    add_override(c, st, "--report-out", "report_out", "str",
                 "regime JSON path");
  }
  {
    CLI::App* c = common("channel-steady", "steady numeric channel solve");
    SubState& st = states["channel-steady"];
    add_override(c, st, "--n", "n", "int", "cell count");
    add_override(c, st, "--tol", "tol", "num", "Newton tolerance");
    add_override(c, st, "--max-iters", "max_iters", "int",
                 "Newton iteration cap per stage");
    add_override(c, st, "--eps-start", "eps_start", "num",
                 "first continuation regularization");
    add_override(c, st, "--eps-factor", "eps_factor", "num",
                 "continuation shrink factor");
    add_override(c, st, "--eps-final", "eps_final", "num",
                 "regularization kept in the answer");
    add_override(c, st, "--out", "out", "str", "report JSON path");
    add_override(c, st, "--profile-out", "profile_out", "str",
                 "profile CSV path");
  }
  {
    CLI::App* c = common("channel-unsteady",
                         "implicit-Euler channel solve with energy ledger");
    SubState& st = states["channel-unsteady"];
    add_override(c, st, "--n", "n", "int", "cell count");
    add_override(c, st, "--dt", "dt", "num", "time step");
    add_override(c, st, "--T", "T", "num", "time horizon");
    add_override(c, st, "--tol", "tol", "num", "Newton tolerance");
    add_override(c, st, "--eps-final", "eps_final", "num",
                 "regularization used at every step");
    add_override(c, st, "--out", "out", "str", "report JSON path");
    add_override(c, st, "--profile-out", "profile_out", "str",
                 "final profile CSV path");
    add_override(c, st, "--ledger-out", "ledger_out", "str",
                 "energy ledger CSV path");
  }
  {
    CLI::App* c = common("sweep", "run a command over a list of axis values");
    SubState& st = states["sweep"];
    add_override(c, st, "--axis", "axis", "str",
                 "dotted path of the numeric leaf to vary");
    add_override(c, st, "--jobs", "jobs", "int", "concurrent rows");
    add_override(c, st, "--summary-out", "summary_out", "str",
                 "summary CSV path");
  }

  try {
    app.parse(argc, argv);
    for (const auto& entry : states)
      if (app.got_subcommand(entry.first))
        return dispatch_parsed(entry.first, entry.second);
    fail(ErrorCode::InvalidConfig, "no command given");
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json diag;
    diag["error"] = "InvalidConfig";
    diag["message"] = e.what();
    std::cerr << dump_json(diag);
    return 2;
  } catch (const Error& e) {
    json diag;
    diag["error"] = std::string(to_string(e.code()));
    diag["message"] = message_of(e);
    std::cerr << dump_json(diag);
    return e.code() == ErrorCode::NoConvergence ? 3 : 2;
  } catch (const std::exception& e) {
    json diag;
    diag["error"] = "Internal";
    diag["message"] = e.what();
    std::cerr << dump_json(diag);
    return 2;
  }
}

}  // namespace rheo
