// vacblow: command-line driver.
//
//   vacblow <command> [--gamma G] [--mu M] [--K K] [--y0 Y] [--tau0 T] [--grid-n N]
//                     [--dt DT] [--tau-end T] [--scheme upwind|semilag] [--out DIR]
//                     [--config FILE]
//
// Exit status: 0 all checks pass, 2 some check failed, 1 configuration error.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>

#include "vacblow/csv.hpp"
#include "vacblow/errors.hpp"
#include "vacblow/linops.hpp"
#include "vacblow/localization.hpp"
#include "vacblow/modulation.hpp"
#include "vacblow/numerics.hpp"
#include "vacblow/profile.hpp"
#include "vacblow/simulator.hpp"
#include "vacblow/verify.hpp"

using namespace vacblow;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

const std::set<std::string> kKeys{"gamma", "mu",  "K",    "y0", "tau0",    "grid_n", "dt",   "tau_end",
                                  "scheme", "out", "t0",  "mode", "z",     "w",      "project", "seed"};

struct Checks {
  json list = json::array();
  bool ok = true;
  void add(const std::string& name, double measured, double expected, double tol) {
    const bool pass = std::fabs(measured - expected) <= tol;
    ok = ok && pass;
    list.push_back({{"name", name}, {"measured", measured}, {"expected", expected}, {"tolerance", tol}, {"pass", pass}});
  }
  // measured must not exceed bound
  void below(const std::string& name, double measured, double bound) {
    const bool pass = measured < bound;
    ok = ok && pass;
    list.push_back({{"name", name}, {"measured", measured}, {"expected", "< " + format_g17(bound)}, {"pass", pass}});
  }
  void flag(const std::string& name, bool pass) {
    ok = ok && pass;
    list.push_back({{"name", name}, {"measured", pass}, {"expected", true}, {"pass", pass}});
  }
};

std::string config_hash(const std::string& cmd, json cfg) {
  cfg.erase("out");
  const std::string s = cmd + cfg.dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 12);
}

struct Ctx {
  std::string cmd;
  json cfg;
  std::filesystem::path out;
  std::string key;
  json artifacts = json::array();

  double num(const char* k) const { return cfg.at(k).get<double>(); }
  std::string path(const std::string& suffix) {
    const auto p = (out / (cmd + "-" + key + suffix)).string();
    artifacts.push_back(p);
    return p;
  }
};

std::vector<double> vec(const json& j) { return j.get<std::vector<double>>(); }

ModulationState mod_from(const Ctx& c, const GasScaling& s) {
  ModulationState m = zero_state(s, c.num("tau0"));
  const auto z = vec(c.cfg.at("z")), w = vec(c.cfg.at("w"));
  if (z.size() != m.z.size() || w.size() != m.w.size())
    throw ConfigError("z and w need " + std::to_string(m.z.size()) + " entries (i = 2.." +
                      std::to_string(s.n_mu - 1) + ") at mu = " + format_g17(s.mu));
  m.z = z;
  m.w = w;
  return m;
}

Localization loc_from(const Ctx& c) {
  return {make_profile_params(c.num("gamma"), c.num("mu"), c.num("K")), make_cutoff_config(c.num("tau0"), c.num("y0"))};
}

// ---- commands -------------------------------------------------------------------

json cmd_profile(Ctx& c, Checks& ch) {
  const auto p = make_profile_params(c.num("gamma"), c.num("mu"), c.num("K"));
  Profile pr = tabulate_profile(p, c.cfg.at("grid_n").get<int>());
  write_profile_csv(pr, c.path(".csv"));
  const auto f = fit_asymptotics(pr);
  const double mu = p.scaling.mu, A = p.scaling.A();
  ch.below("steady_residual", profile_residual(pr), 1e-8);
  ch.add("ubar_at_0", pr.ubar[0], p.scaling.ubar0(), 1e-10);
  ch.add("dzbar_at_0", pr.dzbar[0], -2 * p.scaling.ubar0(), 1e-10);
  double lo = 1, hi = 0;
  for (double d : pr.dzbar) {
    lo = std::min(lo, 1 + A * d);
    hi = std::max(hi, 1 + A * d);
  }
  ch.flag("velocity_bound", lo >= 1 - mu - 1e-10 && hi < 1);
  ch.add("far_exponent", f.far_exp_fit, 1 - mu, 1e-3);
  ch.add("near_exponent", f.beta_fit, p.scaling.beta, 1e-2);
  if (mu == 0.5) {
    // y U^2 + K U - K U0 = 0
    const double y = 3, K = p.K, u0 = p.scaling.ubar0();
    ch.add("ubar_closed_form_y3", solve_ubar(p, y), (-K + std::sqrt(K * K + 4 * y * K * u0)) / (2 * y), 1e-12);
  }
  return {{"far_exponent", f.far_exp_fit}, {"near_exponent", f.beta_fit}, {"c1", f.c1}, {"c2", f.c2}};
}

json cmd_flow(Ctx& c, Checks& ch) {
  const auto L = loc_from(c);
  const double t0 = L.cutoff.tau0, t1 = c.num("tau_end");
  if (!(t1 > t0)) throw ConfigError("tau_end must exceed tau0");
  const auto taus = linspace(t0, t1, 11);
  const auto ys = geomspace(1e-2, 4 * L.cutoff.y0 * std::exp(t1 - t0), c.cfg.at("grid_n").get<int>());
  write_localization_csv(L, taus, ys, c.path(".csv"));
  const double mu = L.profile.scaling.mu;
  double lo = 1e300, hi = -1e300, slope = 0;
  for (double tau : taus) {
    for (double p : {0.1, 1.0, 10.0, 1e3}) {
      const double r = flow_map(L, p, tau) / p;
      lo = std::min(lo, r / std::exp((1 - mu) * (tau - t0)));
      hi = std::max(hi, r / std::exp(tau - t0));
    }
    const auto [a, b] = transition_zone(L, tau);
    for (double y : linspace(a, b, 1001)) slope = std::max(slope, -dchi(L, tau, y) * L.cutoff.y0);
  }
  ch.flag("sandwich_lower", lo >= 1 - 1e-6);
  ch.flag("sandwich_upper", hi <= 1 + 1e-6);
  ch.below("cutoff_slope_times_y0", slope, 2 + 1e-6);
  json fits = json::array();
  for (const auto& f : fit_source_decay(L, t1 - t0, 7)) {
    fits.push_back({{"i", f.i}, {"rate", f.rate}, {"bound", f.bound}});
    ch.flag("source_decay_i" + std::to_string(f.i), f.rate >= f.bound - 0.05);
  }
  return {{"source_decay", fits}};
}

json cmd_modulate(Ctx& c, Checks& ch) {
  const auto s = derive_indices(c.num("gamma"), c.num("mu"));
  auto st = mod_from(c, s);
  if (c.cfg.at("project").get<bool>()) st = project_to_manifold(s, st.w, st.tau);
  const double dt = c.num("dt");
  const auto tr = integrate_modulation(s, st, c.num("tau_end"), dt);
  write_trajectory_csv(tr, c.path(".csv"));
  const double span = tr.back().tau - st.tau;
  if (!st.w.empty()) {
    const double exact = std::exp(-damping_coeffs(s, 2).g * span) * st.w[0];
    ch.add("w2_closed_form", tr.back().w[0], exact, 1e-8 * std::fabs(exact) + 1e-300);
  }
  const auto cl = classify(s, tr);
  return {{"class", to_string(cl.kind)}, {"rate", cl.rate}, {"index", cl.index},
          {"on_manifold", is_on_manifold(s, st)}, {"final", {{"z", tr.back().z}, {"w", tr.back().w}}}};
}

json cmd_spectrum(Ctx& c, Checks& ch) {
  const auto r = spectral_report(c.num("gamma"), c.num("mu"));
  for (std::size_t k = 0; k < r.spectrum.size(); ++k)
    ch.below("eigen_residual_a" + format_g17(r.spectrum[k]), r.residuals[k], 1e-6);
  for (const auto& [n, v] : r.symmetry_residuals) ch.below("symmetry_residual_" + n, v, 1e-6);
  auto j = json::parse(spectral_report_json(r));
  std::ofstream(c.path(".spectrum.json")) << j.dump(2) << "\n";
  return j;
}

json cmd_simulate_ss(Ctx& c, Checks& ch) {
  const auto L = loc_from(c);
  const auto& s = L.profile.scaling;
  SsInit init;
  init.mod = mod_from(c, s);
  init.project = c.cfg.at("project").get<bool>();
  init.seed = c.num("seed");
  SsRunConfig cfg;
  const std::string mode = c.cfg.at("mode").get<std::string>();
  if (mode == "direct")
    cfg.mode = SsMode::Direct;
  else if (mode != "perturbation")
    throw ConfigError("mode must be perturbation or direct, got " + mode);
  cfg.h = 1.0 / c.cfg.at("grid_n").get<int>();
  cfg.tau_span = c.num("tau_end") - L.cutoff.tau0;
  if (!(cfg.tau_span > 0)) throw ConfigError("tau_end must exceed tau0");
  cfg.step.scheme = parse_scheme(c.cfg.at("scheme").get<std::string>());
  const auto r = run_selfsimilar(L, init, cfg);
  write_run_csv(r, c.path(".csv"));

  auto st0 = init.project ? project_to_manifold(s, init.mod.w, L.cutoff.tau0) : init.mod;
  st0.tau = L.cutoff.tau0;
  const auto ode = integrate_modulation(s, st0, st0.tau + cfg.tau_span, r.dt, cfg.record_every);
  double err = 0;
  for (std::size_t k = 0; k < std::min(ode.size(), r.series.size()); ++k)
    if (!ode[k].z.empty()) err = std::max(err, std::fabs(r.series[k].z_ext[0] - ode[k].z[0]));
  ch.flag("no_early_stop", !r.early_stop);
  ch.below("z2_vs_modulation_ode", err, 5 * (cfg.h + r.dt));

  // decay rates of the weighted and top norms over the second half of the run
  std::vector<double> t, l1, l2;
  for (const auto& x : r.series)
    if (x.tau >= st0.tau + cfg.tau_span / 2 && x.norms.Z_weighted > 0 && x.norms.Z_top > 0) {
      t.push_back(x.tau);
      l1.push_back(std::log(x.norms.Z_weighted));
      l2.push_back(std::log(x.norms.Z_top));
    }
  json rates = nullptr;
  if (t.size() >= 3) {
    const double a1 = -linear_fit(t, l1).slope, a2 = -linear_fit(t, l2).slope;
    rates = {{"a1", a1}, {"a2", a2}, {"ordering_0_lt_a2_lt_a1", 0 < a2 && a2 < a1}};
  }
  return {{"early_stop", r.early_stop}, {"stop_reason", r.stop_reason}, {"dt", r.dt}, {"nodes", r.nodes},
          {"records", r.series.size()}, {"max_z2_error", err}, {"norm_rates", rates}};
}

json cmd_simulate_euler(Ctx& c, Checks& ch) {
  const auto L = loc_from(c);
  const auto& s = L.profile.scaling;
  const double t0 = c.num("t0");
  PhysicalRunConfig cfg;
  cfg.n_cells = c.cfg.at("grid_n").get<int>();
  cfg.step.scheme = parse_scheme(c.cfg.at("scheme").get<std::string>());
  const auto fine = run_physical(L, t0, cfg);
  write_physical_csv(fine, c.path(".csv"));
  cfg.n_cells /= 2;
  const auto coarse = run_physical(L, t0, cfg);
  const auto bf = blowup_detect(fine.series, t0, fine.final_state.t);
  const auto bc = blowup_detect(coarse.series, t0, coarse.final_state.t);
  const auto h = holder_fit(fine.final_state, s);
  const double law = (s.gamma + 1) / 4;
  ch.add("boundary_law_slope", bf.boundary_law_slope, law, 0.02 * law);
  ch.add("blowup_time", bf.T, 0.0, 0.02 * std::fabs(t0));
  ch.add("blowup_location", bf.location, 0.0, 0.0);
  ch.flag("density_positive", fine.positivity_ok);
  ch.add("holder_exponent", h.exponent, 1 - s.mu, 0.05 * (1 - s.mu));
  return {{"steps", fine.steps},
          {"resolution_exhausted", fine.resolution_exhausted},
          {"t_final", fine.final_state.t},
          {"blowup_time", bf.T},
          {"blowup_time_stderr", bf.T_stderr},
          {"blowup_time_coarse", bc.T},
          {"blowup_time_richardson", richardson_blowup(bc.T, bf.T)},
          {"max_slope_law", -bf.slope},
          {"holder_exponent", h.exponent},
          {"holder_naive", h.naive}};
}

json cmd_verify_all(Ctx& c, Checks& ch) {
  const auto names = check_names();
  const auto text = check_criteria();
  for (const auto& r : run_all_checks()) {
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    ch.ok = ch.ok && r.pass;
    ch.list.push_back({{"id", r.id},
                       {"name", r.name},
                       {"criterion", text[r.id - 1]},
                       {"measured", m},
                       {"notes", r.notes},
                       {"pass", r.pass},
                       {"seconds", r.seconds}});
    std::printf("[%s] %2d %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
  }
  (void)c;
  return {{"criteria", names.size()}};
}

// ---- config -----------------------------------------------------------------------

json defaults(const std::string& cmd, const GasScaling& s, double tau0) {
  const int m = s.n_mu - 2;
  std::vector<double> z(m, 0.0), w(m, 0.0);
  json d = {{"gamma", s.gamma}, {"mu", s.mu}, {"K", 0.5}, {"tau0", tau0}, {"scheme", "upwind"},
            {"mode", "perturbation"}, {"project", false}, {"seed", 0.0}, {"t0", -0.1}, {"dt", 1e-3}};
  if (m > 0) {
    w[0] = cmd == "modulate" ? 1e-3 : 1e-2;
    z[0] = cmd == "modulate" ? 0.0 : 5e-3;
  }
  d["z"] = z;
  d["w"] = w;
  if (cmd == "profile") d["grid_n"] = 2048;
  if (cmd == "flow") d["grid_n"] = 400;
  if (cmd == "simulate-ss") d["grid_n"] = 50;
  if (cmd == "simulate-euler") d["grid_n"] = 1 << 13;
  if (!d.contains("grid_n")) d["grid_n"] = 0;
  const double span = cmd == "modulate" ? 20.0 : cmd == "flow" ? 5.0 : 3.0;
  d["tau_end"] = tau0 + span;
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient blowup at a vacuum boundary: profiles, modulation, spectra, simulations"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<double> gamma, mu, K, y0, tau0, dt, tau_end;
  std::optional<int> grid_n;
  std::optional<std::string> scheme, out;
  std::string config_file;
  app.add_option("--gamma", gamma, "adiabatic exponent in (1,3)");
  app.add_option("--mu", mu, "similarity parameter in [0.5,1)");
  app.add_option("--K", K, "profile normalization");
  app.add_option("--y0", y0, "cutoff scale (default e^tau0)");
  app.add_option("--tau0", tau0, "initial self-similar time");
  app.add_option("--grid-n", grid_n, "table size, cells per unit y, or physical cells");
  app.add_option("--dt", dt, "modulation ODE step");
  app.add_option("--tau-end", tau_end, "final self-similar time");
  app.add_option("--scheme", scheme, "upwind or semilag");
  app.add_option("--out", out, "output directory");
  app.add_option("--config", config_file, "JSON config file; flags override it");
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"profile", "tabulate the steady profile"},
      {"flow", "flow map, cutoff and far-field source"},
      {"modulate", "integrate the boundary modulation system"},
      {"spectrum", "unstable spectrum and symmetry modes"},
      {"simulate-ss", "self-similar run with boundary extraction"},
      {"simulate-euler", "physical run to the gradient blowup"},
      {"verify-all", "run the full acceptance suite"}};
  for (const auto& [n, d] : cmds) app.add_subcommand(n, d);
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    json file = json::object();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read config file " + config_file);
      file = json::parse(in, nullptr, true, true);
      if (!file.is_object()) throw ConfigError("config must be a JSON object");
      std::vector<std::string> unknown;
      for (const auto& [k, v] : file.items())
        if (!kKeys.count(k)) unknown.push_back(k);
      if (!unknown.empty()) {
        std::string msg = "unknown config key";
        for (const auto& k : unknown) msg += " '" + k + "'";
        throw ConfigError(msg);
      }
    }
    auto pick = [&](const char* k, const auto& flag, double def) {
      if (flag) return static_cast<double>(*flag);
      return file.contains(k) ? file[k].get<double>() : def;
    };
    const double g = pick("gamma", gamma, 2.0), m = pick("mu", mu, 0.5);
    if (!(m >= 0.5 && m < 1)) throw ConfigError("mu must lie in [0.5,1), got " + format_g17(m));
    const auto s = derive_indices(g, m);
    const double t0 = pick("tau0", tau0, 3.0);

    json cfg = defaults(cmd, s, t0);
    for (const auto& [k, v] : file.items()) cfg[k] = v;
    if (K) cfg["K"] = *K;
    if (dt) cfg["dt"] = *dt;
    if (tau_end) cfg["tau_end"] = *tau_end;
    if (grid_n) cfg["grid_n"] = *grid_n;
    if (scheme) cfg["scheme"] = *scheme;
    cfg["gamma"] = g;
    cfg["mu"] = m;
    cfg["tau0"] = t0;
    cfg["y0"] = pick("y0", y0, std::exp(t0));
    parse_scheme(cfg["scheme"].get<std::string>());

    std::string dir = "out";
    if (const char* env = std::getenv("VACBLOW_OUT"); env && *env) dir = env;
    else if (file.contains("out")) dir = file["out"].get<std::string>();
    if (out) dir = *out;
    cfg.erase("out");

    Ctx c{cmd, cfg, dir, config_hash(cmd, cfg)};
    std::filesystem::create_directories(c.out);
    Checks ch;
    const auto start = std::chrono::steady_clock::now();
    json results;
    if (cmd == "profile") results = cmd_profile(c, ch);
    else if (cmd == "flow") results = cmd_flow(c, ch);
    else if (cmd == "modulate") results = cmd_modulate(c, ch);
    else if (cmd == "spectrum") results = cmd_spectrum(c, ch);
    else if (cmd == "simulate-ss") results = cmd_simulate_ss(c, ch);
    else if (cmd == "simulate-euler") results = cmd_simulate_euler(c, ch);
    else results = cmd_verify_all(c, ch);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string report_path = c.path(".json");
    json report = {{"schema_version", kSchemaVersion},
                   {"command", cmd},
                   {"config", cfg},
                   {"config_hash", c.key},
                   {"checks", ch.list},
                   {"all_pass", ch.ok},
                   {"results", results},
                   {"timing", {{"seconds", secs}}},
                   {"artifacts", c.artifacts}};
    std::ofstream(report_path) << report.dump(2) << "\n";
    std::cout << report_path << "\n";
    if (!ch.ok) {
      for (const auto& x : ch.list)
        if (!x["pass"].get<bool>()) std::cerr << "check failed: " << x["name"].get<std::string>() << "\n";
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
