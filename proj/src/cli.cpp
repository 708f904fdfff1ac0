#include "pfr/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pfr/circuit.hpp"
#include "pfr/constants.hpp"
#include "pfr/crossover.hpp"
#include "pfr/equilibria.hpp"
#include "pfr/errors.hpp"
#include "pfr/gillespie.hpp"
#include "pfr/meanfield.hpp"
#include "pfr/output.hpp"
#include "pfr/teff.hpp"

namespace pfr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMaxMonteCarloModes = 64;

struct Outcome {
  int code = kExitOk;
  std::vector<std::string> outputs;
  std::optional<unsigned long long> seed;
};

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.precision = cfg.extended_precision ? Precision::Extended : Precision::Double;
  return o;
}

// Fixed cutoff when the config pins k_max, adaptive otherwise.
CutoffResult solve(const ModelSpec& spec, const RunConfig& cfg,
                   const std::optional<OccupationVector>& init = std::nullopt) {
  const SolverOptions opts = solver_options(cfg);
  if (cfg.k_max) {
    std::optional<OccupationVector> start;
    if (init) start = resize_warm_start(*init, spec);
    return CutoffResult{spec, steady_state(spec, opts, start), 0};
  }
  return adapt_cutoff_solve(spec, opts, cfg.observable_tol, init);
}

std::string flag_name(TeffFlag f) {
  switch (f) {
    case TeffFlag::None:
      return "none";
    case TeffFlag::Infinite:
      return "infinite";
    case TeffFlag::Inverted:
      return "inverted";
  }
  return "none";
}

std::optional<double> support_temperature_k(const RunConfig& cfg) {
  if (cfg.dimensionless() || !cfg.support_temperature_mk) return std::nullopt;
  return *cfg.support_temperature_mk * si::millikelvin;
}

// Spectral-range averages keyed by K; flagged or out-of-range entries are
// reported as strings.
json teff_summary(const OccupationVector& n, const ModelSpec& spec, const RunConfig& cfg) {
  json out = json::object();
  const auto t = support_temperature_k(cfg);
  for (int K : cfg.teff_k) {
    json entry = json::object();
    try {
      const double v = teff_range(n, spec.x, K);
      entry["teff_over_t"] = v;
      if (t) entry["teff_mk"] = v * *t / si::millikelvin;
    } catch (const FlaggedConstituent& e) {
      entry["error"] = e.what();
    } catch (const DomainError& e) {
      entry["error"] = e.what();
    }
    out[std::to_string(K)] = entry;
  }
  return out;
}

json spec_json(const ModelSpec& s) {
  return json{{"x", s.x}, {"theta", s.theta}, {"r", s.r}, {"big_g", s.big_g}, {"k_max", s.k_max}};
}

CsvTable occupation_table(const OccupationVector& n, const ModelSpec& spec) {
  CsvTable t;
  t.schema = "pfr.occupations.v1";
  t.columns = {"k", "n_k", "n_th_k", "E_k", "J_k_kplus1"};
  const RateSchedule sched = make_schedule(spec);
  const std::vector<double> j = currents(n, sched);
  for (int k = 1; k <= spec.k_max; ++k) {
    t.add({format_number(static_cast<long long>(k)), format_number(n[k - 1]),
           format_number(sched.n_th[k - 1]), format_number(k * n[k - 1]),
           format_number(k < spec.k_max ? j[k - 1] : 0.0)});
  }
  return t;
}

Outcome cmd_steady(const RunConfig& cfg, const fs::path& out) {
  const CutoffResult res = solve(cfg.model_spec(), cfg);
  const SteadyStateReport& r = res.report;
  write_csv(out / "occupations.csv", occupation_table(r.occupations, res.spec));

  const StaggeringDiagnostic stag = staggering(r.occupations);
  json summary = {
      {"N_ph", r.total_number},
      {"E_ph", r.total_energy},
      {"E_th", r.thermal_energy},
      {"condensate_fraction", r.condensate_fraction},
      {"converged", r.converged},
      {"iterations", r.iterations},
      {"k_max", r.k_max},
      {"newton_iterations", r.newton_iterations},
      {"pseudo_steps", r.pseudo_steps},
      {"residual", r.residual},
      {"cutoff_doublings", res.doublings},
      {"spec", spec_json(res.spec)},
      {"staggering", {{"alternating_norm", stag.alternating_norm},
                      {"sign_changes", stag.sign_changes}}},
      {"teff_over_t_at_K", teff_summary(r.occupations, res.spec, cfg)},
  };
  write_json(out / "summary.json", summary);
  return Outcome{kExitOk, {"occupations.csv", "summary.json"}, std::nullopt};
}

ModelSpec spec_at(const RunConfig& cfg, const std::string& axis, double v) {
  RunConfig c = cfg;
  if (axis == "big_g") {
    c.big_g = v;
  } else if (axis == "omega_w_over_delta") {
    c.omega_w_over_delta = v;
  } else if (axis == "support_temperature") {
    if (c.dimensionless()) throw ConfigError("support_temperature sweeps need a physical config");
    const bool tied = !c.waste_temperature_mk || *c.waste_temperature_mk == *c.support_temperature_mk;
    c.support_temperature_mk = v;
    if (tied) c.waste_temperature_mk = v;
  } else if (axis == "t_low_over_t") {
    if (!(v > 0.0)) throw DomainError("t_low_over_t must be > 0");
    const ModelSpec base = cfg.model_spec();
    c.omega_w_over_delta = base.theta / v;
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  return c.model_spec();
}

void check_sweep_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  bool up = true, down = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    up = up && grid[i] > grid[i - 1];
    down = down && grid[i] < grid[i - 1];
  }
  if (grid.size() > 1 && !up && !down) throw ConfigError("sweep grid must be strictly monotone");
}

Outcome cmd_condense(const RunConfig& cfg, const fs::path& out, int threads) {
  const ModelSpec spec = cfg.model_spec();
  const std::vector<double> grid = cfg.sweep_grid.empty() ? default_t_ratio_grid() : cfg.sweep_grid;
  const CondensationCurve curve = condensation_curve(spec, grid, threads);
  CsvTable t;
  t.schema = "pfr.condensation.v1";
  t.columns = {"t_low_over_t",      "fraction_energy_constrained", "mu_energy_constrained",
               "fraction_fixed_N", "mu_fixed_N",                   "N_ph"};
  for (const auto& p : curve.points) {
    t.add({format_number(p.t_low_over_t), format_number(p.fraction_energy_constrained),
           format_number(p.mu_energy_constrained), format_number(p.fraction_fixed_n),
           format_number(p.mu_fixed_n), format_number(p.n_ph)});
  }
  write_csv(out / "condensation.csv", t);
  write_json(out / "condensation_summary.json",
             json{{"x", curve.x}, {"k_max", curve.k_max}, {"fixed_number", curve.fixed_number},
                  {"points", curve.points.size()}});
  return Outcome{kExitOk, {"condensation.csv", "condensation_summary.json"}, std::nullopt};
}

Outcome cmd_sweep(const RunConfig& cfg, const fs::path& out, int threads) {
  const std::string axis = cfg.sweep_axis.value_or("");
  if (axis.empty()) throw ConfigError("sweep needs an axis (--axis)");
  if (cfg.ideal_g0) {
    if (axis != "t_low_over_t") throw ConfigError("--ideal-g0 requires the t_low_over_t axis");
    return cmd_condense(cfg, out, threads);
  }
  check_sweep_grid(cfg.sweep_grid);

  CsvTable points;
  points.schema = "pfr.sweep.points.v1";
  points.columns = {"axis_value", "status", "k_max", "N_ph", "E_ph", "E_th", "condensate_fraction"};
  for (int K : cfg.teff_k) points.columns.push_back("teff_over_t_K" + std::to_string(K));
  CsvTable occ;
  occ.schema = "pfr.sweep.occupations.v1";
  occ.columns = {"axis_value", "k", "n_k", "n_th_k", "E_k", "J_k_kplus1"};

  int failures = 0;
  std::optional<OccupationVector> warm;
  for (double v : cfg.sweep_grid) {
    std::vector<std::string> row = {format_number(v)};
    try {
      const ModelSpec spec = spec_at(cfg, axis, v);
      const CutoffResult res = solve(spec, cfg, warm);
      const SteadyStateReport& r = res.report;
      warm = r.occupations;
      row.insert(row.end(), {"ok", format_number(static_cast<long long>(r.k_max)),
                             format_number(r.total_number), format_number(r.total_energy),
                             format_number(r.thermal_energy),
                             format_number(r.condensate_fraction)});
      for (int K : cfg.teff_k) {
        try {
          row.push_back(format_number(teff_range(r.occupations, res.spec.x, K)));
        } catch (const std::exception&) {
          row.push_back("flagged");
        }
      }
      const CsvTable one = occupation_table(r.occupations, res.spec);
      for (const auto& orow : one.rows) {
        std::vector<std::string> full = {format_number(v)};
        full.insert(full.end(), orow.begin(), orow.end());
        occ.add(std::move(full));
      }
    } catch (const std::exception& e) {
      ++failures;
      std::string status = e.what();
      for (char& ch : status) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      row.push_back("failed: " + status);
      while (row.size() < points.columns.size()) row.push_back("nan");
    }
    points.add(std::move(row));
  }
  write_csv(out / "sweep_points.csv", points);
  write_csv(out / "sweep_occupations.csv", occ);
  return Outcome{failures ? kExitSweepPointFailed : kExitOk,
                 {"sweep_points.csv", "sweep_occupations.csv"}, std::nullopt};
}

Outcome cmd_mc(const RunConfig& cfg, const fs::path& out, int threads) {
  const ModelSpec spec = cfg.model_spec();
  if (!cfg.k_max || spec.k_max > kMaxMonteCarloModes) {
    throw ConfigError("mc needs an explicit k_max <= " + std::to_string(kMaxMonteCarloModes));
  }
  McOptions o;
  o.n_trajectories = cfg.mc_trajectories;
  o.burn_in_time = cfg.mc_burn_in;
  o.sample_interval = cfg.mc_interval;
  o.samples_per_trajectory = cfg.mc_samples;
  o.batches_per_trajectory = cfg.mc_batches;
  o.master_seed = cfg.seed;
  o.threads = threads;
  const McEstimate est = sample_steady(spec, o);
  const SteadyStateReport mf = steady_state(spec, solver_options(cfg));
  const bool reliable = est.n_trajectories >= 2 && est.batches >= 10;

  CsvTable t;
  t.schema = "pfr.mc.modes.v1";
  t.columns = {"k", "mean", "stderr", "mean_field", "z", "g2", "g2_stderr"};
  json modes = json::array();
  double max_abs_z = 0.0;
  for (const auto& m : est.modes) {
    const double mfv = mf.occupations[m.k - 1];
    const double z = (m.mean - mfv) / m.mean_stderr;
    max_abs_z = std::max(max_abs_z, std::abs(z));
    t.add({format_number(static_cast<long long>(m.k)), format_number(m.mean),
           format_number(m.mean_stderr), format_number(mfv), format_number(z),
           format_number(m.g2), format_number(m.g2_stderr)});
    modes.push_back(json{{"k", m.k},
                         {"mean", m.mean},
                         {"stderr", json_number(m.mean_stderr)},
                         {"mean_field", mfv},
                         {"z", json_number(z)},
                         {"g2", json_number(m.g2)},
                         {"g2_stderr", json_number(m.g2_stderr)},
                         {"g2_defined", m.g2_defined},
                         {"histogram", m.histogram}});
  }
  write_csv(out / "mc_modes.csv", t);
  write_json(out / "mc.json",
             json{{"master_seed", est.master_seed},
                  {"n_trajectories", est.n_trajectories},
                  {"samples", est.samples},
                  {"batches", est.batches},
                  {"burn_in_time", est.burn_in_time},
                  {"sample_interval", est.sample_interval},
                  {"jumps", est.jumps},
                  {"stderr_reliable", reliable},
                  {"max_abs_z", max_abs_z},
                  {"spec", spec_json(spec)},
                  {"modes", modes}});
  return Outcome{kExitOk, {"mc_modes.csv", "mc.json"}, cfg.seed};
}

Outcome cmd_teff(const RunConfig& cfg, const fs::path& out) {
  const CutoffResult res = solve(cfg.model_spec(), cfg);
  const TeffTable table = teff_table(res.report.occupations, res.spec.x);
  CsvTable t;
  t.schema = "pfr.teff.v1";
  t.columns = {"k", "omega_over_delta", "teff_over_t", "inversion_flag"};
  for (const auto& v : table.per_k) {
    t.add({format_number(static_cast<long long>(v.k)), format_number(static_cast<double>(v.k)),
           format_number(v.teff_over_t), flag_name(v.flag)});
  }
  write_csv(out / "teff.csv", t);
  json j = {{"spec", spec_json(res.spec)},
            {"teff_over_t_at_K", teff_summary(res.report.occupations, res.spec, cfg)},
            {"N_ph", res.report.total_number},
            {"N_th", total_number(thermal_occupations(res.spec))}};
  if (auto tk = support_temperature_k(cfg)) j["support_temperature_mk"] = *tk / si::millikelvin;
  write_json(out / "teff.json", j);
  return Outcome{kExitOk, {"teff.csv", "teff.json"}, std::nullopt};
}

Outcome cmd_crossover(const RunConfig& cfg, const fs::path& out) {
  const ModelSpec spec = cfg.model_spec();
  json j = {{"spec", spec_json(spec)}};
  int code = kExitOk;
  try {
    const CrossoverResult r = crossover(spec, solver_options(cfg));
    j["k_max"] = r.spec.k_max;
    j["kc_implicit"] = r.kc_implicit ? json(*r.kc_implicit) : json(nullptr);
    j["kc_closed"] = r.kc_closed;
    j["kc_numeric"] = r.kc_numeric ? json(*r.kc_numeric) : json(nullptr);
    j["energy_dip"] = r.energy_dip ? json(*r.energy_dip) : json(nullptr);
    j["flagged"] = !r.kc_implicit.has_value();
    if (!r.kc_implicit) {
      j["note"] = "implicit relation has no root in [1, k_max]; regime outside the asymptotic assumptions";
      code = kExitCrossoverNoRoot;
    }
  } catch (const DomainError& e) {
    j["flagged"] = true;
    j["note"] = e.what();
    code = kExitCrossoverNoRoot;
  }
  write_json(out / "crossover.json", j);
  return Outcome{code, {"crossover.json"}, std::nullopt};
}

Outcome cmd_validate(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const CircuitParams params = cfg.circuit_params();
  const FeasibilityReport rep = validate(params, cfg.target_n1, cfg.photon_number);
  json checks = json::array();
  log << std::left << std::setw(18) << "check" << std::setw(30) << "inequality" << std::setw(14)
      << "lhs" << std::setw(14) << "rhs" << std::setw(12) << "margin"
      << "result\n";
  for (const auto& c : rep.checks) {
    std::string result = c.skipped ? "skipped" : (c.passed ? "pass" : "FAIL");
    if (!c.mandatory && !c.skipped) result += " (info)";
    log << std::left << std::setw(18) << c.name << std::setw(30) << c.inequality << std::setw(14)
        << std::setprecision(5) << c.lhs << std::setw(14) << c.rhs << std::setw(12) << c.margin
        << result << "\n";
    checks.push_back(json{{"name", c.name},
                          {"inequality", c.inequality},
                          {"lhs", json_number(c.lhs)},
                          {"rhs", json_number(c.rhs)},
                          {"margin", json_number(c.margin)},
                          {"passed", c.passed},
                          {"mandatory", c.mandatory},
                          {"skipped", c.skipped},
                          {"note", c.note}});
  }
  const bool ok = rep.mandatory_passed();
  log << (ok ? "all mandatory checks pass\n" : "mandatory checks failed\n");
  const double two_pi_mhz = si::mhz_to_angular;
  json j = {{"phase_zpf_waveguide", rep.phases.waveguide},
            {"phase_zpf_waste", rep.phases.waste},
            {"coupling_g_mhz", rep.coupling_g / two_pi_mhz},
            {"big_g", json_number(rep.big_g)},
            {"waste_occupation", rep.waste_occupation},
            {"photon_number", rep.photon_number},
            {"target_n1", rep.target_n1},
            {"delta_1_rad_per_s",
             {{"self_kerr", rep.shifts.self_kerr},
              {"cross_kerr_waveguide", rep.shifts.cross_kerr_waveguide},
              {"cross_kerr_waste", rep.shifts.cross_kerr_waste},
              {"lamb", rep.shifts.lamb},
              {"total", rep.shifts.total}}},
            {"omega_1_rad_per_s", rep.omega_1},
            {"checks", checks},
            {"mandatory_passed", ok}};
  write_json(out / "validate.json", j);
  return Outcome{ok ? kExitOk : kExitValidateFailed, {"validate.json"}, std::nullopt};
}

struct Flags {
  std::string config;
  std::string preset;
  std::string out = "out";
  int threads = 1;
  std::optional<unsigned long long> seed;
  bool extended_precision = false;

  std::optional<double> big_g, omega_w_over_delta, support_temperature_mk, waste_temperature_mk,
      mode_spacing_mhz, quality_factor, coupling_g_mhz, waste_decay_mhz, x, theta, epsilon,
      target_n1, photon_number, observable_tol;
  std::optional<int> k_max, snail_count;

  std::optional<std::string> axis;
  std::vector<double> grid;
  std::vector<int> teff_k;
  bool ideal_g0 = false;

  std::optional<int> trajectories, batches;
  std::optional<double> burn_in, interval;
  std::optional<long long> samples;

  std::string manifest;
};

void add_common(CLI::App* sc, Flags& f) {
  sc->add_option("--config", f.config, "JSON config file");
  sc->add_option("--preset", f.preset, "built-in preset (fig2a, fig2b, fig3, fig4, fig5, fig6, table1)");
  sc->add_option("--out", f.out, "output directory");
  sc->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  sc->add_option("--seed", f.seed, "master seed for stochastic runs");
  sc->add_flag("--extended-precision", f.extended_precision, "extended-precision sums");
  sc->add_option("--big-g", f.big_g, "dissipation ratio G");
  sc->add_option("--omega-w-over-delta", f.omega_w_over_delta, "omega_w / Delta");
  sc->add_option("--support-temperature-mk", f.support_temperature_mk, "T in mK");
  sc->add_option("--waste-temperature-mk", f.waste_temperature_mk, "T_w in mK");
  sc->add_option("--mode-spacing-mhz", f.mode_spacing_mhz, "Delta/2pi in MHz");
  sc->add_option("--quality-factor", f.quality_factor, "Q");
  sc->add_option("--coupling-g-mhz", f.coupling_g_mhz, "g/2pi in MHz");
  sc->add_option("--waste-decay-mhz", f.waste_decay_mhz, "Gamma/2pi in MHz");
  sc->add_option("--k-max", f.k_max, "mode cutoff (disables cutoff adaptation)");
  sc->add_option("--x", f.x, "dimensionless hbar Delta/(k_B T)");
  sc->add_option("--theta", f.theta, "T_w / T");
  sc->add_option("--observable-tol", f.observable_tol, "cutoff adaptation tolerance");
}

void apply_overrides(RunConfig& c, const Flags& f) {
  auto set = [](auto& field, const auto& opt) {
    if (opt) field = *opt;
  };
  if (f.x) {
    c.support_temperature_mk.reset();
    c.mode_spacing_mhz.reset();
    c.waste_temperature_mk.reset();
  }
  if (f.support_temperature_mk || f.mode_spacing_mhz) c.x.reset();
  set(c.big_g, f.big_g);
  set(c.omega_w_over_delta, f.omega_w_over_delta);
  set(c.support_temperature_mk, f.support_temperature_mk);
  set(c.waste_temperature_mk, f.waste_temperature_mk);
  set(c.mode_spacing_mhz, f.mode_spacing_mhz);
  set(c.quality_factor, f.quality_factor);
  set(c.coupling_g_mhz, f.coupling_g_mhz);
  set(c.waste_decay_mhz, f.waste_decay_mhz);
  set(c.k_max, f.k_max);
  set(c.x, f.x);
  set(c.theta, f.theta);
  set(c.drive_amplitude, f.epsilon);
  set(c.snail_count, f.snail_count);
  set(c.target_n1, f.target_n1);
  set(c.photon_number, f.photon_number);
  if (f.observable_tol) c.observable_tol = *f.observable_tol;
  if (f.seed) c.seed = *f.seed;
  if (f.extended_precision) c.extended_precision = true;
  if (f.axis) c.sweep_axis = *f.axis;
  if (!f.grid.empty()) c.sweep_grid = f.grid;
  if (!f.teff_k.empty()) c.teff_k = f.teff_k;
  if (f.ideal_g0) c.ideal_g0 = true;
  if (f.trajectories) c.mc_trajectories = *f.trajectories;
  if (f.batches) c.mc_batches = *f.batches;
  if (f.burn_in) c.mc_burn_in = *f.burn_in;
  if (f.interval) c.mc_interval = *f.interval;
  if (f.samples) c.mc_samples = *f.samples;
}

RunConfig resolve(const std::string& subcommand, const Flags& f) {
  if (!f.config.empty() && !f.preset.empty()) {
    throw ConfigError("give either --config or --preset, not both");
  }
  RunConfig c;
  if (!f.config.empty()) {
    c = load_config_file(f.config);
  } else if (!f.preset.empty()) {
    c = load_preset(f.preset);
  } else {
    c = load_preset(subcommand == "validate" ? "table1" : "fig2a");
  }
  apply_overrides(c, f);
  return c;
}

int error_code(const std::exception_ptr& ep, std::ostream& log) {
  try {
    std::rethrow_exception(ep);
  } catch (const NotConverged& e) {
    log << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const CutoffNotConverged& e) {
    log << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const DegenerateSteadyState& e) {
    log << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const AbsorbingState& e) {
    log << "error: " << e.what() << "\n";
    return kExitAbsorbing;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

int run_subcommand(const std::string& subcommand, const RunConfig& cfg, const fs::path& out_dir,
                   int threads, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    fs::create_directories(out_dir);
    if (subcommand == "steady") {
      outcome = cmd_steady(cfg, out_dir);
    } else if (subcommand == "sweep") {
      outcome = cmd_sweep(cfg, out_dir, threads);
    } else if (subcommand == "condense") {
      RunConfig c = cfg;
      c.sweep_axis = "t_low_over_t";
      c.ideal_g0 = true;
      outcome = cmd_condense(c, out_dir, threads);
    } else if (subcommand == "mc") {
      outcome = cmd_mc(cfg, out_dir, threads);
    } else if (subcommand == "teff") {
      outcome = cmd_teff(cfg, out_dir);
    } else if (subcommand == "crossover") {
      outcome = cmd_crossover(cfg, out_dir);
    } else if (subcommand == "validate") {
      outcome = cmd_validate(cfg, out_dir, log);
    } else {
      throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
  } catch (...) {
    outcome.code = error_code(std::current_exception(), log);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"tool", kToolName},
                   {"tool_version", kToolVersion},
                   {"subcommand", subcommand},
                   {"resolved_config", cfg.to_json()},
                   {"master_seed", outcome.seed ? json(*outcome.seed) : json(nullptr)},
                   {"outputs", outcome.outputs},
                   {"exit_code", outcome.code},
                   {"threads", threads},
                   {"wall_clock_seconds", wall}};
  try {
    write_json(out_dir / "manifest.json", manifest);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    if (outcome.code == kExitOk) outcome.code = kExitError;
  }
  return outcome.code;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Refrigeration of a 1D microwave photon gas: steady states, sweeps, Monte Carlo "
               "and hardware feasibility"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Flags f;

  auto* steady = app.add_subcommand("steady", "mean-field steady state");
  auto* sweep = app.add_subcommand("sweep", "warm-started steady states along a parameter axis");
  auto* condense = app.add_subcommand("condense", "G = 0+ condensation curve (sweep --ideal-g0)");
  auto* mc = app.add_subcommand("mc", "Gillespie Monte Carlo versus mean field");
  auto* teff = app.add_subcommand("teff", "per-frequency effective temperatures");
  auto* cross = app.add_subcommand("crossover", "crossover mode number k_c");
  auto* val = app.add_subcommand("validate", "hardware feasibility report");
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");

  for (auto* sc : {steady, sweep, condense, mc, teff, cross, val}) add_common(sc, f);
  for (auto* sc : {steady, sweep, teff}) {
    sc->add_option("--teff-k", f.teff_k, "spectral ranges K for T_eff averages")->delimiter(',');
  }
  sweep->add_option("--axis", f.axis, "big_g | omega_w_over_delta | support_temperature | t_low_over_t");
  for (auto* sc : {sweep, condense}) {
    sc->add_option("--grid", f.grid, "comma-separated grid values")->delimiter(',');
  }
  sweep->add_flag("--ideal-g0", f.ideal_g0, "G = 0+ closed forms on the t_low_over_t axis");
  mc->add_option("--trajectories", f.trajectories, "independent trajectories");
  mc->add_option("--burn-in", f.burn_in, "burn-in time (units Gamma/g^2)");
  mc->add_option("--interval", f.interval, "sampling interval");
  mc->add_option("--samples", f.samples, "samples per trajectory");
  mc->add_option("--batches", f.batches, "batches per trajectory for standard errors");
  val->add_option("--epsilon", f.epsilon, "flux drive amplitude");
  val->add_option("--snail-count", f.snail_count, "number of SNAILs");
  val->add_option("--target-n1", f.target_n1, "condensate occupation for the shift check");
  val->add_option("--photon-number", f.photon_number, "photon number for the phase check");
  replay->add_option("manifest", f.manifest, "manifest.json")->required();
  replay->add_option("--out", f.out, "output directory")->required();
  replay->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (replay->parsed()) {
      std::ifstream in(f.manifest);
      if (!in) throw ConfigError("cannot open manifest '" + f.manifest + "'");
      const json m = json::parse(in);
      const RunConfig cfg = RunConfig::from_json(m.at("resolved_config"), f.manifest);
      RunConfig restored = cfg;
      restored.source = m.at("resolved_config").value("source", cfg.source);
      return run_subcommand(m.at("subcommand").get<std::string>(), restored, f.out, f.threads,
                            std::cerr);
    }
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    const RunConfig cfg = resolve(name, f);
    std::ostream& log = name == "validate" ? std::cout : std::cerr;
    return run_subcommand(name, cfg, f.out, f.threads, log);
  } catch (...) {
    return error_code(std::current_exception(), std::cerr);
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args);
}

}  // namespace pfr
