#include "braggsim/scenario.hpp"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/fwm_classical.hpp"
#include "braggsim/fwm_quantum.hpp"
#include "braggsim/parallel.hpp"
#include "braggsim/transfer_matrix.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace braggsim {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

const std::pair<Subcommand, const char*> kNames[] = {
    {Subcommand::Spectrum, "spectrum"},     {Subcommand::Design, "design"},
    {Subcommand::StimSweep, "stim-sweep"},  {Subcommand::SpontRate, "spont-rate"},
    {Subcommand::ContrastSweep, "contrast-sweep"}, {Subcommand::Jsd, "jsd"},
    {Subcommand::Report, "report"},
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Everything the Bragg subcommands need, in SI units.
struct Bragg {
  GratingSpec grating; // with leads
  NonlinearParams params;
  PumpPulse pulse;
  CollectionWindow idler;
  CollectionWindow signal;
};

Bragg resolve_bragg(const ScenarioConfig& c, const std::string& what) {
  if (!c.is_bragg()) throw DomainError(what + " needs a Bragg structure; the config describes a ring");
  Bragg b;
  b.grating = std::get<BraggConfig>(c.structure).to_spec();
  b.grating.validate();
  b.params = c.params.to_params();
  b.pulse.shape = c.pulse.shape;
  b.pulse.duration = c.pulse.duration_ps * 1e-12;
  b.pulse.peak_power = c.pulse.peak_power_mw * 1e-3;
  b.pulse.center_wavelength =
      c.pulse.center_wavelength_nm ? *c.pulse.center_wavelength_nm * 1e-9 : stopband_center(b.grating);
  b.idler = c.window(WindowRole::Idler)->to_window();
  if (const auto* s = c.window(WindowRole::Signal)) {
    b.signal = s->to_window();
  } else {
    // mirror image of the idler window about the pump
    b.signal.width = b.idler.width;
    b.signal.center_wavelength = omega_to_wavelength(2.0 * b.pulse.center_omega() - b.idler.center_omega());
  }
  return b;
}

PumpPulse ring_pulse(const ScenarioConfig& c, const RingConfig& rc) {
  const RingSpec ring = rc.to_spec();
  PumpPulse p;
  p.shape = PulseShape::Gaussian;
  p.duration = rc.pulse_duration_ps ? *rc.pulse_duration_ps * 1e-12 : ring.dwelling_time(Resonance::Pump);
  p.peak_power = c.pulse.peak_power_mw * 1e-3;
  p.center_wavelength = ring.wavelength(Resonance::Pump);
  return p;
}

OutputFormat format_of(const ScenarioConfig& c, const RunOptions& o) { return o.format.value_or(c.output.format); }

std::string summary_json(const SweepResult& r) {
  SweepResult s;
  s.scalars = r.scalars;
  s.notes = r.notes;
  return to_json(s);
}

void add_table(ScenarioOutput& out, const std::string& name, const SweepResult& r, OutputFormat f) {
  if (f == OutputFormat::Json) {
    out.files.push_back({name + ".json", to_json(r)});
  } else {
    out.files.push_back({name + ".csv", to_csv(r)});
    if (!r.scalars.empty() || !r.notes.empty()) out.files.push_back({name + "_summary.json", summary_json(r)});
  }
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json grid_json(const FrequencyGrid& g) {
  ordered_json j;
  j["points"] = g.size();
  j["first_rad_per_s"] = g.front();
  j["spacing_rad_per_s"] = g.spacing();
  j["first_wavelength_nm"] = omega_to_wavelength(g.front()) * 1e9;
  j["last_wavelength_nm"] = omega_to_wavelength(g.back()) * 1e9;
  return j;
}

void add_state(ScenarioOutput& out, const std::string& name, const TwoPhotonState& st, const PumpPulse& pulse) {
  ordered_json h;
  h["structure"] = name;
  h["beta_sq"] = st.beta_sq;
  h["pair_rate_per_s"] = pair_rate(st, pulse);
  h["pump_wavelength_nm"] = pulse.center_wavelength * 1e9;
  h["is_zero"] = st.is_zero;
  if (!st.is_zero) {
    const SchmidtReport sr = schmidt_analysis(st);
    const JsdShape sh = jsd_shape(st);
    h["purity"] = sr.purity;
    h["schmidt_number"] = sr.schmidt_number;
    h["principal_axis_ratio"] = number(sh.principal_axis_ratio);
    h["antidiag_to_diag_ratio"] = number(sh.antidiag_to_diag_ratio);
    h["sum_fwhm_ghz"] = number(sh.sum_fwhm / constants::two_pi * 1e-9);
    h["diff_fwhm_ghz"] = number(sh.diff_fwhm / constants::two_pi * 1e-9);
    out.messages.push_back(name + ": beta_sq " + fmt("%.4e", st.beta_sq) + ", purity " + fmt("%.4f", sr.purity) +
                           ", principal-axis ratio " + fmt("%.3f", sh.principal_axis_ratio));
  }
  h["signal_grid"] = grid_json(st.signal_grid);
  h["idler_grid"] = grid_json(st.idler_grid);
  h["warnings"] = st.warnings;
  out.files.push_back({"jsd_" + name + ".csv", jsd_to_csv(st)});
  out.files.push_back({"jsd_" + name + ".json", h.dump(2) + "\n"});
  for (const auto& w : st.warnings) out.warnings.push_back(name + ": " + w);
}

void run_spectrum(const ScenarioConfig& c, const RunOptions& o, ScenarioOutput& out) {
  const Bragg b = resolve_bragg(c, "spectrum");
  const auto& sc = c.sweep.spectrum;
  const GratingSpec& g = b.grating;
  const double bragg = 2.0 * g.period * (g.n_lo + (1.0 - g.duty_cycle) * g.delta_n);
  const double center = sc.center_nm ? *sc.center_nm * 1e-9 : bragg;
  const std::size_t n =
      o.points.value_or(static_cast<std::size_t>(std::llround(sc.span_nm * 1e3 / sc.step_pm)) + 1);
  SweepResult r = transmission_spectrum(g, make_wavelength_grid(center, sc.span_nm * 1e-9, n));
  r.scalars["bragg_wavelength_nm"] = bragg * 1e9;
  if (const auto rep = stopband_report(r)) {
    r.scalars["center_wavelength_nm"] = rep->center_wavelength * 1e9;
    r.scalars["rejection_db"] = rep->rejection_db_at_center;
    r.scalars["bandwidth_10db_nm"] = rep->bandwidth_at_10db * 1e9;
    out.messages.push_back("stopband minimum " + fmt("%.4f", rep->center_wavelength * 1e9) + " nm, rejection " +
                           fmt("%.2f", rep->rejection_db_at_center) + " dB, -10 dB band " +
                           fmt("%.3f", rep->bandwidth_at_10db * 1e9) + " nm");
  } else {
    r.notes.push_back("no stopband below -3 dB in the scanned range");
    out.messages.push_back("no stopband found");
  }
  add_table(out, "spectrum", r, format_of(c, o));
}

void run_design(const ScenarioConfig& c, const RunOptions& o, ScenarioOutput& out) {
  const Bragg b = resolve_bragg(c, "design");
  const double target = o.rejection_db.value_or(c.sweep.design_rejection_db);
  const GratingSpec& g = b.grating;
  const long n = design_periods(target, g.n_lo, g.delta_n);
  GratingSpec designed = g.grating_only();
  designed.n_periods = n;
  const double lc = stopband_center(designed);
  const double t = stack_matrix(build_layer_stack(designed), wavelength_to_omega(lc)).transmission();
  SweepResult r({"rejection_db", "n_lo", "delta_n", "n_periods", "n_periods_exact", "relation_rejection_db",
                 "matrix_rejection_db", "grating_length_um"});
  r.add_row({target, g.n_lo, g.delta_n, static_cast<double>(n), design_periods_exact(target, g.n_lo, g.delta_n),
             rejection_db_for_periods(n, g.n_lo, g.delta_n), -10.0 * std::log10(t), designed.grating_length() * 1e6});
  add_table(out, "design", r, format_of(c, o));
  out.messages.push_back("N=" + std::to_string(n));
}

void run_stim(const ScenarioConfig& c, const RunOptions& o, ScenarioOutput& out) {
  const Bragg b = resolve_bragg(c, "stim-sweep");
  const auto& s = c.sweep.stim;
  SweepResult r = pump_sweep(b.grating, b.params, s.start_nm * 1e-9, s.stop_nm * 1e-9, s.signal_wavelength_nm * 1e-9,
                             o.points.value_or(s.points));
  const double tmin = stopband_center(b.grating) * 1e9;
  r.scalars["transmission_min_nm"] = tmin;
  r.scalars["dip_offset_nm"] = r.scalars.at("dip_center_nm") - tmin;
  add_table(out, "stim_sweep", r, format_of(c, o));
  out.messages.push_back("FWM dip centred at " + fmt("%.4f", r.scalars.at("dip_center_nm")) + " nm, depth " +
                         fmt("%.2f", r.scalars.at("dip_depth_db")) + " dB below the median");
}

void run_spont(const ScenarioConfig& c, const RunOptions& o, ScenarioOutput& out) {
  const Bragg b = resolve_bragg(c, "spont-rate");
  const double lp = b.pulse.center_wavelength;

  // Operating point of the stimulated sweep: full waveguide, CW powers.
  const double ls = c.sweep.stim.signal_wavelength_nm * 1e-9;
  const StimulatedResult stim = stimulated_idler(b.grating, b.params, lp, ls);
  const SpontRate sp = spont_from_stim(stim, b.params.signal_power, b.idler);
  const double pp_mw = b.params.pump_power * 1e3;
  const double per_mw2 = sp.rate / (pp_mw * pp_mw);
  const double per_ext_mw2 =
      b.params.coupling_loss_db ? per_mw2 * std::pow(10.0, -2.0 * *b.params.coupling_loss_db / 10.0) : nan();

  // Same structure as the two-photon state (grating only) for the check
  // between the two routes.
  const GratingSpec g0 = b.grating.grating_only();
  const std::size_t n = o.points.value_or(c.sweep.contrast.grid_points);
  const JsdGrids grids{FrequencyGrid::centered(b.signal.center_omega(), b.signal.width, n),
                       FrequencyGrid::centered(b.idler.center_omega(), b.idler.width, n)};
  const TwoPhotonState st = two_photon_state_bw(g0, b.params, b.pulse, b.signal, b.idler, grids);
  NonlinearParams p0 = b.params;
  p0.pump_power = b.pulse.peak_power;
  const StimulatedResult stim0 = stimulated_idler(g0, p0, lp, b.signal.center_wavelength);
  const SpontRate sp0 = spont_from_stim(stim0, p0.signal_power, b.idler);
  const double bw_rate = pair_rate(st, b.pulse);

  SweepResult r({"pump_wavelength_nm", "signal_wavelength_nm", "idler_wavelength_nm", "stim_idler_power_w",
                 "spont_power_w", "spont_rate_per_s", "spont_rate_per_s_per_mw2", "spont_rate_per_s_per_external_mw2",
                 "bw_beta_sq", "bw_pair_rate_per_s", "stim_relation_rate_per_s", "bw_to_stim_relation_ratio"});
  r.add_row({lp * 1e9, ls * 1e9, stim.idler_wavelength * 1e9, stim.idler_power_internal, sp.power, sp.rate, per_mw2,
             per_ext_mw2, st.beta_sq, bw_rate, sp0.rate, bw_rate / sp0.rate});
  r.notes.push_back("stimulated idler power is the internal power at the output facet");
  r.notes.push_back("bw_* and stim_relation_rate use the grating without leads, the pulse peak power and the configured windows");
  for (const auto& w : stim.warnings) r.notes.push_back(w);
  for (const auto& w : st.warnings) out.warnings.push_back(w);
  add_table(out, "spont_rate", r, format_of(c, o));
  out.messages.push_back("spontaneous rate " + fmt("%.4g", per_mw2) + " /s per mW^2 (internal)" +
                         (b.params.coupling_loss_db ? ", " + fmt("%.4g", per_ext_mw2) + " per external mW^2" : ""));
  out.messages.push_back("two-photon rate / stimulated-relation rate = " + fmt("%.4f", bw_rate / sp0.rate));
}

void run_contrast(const ScenarioConfig& c, const RunOptions& o, ScenarioOutput& out) {
  const Bragg b = resolve_bragg(c, "contrast-sweep");
  const auto& cs = c.sweep.contrast;
  ContrastSweepOptions opt;
  opt.grid_points = o.points.value_or(cs.grid_points);
  SweepResult r = contrast_sweep(b.grating, cs.target_rejection_db, cs.delta_n, b.params, b.pulse, b.idler, opt);
  if (cs.compare_rejection_db) {
    const double dn[] = {b.grating.delta_n};
    const auto a = contrast_sweep(b.grating, cs.target_rejection_db, dn, b.params, b.pulse, b.idler, opt);
    const auto z = contrast_sweep(b.grating, *cs.compare_rejection_db, dn, b.params, b.pulse, b.idler, opt);
    const double ra = a.column("pair_rate_per_s_per_mw2")[0], rz = z.column("pair_rate_per_s_per_mw2")[0];
    r.scalars["compare_delta_n"] = b.grating.delta_n;
    r.scalars["compare_rejection_db"] = *cs.compare_rejection_db;
    r.scalars["rate_at_target_per_s_per_mw2"] = ra;
    r.scalars["rate_at_compare_per_s_per_mw2"] = rz;
    r.scalars["compare_relative_difference"] = std::abs(rz / ra - 1.0);
    out.messages.push_back(fmt("%.0f", cs.target_rejection_db) + " dB vs " + fmt("%.0f", *cs.compare_rejection_db) +
                           " dB rate difference " + fmt("%.2f", 100.0 * std::abs(rz / ra - 1.0)) + "%");
  }
  add_table(out, "contrast_sweep", r, format_of(c, o));
  out.messages.push_back("log-log slope " + fmt("%.4f", r.scalars.at("slope")));
}

void run_jsd(const ScenarioConfig& c, const RunOptions& o, ScenarioOutput& out) {
  const auto& jc = c.sweep.jsd;
  if (c.is_bragg()) {
    const Bragg b = resolve_bragg(c, "jsd");
    const auto grids = default_bw_grids(b.signal, b.idler, o.points.value_or(jc.points), jc.span_factor);
    add_state(out, "bw", two_photon_state_bw(b.grating.grating_only(), b.params, b.pulse, b.signal, b.idler, grids),
              b.pulse);
  }
  const RingConfig* rc = c.is_bragg() ? (c.comparator ? &*c.comparator : nullptr) : &std::get<RingConfig>(c.structure);
  if (rc) {
    const RingSpec ring = rc->to_spec();
    const PumpPulse p = ring_pulse(c, *rc);
    const auto grids = default_ring_grids(ring, o.points.value_or(jc.ring_points), jc.ring_linewidths);
    add_state(out, "ring", two_photon_state_ring(ring, c.params.to_params(), p, grids), p);
  }
}

} // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
  for (const auto& [s, n] : kNames)
    if (name == n) return s;
  return std::nullopt;
}

std::string subcommand_name(Subcommand sub) {
  for (const auto& [s, n] : kNames)
    if (s == sub) return n;
  return "?";
}

ScenarioOutput run_scenario(const ScenarioConfig& config, Subcommand sub, const RunOptions& options) {
  ScenarioOutput out;
  switch (sub) {
  case Subcommand::Spectrum: run_spectrum(config, options, out); break;
  case Subcommand::Design: run_design(config, options, out); break;
  case Subcommand::StimSweep: run_stim(config, options, out); break;
  case Subcommand::SpontRate: run_spont(config, options, out); break;
  case Subcommand::ContrastSweep: run_contrast(config, options, out); break;
  case Subcommand::Jsd: run_jsd(config, options, out); break;
  case Subcommand::Report: {
    // --points means different things per subcommand; the report keeps the config values
    RunOptions ro = options;
    ro.points.reset();
    if (config.is_bragg()) {
      run_spectrum(config, ro, out);
      run_design(config, ro, out);
      run_stim(config, ro, out);
      run_spont(config, ro, out);
      run_contrast(config, ro, out);
    }
    run_jsd(config, ro, out);
    break;
  }
  }
  return out;
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + p.string() + "'");
  f << content;
  if (!f) throw IoError("write failed for '" + p.string() + "'");
}

} // namespace

RunStatus run_scenario_files(const RunRequest& req) {
  RunStatus status;
  try {
    if (!fs::exists(req.config_path)) throw IoError("config file not found: '" + req.config_path + "'");
    const ScenarioConfig config = load_config(req.config_path);
    const fs::path dir = req.out_dir ? fs::path(*req.out_dir) : fs::path(config.output.dir) / subcommand_name(req.subcommand);
    status.out_dir = dir.string();

    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioOutput out = run_scenario(config, req.subcommand, req.options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    if (!req.force) {
      for (const auto& f : out.files)
        if (fs::exists(dir / f.name))
          throw IoError("'" + (dir / f.name).string() + "' exists; pass --force to overwrite");
    }
    for (const auto& f : out.files) {
      write_file(dir / f.name, f.content);
      status.written.push_back((dir / f.name).string());
    }
    ordered_json meta;
    meta["tool"] = "braggsim";
    meta["version"] = kVersion;
    meta["subcommand"] = subcommand_name(req.subcommand);
    meta["config_path"] = fs::absolute(req.config_path).string();
    meta["config"] = nlohmann::json::parse(serialize_config(config));
    meta["created_utc"] = utc_now();
    meta["elapsed_s"] = seconds;
    meta["threads"] = thread_count();
    meta["files"] = ordered_json::array();
    for (const auto& f : out.files) meta["files"].push_back(f.name);
    meta["warnings"] = out.warnings;
    write_file(dir / "metadata.json", meta.dump(2) + "\n");
    status.written.push_back((dir / "metadata.json").string());
    status.messages = out.messages;
    status.warnings = out.warnings;
  } catch (const ConfigError& e) {
    status.exit_code = kExitConfig;
    status.error = std::string("config error in '") + req.config_path + "' at " + e.what();
  } catch (const IoError& e) {
    status.exit_code = kExitIo;
    status.error = std::string("I/O error: ") + e.what();
  } catch (const fs::filesystem_error& e) {
    status.exit_code = kExitIo;
    status.error = std::string("I/O error: ") + e.what();
  } catch (const DomainError& e) {
    status.exit_code = kExitDomain;
    status.error = std::string("domain error: ") + e.what();
  } catch (const InvalidArgument& e) {
    status.exit_code = kExitDomain;
    status.error = std::string("invalid argument: ") + e.what();
  } catch (const CoverageError& e) {
    status.exit_code = kExitDomain;
    status.error = std::string("coverage error: ") + e.what();
  }
  return status;
}

} // namespace braggsim
