#pragma once

#include "braggsim/core_model.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace braggsim {

// Scenario files mirror the JSON layout field by field, in the units named
// by each key suffix. Conversion to the SI model types happens in the
// to_*() accessors, so a config survives serialize/parse unchanged.

struct BraggConfig {
  double period_nm = 320.0;
  double duty_cycle = 0.5;
  long n_periods = 2000;
  double n_lo = 2.414;
  double delta_n = 3.4985e-3;
  double lead_in_um = 0.0;
  double lead_out_um = 0.0;

  GratingSpec to_spec() const;
  bool operator==(const BraggConfig&) const = default;
};

struct RingConfig {
  double radius_um = 15.0;
  double pump_wavelength_nm = 1534.55;
  double signal_wavelength_nm = 1544.27;
  double idler_wavelength_nm = 1524.94;
  double q_pump = 40000.0;
  double q_signal = 40000.0;
  double q_idler = 40000.0;
  double group_index = 2.414;
  // Gaussian pump for the ring; absent means the pump dwelling time.
  std::optional<double> pulse_duration_ps;

  RingSpec to_spec() const;
  bool operator==(const RingConfig&) const = default;
};

struct ParamsConfig {
  double gamma_per_w_m = 200.0;
  double pump_power_mw = 1.29;
  double signal_power_mw = 1.23;
  std::optional<double> coupling_loss_db;
  double gvd_beta2_ps2_per_km = 0.0;

  NonlinearParams to_params() const;
  bool operator==(const ParamsConfig&) const = default;
};

struct PulseConfig {
  PulseShape shape = PulseShape::TopHat;
  double duration_ps = 1000.0;
  double peak_power_mw = 1.0;
  // Absent: the computed stopband minimum (Bragg) or the pump resonance (ring).
  std::optional<double> center_wavelength_nm;

  bool operator==(const PulseConfig&) const = default;
};

enum class WindowRole { Signal, Idler };

struct WindowConfig {
  WindowRole role = WindowRole::Idler;
  double center_wavelength_nm = 1560.05;
  double width_ghz = 10.0; // cycles/s; the angular width is 2 pi times this

  CollectionWindow to_window() const;
  bool operator==(const WindowConfig&) const = default;
};

struct SpectrumSweepConfig {
  std::optional<double> center_nm; // absent: Bragg wavelength
  double span_nm = 12.0;
  double step_pm = 2.0;
  bool operator==(const SpectrumSweepConfig&) const = default;
};

struct StimSweepConfig {
  double start_nm = 1541.9;
  double stop_nm = 1550.0;
  std::size_t points = 406;
  double signal_wavelength_nm = 1560.0;
  bool operator==(const StimSweepConfig&) const = default;
};

struct ContrastSweepConfig {
  std::vector<double> delta_n{1e-3, 1.5e-3, 2e-3, 3e-3, 4e-3, 5e-3, 6e-3, 8e-3};
  double target_rejection_db = 20.0;
  // Second target evaluated at the structure's own contrast; absent skips it.
  std::optional<double> compare_rejection_db = 100.0;
  std::size_t grid_points = 41;
  bool operator==(const ContrastSweepConfig&) const = default;
};

struct JsdConfig {
  std::size_t points = 201;
  double span_factor = 2.0; // Bragg grids span this many window widths
  std::size_t ring_points = 201;
  double ring_linewidths = 6.0;
  bool operator==(const JsdConfig&) const = default;
};

struct SweepConfig {
  double design_rejection_db = 20.0;
  SpectrumSweepConfig spectrum;
  StimSweepConfig stim;
  ContrastSweepConfig contrast;
  JsdConfig jsd;
  bool operator==(const SweepConfig&) const = default;
};

enum class OutputFormat { Csv, Json };

struct OutputConfig {
  std::string dir = "out";
  OutputFormat format = OutputFormat::Csv;
  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::variant<BraggConfig, RingConfig> structure;
  std::optional<RingConfig> comparator; // ring reference for the jsd outputs
  ParamsConfig params;
  PulseConfig pulse;
  std::vector<WindowConfig> windows{WindowConfig{}};
  SweepConfig sweep;
  OutputConfig output;

  bool is_bragg() const { return std::holds_alternative<BraggConfig>(structure); }
  const WindowConfig* window(WindowRole role) const;
  bool operator==(const ScenarioConfig&) const = default;
};

// Throws ConfigError carrying the JSON pointer of the offending field and
// its 1-based line in `text`.
ScenarioConfig parse_config(const std::string& text);
// Throws IoError when the file cannot be read.
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

} // namespace braggsim
