#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace braggsim {

using cdouble = std::complex<double>;

// Periodically corrugated waveguide. Each period is a narrow segment
// (index n_lo, length duty_cycle * period) followed by a wide segment
// (index n_lo + delta_n). The unstructured leads and the surrounding
// waveguide are the wide (unperturbed) guide.
struct GratingSpec {
  double period = 320e-9;
  double duty_cycle = 0.5;
  long n_periods = 2000;
  double n_lo = 2.414;
  double delta_n = 3.4985e-3;
  double lead_in_length = 0.0;
  double lead_out_length = 0.0;

  double n_hi() const { return n_lo + delta_n; }
  double grating_length() const { return static_cast<double>(n_periods) * period; }
  double total_length() const { return lead_in_length + grating_length() + lead_out_length; }
  // Same grating with the leads removed.
  GratingSpec grating_only() const {
    GratingSpec g = *this;
    g.lead_in_length = g.lead_out_length = 0.0;
    return g;
  }

  // Throws InvalidArgument on a broken invariant.
  void validate() const;
};

enum class Resonance { Pump, Signal, Idler };

// Side-coupled microring used as a reference pair source.
struct RingSpec {
  double radius = 15e-6;
  double lambda_p = 1534.55e-9;
  double lambda_s = 1544.27e-9;
  double lambda_i = 1524.94e-9;
  double q_p = 40000.0;
  double q_s = 40000.0;
  double q_i = 40000.0;
  // Sets the round-trip time; the waveguide model is dispersionless, so the
  // effective index of the unperturbed guide is the natural default.
  double group_index = 2.414;

  double wavelength(Resonance r) const;
  double quality_factor(Resonance r) const;
  double omega(Resonance r) const;
  // Energy decay rate omega0/Q of a resonance.
  double linewidth(Resonance r) const;
  // tau_d = Q / omega0 = Q lambda / (2 pi c).
  double dwelling_time(Resonance r) const;
  double circumference() const;
  double round_trip_time() const;
  double free_spectral_range() const; // rad/s

  void validate() const;
};

enum class PulseShape { TopHat, Gaussian };

// Pump envelope. For TopHat, `duration` is the full width. For Gaussian it
// is the 1/e half-width of the field amplitude: A(t) = sqrt(P0) exp(-t^2/d^2).
struct PumpPulse {
  PulseShape shape = PulseShape::TopHat;
  double duration = 1e-9;
  double peak_power = 1e-3;
  double center_wavelength = 1544.8e-9;

  double center_omega() const;
  double energy() const;
  double photon_number() const;
  // TopHat: 2 pi / T (first spectral null). Gaussian: 2 / d (1/e half-width
  // of the spectral amplitude).
  double spectral_width() const;

  void validate() const;
};

// Spectral collection window of angular width `width` around a wavelength.
struct CollectionWindow {
  double center_wavelength = 1560.05e-9;
  double width = 2.0 * 3.14159265358979323846 * 10e9;

  double center_omega() const;
  bool contains(double omega) const;
  void validate() const;
  // Also rejects a window that contains the pump carrier.
  void validate_against_pump(double pump_omega) const;
};

// Strictly increasing, uniformly spaced angular frequencies.
class FrequencyGrid {
public:
  FrequencyGrid() = default;
  static FrequencyGrid uniform(double first, double spacing, std::size_t n);
  static FrequencyGrid centered(double center, double span, std::size_t n);
  // Takes arbitrary points and checks uniformity to 1 part in 1e9.
  static FrequencyGrid from_points(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double spacing() const { return spacing_; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double center() const { return 0.5 * (front() + back()); }
  std::span<const double> points() const { return points_; }

private:
  std::vector<double> points_;
  double spacing_ = 0.0;
};

// Internal (on-chip) powers; coupling_loss_db maps external to internal.
struct NonlinearParams {
  double gamma = 200.0;         // 1/(W m)
  double pump_power = 1.29e-3;  // W
  double signal_power = 1.23e-3;
  std::optional<double> coupling_loss_db;
  // Optional beta2 (s^2/m) adding 2k_p - k_s - k_i = -beta2 (w_s - w_p)^2.
  double gvd_beta2 = 0.0;

  double internal_from_external(double external_power) const;
  void validate() const;
};

// Uniform angular-frequency grid for the wavelength interval
// center +- span/2. The grid is centered on omega(center) and its extent is
// the exact frequency width of that interval.
FrequencyGrid make_wavelength_grid(double center_wavelength, double span, std::size_t n_points);

// Spectral amplitude convention (used by every module):
//   alpha(w) = (1/sqrt(hbar w_c)) * integral A(t) exp(i (w - w_c) t) dt,
// with |A(t)|^2 the instantaneous power. Then
//   integral |alpha(w)|^2 dw / (2 pi) = pulse energy / (hbar w_c),
// the mean pump photon number.
cdouble pump_spectral_amplitude_at(const PumpPulse& pulse, double omega);

// Samples alpha on `grid`. Throws CoverageError when the grid spans fewer
// than 20 spectral widths or truncates more than 1% of the photon number.
std::vector<cdouble> pump_spectral_amplitude(const PumpPulse& pulse, const FrequencyGrid& grid);

// integral |alpha|^2 dw / 2 pi by the trapezoid rule.
double spectral_photon_number(std::span<const cdouble> alpha, const FrequencyGrid& grid);

// Fraction of the pump photon number outside [lo, hi] (closed form).
double pump_truncation_fraction(const PumpPulse& pulse, double omega_lo, double omega_hi);

namespace presets {
// 640 um grating centred in a 1.6 mm waveguide.
GratingSpec paper_grating();
RingSpec paper_ring();
NonlinearParams paper_nonlinear();
} // namespace presets

} // namespace braggsim
