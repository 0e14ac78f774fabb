#include "braggsim/core_model.hpp"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace braggsim {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

// Si(z) by piecewise Gauss-Kronrod over half periods of sin t / t.
double sine_integral(double z) {
  if (z < 0) return -sine_integral(-z);
  if (z == 0) return 0.0;
  auto f = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  double sum = 0.0;
  double a = 0.0;
  while (a < z) {
    double b = std::min(z, a + constants::pi);
    sum += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0);
    a = b;
  }
  return sum;
}

// Antiderivative of sin^2(x)/x^2, odd, zero at the origin.
double sinc2_antiderivative(double x) {
  if (std::abs(x) < 1e-8) return x;
  double s = std::sin(x);
  return sine_integral(2.0 * x) - s * s / x;
}

double sinc(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

} // namespace

void GratingSpec::validate() const {
  require(period > 0, "grating period must be positive");
  require(duty_cycle > 0 && duty_cycle < 1, "duty cycle must lie in (0, 1)");
  require(n_periods >= 1, "number of periods must be at least 1");
  require(n_lo > 1, "effective index n_lo must exceed 1");
  require(std::abs(delta_n) / n_lo <= 0.1, "index contrast |delta_n|/n_lo must not exceed 0.1");
  require(lead_in_length >= 0 && lead_out_length >= 0, "lead lengths must be non-negative");
}

double RingSpec::wavelength(Resonance r) const {
  switch (r) {
  case Resonance::Pump: return lambda_p;
  case Resonance::Signal: return lambda_s;
  case Resonance::Idler: return lambda_i;
  }
  return lambda_p;
}

double RingSpec::quality_factor(Resonance r) const {
  switch (r) {
  case Resonance::Pump: return q_p;
  case Resonance::Signal: return q_s;
  case Resonance::Idler: return q_i;
  }
  return q_p;
}

double RingSpec::omega(Resonance r) const { return wavelength_to_omega(wavelength(r)); }

double RingSpec::linewidth(Resonance r) const { return omega(r) / quality_factor(r); }

double RingSpec::dwelling_time(Resonance r) const { return quality_factor(r) / omega(r); }

double RingSpec::circumference() const { return constants::two_pi * radius; }

double RingSpec::round_trip_time() const { return circumference() * group_index / constants::c; }

double RingSpec::free_spectral_range() const { return constants::two_pi / round_trip_time(); }

void RingSpec::validate() const {
  require(radius > 0, "ring radius must be positive");
  require(lambda_p > 0 && lambda_s > 0 && lambda_i > 0, "resonance wavelengths must be positive");
  require(q_p > 0 && q_s > 0 && q_i > 0, "quality factors must be positive");
  require(group_index >= 1, "group index must be at least 1");
}

double PumpPulse::center_omega() const { return wavelength_to_omega(center_wavelength); }

double PumpPulse::energy() const {
  if (shape == PulseShape::TopHat) return peak_power * duration;
  return peak_power * duration * std::sqrt(constants::pi / 2.0);
}

double PumpPulse::photon_number() const { return energy() / photon_energy(center_omega()); }

double PumpPulse::spectral_width() const {
  if (shape == PulseShape::TopHat) return constants::two_pi / duration;
  return 2.0 / duration;
}

void PumpPulse::validate() const {
  require(duration > 0, "pulse duration must be positive");
  require(peak_power >= 0, "pulse peak power must be non-negative");
  require(center_wavelength > 0, "pulse center wavelength must be positive");
}

double CollectionWindow::center_omega() const { return wavelength_to_omega(center_wavelength); }

bool CollectionWindow::contains(double omega) const {
  return std::abs(omega - center_omega()) <= 0.5 * width * (1.0 + 1e-12);
}

void CollectionWindow::validate() const {
  require(center_wavelength > 0, "window center wavelength must be positive");
  require(width > 0, "window width must be positive");
}

void CollectionWindow::validate_against_pump(double pump_omega) const {
  validate();
  require(!contains(pump_omega), "collection window overlaps the pump line");
}

FrequencyGrid FrequencyGrid::uniform(double first, double spacing, std::size_t n) {
  require(n >= 2, "frequency grid needs at least 2 points");
  require(spacing > 0, "frequency grid spacing must be positive");
  FrequencyGrid g;
  g.points_.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.points_[i] = first + spacing * static_cast<double>(i);
  g.spacing_ = spacing;
  return g;
}

FrequencyGrid FrequencyGrid::centered(double center, double span, std::size_t n) {
  require(n >= 2, "frequency grid needs at least 2 points");
  require(span > 0, "frequency grid span must be positive");
  const double spacing = span / static_cast<double>(n - 1);
  FrequencyGrid g;
  g.points_.resize(n);
  const double mid = 0.5 * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g.points_[i] = center + (static_cast<double>(i) - mid) * spacing;
  g.spacing_ = spacing;
  return g;
}

FrequencyGrid FrequencyGrid::from_points(std::vector<double> points) {
  require(points.size() >= 2, "frequency grid needs at least 2 points");
  const double spacing = (points.back() - points.front()) / static_cast<double>(points.size() - 1);
  require(spacing > 0, "frequency grid must be strictly increasing");
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = points[i] - points[i - 1];
    require(d > 0, "frequency grid must be strictly increasing");
    require(std::abs(d - spacing) <= 1e-9 * std::abs(points[i]),
            "frequency grid spacing is not uniform to 1 part in 1e9");
  }
  FrequencyGrid g;
  g.points_ = std::move(points);
  g.spacing_ = spacing;
  return g;
}

double NonlinearParams::internal_from_external(double external_power) const {
  if (!coupling_loss_db) return external_power;
  return external_power * std::pow(10.0, -*coupling_loss_db / 10.0);
}

void NonlinearParams::validate() const {
  require(gamma >= 0, "nonlinear parameter gamma must be non-negative");
  require(pump_power >= 0 && signal_power >= 0, "powers must be non-negative");
}

FrequencyGrid make_wavelength_grid(double center_wavelength, double span, std::size_t n_points) {
  require(center_wavelength > 0, "grid center wavelength must be positive");
  require(span > 0, "wavelength span must be positive");
  require(span < 2.0 * center_wavelength, "wavelength span must be smaller than twice the center");
  require(n_points >= 2, "grid needs at least 2 points");
  const double w_lo = wavelength_to_omega(center_wavelength + 0.5 * span);
  const double w_hi = wavelength_to_omega(center_wavelength - 0.5 * span);
  return FrequencyGrid::centered(wavelength_to_omega(center_wavelength), w_hi - w_lo, n_points);
}

cdouble pump_spectral_amplitude_at(const PumpPulse& pulse, double omega) {
  const double wc = pulse.center_omega();
  const double delta = omega - wc;
  const double scale = std::sqrt(pulse.peak_power / photon_energy(wc));
  if (pulse.shape == PulseShape::TopHat) {
    const double T = pulse.duration;
    return {scale * T * sinc(0.5 * delta * T), 0.0};
  }
  const double d = pulse.duration;
  return {scale * d * std::sqrt(constants::pi) * std::exp(-0.25 * delta * delta * d * d), 0.0};
}

double pump_truncation_fraction(const PumpPulse& pulse, double omega_lo, double omega_hi) {
  const double wc = pulse.center_omega();
  const double a = omega_lo - wc;
  const double b = omega_hi - wc;
  double inside = 0.0;
  if (pulse.shape == PulseShape::TopHat) {
    const double T = pulse.duration;
    inside = (sinc2_antiderivative(0.5 * b * T) - sinc2_antiderivative(0.5 * a * T)) / constants::pi;
  } else {
    const double d = pulse.duration;
    inside = 0.5 * (std::erf(b * d / std::sqrt(2.0)) - std::erf(a * d / std::sqrt(2.0)));
  }
  return std::clamp(1.0 - inside, 0.0, 1.0);
}

std::vector<cdouble> pump_spectral_amplitude(const PumpPulse& pulse, const FrequencyGrid& grid) {
  pulse.validate();
  const double span = grid.back() - grid.front();
  if (span < 20.0 * pulse.spectral_width()) {
    std::ostringstream msg;
    msg << "pump grid spans " << span / pulse.spectral_width()
        << " spectral widths; at least 20 are required";
    throw CoverageError(msg.str());
  }
  const double lost = pump_truncation_fraction(pulse, grid.front() - 0.5 * grid.spacing(),
                                               grid.back() + 0.5 * grid.spacing());
  if (lost > 0.01) {
    std::ostringstream msg;
    msg << "pump grid truncates " << 100.0 * lost << "% of the pulse photon number (limit 1%)";
    throw CoverageError(msg.str());
  }
  std::vector<cdouble> alpha(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) alpha[i] = pump_spectral_amplitude_at(pulse, grid[i]);
  return alpha;
}

double spectral_photon_number(std::span<const cdouble> alpha, const FrequencyGrid& grid) {
  require(alpha.size() == grid.size(), "amplitude and grid sizes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double w = (i == 0 || i + 1 == alpha.size()) ? 0.5 : 1.0;
    sum += w * std::norm(alpha[i]);
  }
  return sum * grid.spacing() / constants::two_pi;
}

namespace presets {

GratingSpec paper_grating() {
  GratingSpec g;
  g.lead_in_length = 480e-6;
  g.lead_out_length = 480e-6;
  return g;
}

RingSpec paper_ring() { return RingSpec{}; }

NonlinearParams paper_nonlinear() {
  NonlinearParams p;
  p.coupling_loss_db = 5.0;
  return p;
}

} // namespace presets

} // namespace braggsim
