#pragma once

#include "braggsim/core_model.hpp"
#include "braggsim/sweep_result.hpp"
#include "braggsim/transfer_matrix.hpp"

#include <string>
#include <vector>

namespace braggsim {

// Which mode function the signal photon uses in the overlap.
//   StimulatedSeed:    conj of the asymptotic-in field seeded from the left.
//   SpontaneousOutput: conj of the asymptotic-out field toward the right.
// The idler always uses the conjugated asymptotic-out field.
enum class SignalMode { StimulatedSeed, SpontaneousOutput };

// J = integral f_a f_b s(z) i(z) exp(i dk z) dz over the stack, with pump
// fields f_a, f_b asymptotic-in from the left. Evaluated in closed form per
// layer. `beta2` adds the quadratic dispersion phase about (wa + wb) / 2.
cdouble overlap_general(const LayerStack& stack, double omega_a, double omega_b, double omega_s,
                        double omega_i, SignalMode mode = SignalMode::StimulatedSeed,
                        double beta2 = 0.0);

struct FwmOverlap {
  cdouble value{};
  double pump_wavelength = 0.0;
  double signal_wavelength = 0.0;
  double idler_wavelength = 0.0;
};

// Validity window of the constant-index model.
inline constexpr double kMinWavelength = 1500e-9;
inline constexpr double kMaxWavelength = 1600e-9;

// Degenerate pump, stimulated convention. Throws DomainError if any of the
// three wavelengths leaves [1500, 1600] nm.
FwmOverlap overlap_integral(const GratingSpec& spec, double lambda_p, double lambda_s,
                            double beta2 = 0.0);

struct StimulatedResult {
  double idler_power_internal = 0.0; // W
  double idler_rate = 0.0;           // photons/s
  double per_mw2 = 0.0;              // photons/s per mW^2 of internal pump power
  double idler_wavelength = 0.0;
  cdouble overlap{};
  std::vector<std::string> warnings;
};

// P_i = (gamma P_p)^2 P_s |J|^2.
StimulatedResult stimulated_idler(const GratingSpec& spec, const NonlinearParams& params,
                                  double lambda_p, double lambda_s);

// Columns pump_wavelength_nm, idler_rate_per_s_per_mw2, idler_power_w over a
// linear pump-wavelength grid. Scalars carry the dip metrics and, when a
// coupling loss is set, the rate per mW^2 of external pump power.
SweepResult pump_sweep(const GratingSpec& spec, const NonlinearParams& params, double lambda_lo,
                       double lambda_hi, double lambda_s, std::size_t n_points);

struct DipMetrics {
  double dip_wavelength = 0.0; // m, deepest sample
  double depth_db = 0.0;       // median / minimum
  double median_rate = 0.0;
  // Midpoint and width of the contiguous region around the minimum lying
  // 3 dB or more below the median, edges interpolated in dB. The stopband
  // edges can carry the deepest points, so the midpoint locates the dip.
  double center_wavelength = 0.0;
  double width = 0.0;
};

DipMetrics dip_metrics(const SweepResult& sweep);

} // namespace braggsim
