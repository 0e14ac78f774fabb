#pragma once

#include "braggsim/core_model.hpp"
#include "braggsim/fwm_classical.hpp"
#include "braggsim/sweep_result.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace braggsim {

struct SpontRate {
  double rate = 0.0;      // pairs/s in the window
  double bandwidth = 0.0; // rad/s
  double power = 0.0;     // W, spontaneous idler power
};

// P_spont = hbar w_i * dw * P_stim / P_s; rate = P_spont / (hbar w_i).
// Throws InvalidArgument for signal_power <= 0.
SpontRate spont_from_stim(const StimulatedResult& stim, double signal_power,
                          const CollectionWindow& window);

// First-order two-photon state
//   |psi> = |0> + beta * integral phi(w1, w2) a+_{w1} a+_{w2} |0> dw1 dw2.
// `amplitude` holds beta * phi on the grids (units of s), computed as
//   beta phi = gamma / (2 pi)^{3/2} * integral dw_a A(w_a) A(W - w_a) J(w_a, W - w_a; w1, w2),
// W = w1 + w2, A(w) = integral A(t) exp(i (w - w_c) t) dt with |A(t)|^2 the
// pump power. In the CW limit this reproduces the stimulated-emission
// relation: |beta|^2 / T = dw (gamma P |J|)^2.
struct TwoPhotonState {
  double beta_sq = 0.0; // integral of |amplitude|^2 over the collection windows
  FrequencyGrid signal_grid;
  FrequencyGrid idler_grid;
  Eigen::MatrixXcd amplitude; // rows: signal, cols: idler
  Eigen::MatrixXd jsd;        // |phi|^2, unit trapezoid integral over the grid
  bool is_zero = false;
  std::vector<std::string> warnings;
};

struct JsdGrids {
  FrequencyGrid signal;
  FrequencyGrid idler;
};

// n points per axis spanning span_factor window widths about each window
// centre. Both axes share one spacing (required by the BW solver).
JsdGrids default_bw_grids(const CollectionWindow& signal, const CollectionWindow& idler,
                          std::size_t n_points = 201, double span_factor = 2.0);

// +- `linewidths` resonance linewidths about the signal and idler resonances.
JsdGrids default_ring_grids(const RingSpec& ring, std::size_t n_points = 201, double linewidths = 6.0);

struct BwOptions {
  double pump_half_span = 2.0 * 3.14159265358979323846 * 40e9; // rad/s about the carrier
  int gauss_nodes = 6;             // per layer piece; 4, 6, 8 or 10
  double max_piece_length = 0.2e-6;
};

// Bragg-waveguide state. Pump fields are asymptotic-in from the left; both
// generated photons use the asymptotic-out mode toward the right facet.
// Requires signal and idler grids with a common spacing that cover their
// windows (InvalidArgument otherwise).
TwoPhotonState two_photon_state_bw(const GratingSpec& spec, const NonlinearParams& params,
                                   const PumpPulse& pulse, const CollectionWindow& signal_window,
                                   const CollectionWindow& idler_window, const JsdGrids& grids,
                                   const BwOptions& options = {});

// Microring with Lorentzian field enhancement at critical coupling:
//   l(w) = sqrt(2 Q / (w0 tau_rt)) * (G/2) / (G/2 - i (w - w0)),  G = w0 / Q,
// so |l(w0)|^2 = 2 Q / (w0 tau_rt) = 2 tau_d / tau_rt. The overlap is
// J = 2 pi R l_P(w_a) l_P(w_b) l_S(w1) l_I(w2). Requires a Gaussian pulse.
// beta_sq integrates over the whole grid (trapezoid).
TwoPhotonState two_photon_state_ring(const RingSpec& ring, const NonlinearParams& params,
                                     const PumpPulse& pulse, const JsdGrids& grids);

// Pairs per second implied by beta_sq per pulse: beta_sq * P_peak / energy
// (beta_sq / T for a top-hat).
double pair_rate(const TwoPhotonState& state, const PumpPulse& pulse);

struct SchmidtReport {
  std::vector<double> coefficients; // descending, squares sum to 1
  double purity = 0.0;              // sum lambda^4
  double schmidt_number = 0.0;      // 1 / purity
  // True when only the JSD was available: the phase-free amplitude sqrt(JSD)
  // was decomposed, which can misstate the purity.
  bool from_jsd_only = false;
};

// SVD of phi(w1, w2) sqrt(h1 h2). Throws InvalidArgument on an all-zero state.
SchmidtReport schmidt_analysis(const TwoPhotonState& state);
SchmidtReport schmidt_decompose(const Eigen::MatrixXcd& amplitude, double h1, double h2);

struct JsdShape {
  double principal_axis_ratio = 0.0; // major / minor standard deviation, >= 1
  double sum_fwhm = 0.0;             // rad/s along (w1 + w2)/sqrt 2
  double diff_fwhm = 0.0;            // rad/s along (w1 - w2)/sqrt 2
  double sum_std = 0.0;
  double diff_std = 0.0;
  // sum_fwhm / diff_fwhm: width across an anti-diagonal ridge over its length
  double antidiag_to_diag_ratio = 0.0;
};

// Moments of the normalized JSD. FWHM values use marginals with adjacent bins
// merged in pairs and need equal grid spacings (NaN otherwise).
JsdShape jsd_shape(const TwoPhotonState& state);

struct ContrastSweepOptions {
  std::size_t grid_points = 41; // per window axis, spanning the window exactly
  BwOptions bw;
};

// Pair rate against index contrast. For each contrast: grating with the leads removed,
// N from the rejection relation, pump centred on the computed stopband
// minimum, idler window fixed and signal window at 2 w_p - w_idler.
// Columns: delta_n, n_periods, pump_wavelength_nm, beta_sq,
// pair_rate_per_s_per_mw2. Scalar `slope` is the log-log fit of rate
// against delta_n (NaN with a note for fewer than two points).
SweepResult contrast_sweep(const GratingSpec& base, double target_rejection_db,
                           std::span<const double> contrasts, const NonlinearParams& params,
                           const PumpPulse& pulse, const CollectionWindow& idler_window,
                           const ContrastSweepOptions& options = {});

// Triplets lambda_signal_nm,lambda_idler_nm,jsd_normalized.
std::string jsd_to_csv(const TwoPhotonState& state);

} // namespace braggsim
