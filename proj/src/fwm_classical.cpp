#include "braggsim/fwm_classical.hpp"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace braggsim {

namespace {

constexpr cdouble I{0.0, 1.0};

// integral_0^l exp(i kappa z) dz without cancellation for small kappa l.
cdouble phase_integral(double kappa, double l) {
  const double x = kappa * l;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return l * cdouble(1.0 - x2 / 6.0 + x2 * x2 / 120.0, 0.5 * x * (1.0 - x2 / 12.0));
  }
  const double s = std::sin(0.5 * x);
  return l * cdouble(std::sin(x) / x, 2.0 * s * s / x);
}

struct Term {
  cdouble amp;
  double k;
};

void check_wavelength(double wavelength, const char* name) {
  if (!(wavelength >= kMinWavelength && wavelength <= kMaxWavelength)) {
    std::ostringstream msg;
    msg << name << " wavelength " << wavelength * 1e9 << " nm lies outside the model validity window "
        << kMinWavelength * 1e9 << "-" << kMaxWavelength * 1e9 << " nm";
    throw DomainError(msg.str());
  }
}

} // namespace

cdouble overlap_general(const LayerStack& stack, double omega_a, double omega_b, double omega_s,
                        double omega_i, SignalMode mode, double beta2) {
  const PiecewiseField fa = internal_fields(stack, omega_a, FieldDirection::AsymptoticInFromLeft);
  const PiecewiseField fb = omega_b == omega_a
                              ? fa
                              : internal_fields(stack, omega_b, FieldDirection::AsymptoticInFromLeft);
  const PiecewiseField fs = internal_fields(stack, omega_s,
                                            mode == SignalMode::StimulatedSeed
                                              ? FieldDirection::AsymptoticInFromLeft
                                              : FieldDirection::AsymptoticInFromRight);
  const PiecewiseField gi = internal_fields(stack, omega_i, FieldDirection::AsymptoticInFromRight);

  double dk = 0.0;
  if (beta2 != 0.0) {
    const double w0 = 0.5 * (omega_a + omega_b);
    auto sq = [w0](double w) { return (w - w0) * (w - w0); };
    dk = 0.5 * beta2 * (sq(omega_a) + sq(omega_b) - sq(omega_s) - sq(omega_i));
  }

  cdouble total{};
  for (std::size_t j = 0; j < stack.layers.size(); ++j) {
    const double n = stack.layers[j].n;
    const double l = stack.layers[j].length;
    const double ka = n * omega_a / constants::c;
    const double kb = n * omega_b / constants::c;
    const double ks = n * omega_s / constants::c;
    const double ki = n * omega_i / constants::c;
    const auto& sa = fa.segments[j];
    const auto& sb = fb.segments[j];
    const auto& ss = fs.segments[j];
    const auto& si = gi.segments[j];
    const std::array<Term, 2> ta{{{sa.fwd, ka}, {sa.bwd, -ka}}};
    const std::array<Term, 2> tb{{{sb.fwd, kb}, {sb.bwd, -kb}}};
    std::array<Term, 2> ts;
    if (mode == SignalMode::StimulatedSeed)
      ts = {{{std::conj(ss.fwd), -ks}, {std::conj(ss.bwd), ks}}};
    else
      ts = {{{ss.fwd, ks}, {ss.bwd, -ks}}};
    const std::array<Term, 2> ti{{{si.fwd, ki}, {si.bwd, -ki}}};
    cdouble seg{};
    for (const auto& x1 : ta)
      for (const auto& x2 : tb) {
        const cdouble p12 = x1.amp * x2.amp;
        for (const auto& x3 : ts) {
          const cdouble p123 = p12 * x3.amp;
          for (const auto& x4 : ti)
            seg += p123 * x4.amp * phase_integral(x1.k + x2.k + x3.k + x4.k + dk, l);
        }
      }
    if (dk != 0.0) seg *= std::exp(I * dk * fa.segments[j].z_start);
    total += seg;
  }
  return total;
}

FwmOverlap overlap_integral(const GratingSpec& spec, double lambda_p, double lambda_s, double beta2) {
  spec.validate();
  check_wavelength(lambda_p, "pump");
  check_wavelength(lambda_s, "signal");
  const double wp = wavelength_to_omega(lambda_p);
  const double ws = wavelength_to_omega(lambda_s);
  const double wi = 2.0 * wp - ws;
  check_wavelength(omega_to_wavelength(wi), "idler");
  FwmOverlap out;
  out.value = overlap_general(build_layer_stack(spec), wp, wp, ws, wi, SignalMode::StimulatedSeed, beta2);
  out.pump_wavelength = lambda_p;
  out.signal_wavelength = lambda_s;
  out.idler_wavelength = omega_to_wavelength(wi);
  return out;
}

namespace {

StimulatedResult stimulated_from_overlap(const GratingSpec& spec, const NonlinearParams& params,
                                         const FwmOverlap& overlap) {
  StimulatedResult r;
  const double wi = wavelength_to_omega(overlap.idler_wavelength);
  const double j2 = std::norm(overlap.value);
  r.overlap = overlap.value;
  r.idler_wavelength = overlap.idler_wavelength;
  r.idler_power_internal = std::pow(params.gamma * params.pump_power, 2) * params.signal_power * j2;
  r.idler_rate = r.idler_power_internal / photon_energy(wi);
  r.per_mw2 = std::pow(params.gamma * 1e-3, 2) * params.signal_power * j2 / photon_energy(wi);
  const double strain = params.gamma * params.pump_power * spec.total_length();
  if (strain > 0.1) {
    std::ostringstream msg;
    msg << "gamma * P_p * L = " << strain << " exceeds 0.1; undepleted-pump approximation strained";
    r.warnings.push_back(msg.str());
  }
  return r;
}

} // namespace

StimulatedResult stimulated_idler(const GratingSpec& spec, const NonlinearParams& params,
                                  double lambda_p, double lambda_s) {
  params.validate();
  return stimulated_from_overlap(spec, params,
                                 overlap_integral(spec, lambda_p, lambda_s, params.gvd_beta2));
}

SweepResult pump_sweep(const GratingSpec& spec, const NonlinearParams& params, double lambda_lo,
                       double lambda_hi, double lambda_s, std::size_t n_points) {
  spec.validate();
  params.validate();
  if (!(lambda_hi > lambda_lo)) throw InvalidArgument("pump sweep range must be increasing");
  if (n_points < 2) throw InvalidArgument("pump sweep needs at least 2 points");
  check_wavelength(lambda_lo, "pump");
  check_wavelength(lambda_hi, "pump");
  check_wavelength(lambda_s, "signal");

  const LayerStack stack = build_layer_stack(spec);
  const double ws = wavelength_to_omega(lambda_s);
  std::vector<StimulatedResult> results(n_points);
  std::vector<double> wavelengths(n_points);
  for (std::size_t k = 0; k < n_points; ++k)
    wavelengths[k] = lambda_lo + (lambda_hi - lambda_lo) * static_cast<double>(k) /
                                   static_cast<double>(n_points - 1);
  parallel_for(n_points, [&](std::size_t k) {
    const double wp = wavelength_to_omega(wavelengths[k]);
    const double wi = 2.0 * wp - ws;
    check_wavelength(omega_to_wavelength(wi), "idler");
    FwmOverlap ov;
    ov.value = overlap_general(stack, wp, wp, ws, wi, SignalMode::StimulatedSeed, params.gvd_beta2);
    ov.pump_wavelength = wavelengths[k];
    ov.signal_wavelength = lambda_s;
    ov.idler_wavelength = omega_to_wavelength(wi);
    results[k] = stimulated_from_overlap(spec, params, ov);
  });

  SweepResult out({"pump_wavelength_nm", "idler_rate_per_s_per_mw2", "idler_power_w"});
  for (std::size_t k = 0; k < n_points; ++k)
    out.add_row({wavelengths[k] * 1e9, results[k].per_mw2, results[k].idler_power_internal});
  if (!results.empty())
    for (const auto& w : results.front().warnings) out.notes.push_back(w);

  const DipMetrics dip = dip_metrics(out);
  out.scalars["dip_wavelength_nm"] = dip.dip_wavelength * 1e9;
  out.scalars["dip_depth_db"] = dip.depth_db;
  out.scalars["dip_center_nm"] = dip.center_wavelength * 1e9;
  out.scalars["dip_width_nm"] = dip.width * 1e9;
  out.scalars["median_rate_per_s_per_mw2"] = dip.median_rate;
  if (params.coupling_loss_db) {
    // P_ext = P_int 10^(loss/10), so a rate per external mW^2 is smaller by 10^(-2 loss/10).
    const double factor = std::pow(10.0, -2.0 * *params.coupling_loss_db / 10.0);
    out.scalars["external_per_mw2_factor"] = factor;
    out.scalars["median_rate_per_s_per_external_mw2"] = dip.median_rate * factor;
    out.notes.push_back("idler_rate_per_s_per_mw2 is per internal mW^2; multiply by "
                        "external_per_mw2_factor for external pump power");
  }
  return out;
}

DipMetrics dip_metrics(const SweepResult& sweep) {
  const auto& wl = sweep.column("pump_wavelength_nm");
  const auto& rate = sweep.column("idler_rate_per_s_per_mw2");
  if (rate.empty()) throw InvalidArgument("empty sweep");
  const auto it = std::min_element(rate.begin(), rate.end());
  std::vector<double> sorted(rate.begin(), rate.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  DipMetrics d;
  d.dip_wavelength = wl[static_cast<std::size_t>(it - rate.begin())] * 1e-9;
  d.median_rate = median;
  d.depth_db = *it > 0 ? 10.0 * std::log10(median / *it) : std::numeric_limits<double>::infinity();

  const std::size_t k = static_cast<std::size_t>(it - rate.begin());
  const double level = median * std::pow(10.0, -0.3);
  auto db = [&](std::size_t i) { return 10.0 * std::log10(std::max(rate[i], 1e-300) / level); };
  // crossing between samples i (below) and j (above), interpolated in dB
  auto edge = [&](std::size_t i, std::size_t j) {
    const double a = db(i), b = db(j);
    return wl[i] + (wl[j] - wl[i]) * (0.0 - a) / (b - a);
  };
  double lo = wl.front(), hi = wl.back();
  for (std::size_t i = k; i > 0; --i)
    if (rate[i - 1] >= level) {
      lo = edge(i, i - 1);
      break;
    }
  for (std::size_t i = k; i + 1 < rate.size(); ++i)
    if (rate[i + 1] >= level) {
      hi = edge(i, i + 1);
      break;
    }
  if (rate[k] >= level) lo = hi = wl[k];
  d.center_wavelength = 0.5 * (lo + hi) * 1e-9;
  d.width = (hi - lo) * 1e-9;
  return d;
}

} // namespace braggsim
