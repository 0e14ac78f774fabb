#include "doctest.h"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/fwm_classical.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

using namespace braggsim;
using cd = std::complex<double>;

namespace {

constexpr double kC = 299792458.0;
constexpr double kHbar = 1.054571817e-34;
double omega_of(double lambda) { return 2.0 * M_PI * kC / lambda; }

// Adaptive Gauss-Kronrod over each layer of the same integrand, built from
// point evaluations of the fields.
cd quadrature_overlap(const LayerStack& stack, double wa, double wb, double ws, double wi,
                      SignalMode mode, double tol = 1e-10) {
  const auto fa = internal_fields(stack, wa, FieldDirection::AsymptoticInFromLeft);
  const auto fb = internal_fields(stack, wb, FieldDirection::AsymptoticInFromLeft);
  const auto fs_in = internal_fields(stack, ws, FieldDirection::AsymptoticInFromLeft);
  const auto fs_out = internal_fields(stack, ws, FieldDirection::AsymptoticOutToRight);
  const auto fi_out = internal_fields(stack, wi, FieldDirection::AsymptoticOutToRight);
  cd total{};
  for (const auto& seg : fa.segments) {
    // evaluate strictly inside the segment so value() picks it
    const double a = seg.z_start, b = seg.z_end, mid = 0.5 * (a + b);
    const std::size_t j = fa.segment_index(mid);
    auto local = [&](const PiecewiseField& f, double z) {
      const auto& s = f.segments[j];
      const double k = s.n * f.omega / kC;
      return s.fwd * std::exp(cd(0, k * (z - s.z_start))) + s.bwd * std::exp(cd(0, -k * (z - s.z_start)));
    };
    auto integrand = [&](double z) {
      const cd sig = mode == SignalMode::StimulatedSeed ? std::conj(local(fs_in, z)) : std::conj(local(fs_out, z));
      return local(fa, z) * local(fb, z) * sig * std::conj(local(fi_out, z));
    };
    auto re = [&](double z) { return integrand(z).real(); };
    auto im = [&](double z) { return integrand(z).imag(); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    // long leads oscillate over thousands of radians; integrate in short pieces
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.1e-6)));
    for (int p = 0; p < pieces; ++p) {
      const double x0 = a + (b - a) * p / pieces, x1 = a + (b - a) * (p + 1) / pieces;
      total += cd(GK::integrate(re, x0, x1, 3, tol), GK::integrate(im, x0, x1, 3, tol));
    }
  }
  return total;
}

} // namespace

TEST_CASE("uniform guide: |J| = L exactly") {
  GratingSpec flat = presets::paper_grating();
  flat.delta_n = 0.0;
  const auto ov = overlap_integral(flat, 1546e-9, 1560e-9);
  CHECK(std::abs(ov.value) == doctest::Approx(flat.total_length()).epsilon(1e-12));
  CHECK(2.0 / ov.pump_wavelength == doctest::Approx(1.0 / ov.signal_wavelength + 1.0 / ov.idler_wavelength).epsilon(1e-12));
}

TEST_CASE("uniform guide stimulated idler: textbook (gamma P_p L)^2 P_s") {
  GratingSpec flat = presets::paper_grating();
  flat.delta_n = 0.0;
  NonlinearParams p;
  const auto r = stimulated_idler(flat, p, 1546e-9, 1560e-9);
  const double expected = std::pow(200.0 * 1.29e-3 * 1.6e-3, 2) * 1.23e-3;
  CHECK(expected == doctest::Approx(2.10e-10).epsilon(0.01));
  CHECK(r.idler_power_internal == doctest::Approx(expected).epsilon(1e-6));
  CHECK(r.idler_rate == doctest::Approx(r.idler_power_internal / (kHbar * omega_of(r.idler_wavelength))).epsilon(1e-14));
  CHECK(r.warnings.empty());

  NonlinearParams zero = p;
  zero.pump_power = 0.0;
  CHECK(stimulated_idler(flat, zero, 1546e-9, 1560e-9).idler_power_internal == 0.0);

  NonlinearParams strained = p;
  strained.pump_power = 1.0;
  CHECK_FALSE(stimulated_idler(flat, strained, 1546e-9, 1560e-9).warnings.empty());
}

TEST_CASE("scaling laws are exact") {
  const GratingSpec g = presets::paper_grating();
  NonlinearParams p;
  const auto base = stimulated_idler(g, p, 1548e-9, 1560e-9);
  NonlinearParams p2 = p;
  p2.pump_power *= 2.0;
  CHECK(stimulated_idler(g, p2, 1548e-9, 1560e-9).idler_power_internal ==
        doctest::Approx(4.0 * base.idler_power_internal).epsilon(1e-14));
  NonlinearParams s2 = p;
  s2.signal_power *= 2.0;
  CHECK(stimulated_idler(g, s2, 1548e-9, 1560e-9).idler_power_internal ==
        doctest::Approx(2.0 * base.idler_power_internal).epsilon(1e-14));
}

TEST_CASE("paper grating overlap against the quadrature oracle") {
  const GratingSpec g = presets::paper_grating();
  const LayerStack stack = build_layer_stack(g);
  const double L = g.total_length();
  const double ws = omega_of(1560e-9);

  SUBCASE("pump outside the stopband") {
    const double wp = omega_of(1550e-9);
    const auto ov = overlap_integral(g, 1550e-9, 1560e-9);
    const cd q = quadrature_overlap(stack, wp, wp, ws, 2 * wp - ws, SignalMode::StimulatedSeed);
    CHECK(std::abs(ov.value - q) / std::abs(q) < 1e-7);
    const double ratio = std::norm(ov.value) / (L * L);
    CHECK(ratio > 0.25);
    CHECK(ratio < 4.0);

    GratingSpec flat = g;
    flat.delta_n = 0;
    NonlinearParams p;
    const double ref = stimulated_idler(flat, p, 1550e-9, 1560e-9).idler_power_internal;
    const double val = stimulated_idler(g, p, 1550e-9, 1560e-9).idler_power_internal;
    CHECK(val / ref > 0.25);
    CHECK(val / ref < 4.0);
  }

  SUBCASE("pump at the stopband centre") {
    const double lc = stopband_center(g);
    const double wp = omega_of(lc);
    const auto ov = overlap_integral(g, lc, 1560e-9);
    const cd q = quadrature_overlap(stack, wp, wp, ws, 2 * wp - ws, SignalMode::StimulatedSeed);
    CHECK(std::abs(ov.value - q) / std::abs(q) < 1e-7);
    // suppressed relative to the uniform guide
    CHECK(std::norm(ov.value) < 0.5 * L * L);
  }

  SUBCASE("spontaneous-output convention") {
    const double wp = omega_of(1546.2e-9);
    const cd closed = overlap_general(stack, wp, wp * (1 + 1e-6), ws, 2 * wp * (1 + 5e-7) - ws,
                                      SignalMode::SpontaneousOutput);
    const cd q = quadrature_overlap(stack, wp, wp * (1 + 1e-6), ws, 2 * wp * (1 + 5e-7) - ws,
                                    SignalMode::SpontaneousOutput);
    CHECK(std::abs(closed - q) / std::abs(q) < 1e-7);
  }
}

TEST_CASE("property: closed form equals adaptive quadrature on random specs") {
  std::mt19937_64 rng(7919);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    GratingSpec s;
    s.period = 300e-9 + 40e-9 * u(rng);
    s.duty_cycle = 0.2 + 0.6 * u(rng);
    s.n_periods = 20 + static_cast<long>(300 * u(rng));
    s.n_lo = 2.0 + u(rng);
    s.delta_n = (u(rng) - 0.4) * 0.05;
    s.lead_in_length = 3e-6 * u(rng);
    s.lead_out_length = 3e-6 * u(rng);
    const LayerStack stack = build_layer_stack(s);
    const double wa = omega_of(1520e-9 + 40e-9 * u(rng));
    const double wb = omega_of(1520e-9 + 40e-9 * u(rng));
    const double ws = omega_of(1505e-9 + 90e-9 * u(rng));
    const double wi = wa + wb - ws;
    const SignalMode mode = trial % 2 ? SignalMode::SpontaneousOutput : SignalMode::StimulatedSeed;
    const cd closed = overlap_general(stack, wa, wb, ws, wi, mode);
    const cd q = quadrature_overlap(stack, wa, wb, ws, wi, mode);
    CHECK(std::abs(closed - q) <= 1e-7 * std::abs(q));
  }
}

TEST_CASE("subdivision invariance") {
  const GratingSpec g = presets::paper_grating();
  const double wp = omega_of(1546.1e-9), ws = omega_of(1560e-9);
  const cd a = overlap_general(build_layer_stack(g), wp, wp, ws, 2 * wp - ws);
  const cd b = overlap_general(build_layer_stack(g, 0.07e-6), wp, wp, ws, 2 * wp - ws);
  CHECK(std::abs(a - b) / std::abs(a) < 1e-9);
}

TEST_CASE("dispersion phase") {
  GratingSpec flat = presets::paper_grating();
  flat.delta_n = 0;
  const double lp = 1546e-9, ls = 1560e-9;
  const double beta2 = 1e-24;
  const double dk = -beta2 * std::pow(omega_of(ls) - omega_of(lp), 2);
  const double L = flat.total_length();
  const cd expected = (std::exp(cd(0, dk * L)) - 1.0) / cd(0, dk);
  // the idler mode is referenced to the output facet, so compare up to the
  // global phase of the dispersionless result
  const cd ratio = overlap_integral(flat, lp, ls, beta2).value / overlap_integral(flat, lp, ls).value;
  CHECK(std::abs(ratio - expected / L) < 1e-9);
}

TEST_CASE("validity window") {
  const GratingSpec g = presets::paper_grating();
  CHECK_THROWS_AS(overlap_integral(g, 1490e-9, 1560e-9), DomainError);
  // idler = 2 w_p - w_s falls below 1500 nm
  CHECK_THROWS_AS(overlap_integral(g, 1530e-9, 1565e-9), DomainError);
}

TEST_CASE("pump sweep") {
  NonlinearParams p;
  SUBCASE("uniform guide is flat") {
    GratingSpec flat = presets::paper_grating();
    flat.delta_n = 0.0;
    const auto s = pump_sweep(flat, p, 1541.9e-9, 1550e-9, 1560e-9, 41);
    // idler power is flat; the photon rate carries 1 / (hbar w_i), which moves
    // by ~1% as the idler tunes from 1524 to 1540 nm
    const auto& pw = s.column("idler_power_w");
    const auto [mn, mx] = std::minmax_element(pw.begin(), pw.end());
    CHECK(*mx / *mn < 1.0 + 1e-9);
    const auto& r = s.column("idler_rate_per_s_per_mw2");
    const auto& wl = s.column("pump_wavelength_nm");
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double wi = 2 * omega_of(wl[k] * 1e-9) - omega_of(1560e-9);
      CHECK(r[k] * kHbar * wi == doctest::Approx(r[0] * kHbar * (2 * omega_of(wl[0] * 1e-9) - omega_of(1560e-9))).epsilon(1e-9));
    }
  }
  SUBCASE("columns and external normalization") {
    NonlinearParams q = presets::paper_nonlinear();
    const auto s = pump_sweep(presets::paper_grating(), q, 1541.9e-9, 1550e-9, 1560e-9, 11);
    CHECK(s.columns == std::vector<std::string>{"pump_wavelength_nm", "idler_rate_per_s_per_mw2", "idler_power_w"});
    CHECK(s.rows() == 11);
    CHECK(s.scalars.at("external_per_mw2_factor") == doctest::Approx(0.1));
    CHECK_THROWS_AS(pump_sweep(presets::paper_grating(), q, 1550e-9, 1541e-9, 1560e-9, 11), InvalidArgument);
  }
}

TEST_CASE("dip metrics on a synthetic flat-bottomed dip with edge spikes") {
  SweepResult s({"pump_wavelength_nm", "idler_rate_per_s_per_mw2", "idler_power_w"});
  // -8 dB from 1545 to 1547 nm, -12 dB spikes on both edges, 0 dB elsewhere
  for (int i = 0; i <= 800; ++i) {
    const double l = 1542.0 + 0.01 * i;
    double db = 0.0;
    if (l > 1545.0 - 1e-9 && l < 1547.0 + 1e-9) db = -8.0;
    if (std::abs(l - 1546.98) < 1e-9) db = -12.0;
    if (std::abs(l - 1545.05) < 1e-9) db = -11.0;
    s.add_row({l, std::pow(10.0, db / 10.0), 0.0});
  }
  const DipMetrics d = dip_metrics(s);
  CHECK(d.dip_wavelength * 1e9 == doctest::Approx(1546.98).epsilon(1e-12));
  CHECK(d.depth_db == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(d.median_rate == doctest::Approx(1.0));
  // edges interpolated at -3 dB between -8 and 0 dB samples: 5/8 of a step outside
  CHECK(d.center_wavelength * 1e9 == doctest::Approx(1546.0).epsilon(1e-9));
  CHECK(d.width * 1e9 == doctest::Approx(2.0 + 2.0 * 0.01 * 5.0 / 8.0).epsilon(1e-9));
}
