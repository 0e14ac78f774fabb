#include "doctest.h"

#include "braggsim/constants.hpp"
#include "braggsim/core_model.hpp"
#include "braggsim/errors.hpp"

#include <cmath>

using namespace braggsim;

namespace {
constexpr double kC = 299792458.0;
constexpr double kHbar = 1.054571817e-34;
double omega_of(double lambda) { return 2.0 * M_PI * kC / lambda; }
} // namespace

TEST_CASE("wavelength/omega conversions round-trip") {
  for (double l = 1500e-9; l <= 1600e-9; l += 7.3e-9) {
    const double back = omega_to_wavelength(wavelength_to_omega(l));
    CHECK(std::abs(back - l) / l < 1e-12);
  }
}

TEST_CASE("make_wavelength_grid") {
  SUBCASE("middle point is omega(center)") {
    const auto g = make_wavelength_grid(1545e-9, 10e-9, 3);
    CHECK(g.size() == 3);
    CHECK(g[1] == doctest::Approx(omega_of(1545e-9)).epsilon(1e-14));
  }
  SUBCASE("spacing from the interval") {
    const auto g = make_wavelength_grid(1550e-9, 20e-9, 2001);
    const double expected = (omega_of(1540e-9) - omega_of(1560e-9)) / 2000.0;
    CHECK(g.spacing() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(g.back() - g.front() == doctest::Approx(omega_of(1540e-9) - omega_of(1560e-9)).epsilon(1e-12));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(make_wavelength_grid(1545e-9, 0.0, 2), InvalidArgument);
    CHECK_THROWS_AS(make_wavelength_grid(1545e-9, -1e-9, 5), InvalidArgument);
    CHECK_THROWS_AS(make_wavelength_grid(1545e-9, 1e-9, 1), InvalidArgument);
  }
}

TEST_CASE("FrequencyGrid invariants") {
  CHECK_NOTHROW(FrequencyGrid::from_points({1.0e15, 1.0e15 + 1e9, 1.0e15 + 2e9}));
  CHECK_THROWS_AS(FrequencyGrid::from_points({1.0e15, 1.0e15 + 1e9, 1.0e15 + 2.5e9}), InvalidArgument);
  CHECK_THROWS_AS(FrequencyGrid::from_points({2.0, 1.0}), InvalidArgument);
  const auto g = FrequencyGrid::uniform(1.0, 0.5, 5);
  CHECK(g.back() == doctest::Approx(3.0));
}

TEST_CASE("pulse energy and spectral amplitude") {
  PumpPulse top;
  top.shape = PulseShape::TopHat;
  top.duration = 1e-9;
  top.peak_power = 1e-3;
  top.center_wavelength = 1545e-9;
  CHECK(top.energy() == doctest::Approx(1e-12).epsilon(1e-12));

  SUBCASE("TopHat first spectral null at 2 pi / T") {
    const double wc = top.center_omega();
    const double null = std::abs(pump_spectral_amplitude_at(top, wc + 2.0 * M_PI / top.duration));
    const double peak = std::abs(pump_spectral_amplitude_at(top, wc));
    CHECK(null / peak < 1e-9);
    CHECK(std::abs(pump_spectral_amplitude_at(top, wc + M_PI / top.duration)) / peak > 0.5);
  }

  SUBCASE("TopHat photon number on a wide grid") {
    // 1% of the photon number sits beyond ~20 / (pi^2 T) on each side; use a
    // +-400 GHz grid so the tail is ~0.05%.
    const auto g = FrequencyGrid::centered(top.center_omega(), 2.0 * M_PI * 800e9, 16001);
    const auto a = pump_spectral_amplitude(top, g);
    const double n = spectral_photon_number(a, g);
    const double expected = 1e-12 / (kHbar * omega_of(1545e-9));
    const double lost = pump_truncation_fraction(top, g.front(), g.back());
    CHECK(n / expected == doctest::Approx(1.0 - lost).epsilon(2e-4));
  }

  SUBCASE("Gaussian 33 ps norm equals energy / hbar omega within 0.1%") {
    PumpPulse gp;
    gp.shape = PulseShape::Gaussian;
    gp.duration = 33e-12;
    gp.peak_power = 1e-3;
    gp.center_wavelength = 1534.55e-9;
    // closed form: integral P0 exp(-2 t^2/d^2) dt = P0 d sqrt(pi/2)
    const double energy = 1e-3 * 33e-12 * std::sqrt(M_PI / 2.0);
    CHECK(gp.energy() == doctest::Approx(energy).epsilon(1e-12));
    const auto g = FrequencyGrid::centered(gp.center_omega(), 40.0 * gp.spectral_width(), 401);
    const auto a = pump_spectral_amplitude(gp, g);
    const double n = spectral_photon_number(a, g);
    CHECK(std::abs(n / (energy / (kHbar * omega_of(1534.55e-9))) - 1.0) < 1e-3);

    // refinement stability
    const auto g2 = FrequencyGrid::centered(gp.center_omega(), 40.0 * gp.spectral_width(), 801);
    const double n2 = spectral_photon_number(pump_spectral_amplitude(gp, g2), g2);
    CHECK(std::abs(n2 / n - 1.0) < 1e-4);
  }

  SUBCASE("coverage errors") {
    const auto narrow = FrequencyGrid::centered(top.center_omega(), 2.0 * M_PI * 5e9, 101);
    CHECK_THROWS_AS(pump_spectral_amplitude(top, narrow), CoverageError);
    // wide enough in widths (20) but truncating ~1% of a top-hat
    const auto edge = FrequencyGrid::centered(top.center_omega(), 2.0 * M_PI * 20e9, 401);
    CHECK(pump_truncation_fraction(top, edge.front(), edge.back()) > 0.01);
    CHECK_THROWS_AS(pump_spectral_amplitude(top, edge), CoverageError);
  }
}

TEST_CASE("truncation fraction closed form against direct sum") {
  PumpPulse top;
  top.duration = 1e-9;
  const double wc = top.center_omega();
  const double half = 2.0 * M_PI * 40e9;
  // Riemann sum of sinc^2 over the interval, normalized by the full integral 2 pi T
  const int n = 400001;
  const double h = 2.0 * half / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = -half + h * i;
    const double x = 0.5 * d * top.duration;
    const double s = x == 0 ? 1.0 : std::sin(x) / x;
    sum += (i == 0 || i == n - 1 ? 0.5 : 1.0) * s * s;
  }
  const double inside = sum * h * top.duration / (2.0 * M_PI);
  CHECK(pump_truncation_fraction(top, wc - half, wc + half) == doctest::Approx(1.0 - inside).epsilon(1e-4));
}

TEST_CASE("ring dwelling time") {
  const RingSpec ring = presets::paper_ring();
  const double tau = ring.dwelling_time(Resonance::Pump);
  CHECK(tau > 31.4e-12);
  CHECK(tau < 34.7e-12);
  CHECK(tau == doctest::Approx(40000.0 * 1534.55e-9 / (2.0 * M_PI * kC)).epsilon(1e-12));
  CHECK(ring.linewidth(Resonance::Signal) == doctest::Approx(omega_of(1544.27e-9) / 40000.0));
}

TEST_CASE("spec validation") {
  GratingSpec g;
  CHECK_NOTHROW(g.validate());
  g.duty_cycle = 1.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = GratingSpec{};
  g.delta_n = -0.3;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g.delta_n = -1e-3;
  CHECK_NOTHROW(g.validate());
  g.n_periods = 0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);

  CollectionWindow w;
  w.center_wavelength = 1545e-9;
  CHECK_THROWS_AS(w.validate_against_pump(omega_of(1545e-9)), InvalidArgument);
  CHECK_NOTHROW(CollectionWindow{}.validate_against_pump(omega_of(1545e-9)));

  NonlinearParams p;
  p.gamma = -1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  NonlinearParams q = presets::paper_nonlinear();
  CHECK(q.internal_from_external(1e-3) == doctest::Approx(1e-3 * std::pow(10.0, -0.5)));
}

TEST_CASE("paper preset geometry") {
  const auto g = presets::paper_grating();
  CHECK(g.grating_length() == doctest::Approx(640e-6));
  CHECK(g.total_length() == doctest::Approx(1.6e-3));
  CHECK(g.grating_only().total_length() == doctest::Approx(640e-6));
}
