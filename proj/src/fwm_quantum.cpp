#include "braggsim/fwm_quantum.hpp"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/parallel.hpp"
#include "braggsim/transfer_matrix.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace braggsim {

namespace {

constexpr cdouble I{0.0, 1.0};
const double kPrefactor = 1.0 / std::pow(constants::two_pi, 1.5);

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

// A(w) in sqrt(W) s: the time-domain Fourier transform of the field envelope.
double envelope_spectrum(const PumpPulse& pulse, double omega) {
  return pump_spectral_amplitude_at(pulse, omega).real() * std::sqrt(photon_energy(pulse.center_omega()));
}

// Trapezoid weight of a grid point for a window: 1 inside, 1/2 on an edge.
double window_weight(const CollectionWindow& w, double omega, double spacing) {
  const double d = std::abs(omega - w.center_omega()) - 0.5 * w.width;
  if (d < -1e-6 * spacing) return 1.0;
  if (d <= 1e-6 * spacing) return 0.5;
  return 0.0;
}

double edge_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

void finalize(TwoPhotonState& st, const std::vector<double>& ws, const std::vector<double>& wi) {
  const auto& g1 = st.signal_grid;
  const auto& g2 = st.idler_grid;
  const double area = g1.spacing() * g2.spacing();
  double beta = 0.0, norm = 0.0;
  st.jsd.resize(g1.size(), g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i)
    for (std::size_t k = 0; k < g2.size(); ++k) {
      const double p = std::norm(st.amplitude(i, k));
      st.jsd(i, k) = p;
      beta += ws[i] * wi[k] * p;
      norm += edge_weight(i, g1.size()) * edge_weight(k, g2.size()) * p;
    }
  st.beta_sq = beta * area;
  if (norm > 0) {
    st.jsd /= norm * area;
  } else {
    st.is_zero = true;
  }
  if (st.beta_sq > 1e-2) {
    std::ostringstream msg;
    msg << "beta_sq = " << st.beta_sq << " exceeds 1e-2; first-order perturbation theory is strained";
    st.warnings.push_back(msg.str());
  }
}

TwoPhotonState zero_state(const JsdGrids& grids) {
  TwoPhotonState st;
  st.signal_grid = grids.signal;
  st.idler_grid = grids.idler;
  st.amplitude = Eigen::MatrixXcd::Zero(grids.signal.size(), grids.idler.size());
  st.jsd = Eigen::MatrixXd::Zero(grids.signal.size(), grids.idler.size());
  st.is_zero = true;
  return st;
}

void check_grid_covers(const FrequencyGrid& g, const CollectionWindow& w, const char* name) {
  const double lo = w.center_omega() - 0.5 * w.width;
  const double hi = w.center_omega() + 0.5 * w.width;
  const double tol = 1e-6 * g.spacing();
  if (g.front() > lo + tol || g.back() < hi - tol) {
    std::ostringstream msg;
    msg << name << " grid does not cover its collection window";
    throw InvalidArgument(msg.str());
  }
}

// Gauss-Legendre nodes and weights on [0, 1].
template <std::size_t N>
void gauss_nodes_impl(std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& wt = G::weights();
  x.clear();
  w.clear();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      x.push_back(0.5);
      w.push_back(0.5 * wt[i]);
    } else {
      x.push_back(0.5 * (1.0 - a[i]));
      w.push_back(0.5 * wt[i]);
      x.push_back(0.5 * (1.0 + a[i]));
      w.push_back(0.5 * wt[i]);
    }
  }
}

void gauss_nodes(int m, std::vector<double>& x, std::vector<double>& w) {
  switch (m) {
  case 4: gauss_nodes_impl<4>(x, w); break;
  case 6: gauss_nodes_impl<6>(x, w); break;
  case 8: gauss_nodes_impl<8>(x, w); break;
  case 10: gauss_nodes_impl<10>(x, w); break;
  default: throw InvalidArgument("gauss_nodes must be 4, 6, 8 or 10");
  }
}

} // namespace

SpontRate spont_from_stim(const StimulatedResult& stim, double signal_power, const CollectionWindow& window) {
  require(signal_power > 0, "signal power must be positive");
  window.validate();
  const double wi = wavelength_to_omega(stim.idler_wavelength);
  SpontRate r;
  r.bandwidth = window.width;
  r.power = photon_energy(wi) * window.width * stim.idler_power_internal / signal_power;
  r.rate = r.power / photon_energy(wi);
  return r;
}

JsdGrids default_bw_grids(const CollectionWindow& signal, const CollectionWindow& idler,
                          std::size_t n_points, double span_factor) {
  require(span_factor >= 1.0, "grid must span at least the window");
  require(std::abs(signal.width - idler.width) <= 1e-12 * signal.width,
          "signal and idler windows must share one width");
  const double span = span_factor * signal.width;
  return {FrequencyGrid::centered(signal.center_omega(), span, n_points),
          FrequencyGrid::centered(idler.center_omega(), span, n_points)};
}

JsdGrids default_ring_grids(const RingSpec& ring, std::size_t n_points, double linewidths) {
  ring.validate();
  return {FrequencyGrid::centered(ring.omega(Resonance::Signal),
                                  2.0 * linewidths * ring.linewidth(Resonance::Signal), n_points),
          FrequencyGrid::centered(ring.omega(Resonance::Idler),
                                  2.0 * linewidths * ring.linewidth(Resonance::Idler), n_points)};
}

TwoPhotonState two_photon_state_bw(const GratingSpec& spec, const NonlinearParams& params,
                                   const PumpPulse& pulse, const CollectionWindow& signal_window,
                                   const CollectionWindow& idler_window, const JsdGrids& grids,
                                   const BwOptions& options) {
  spec.validate();
  params.validate();
  pulse.validate();
  const double wp = pulse.center_omega();
  signal_window.validate_against_pump(wp);
  idler_window.validate_against_pump(wp);
  const FrequencyGrid& g1 = grids.signal;
  const FrequencyGrid& g2 = grids.idler;
  require(g1.size() >= 2 && g2.size() >= 2, "empty JSD grid");
  const double h = g1.spacing();
  require(std::abs(g2.spacing() - h) <= 1e-9 * h, "signal and idler grids must share one spacing");
  check_grid_covers(g1, signal_window, "signal");
  check_grid_covers(g2, idler_window, "idler");
  require(options.pump_half_span > 0, "pump half span must be positive");
  require(options.max_piece_length > 0, "piece length must be positive");

  std::vector<double> w1(g1.size()), w2(g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) w1[i] = window_weight(signal_window, g1[i], h);
  for (std::size_t k = 0; k < g2.size(); ++k) w2[k] = window_weight(idler_window, g2[k], h);

  TwoPhotonState st = zero_state(grids);
  if (params.gvd_beta2 != 0.0)
    st.warnings.push_back("gvd_beta2 is ignored by the two-photon state");
  if (params.gamma == 0.0 || pulse.peak_power == 0.0) return st;
  st.is_zero = false;

  // Pump lattices sharing the grid spacing, so w_a + w_b = w1 + w2 exactly.
  const long half_count = static_cast<long>(std::ceil(options.pump_half_span / h));
  const std::size_t na = static_cast<std::size_t>(2 * half_count + 1);
  const double a0 = wp - static_cast<double>(half_count) * h;
  const FrequencyGrid lattice = FrequencyGrid::uniform(a0, h, na);
  (void)pump_spectral_amplitude(pulse, lattice); // coverage check
  const long shift = std::lround((g1.front() + g2.front() - 2.0 * a0) / h);
  const double b0 = g1.front() + g2.front() - a0 - static_cast<double>(shift) * h;
  const bool same = std::abs(b0 - a0) <= 1e-6 * h;
  const std::size_t nb = na;

  std::vector<double> env_a(na), env_b(nb);
  for (std::size_t j = 0; j < na; ++j) env_a[j] = envelope_spectrum(pulse, a0 + h * static_cast<double>(j));
  for (std::size_t j = 0; j < nb; ++j) env_b[j] = envelope_spectrum(pulse, b0 + h * static_cast<double>(j));

  // Frequencies: pump lattice a, [pump lattice b], signal grid, idler grid.
  std::vector<double> freqs;
  std::vector<FieldDirection> dirs;
  for (std::size_t j = 0; j < na; ++j) {
    freqs.push_back(a0 + h * static_cast<double>(j));
    dirs.push_back(FieldDirection::AsymptoticInFromLeft);
  }
  const std::size_t off_b = same ? 0 : freqs.size();
  if (!same)
    for (std::size_t j = 0; j < nb; ++j) {
      freqs.push_back(b0 + h * static_cast<double>(j));
      dirs.push_back(FieldDirection::AsymptoticInFromLeft);
    }
  const std::size_t off_s = freqs.size();
  for (std::size_t i = 0; i < g1.size(); ++i) {
    freqs.push_back(g1[i]);
    dirs.push_back(FieldDirection::AsymptoticInFromRight);
  }
  const std::size_t off_i = freqs.size();
  for (std::size_t k = 0; k < g2.size(); ++k) {
    freqs.push_back(g2[k]);
    dirs.push_back(FieldDirection::AsymptoticInFromRight);
  }
  const std::size_t nf = freqs.size();

  const LayerStack stack = build_layer_stack(spec, options.max_piece_length);
  const std::size_t S = stack.layers.size();

  std::vector<double> gx, gw;
  gauss_nodes(options.gauss_nodes, gx, gw);
  const std::size_t m = gx.size();

  // distinct (index, length) layer kinds share phase tables
  std::map<std::pair<double, double>, int> kind_of;
  std::vector<int> kind(S);
  std::vector<Layer> kinds;
  for (std::size_t j = 0; j < S; ++j) {
    const auto key = std::make_pair(stack.layers[j].n, stack.layers[j].length);
    auto it = kind_of.find(key);
    if (it == kind_of.end()) {
      it = kind_of.emplace(key, static_cast<int>(kinds.size())).first;
      kinds.push_back(stack.layers[j]);
    }
    kind[j] = it->second;
  }
  const std::size_t nk = kinds.size();
  // phase[f][kind][q] = exp(i k l x_q); q = m is the full-layer phase
  std::vector<cdouble> phase(nf * nk * (m + 1));
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t kk = 0; kk < nk; ++kk) {
      const double kl = kinds[kk].n * freqs[f] / constants::c * kinds[kk].length;
      cdouble* p = &phase[(f * nk + kk) * (m + 1)];
      for (std::size_t q = 0; q < m; ++q) p[q] = std::polar(1.0, kl * gx[q]);
      p[m] = std::polar(1.0, kl);
    }

  const std::size_t layers_per_block = std::max<std::size_t>(1, 512 / m);
  const std::size_t n_blocks = (S + layers_per_block - 1) / layers_per_block;

  // Checkpoints: normalized amplitudes at the start of each block's first layer.
  std::vector<cdouble> ck(nf * n_blocks * 2);
  parallel_for(nf, [&](std::size_t f) {
    const PiecewiseField field = internal_fields(stack, freqs[f], dirs[f]);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const auto& s = field.segments[b * layers_per_block];
      ck[(f * n_blocks + b) * 2] = s.fwd;
      ck[(f * n_blocks + b) * 2 + 1] = s.bwd;
    }
  });

  const std::size_t n1 = g1.size(), n2 = g2.size();
  const std::size_t ns = n1 + n2 - 1;
  const std::size_t zmax = layers_per_block * m;
  std::vector<double> fr(nf * zmax), fi(nf * zmax);
  std::vector<double> ppr(ns * zmax), ppi(ns * zmax);
  std::vector<double> wz(zmax);
  std::vector<cdouble> phi(n1 * n2, cdouble{});

  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t j0 = b * layers_per_block;
    const std::size_t j1 = std::min(S, j0 + layers_per_block);
    const std::size_t nz = (j1 - j0) * m;
    for (std::size_t j = j0; j < j1; ++j)
      for (std::size_t q = 0; q < m; ++q) wz[(j - j0) * m + q] = stack.layers[j].length * gw[q];

    // field values at the quadrature nodes, pump rows weighted by A(w)
    parallel_for(nf, [&](std::size_t f) {
      cdouble a = ck[(f * n_blocks + b) * 2];
      cdouble c = ck[(f * n_blocks + b) * 2 + 1];
      double scale = 1.0;
      if (f < na) scale = env_a[f];
      else if (!same && f < off_s) scale = env_b[f - off_b];
      double* outr = &fr[f * zmax];
      double* outi = &fi[f * zmax];
      for (std::size_t j = j0; j < j1; ++j) {
        const cdouble* p = &phase[(f * nk + static_cast<std::size_t>(kind[j])) * (m + 1)];
        for (std::size_t q = 0; q < m; ++q) {
          const cdouble v = scale * (a * p[q] + c * std::conj(p[q]));
          outr[(j - j0) * m + q] = v.real();
          outi[(j - j0) * m + q] = v.imag();
        }
        a *= p[m];
        c *= std::conj(p[m]);
        if (j + 1 < S && stack.layers[j + 1].n != stack.layers[j].n) {
          // start of the next layer: D(n_next, n_this) applied to the end state
          const double r = stack.layers[j].n / stack.layers[j + 1].n;
          const cdouble na_ = 0.5 * ((1.0 + r) * a + (1.0 - r) * c);
          const cdouble nc_ = 0.5 * ((1.0 - r) * a + (1.0 + r) * c);
          a = na_;
          c = nc_;
        }
      }
    });

    // pump pair products PP[s](z) = sum_j A_a f_a(z) A_b f_b(z), j + m = s + shift
    parallel_for(ns, [&](std::size_t s) {
      double* pr = &ppr[s * zmax];
      double* pi = &ppi[s * zmax];
      std::fill(pr, pr + nz, 0.0);
      std::fill(pi, pi + nz, 0.0);
      const long target = static_cast<long>(s) + shift;
      const long jlo = std::max<long>(0, target - static_cast<long>(nb) + 1);
      const long jhi = std::min<long>(static_cast<long>(na) - 1, target);
      auto accumulate = [&](std::size_t ra, std::size_t rb, double factor) {
        const double* ar = &fr[ra * zmax];
        const double* ai = &fi[ra * zmax];
        const double* br = &fr[rb * zmax];
        const double* bi = &fi[rb * zmax];
        for (std::size_t z = 0; z < nz; ++z) {
          pr[z] += factor * (ar[z] * br[z] - ai[z] * bi[z]);
          pi[z] += factor * (ar[z] * bi[z] + ai[z] * br[z]);
        }
      };
      for (long j = jlo; j <= jhi; ++j) {
        const long mm = target - j;
        if (same) {
          if (j > mm) break;
          accumulate(static_cast<std::size_t>(j), static_cast<std::size_t>(mm), j == mm ? 1.0 : 2.0);
        } else {
          accumulate(static_cast<std::size_t>(j), off_b + static_cast<std::size_t>(mm), 1.0);
        }
      }
    });

    // phi[i][k] += sum_z w PP[i + k] g_s[i] g_i[k]
    parallel_for(n1, [&](std::size_t i) {
      std::vector<double> tr(nz), ti(nz);
      const double* sr = &fr[(off_s + i) * zmax];
      const double* si = &fi[(off_s + i) * zmax];
      for (std::size_t z = 0; z < nz; ++z) {
        tr[z] = wz[z] * sr[z];
        ti[z] = wz[z] * si[z];
      }
      for (std::size_t k = 0; k < n2; ++k) {
        const double* pr = &ppr[(i + k) * zmax];
        const double* pi = &ppi[(i + k) * zmax];
        const double* ir = &fr[(off_i + k) * zmax];
        const double* ii = &fi[(off_i + k) * zmax];
        double accr = 0.0, acci = 0.0;
        for (std::size_t z = 0; z < nz; ++z) {
          const double ur = pr[z] * tr[z] - pi[z] * ti[z];
          const double ui = pr[z] * ti[z] + pi[z] * tr[z];
          accr += ur * ir[z] - ui * ii[z];
          acci += ur * ii[z] + ui * ir[z];
        }
        phi[i * n2 + k] += cdouble(accr, acci);
      }
    });
  }

  const double scale = params.gamma * kPrefactor * h;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) st.amplitude(i, k) = scale * phi[i * n2 + k];
  finalize(st, w1, w2);
  return st;
}

TwoPhotonState two_photon_state_ring(const RingSpec& ring, const NonlinearParams& params,
                                     const PumpPulse& pulse, const JsdGrids& grids) {
  ring.validate();
  params.validate();
  pulse.validate();
  require(pulse.shape == PulseShape::Gaussian, "the ring model requires a Gaussian pump pulse");
  const FrequencyGrid& g1 = grids.signal;
  const FrequencyGrid& g2 = grids.idler;
  require(g1.size() >= 2 && g2.size() >= 2, "empty JSD grid");

  TwoPhotonState st = zero_state(grids);
  const double wP = ring.omega(Resonance::Pump), wS = ring.omega(Resonance::Signal),
               wI = ring.omega(Resonance::Idler);
  const double gP = ring.linewidth(Resonance::Pump);
  if (std::abs(2.0 * wP - wS - wI) > 10.0 * gP) {
    std::ostringstream msg;
    msg << "resonance triplet misses energy conservation by "
        << std::abs(2.0 * wP - wS - wI) / gP << " pump linewidths";
    st.warnings.push_back(msg.str());
  }
  if (params.gvd_beta2 != 0.0) st.warnings.push_back("gvd_beta2 is ignored by the ring model");
  std::vector<double> w1(g1.size()), w2(g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) w1[i] = edge_weight(i, g1.size());
  for (std::size_t k = 0; k < g2.size(); ++k) w2[k] = edge_weight(k, g2.size());
  if (params.gamma == 0.0 || pulse.peak_power == 0.0) return st;
  st.is_zero = false;

  const double t_rt = ring.round_trip_time();
  auto enhancement = [&](Resonance r) {
    const double w0 = ring.omega(r), q = ring.quality_factor(r);
    const double gamma = w0 / q;
    const double peak = std::sqrt(2.0 * q / (w0 * t_rt));
    return [=](double w) { return peak * (0.5 * gamma) / cdouble(0.5 * gamma, -(w - w0)); };
  };
  const auto lP = enhancement(Resonance::Pump);
  const auto lS = enhancement(Resonance::Signal);
  const auto lI = enhancement(Resonance::Idler);

  // w_a = W/2 + u, w_b = W/2 - u. The envelope product falls as
  // exp(-u^2 d^2 / 2), so |u| <= 20 / d loses nothing.
  const double d = pulse.duration;
  const double u_max = 20.0 / d;
  const double du = std::min(gP, std::sqrt(2.0) / d) / 40.0;
  const long nu = static_cast<long>(std::ceil(u_max / du));
  const double length = ring.circumference();

  parallel_for(g1.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < g2.size(); ++k) {
      const double half = 0.5 * (g1[i] + g2[k]);
      cdouble sum{};
      for (long t = -nu; t <= nu; ++t) {
        const double u = du * static_cast<double>(t);
        const double wa = half + u, wb = half - u;
        sum += envelope_spectrum(pulse, wa) * envelope_spectrum(pulse, wb) * lP(wa) * lP(wb);
      }
      st.amplitude(i, k) = params.gamma * kPrefactor * du * length * lS(g1[i]) * lI(g2[k]) * sum;
    }
  });
  finalize(st, w1, w2);
  return st;
}

double pair_rate(const TwoPhotonState& state, const PumpPulse& pulse) {
  const double energy = pulse.energy();
  if (energy <= 0) return 0.0;
  return state.beta_sq * pulse.peak_power / energy;
}

SchmidtReport schmidt_decompose(const Eigen::MatrixXcd& amplitude, double h1, double h2) {
  require(amplitude.size() > 0, "empty amplitude");
  require(h1 > 0 && h2 > 0, "grid spacings must be positive");
  const Eigen::MatrixXcd m = amplitude * std::sqrt(h1 * h2);
  if (m.norm() == 0.0) throw InvalidArgument("all-zero two-photon state has no Schmidt decomposition");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  const double total = sv.squaredNorm();
  SchmidtReport rep;
  rep.coefficients.resize(static_cast<std::size_t>(sv.size()));
  double purity = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double lam = sv[k] / std::sqrt(total);
    rep.coefficients[static_cast<std::size_t>(k)] = lam;
    purity += lam * lam * lam * lam;
  }
  rep.purity = purity;
  rep.schmidt_number = 1.0 / purity;
  return rep;
}

SchmidtReport schmidt_analysis(const TwoPhotonState& state) {
  const double h1 = state.signal_grid.spacing(), h2 = state.idler_grid.spacing();
  if (state.is_zero) throw InvalidArgument("all-zero two-photon state has no Schmidt decomposition");
  if (state.amplitude.size() > 0) return schmidt_decompose(state.amplitude, h1, h2);
  require(state.jsd.size() > 0, "state has neither amplitude nor JSD");
  SchmidtReport rep = schmidt_decompose(state.jsd.cwiseSqrt().cast<cdouble>(), h1, h2);
  rep.from_jsd_only = true;
  return rep;
}

namespace {

// FWHM, in bins, of a marginal after merging adjacent bins in pairs.
double merged_fwhm(const std::vector<double>& marginal) {
  std::vector<double> c;
  for (std::size_t t = 0; t + 1 < marginal.size(); t += 2) c.push_back(marginal[t] + marginal[t + 1]);
  if (c.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t p = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  const double half = 0.5 * c[p];
  double left = 0.0, right = static_cast<double>(c.size() - 1);
  for (std::size_t t = p; t > 0; --t)
    if (c[t - 1] < half) {
      left = static_cast<double>(t - 1) + (half - c[t - 1]) / (c[t] - c[t - 1]);
      break;
    }
  for (std::size_t t = p; t + 1 < c.size(); ++t)
    if (c[t + 1] < half) {
      right = static_cast<double>(t) + (c[t] - half) / (c[t] - c[t + 1]);
      break;
    }
  return 2.0 * (right - left);
}

} // namespace

JsdShape jsd_shape(const TwoPhotonState& state) {
  if (state.is_zero) throw InvalidArgument("zero state has no JSD");
  const auto& g1 = state.signal_grid;
  const auto& g2 = state.idler_grid;
  const Eigen::MatrixXd& p = state.jsd;
  double total = 0, m1 = 0, m2 = 0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      total += p(i, k);
      m1 += p(i, k) * (g1[i] - g1.center());
      m2 += p(i, k) * (g2[k] - g2.center());
    }
  m1 /= total;
  m2 /= total;
  double c11 = 0, c22 = 0, c12 = 0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      const double x = g1[i] - g1.center() - m1, y = g2[k] - g2.center() - m2;
      c11 += p(i, k) * x * x;
      c22 += p(i, k) * y * y;
      c12 += p(i, k) * x * y;
    }
  c11 /= total;
  c22 /= total;
  c12 /= total;
  JsdShape s;
  const double tr = 0.5 * (c11 + c22);
  const double det = std::sqrt(0.25 * (c11 - c22) * (c11 - c22) + c12 * c12);
  const double lmax = tr + det, lmin = std::max(tr - det, 0.0);
  s.principal_axis_ratio = lmin > 0 ? std::sqrt(lmax / lmin) : std::numeric_limits<double>::infinity();
  s.sum_std = std::sqrt(std::max(0.0, 0.5 * (c11 + c22) + c12));
  s.diff_std = std::sqrt(std::max(0.0, 0.5 * (c11 + c22) - c12));

  const double h = g1.spacing();
  if (std::abs(g2.spacing() - h) > 1e-6 * h) {
    s.sum_fwhm = s.diff_fwhm = s.antidiag_to_diag_ratio = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  const std::size_t n1 = g1.size(), n2 = g2.size();
  std::vector<double> ms(n1 + n2 - 1, 0.0), md(n1 + n2 - 1, 0.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) {
      ms[i + k] += p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      md[i + n2 - 1 - k] += p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
  // one index step moves (w1 +- w2)/sqrt 2 by h / sqrt 2
  s.sum_fwhm = merged_fwhm(ms) * h / std::sqrt(2.0);
  s.diff_fwhm = merged_fwhm(md) * h / std::sqrt(2.0);
  s.antidiag_to_diag_ratio = s.sum_fwhm / s.diff_fwhm;
  return s;
}

SweepResult contrast_sweep(const GratingSpec& base, double target_rejection_db,
                           std::span<const double> contrasts, const NonlinearParams& params,
                           const PumpPulse& pulse, const CollectionWindow& idler_window,
                           const ContrastSweepOptions& options) {
  base.validate();
  require(!contrasts.empty(), "contrast sweep needs at least one contrast");
  for (double dn : contrasts)
    require(dn >= 5e-4 && dn <= 1e-2, "index contrasts must lie in [5e-4, 1e-2]");
  require(pulse.peak_power > 0, "pump peak power must be positive");
  require(options.grid_points >= 2, "grid needs at least 2 points");

  SweepResult out({"delta_n", "n_periods", "pump_wavelength_nm", "beta_sq", "pair_rate_per_s_per_mw2"});
  const double per_mw2 = std::pow(1e-3 / pulse.peak_power, 2);
  for (double dn : contrasts) {
    GratingSpec g = base.grating_only();
    g.delta_n = dn;
    g.n_periods = design_periods(target_rejection_db, g.n_lo, dn);
    PumpPulse p = pulse;
    p.center_wavelength = stopband_center(g);
    CollectionWindow sig;
    sig.width = idler_window.width;
    sig.center_wavelength = omega_to_wavelength(2.0 * p.center_omega() - idler_window.center_omega());
    const JsdGrids grids{FrequencyGrid::centered(sig.center_omega(), sig.width, options.grid_points),
                         FrequencyGrid::centered(idler_window.center_omega(), idler_window.width,
                                                 options.grid_points)};
    const TwoPhotonState st = two_photon_state_bw(g, params, p, sig, idler_window, grids, options.bw);
    out.add_row({dn, static_cast<double>(g.n_periods), p.center_wavelength * 1e9, st.beta_sq,
                 pair_rate(st, p) * per_mw2});
    for (const auto& w : st.warnings) out.notes.push_back(w);
  }
  const auto& x = out.column("delta_n");
  const auto& y = out.column("pair_rate_per_s_per_mw2");
  bool fit_ok = x.size() >= 2;
  for (double v : y) fit_ok = fit_ok && v > 0;
  if (fit_ok) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lx = std::log(x[i]), ly = std::log(y[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    fit_ok = den > 0;
    if (fit_ok) out.scalars["slope"] = (n * sxy - sx * sy) / den;
  }
  if (!fit_ok) {
    out.scalars["slope"] = std::numeric_limits<double>::quiet_NaN();
    out.notes.push_back("slope undefined: fewer than two distinct contrasts with positive rates");
  }
  out.scalars["target_rejection_db"] = target_rejection_db;
  return out;
}

std::string jsd_to_csv(const TwoPhotonState& state) {
  std::string s = "lambda_signal_nm,lambda_idler_nm,jsd_normalized\n";
  for (std::size_t i = 0; i < state.signal_grid.size(); ++i)
    for (std::size_t k = 0; k < state.idler_grid.size(); ++k) {
      s += format_value(omega_to_wavelength(state.signal_grid[i]) * 1e9);
      s += ',';
      s += format_value(omega_to_wavelength(state.idler_grid[k]) * 1e9);
      s += ',';
      s += format_value(state.is_zero ? 0.0
                                      : state.jsd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
      s += '\n';
    }
  return s;
}

} // namespace braggsim
