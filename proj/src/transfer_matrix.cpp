#include "braggsim/transfer_matrix.hpp"

#include "braggsim/constants.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/parallel.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace braggsim {

namespace {

constexpr cdouble I{0.0, 1.0};

double wavenumber(double n, double omega) { return n * omega / constants::c; }

} // namespace

TransferMatrix interface_matrix(double n_left, double n_right) {
  const double r = n_right / n_left;
  return {0.5 * (1.0 + r), 0.5 * (1.0 - r), 0.5 * (1.0 - r), 0.5 * (1.0 + r)};
}

TransferMatrix propagation_matrix(double n, double length, double omega) {
  const double phase = wavenumber(n, omega) * length;
  return {std::polar(1.0, -phase), 0.0, 0.0, std::polar(1.0, phase)};
}

TransferMatrix unit_cell_matrix(const GratingSpec& spec, double omega) {
  spec.validate();
  const double n_hi = spec.n_hi();
  const double narrow = spec.duty_cycle * spec.period;
  const double wide = spec.period - narrow;
  if (spec.delta_n == 0.0) {
    // Uniform medium: a single pure phase, off-diagonals identically zero.
    return propagation_matrix(n_hi, spec.period, omega);
  }
  return interface_matrix(n_hi, spec.n_lo) * propagation_matrix(spec.n_lo, narrow, omega) *
         interface_matrix(spec.n_lo, n_hi) * propagation_matrix(n_hi, wide, omega);
}

TransferMatrix cascade(std::span<const TransferMatrix> cells) {
  if (cells.empty()) throw InvalidArgument("cascade of an empty list");
  TransferMatrix m = cells.front();
  for (std::size_t i = 1; i < cells.size(); ++i) m = m * cells[i];
  return m;
}

TransferMatrix cascade_power(const TransferMatrix& m, long n) {
  if (n < 0) throw InvalidArgument("negative cascade power");
  TransferMatrix result = TransferMatrix::identity();
  TransferMatrix base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

TransferMatrix structure_matrix(const GratingSpec& spec, double omega, CascadeMethod method) {
  const TransferMatrix cell = unit_cell_matrix(spec, omega);
  TransferMatrix body;
  if (method == CascadeMethod::BinaryPower) {
    body = cascade_power(cell, spec.n_periods);
  } else {
    for (long i = 0; i < spec.n_periods; ++i) body = body * cell;
  }
  return propagation_matrix(spec.n_hi(), spec.lead_in_length, omega) * body *
         propagation_matrix(spec.n_hi(), spec.lead_out_length, omega);
}

double LayerStack::length() const {
  double L = 0.0;
  for (const auto& l : layers) L += l.length;
  return L;
}

LayerStack LayerStack::reversed() const {
  LayerStack r;
  r.layers.assign(layers.rbegin(), layers.rend());
  r.n_left = n_right;
  r.n_right = n_left;
  return r;
}

LayerStack build_layer_stack(const GratingSpec& spec, double max_piece_length) {
  spec.validate();
  if (!(max_piece_length > 0)) throw InvalidArgument("piece length must be positive");
  LayerStack stack;
  stack.n_left = stack.n_right = spec.n_hi();
  auto push = [&](double n, double length) {
    if (length <= 0) return;
    long pieces = 1;
    if (std::isfinite(max_piece_length) && length > max_piece_length)
      pieces = static_cast<long>(std::ceil(length / max_piece_length));
    const double piece = length / static_cast<double>(pieces);
    for (long p = 0; p < pieces; ++p) stack.layers.push_back({n, piece});
  };
  const double narrow = spec.duty_cycle * spec.period;
  const double wide = spec.period - narrow;
  stack.layers.reserve(static_cast<std::size_t>(2 * spec.n_periods + 2));
  push(spec.n_hi(), spec.lead_in_length);
  for (long i = 0; i < spec.n_periods; ++i) {
    push(spec.n_lo, narrow);
    push(spec.n_hi(), wide);
  }
  push(spec.n_hi(), spec.lead_out_length);
  return stack;
}

TransferMatrix stack_matrix(const LayerStack& stack, double omega) {
  TransferMatrix m;
  double n_prev = stack.n_left;
  for (const auto& layer : stack.layers) {
    if (layer.n != n_prev) m = m * interface_matrix(n_prev, layer.n);
    m = m * propagation_matrix(layer.n, layer.length, omega);
    n_prev = layer.n;
  }
  if (stack.n_right != n_prev) m = m * interface_matrix(n_prev, stack.n_right);
  return m;
}

SweepResult transmission_spectrum(const GratingSpec& spec, const FrequencyGrid& grid) {
  spec.validate();
  const std::size_t n = grid.size();
  std::vector<double> t(n);
  parallel_for(n, [&](std::size_t i) { t[i] = structure_matrix(spec, grid[i]).transmission(); });
  SweepResult out({"wavelength_nm", "transmission", "transmission_db"});
  // grid is increasing in omega, so walk it backwards for increasing wavelength
  for (std::size_t k = n; k-- > 0;) {
    const double tk = std::min(t[k], 1.0);
    out.add_row({omega_to_wavelength(grid[k]) * 1e9, tk, 10.0 * std::log10(tk)});
  }
  return out;
}

std::optional<StopbandReport> stopband_report(const SweepResult& spectrum) {
  const auto& wl = spectrum.column("wavelength_nm");
  const auto& db = spectrum.column("transmission_db");
  if (wl.size() < 2) return std::nullopt;
  const auto it = std::min_element(db.begin(), db.end());
  const std::size_t imin = static_cast<std::size_t>(it - db.begin());
  if (*it > -3.0) return std::nullopt;

  StopbandReport report;
  report.center_wavelength = wl[imin] * 1e-9;
  report.rejection_db_at_center = -*it;
  if (*it > -10.0) return report;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    // linear interpolation of the -10 dB level between two grid points
    const double f = (-10.0 - db[inside]) / (db[outside] - db[inside]);
    return wl[inside] + f * (wl[outside] - wl[inside]);
  };
  std::size_t lo = imin;
  while (lo > 0 && db[lo - 1] <= -10.0) --lo;
  std::size_t hi = imin;
  while (hi + 1 < db.size() && db[hi + 1] <= -10.0) ++hi;
  const double left = lo > 0 ? crossing(lo, lo - 1) : wl[lo];
  const double right = hi + 1 < db.size() ? crossing(hi, hi + 1) : wl[hi];
  report.bandwidth_at_10db = std::abs(right - left) * 1e-9;
  return report;
}

double stopband_center(const GratingSpec& spec) {
  spec.validate();
  const double n_mean = spec.duty_cycle * spec.n_lo + (1.0 - spec.duty_cycle) * spec.n_hi();
  const double bragg = 2.0 * spec.period * n_mean;
  const double kappa = 2.0 * std::abs(spec.delta_n) * std::sin(constants::pi * spec.duty_cycle) / bragg;
  const double band = bragg * bragg * kappa / (constants::pi * n_mean);
  const double lobe = bragg * bragg / (n_mean * spec.grating_length());
  const double half = std::max(2.0 * band, 3.0 * lobe);

  auto log_t = [&](double wavelength) {
    return std::log(structure_matrix(spec, wavelength_to_omega(wavelength)).transmission());
  };
  const int coarse = 2001;
  const double step = 2.0 * half / (coarse - 1);
  int best = 0;
  double best_val = log_t(bragg - half);
  for (int i = 1; i < coarse; ++i) {
    const double v = log_t(bragg - half + step * i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // Brent's stopping rule has an absolute term, so search in picometres.
  auto log_t_pm = [&](double u) { return log_t(bragg + u * 1e-12); };
  const double a = (-half + step * std::max(0, best - 1)) * 1e12;
  const double b = (-half + step * std::min(coarse - 1, best + 1)) * 1e12;
  const auto found = boost::math::tools::brent_find_minima(log_t_pm, a, b, 40);
  return bragg + found.first * 1e-12;
}

double rejection_db_for_periods(long n_periods, double n_lo, double delta_n) {
  const double t = 4.0 * std::exp(-2.0 * static_cast<double>(n_periods) * std::log1p(delta_n / n_lo));
  return -10.0 * std::log10(t);
}

double design_periods_exact(double rejection_db, double n_lo, double delta_n) {
  if (!(delta_n > 0)) throw InvalidArgument("design requires a positive index contrast");
  if (!(n_lo > 1)) throw InvalidArgument("design requires n_lo > 1");
  const double floor_db = 10.0 * std::log10(4.0);
  if (!(rejection_db > floor_db)) {
    std::ostringstream msg;
    msg << "rejection " << rejection_db << " dB is at or below 10 log10(4) = " << floor_db
        << " dB, where 4 (1 + dn/n)^(-2N) = 10^(-rejection/10) has no positive solution";
    throw DomainError(msg.str());
  }
  return (std::log(4.0) + rejection_db * std::log(10.0) / 10.0) / (2.0 * std::log1p(delta_n / n_lo));
}

long design_periods(double rejection_db, double n_lo, double delta_n) {
  const double exact = design_periods_exact(rejection_db, n_lo, delta_n);
  long n = static_cast<long>(std::ceil(exact));
  if (n > 1 && rejection_db_for_periods(n - 1, n_lo, delta_n) >= rejection_db - 1e-12) --n;
  return std::max(1L, n);
}

std::size_t PiecewiseField::segment_index(double z) const {
  if (segments.empty()) throw InvalidArgument("empty field");
  auto it = std::upper_bound(segments.begin(), segments.end(), z,
                             [](double v, const FieldSegment& s) { return v < s.z_start; });
  if (it == segments.begin()) return 0;
  return static_cast<std::size_t>(it - segments.begin()) - 1;
}

cdouble PiecewiseField::value(double z) const {
  if (segments.empty() || z < 0.0) {
    const double k = wavenumber(n_left, omega);
    return left_fwd * std::exp(I * k * z) + left_bwd * std::exp(-I * k * z);
  }
  if (z > length()) {
    const double k = wavenumber(n_right, omega);
    const double dz = z - length();
    return right_fwd * std::exp(I * k * dz) + right_bwd * std::exp(-I * k * dz);
  }
  const auto& s = segments[segment_index(z)];
  const double k = wavenumber(s.n, omega);
  const double dz = z - s.z_start;
  return s.fwd * std::exp(I * k * dz) + s.bwd * std::exp(-I * k * dz);
}

cdouble PiecewiseField::derivative(double z) const {
  if (segments.empty() || z < 0.0) {
    const double k = wavenumber(n_left, omega);
    return I * k * (left_fwd * std::exp(I * k * z) - left_bwd * std::exp(-I * k * z));
  }
  if (z > length()) {
    const double k = wavenumber(n_right, omega);
    const double dz = z - length();
    return I * k * (right_fwd * std::exp(I * k * dz) - right_bwd * std::exp(-I * k * dz));
  }
  const auto& s = segments[segment_index(z)];
  const double k = wavenumber(s.n, omega);
  const double dz = z - s.z_start;
  return I * k * (s.fwd * std::exp(I * k * dz) - s.bwd * std::exp(-I * k * dz));
}

namespace {

// Unit incidence from the left, integrated from the right edge where only
// the transmitted wave exists. This direction follows the growing solution
// inside a stopband and stays well conditioned.
PiecewiseField field_in_from_left(const LayerStack& stack, double omega) {
  PiecewiseField f;
  f.omega = omega;
  f.n_left = stack.n_left;
  f.n_right = stack.n_right;
  const std::size_t S = stack.layers.size();
  f.segments.resize(S);
  double z = 0.0;
  for (std::size_t j = 0; j < S; ++j) {
    f.segments[j].z_start = z;
    z += stack.layers[j].length;
    f.segments[j].z_end = z;
    f.segments[j].n = stack.layers[j].n;
  }
  cdouble a{1.0, 0.0}, b{0.0, 0.0};
  double n_next = stack.n_right;
  for (std::size_t j = S; j-- > 0;) {
    const auto& layer = stack.layers[j];
    if (layer.n != n_next) {
      const auto d = interface_matrix(layer.n, n_next);
      const cdouble na = d.m11 * a + d.m12 * b;
      const cdouble nb = d.m21 * a + d.m22 * b;
      a = na;
      b = nb;
    }
    const double phase = wavenumber(layer.n, omega) * layer.length;
    a *= std::polar(1.0, -phase);
    b *= std::polar(1.0, phase);
    f.segments[j].fwd = a;
    f.segments[j].bwd = b;
    n_next = layer.n;
  }
  if (stack.n_left != n_next) {
    const auto d = interface_matrix(stack.n_left, n_next);
    const cdouble na = d.m11 * a + d.m12 * b;
    const cdouble nb = d.m21 * a + d.m22 * b;
    a = na;
    b = nb;
  }
  const cdouble scale = 1.0 / a;
  for (auto& s : f.segments) {
    s.fwd *= scale;
    s.bwd *= scale;
  }
  f.left_fwd = 1.0;
  f.left_bwd = b * scale;
  f.right_fwd = scale;
  f.right_bwd = 0.0;
  return f;
}

PiecewiseField field_in_from_right(const LayerStack& stack, double omega) {
  const PiecewiseField mirrored = field_in_from_left(stack.reversed(), omega);
  PiecewiseField f;
  f.omega = omega;
  f.n_left = stack.n_left;
  f.n_right = stack.n_right;
  const std::size_t S = stack.layers.size();
  f.segments.resize(S);
  double z = 0.0;
  for (std::size_t j = 0; j < S; ++j) {
    const auto& m = mirrored.segments[S - 1 - j];
    const double phase = wavenumber(stack.layers[j].n, omega) * stack.layers[j].length;
    auto& s = f.segments[j];
    s.z_start = z;
    z += stack.layers[j].length;
    s.z_end = z;
    s.n = stack.layers[j].n;
    s.fwd = m.bwd * std::polar(1.0, -phase);
    s.bwd = m.fwd * std::polar(1.0, phase);
  }
  f.right_bwd = 1.0;
  f.right_fwd = mirrored.left_bwd;
  f.left_bwd = mirrored.right_fwd;
  f.left_fwd = 0.0;
  return f;
}

PiecewiseField conjugate(PiecewiseField f) {
  for (auto& s : f.segments) {
    const cdouble a = s.fwd;
    s.fwd = std::conj(s.bwd);
    s.bwd = std::conj(a);
  }
  const cdouble lf = f.left_fwd, rf = f.right_fwd;
  f.left_fwd = std::conj(f.left_bwd);
  f.left_bwd = std::conj(lf);
  f.right_fwd = std::conj(f.right_bwd);
  f.right_bwd = std::conj(rf);
  return f;
}

} // namespace

PiecewiseField internal_fields(const LayerStack& stack, double omega, FieldDirection direction) {
  switch (direction) {
  case FieldDirection::AsymptoticInFromLeft: return field_in_from_left(stack, omega);
  case FieldDirection::AsymptoticInFromRight: return field_in_from_right(stack, omega);
  case FieldDirection::AsymptoticOutToRight: return conjugate(field_in_from_right(stack, omega));
  }
  return field_in_from_left(stack, omega);
}

PiecewiseField internal_fields(const GratingSpec& spec, double omega, FieldDirection direction) {
  return internal_fields(build_layer_stack(spec), omega, direction);
}

} // namespace braggsim
