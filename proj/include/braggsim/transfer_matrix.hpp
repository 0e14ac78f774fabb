#pragma once

#include "braggsim/core_model.hpp"
#include "braggsim/sweep_result.hpp"

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace braggsim {

// Maps forward/backward amplitudes on the right of an element to those on
// its left: (a+_L, a-_L) = M (a+_R, a-_R). Cascading elements left to right
// is therefore the ordinary product M_1 M_2 ... M_n.
struct TransferMatrix {
  cdouble m11{1.0, 0.0};
  cdouble m12{0.0, 0.0};
  cdouble m21{0.0, 0.0};
  cdouble m22{1.0, 0.0};

  static TransferMatrix identity() { return {}; }

  cdouble det() const { return m11 * m22 - m12 * m21; }
  // Power transmission / reflection for unit incidence from the left, equal
  // exterior media.
  double transmission() const { return 1.0 / std::norm(m11); }
  double reflection() const { return std::norm(m21 / m11); }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
};

// Step between homogeneous media, n_left on the left. Field A and dA/dz
// are continuous across it.
TransferMatrix interface_matrix(double n_left, double n_right);
TransferMatrix propagation_matrix(double n, double length, double omega);

// One period: narrow segment then wide segment, referenced to the wide
// guide on both sides. det = 1.
TransferMatrix unit_cell_matrix(const GratingSpec& spec, double omega);

// Product in propagation order. Throws InvalidArgument on an empty list.
TransferMatrix cascade(std::span<const TransferMatrix> cells);

// M^n by binary exponentiation.
TransferMatrix cascade_power(const TransferMatrix& m, long n);

enum class CascadeMethod { BinaryPower, Naive };

// Lead-in, n_periods cells, lead-out.
TransferMatrix structure_matrix(const GratingSpec& spec, double omega,
                                CascadeMethod method = CascadeMethod::BinaryPower);

// Homogeneous layers between two semi-infinite exterior media.
struct Layer {
  double n = 1.0;
  double length = 0.0;
};

struct LayerStack {
  std::vector<Layer> layers;
  double n_left = 1.0;
  double n_right = 1.0;

  double length() const;
  LayerStack reversed() const;
};

// Explicit layer list of the structure. Layers longer than
// `max_piece_length` are split into equal pieces (identity interfaces).
LayerStack build_layer_stack(const GratingSpec& spec,
                             double max_piece_length = std::numeric_limits<double>::infinity());

TransferMatrix stack_matrix(const LayerStack& stack, double omega);

// Columns wavelength_nm, transmission, transmission_db, ordered by
// increasing wavelength.
SweepResult transmission_spectrum(const GratingSpec& spec, const FrequencyGrid& grid);

struct StopbandReport {
  double center_wavelength = 0.0;
  double rejection_db_at_center = 0.0;
  double bandwidth_at_10db = 0.0;
};

// nullopt when the spectrum has no dip below -3 dB. The -10 dB band is the
// contiguous region around the minimum, edges linearly interpolated.
std::optional<StopbandReport> stopband_report(const SweepResult& spectrum);

// Wavelength of minimum transmission, located to ~1e-15 m around the Bragg
// wavelength 2 * period * (duty-weighted mean index).
double stopband_center(const GratingSpec& spec);

// Rejection 10 log10(1/T) of the idealized stack: T = 4 (1 + dn/n)^(-2N).
double rejection_db_for_periods(long n_periods, double n_lo, double delta_n);

// Real-valued N solving the rejection relation for a target rejection.
double design_periods_exact(double rejection_db, double n_lo, double delta_n);

// Smallest integer N reaching `rejection_db`. Throws DomainError when
// rejection_db <= 10 log10(4) (no positive solution) and InvalidArgument
// when delta_n <= 0.
long design_periods(double rejection_db, double n_lo, double delta_n);

// Local field A(z) = fwd exp(i k (z - z_start)) + bwd exp(-i k (z - z_start)),
// k = n omega / c.
struct FieldSegment {
  double z_start = 0.0;
  double z_end = 0.0;
  double n = 1.0;
  cdouble fwd{};
  cdouble bwd{};
};

enum class FieldDirection {
  AsymptoticInFromLeft,  // unit wave incident from the left, none from the right
  AsymptoticInFromRight, // unit wave incident from the right
  AsymptoticOutToRight,  // time reverse of AsymptoticInFromRight
};

struct PiecewiseField {
  double omega = 0.0;
  std::vector<FieldSegment> segments;
  // Exterior amplitudes: left (forward, backward) at z = 0 and right
  // (forward, backward) at z = L.
  cdouble left_fwd{}, left_bwd{}, right_fwd{}, right_bwd{};
  double n_left = 1.0;
  double n_right = 1.0;

  double length() const { return segments.empty() ? 0.0 : segments.back().z_end; }
  std::size_t segment_index(double z) const;
  cdouble value(double z) const;
  cdouble derivative(double z) const;
};

PiecewiseField internal_fields(const LayerStack& stack, double omega, FieldDirection direction);
PiecewiseField internal_fields(const GratingSpec& spec, double omega, FieldDirection direction);

} // namespace braggsim
