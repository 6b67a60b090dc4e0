#pragma once

#include "podvs/core.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace podvs {

inline constexpr int kOrientations = 4;

/// Edge orientation in radians for index 0..3 (0, pi/4, pi/2, 3pi/4). Angles are
/// measured counter-clockwise with y pointing up; orientation pi/2 is a vertical edge.
double orientation_angle(int index);

/// Quadrature pairs of oriented band-pass kernels, one per orientation.
/// Even kernels are point-symmetric with zero DC; odd kernels are antisymmetric.
struct EdgeBank {
  std::array<Grid<double>, kOrientations> even;
  std::array<Grid<double>, kOrientations> odd;
};

/// Zero-DC difference of Gaussians. OFF responses are the negated ON response.
struct CenterSurroundBank {
  Grid<double> on;
};

/// Annular association fields. `left[i]` looks at the figure side to the left of
/// an edge with orientation i (90 degrees counter-clockwise from the edge
/// direction); `right[i]` is `left[i]` rotated by 180 degrees. Entries are
/// non-negative with unit sum.
struct VonMisesBank {
  std::array<Grid<double>, kOrientations> left;
  std::array<Grid<double>, kOrientations> right;
};

/// All grouping kernels for one kernel size. Every coefficient is an exact
/// multiple of 2^-coef_fraction_bits, so the fixed-point model and the
/// reference use bit-identical weights.
struct KernelBanks {
  int size = 0;
  int coef_fraction_bits = 16;
  EdgeBank edge;
  CenterSurroundBank cs;
  VonMisesBank vm;
};

struct KernelShape {
  double wavelength;     // of the edge carrier
  double edge_sigma;     // Gaussian envelope of the edge kernels
  double center_sigma;   // DoG centre; the surround is twice as wide
  double ring_radius;    // von Mises annulus radius
  double ring_sigma;     // radial width of the annulus
  double concentration;  // von Mises kappa
};

KernelShape default_shape(int size);

KernelBanks make_kernel_banks(int size, int coef_fraction_bits = 16);
KernelBanks make_kernel_banks(int size, int coef_fraction_bits, const KernelShape& shape);

/// Integer coefficients (value * 2^coef_fraction_bits).
Grid<std::int64_t> raw_coefficients(const Grid<double>& k, int coef_fraction_bits);

/// Plain-text grid dump of the integer coefficients.
std::string export_banks(const KernelBanks& banks);
KernelBanks import_banks(std::string_view text);

}  // namespace podvs
