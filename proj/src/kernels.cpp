#include "podvs/kernels.hpp"

#include "podvs/filter.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace podvs {

double orientation_angle(int index) { return index * std::numbers::pi / 4.0; }

KernelShape default_shape(int size) {
  const double wavelength = size - 1.0;
  return {
      .wavelength = wavelength,
      .edge_sigma = 0.4 * wavelength,
      .center_sigma = 0.15 * size,
      .ring_radius = size / 2.0,
      .ring_sigma = size / 4.0,
      .concentration = 4.0,
  };
}

namespace {

using Kernel = Grid<double>;

// Offsets of tap (i, j) from the kernel centre, y pointing up.
struct Offset {
  double dx, dy;
};

Offset offset(int i, int j, int size) {
  const int r = size / 2;
  return {static_cast<double>(j - r), static_cast<double>(r - i)};
}

Kernel tabulate(int size, auto&& fn) {
  Kernel k(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) k(i, j) = fn(offset(i, j, size));
  return k;
}

// Rounds every tap to the coefficient grid. Rounding half-to-even is odd-symmetric,
// so antisymmetric kernels stay antisymmetric.
Kernel snap(const Kernel& k, int frac) {
  const double scale = std::ldexp(1.0, frac);
  return (k * scale).unaryExpr([](double v) { return std::nearbyint(v); }) / scale;
}

// Moves any residual DC onto the centre tap, which is its own 180-degree partner.
Kernel zero_dc(Kernel k) {
  const int c = static_cast<int>(k.rows()) / 2;
  k(c, c) -= k.sum();
  return k;
}

}  // namespace

KernelBanks make_kernel_banks(int size, int coef_fraction_bits) {
  return make_kernel_banks(size, coef_fraction_bits, default_shape(size));
}

KernelBanks make_kernel_banks(int size, int coef_fraction_bits, const KernelShape& shape) {
  if (size < 3 || size % 2 == 0) throw Error("kernel size must be odd and >= 3");
  KernelBanks b;
  b.size = size;
  b.coef_fraction_bits = coef_fraction_bits;

  const double two_pi = 2.0 * std::numbers::pi;
  for (int o = 0; o < kOrientations; ++o) {
    const double theta = orientation_angle(o);
    // Projection onto the edge normal (the direction pi/2 counter-clockwise from the edge).
    auto across = [theta](Offset p) { return -p.dx * std::sin(theta) + p.dy * std::cos(theta); };
    auto envelope = [&](Offset p) {
      return std::exp(-(p.dx * p.dx + p.dy * p.dy) / (2.0 * shape.edge_sigma * shape.edge_sigma));
    };

    Kernel even = tabulate(size, [&](Offset p) { return envelope(p) * std::cos(two_pi * across(p) / shape.wavelength); });
    even -= even.mean();
    even /= even.abs().sum();
    Kernel odd = tabulate(size, [&](Offset p) { return envelope(p) * std::sin(two_pi * across(p) / shape.wavelength); });
    odd /= odd.abs().sum();

    b.edge.even[o] = zero_dc(snap(even, coef_fraction_bits));
    b.edge.odd[o] = zero_dc(snap(odd, coef_fraction_bits));

    // Association field looking at the left side of the edge.
    const double side = theta + std::numbers::pi / 2.0;
    Kernel vm = tabulate(size, [&](Offset p) {
      const double rho = std::hypot(p.dx, p.dy);
      if (rho == 0.0) return 0.0;
      const double phi = std::atan2(p.dy, p.dx);
      const double radial = (rho - shape.ring_radius) / shape.ring_sigma;
      return std::exp(shape.concentration * std::cos(phi - side)) * std::exp(-0.5 * radial * radial);
    });
    vm /= vm.sum();
    vm = snap(vm, coef_fraction_bits);
    // Restore exact unit mass on the largest tap.
    Eigen::Index mi, mj;
    vm.maxCoeff(&mi, &mj);
    vm(mi, mj) += 1.0 - vm.sum();
    b.vm.left[o] = vm;
    b.vm.right[o] = rotate180(vm);
  }

  const double sc = shape.center_sigma;
  const double ss = 2.0 * shape.center_sigma;
  Kernel center = tabulate(size, [&](Offset p) { return std::exp(-(p.dx * p.dx + p.dy * p.dy) / (2.0 * sc * sc)); });
  Kernel surround = tabulate(size, [&](Offset p) { return std::exp(-(p.dx * p.dx + p.dy * p.dy) / (2.0 * ss * ss)); });
  Kernel dog = center / center.sum() - surround / surround.sum();
  dog /= dog.max(0.0).sum();
  b.cs.on = zero_dc(snap(dog, coef_fraction_bits));

  return b;
}

Grid<std::int64_t> raw_coefficients(const Grid<double>& k, int coef_fraction_bits) {
  const double scale = std::ldexp(1.0, coef_fraction_bits);
  return (k * scale).unaryExpr([](double v) { return static_cast<std::int64_t>(std::llround(v)); });
}

namespace {

void write_grid(std::ostream& os, const char* name, int index, const Grid<double>& k, int frac) {
  os << "kernel " << name << ' ' << index << '\n';
  const auto raw = raw_coefficients(k, frac);
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    for (Eigen::Index j = 0; j < raw.cols(); ++j) os << (j ? " " : "") << raw(i, j);
    os << '\n';
  }
}

}  // namespace

std::string export_banks(const KernelBanks& b) {
  std::ostringstream os;
  os << "# podvs kernel bank: integer coefficients, value = raw * 2^-fraction_bits\n";
  os << "size " << b.size << '\n' << "fraction_bits " << b.coef_fraction_bits << '\n';
  for (int o = 0; o < kOrientations; ++o) write_grid(os, "even", o, b.edge.even[o], b.coef_fraction_bits);
  for (int o = 0; o < kOrientations; ++o) write_grid(os, "odd", o, b.edge.odd[o], b.coef_fraction_bits);
  write_grid(os, "center_surround", 0, b.cs.on, b.coef_fraction_bits);
  for (int o = 0; o < kOrientations; ++o) write_grid(os, "vonmises_left", o, b.vm.left[o], b.coef_fraction_bits);
  for (int o = 0; o < kOrientations; ++o) write_grid(os, "vonmises_right", o, b.vm.right[o], b.coef_fraction_bits);
  return os.str();
}

KernelBanks import_banks(std::string_view text) {
  std::istringstream is{std::string(text)};
  KernelBanks b;
  b.size = 0;
  std::string word;
  int filled = 0;

  auto read_grid = [&](Grid<double>& out) {
    if (b.size <= 0) throw FormatError("kernel bank: 'size' must precede kernels");
    const double scale = std::ldexp(1.0, -b.coef_fraction_bits);
    out.resize(b.size, b.size);
    for (int i = 0; i < b.size; ++i)
      for (int j = 0; j < b.size; ++j) {
        long long v;
        if (!(is >> v)) throw FormatError("kernel bank: truncated kernel grid");
        out(i, j) = static_cast<double>(v) * scale;
      }
    ++filled;
  };

  while (is >> word) {
    if (word.starts_with("#")) {
      std::getline(is, word);
    } else if (word == "size") {
      is >> b.size;
    } else if (word == "fraction_bits") {
      is >> b.coef_fraction_bits;
    } else if (word == "kernel") {
      std::string name;
      int idx = -1;
      is >> name >> idx;
      if (idx < 0 || idx >= kOrientations) throw FormatError("kernel bank: bad kernel index");
      if (name == "even") read_grid(b.edge.even[idx]);
      else if (name == "odd") read_grid(b.edge.odd[idx]);
      else if (name == "center_surround") read_grid(b.cs.on);
      else if (name == "vonmises_left") read_grid(b.vm.left[idx]);
      else if (name == "vonmises_right") read_grid(b.vm.right[idx]);
      else throw FormatError("kernel bank: unknown kernel '" + name + "'");
    } else {
      throw FormatError("kernel bank: unexpected token '" + word + "'");
    }
  }
  if (filled != 4 * kOrientations + 1) throw FormatError("kernel bank: expected 17 kernels, got " + std::to_string(filled));
  return b;
}

}  // namespace podvs
