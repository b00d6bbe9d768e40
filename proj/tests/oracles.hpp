#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library code they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>

namespace oracles {

using cplx = std::complex<double>;

// Trapezoidal rule for int b*(p) b(p - shift) dp with
// b(p) = (2 pi s^2)^(-1/4) exp(-(p - p0)^2 / 4 s^2) exp(-i (p - p0) x0),
// over p0 +- half_width * s (the shifted copy is covered by widening the
// window by |shift|).
inline cplx gaussian_overlap_quadrature(double s, double x0, double shift, std::size_t points,
                                        double half_width = 10.0) {
  const double norm = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi * s * s));
  const auto amp = [&](double p) {
    return norm * std::exp(-p * p / (4.0 * s * s)) * std::polar(1.0, -p * x0);
  };
  const double lo = std::min(0.0, shift) - half_width * s;
  const double hi = std::max(0.0, shift) + half_width * s;
  const double h = (hi - lo) / static_cast<double>(points - 1);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < points; ++i) {
    const double p = lo + static_cast<double>(i) * h;
    const cplx term = std::conj(amp(p)) * amp(p - shift);
    acc += (i == 0 || i + 1 == points) ? 0.5 * term : term;
  }
  return acc * h;
}

// Bisection for the reflected photon magnitude q = |k'| on
//   |k| - |k'| = (|k| - k') ((|k| - k') + 2p) / 2M,   k' = -q.
inline double recoil_bisection(double k, double p, double M) {
  const auto f = [&](double q) { return (k - q) - (k + q) * ((k + q) + 2.0 * p) / (2.0 * M); };
  double lo = 0.0;                            // f(0) > 0 on the reflected branch
  double hi = k + std::abs(p) * 2.0 + k;      // f(hi) < 0 for nonrelativistic inputs
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Reduced mirror operator by explicit Gram-Schmidt on the mirror states,
// represented by their coordinates in an abstract orthonormal pair.
struct Matrix2 {
  std::array<std::array<cplx, 2>, 2> a{};
};

inline Matrix2 reduced_mirror_gram_schmidt(double w1, double w2, cplx overlap) {
  // phi1 = (1, 0), phi2 = (overlap, sqrt(1 - |overlap|^2)) in the basis
  // obtained by orthonormalising (phi1, phi2).
  const std::array<cplx, 2> phi1{1.0, 0.0};
  const std::array<cplx, 2> phi2{overlap, std::sqrt(1.0 - std::norm(overlap))};
  Matrix2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m.a[i][j] = w1 * phi1[i] * std::conj(phi1[j]) + w2 * phi2[i] * std::conj(phi2[j]);
  return m;
}

// Roots of the characteristic polynomial lambda^2 - tr lambda + det, ascending.
inline std::array<double, 2> eigenvalues_charpoly(const Matrix2& m) {
  const double tr = (m.a[0][0] + m.a[1][1]).real();
  const double det = (m.a[0][0] * m.a[1][1] - m.a[0][1] * m.a[1][0]).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

// Fringe contrast from a scan of I(theta) = w1 + w2 + 2 Re[c1 c2* (phi2, phi1) e^{i theta}]
// over `points` phases, with golden-section refinement around the best
// samples.
inline double fringe_scan_visibility(cplx c1, cplx c2, cplx overlap12, std::size_t points = 1000) {
  const cplx cross = c1 * std::conj(c2) * std::conj(overlap12);
  const double base = std::norm(c1) + std::norm(c2);
  const auto intensity = [&](double theta) { return base + 2.0 * (cross * std::polar(1.0, theta)).real(); };
  const double step = 2.0 * std::numbers::pi / static_cast<double>(points);
  std::size_t i_max = 0, i_min = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double v = intensity(static_cast<double>(i) * step);
    if (v > intensity(static_cast<double>(i_max) * step)) i_max = i;
    if (v < intensity(static_cast<double>(i_min) * step)) i_min = i;
  }
  const auto refine = [&](std::size_t i, double sign) {
    double a = (static_cast<double>(i) - 1.0) * step;
    double b = (static_cast<double>(i) + 1.0) * step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = sign * intensity(x1), f2 = sign * intensity(x2);
    for (int it = 0; it < 200; ++it) {
      if (f1 > f2) {
        b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = sign * intensity(x1);
      } else {
        a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = sign * intensity(x2);
      }
    }
    return std::max({sign * intensity(static_cast<double>(i) * step), f1, f2}) * sign;
  };
  const double i_hi = refine(i_max, 1.0);
  const double i_lo = refine(i_min, -1.0);
  return (i_hi - i_lo) / (i_hi + i_lo);
}

// 1/2 sum |eigenvalues| of a Hermitian 2x2 matrix via its characteristic polynomial.
inline double trace_norm_half(const Matrix2& m) {
  const auto ev = eigenvalues_charpoly(m);
  return 0.5 * (std::abs(ev[0]) + std::abs(ev[1]));
}

}  // namespace oracles
