#pragma once

// Mirror centre-of-mass wavepackets in momentum space.
//
// A GaussianPacket has amplitude
//
//   b(p) = (2 pi dp^2)^(-1/4) exp(-(p - p0)^2 / (4 dp^2)) exp(-i (p - p0) x0),
//
// so |b|^2 has mean p0 and standard deviation dp, and x0 is the mean
// position. The envelope phase is referenced to p0, which makes a momentum
// shift (p0 -> p0 + delta) exactly b(p) -> b(p - delta).
//
// Inner products are antilinear in the first argument: (a, b) = int a* b dp.

#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "qmirror/error.hpp"

namespace qmirror::wavepacket {

using cplx = std::complex<double>;

struct GaussianPacket {
  double p0 = 0.0;
  double dp = 1.0;
  double x0 = 0.0;
  double dx0 = 0.5;
  double M = 1.0;

  GaussianPacket() = default;
  GaussianPacket(double p0_, double dp_, double x0_, double dx0_, double M_)
      : p0(p0_), dp(dp_), x0(x0_), dx0(dx0_), M(M_) {
    validate();
  }

  // dx0 = 1 / (2 dp).
  static GaussianPacket minimum_uncertainty(double p0, double dp, double M, double x0 = 0.0) {
    if (!(dp > 0.0)) throw DomainError("momentum spread must be positive");
    return {p0, dp, x0, 0.5 / dp, M};
  }

  void validate() const {
    if (!std::isfinite(p0) || !std::isfinite(x0)) throw DomainError("packet centre must be finite");
    if (!(dp > 0.0) || !std::isfinite(dp)) throw DomainError("momentum spread must be positive");
    if (!(dx0 > 0.0) || !std::isfinite(dx0)) throw DomainError("position spread must be positive");
    if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("mirror mass must be positive");
    // Relative slack for the rounding in 0.5 / dp.
    if (dp * dx0 < 0.5 * (1.0 - 1e-12)) {
      throw DomainError("uncertainty relation dp * dx0 >= 1/2 violated");
    }
  }

  cplx amplitude(double p) const {
    const double norm = std::pow(2.0 * std::numbers::pi * dp * dp, -0.25);
    const double u = p - p0;
    return norm * std::exp(-u * u / (4.0 * dp * dp)) * std::polar(1.0, -u * x0);
  }
};

// Wrap an angle to (-pi, pi].
inline double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

// Overlap in log-polar form, (a, b) = exp(log_r + i beta). Keeping log_r
// avoids underflow when the packets are far apart in momentum.
struct LogOverlap {
  double log_r;
  double beta;

  cplx value() const { return std::polar(std::exp(log_r), beta); }
  double magnitude() const { return std::exp(log_r); }
  // 1 - r^2 without cancellation near r = 1.
  double one_minus_r_squared() const { return -std::expm1(2.0 * log_r); }
};

// Closed-form overlap of two arbitrary Gaussian packets.
inline LogOverlap overlap_log(const GaussianPacket& a, const GaussianPacket& b) {
  const double s1 = a.dp * a.dp;
  const double s2 = b.dp * b.dp;
  const double sum = s1 + s2;
  const double shift = b.p0 - a.p0;
  const double dx = b.x0 - a.x0;
  const double log_prefactor = 0.5 * std::log(2.0 * a.dp * b.dp / sum);
  const double log_r = log_prefactor - (0.25 * shift * shift + dx * dx * s1 * s2) / sum;
  const double beta = wrap_phase(shift * (a.x0 + s2 * dx / sum));
  return {log_r, beta};
}

// (phi, phi shifted by delta_p) = exp(-delta_p^2 / (8 dp^2)) exp(i delta_p x0).
inline cplx overlap_gaussian(const GaussianPacket& packet, double delta_p) {
  packet.validate();
  const double magnitude = std::exp(-delta_p * delta_p / (8.0 * packet.dp * packet.dp));
  return std::polar(magnitude, wrap_phase(delta_p * packet.x0));
}

inline GaussianPacket momentum_shift(const GaussianPacket& packet, double delta_p) {
  GaussianPacket shifted = packet;
  shifted.p0 += delta_p;
  shifted.validate();
  return shifted;
}

// Position spread under the linear law dx(t) = dx(0) + (dp / M) t. This is
// an upper bound on the exact free-Gaussian sqrt(dx0^2 + (dp t / M)^2),
// larger by at most a factor sqrt(2).
inline double spread_at_time(const GaussianPacket& packet, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  return packet.dx0 + packet.dp / packet.M * t;
}

inline double displacement(double delta_p, double M, double t) {
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  if (!(M > 0.0)) throw DomainError("mirror mass must be positive");
  return delta_p * t / M;
}

// --- grid representation -------------------------------------------------

inline constexpr std::size_t kDefaultGridPoints = 4097;
inline constexpr double kDefaultGridHalfWidth = 10.0;  // in units of dp
inline constexpr std::size_t kMinGridPoints = 257;

// Samples of b(p) on p_min + i * p_step.
struct GridPacket {
  double p_min = 0.0;
  double p_step = 1.0;
  std::vector<cplx> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  double p_at(std::size_t i) const { return p_min + static_cast<double>(i) * p_step; }
  double p_max() const { return p_at(size() - 1); }

  // Riemann sum of |b|^2; identical to the trapezoidal rule when the tails vanish.
  double norm() const {
    double acc = 0.0;
    for (const cplx& a : amplitudes) acc += std::norm(a);
    return acc * p_step;
  }

  bool same_grid(const GridPacket& other) const {
    return size() == other.size() && p_min == other.p_min && p_step == other.p_step;
  }
};

inline GridPacket sample(const GaussianPacket& packet, double p_min, double p_step, std::size_t n) {
  if (!(p_step > 0.0)) throw DomainError("grid step must be positive");
  if (n < kMinGridPoints) throw DomainError("grid needs at least 257 points");
  GridPacket grid{p_min, p_step, std::vector<cplx>(n)};
  for (std::size_t i = 0; i < n; ++i) grid.amplitudes[i] = packet.amplitude(grid.p_at(i));
  return grid;
}

// Default discretisation: n points over p0 +- half_width * dp.
inline GridPacket discretize(const GaussianPacket& packet, std::size_t n = kDefaultGridPoints,
                             double half_width = kDefaultGridHalfWidth) {
  if (half_width < kDefaultGridHalfWidth) {
    throw DomainError("grid must span at least p0 +- 10 dp");
  }
  const double p_min = packet.p0 - half_width * packet.dp;
  const double p_step = 2.0 * half_width * packet.dp / static_cast<double>(n - 1);
  return sample(packet, p_min, p_step, n);
}

// Trapezoidal approximation of (a, b).
inline cplx overlap_grid(const GridPacket& a, const GridPacket& b) {
  if (!a.same_grid(b)) throw DomainError("overlap_grid requires identical grids");
  if (a.size() < 2) throw DomainError("grid too small");
  cplx acc{0.0, 0.0};
  const std::size_t last = a.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const cplx term = std::conj(a.amplitudes[i]) * b.amplitudes[i];
    acc += (i == 0 || i == last) ? 0.5 * term : term;
  }
  return acc * a.p_step;
}

// b(p) -> b(p - delta_p) on the same grid. The whole-step part is a
// reindexing; the remaining fraction of a step is applied as a phase ramp
// in the conjugate (position) domain, which is a unitary band-limited shift.
inline GridPacket momentum_shift(const GridPacket& packet, double delta_p) {
  const std::size_t n = packet.size();
  if (n == 0) throw DomainError("empty grid");
  const double steps = delta_p / packet.p_step;
  if (!(std::abs(steps) < static_cast<double>(n - 1))) {
    throw DomainError("momentum shift exceeds grid span");
  }
  const double whole = std::trunc(steps);
  const double fraction = steps - whole;
  const auto offset = static_cast<long long>(whole);

  std::vector<cplx> moved(n, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    const long long src = static_cast<long long>(i) - offset;
    if (src >= 0 && src < static_cast<long long>(n)) moved[i] = packet.amplitudes[static_cast<std::size_t>(src)];
  }

  if (fraction != 0.0) {
    Eigen::FFT<double> fft;
    std::vector<cplx> spectrum;
    fft.fwd(spectrum, moved);
    for (std::size_t m = 0; m < n; ++m) {
      // Signed frequency index, symmetric about zero.
      const double freq = (m <= n / 2) ? static_cast<double>(m)
                                       : static_cast<double>(m) - static_cast<double>(n);
      spectrum[m] *= std::polar(1.0, -2.0 * std::numbers::pi * freq * fraction / static_cast<double>(n));
    }
    fft.inv(moved, spectrum);
  }
  return {packet.p_min, packet.p_step, std::move(moved)};
}

// CSV with header "p,re,im" and one row per grid point.
inline void write_csv(std::ostream& out, const GridPacket& packet) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "p,re,im\n";
  for (std::size_t i = 0; i < packet.size(); ++i) {
    buf << packet.p_at(i) << ',' << packet.amplitudes[i].real() << ',' << packet.amplitudes[i].imag()
        << '\n';
  }
  out << buf.str();
}

inline GridPacket read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("p,re,im", 0) != 0) {
    throw ConfigError("grid CSV must start with header p,re,im");
  }
  std::vector<double> ps;
  GridPacket packet;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    double p = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> p >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw ConfigError("malformed grid CSV row at line " + std::to_string(line_no));
    }
    ps.push_back(p);
    packet.amplitudes.emplace_back(re, im);
  }
  if (ps.size() < 2) throw ConfigError("grid CSV needs at least two rows");
  packet.p_min = ps.front();
  packet.p_step = (ps.back() - ps.front()) / static_cast<double>(ps.size() - 1);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (std::abs(ps[i] - packet.p_at(i)) > 1e-9 * packet.p_step) {
      throw ConfigError("grid CSV is not uniformly spaced (line " + std::to_string(i + 2) + ")");
    }
  }
  return packet;
}

}  // namespace qmirror::wavepacket
