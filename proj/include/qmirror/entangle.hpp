#pragma once

// Two-term photon (x) mirror compound modes
//
//   chi = c1 f1 (x) phi1 + c2 f2 (x) phi2,
//
// their reduced mode state operators, the ideal-mirror reference, and the
// normal (Schmidt) form
//
//   chi = alpha1 fbar1 (x) phibar1 + alpha2 fbar2 (x) phibar2,
//
// computed two ways: schmidt_closed from the closed-form eigenvalues and
// coefficient ratios, schmidt_numeric by diagonalising the reduced mirror
// operator directly. The photon modes f1, f2 are orthonormal; the mirror
// states have overlap (phi1, phi2) = r exp(i beta).

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "qmirror/error.hpp"
#include "qmirror/wavepacket.hpp"

namespace qmirror::entangle {

using cplx = std::complex<double>;
using wavepacket::GaussianPacket;

enum class ModeTag { Transmitted, Reflected, Arm1, Arm2 };

inline const char* to_string(ModeTag tag) {
  switch (tag) {
    case ModeTag::Transmitted: return "transmitted";
    case ModeTag::Reflected: return "reflected";
    case ModeTag::Arm1: return "arm1";
    case ModeTag::Arm2: return "arm2";
  }
  return "unknown";
}

// Photon mode. Distinct tags are orthonormal; the wavevector is informational.
struct PhotonModeLabel {
  ModeTag id;
  double k = 0.0;

  friend bool operator==(const PhotonModeLabel& a, const PhotonModeLabel& b) { return a.id == b.id; }
};

// (phi1, phi2) = r exp(i beta). r_tilde_sq = 1 - r^2 is kept separately so
// it stays accurate when r is close to 1.
struct MirrorOverlap {
  double r = 1.0;
  double beta = 0.0;
  double r_tilde_sq = 0.0;

  cplx value() const { return std::polar(r, beta); }
  double r_tilde() const { return std::sqrt(r_tilde_sq); }

  static MirrorOverlap from_log(const wavepacket::LogOverlap& log_overlap) {
    return {log_overlap.magnitude(), log_overlap.beta, log_overlap.one_minus_r_squared()};
  }
};

inline constexpr double kNormTolerance = 1e-12;

class CompoundMode {
 public:
  CompoundMode(cplx c1, cplx c2, PhotonModeLabel label1, PhotonModeLabel label2, GaussianPacket phi1,
               GaussianPacket phi2)
      : c1_(c1), c2_(c2), label1_(label1), label2_(label2), phi1_(phi1), phi2_(phi2) {
    if (std::abs(std::norm(c1_) + std::norm(c2_) - 1.0) > kNormTolerance) {
      throw DomainError("compound mode requires |c1|^2 + |c2|^2 = 1");
    }
    if (label1_ == label2_) throw DomainError("compound mode needs two distinct photon modes");
    phi1_.validate();
    phi2_.validate();
    overlap_ = MirrorOverlap::from_log(wavepacket::overlap_log(phi1_, phi2_));
  }

  cplx c1() const { return c1_; }
  cplx c2() const { return c2_; }
  double w1() const { return std::norm(c1_); }
  double w2() const { return std::norm(c2_); }
  const PhotonModeLabel& label1() const { return label1_; }
  const PhotonModeLabel& label2() const { return label2_; }
  const GaussianPacket& phi1() const { return phi1_; }
  const GaussianPacket& phi2() const { return phi2_; }
  const MirrorOverlap& overlap() const { return overlap_; }

 private:
  cplx c1_;
  cplx c2_;
  PhotonModeLabel label1_;
  PhotonModeLabel label2_;
  GaussianPacket phi1_;
  GaussianPacket phi2_;
  MirrorOverlap overlap_;
};

namespace detail {

inline void require_unit_weights(cplx a, cplx b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTolerance) {
    throw DomainError("beam-splitting amplitudes must satisfy |c|^2 + |c'|^2 = 1");
  }
}

inline void require_geometry(double k, double geometry) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("photon momentum k must be positive");
  if (!(geometry >= 1.0 && geometry <= 2.0)) throw DomainError("geometry factor must lie in [1, 2]");
}

}  // namespace detail

// Semitransparent mirror: the transmitted component leaves the mirror state
// unchanged, the reflected one kicks it by geometry * k.
inline CompoundMode build_semitransparent(cplx c, cplx c_prime, const GaussianPacket& phi_in, double k,
                                          double geometry = 2.0) {
  detail::require_unit_weights(c, c_prime);
  detail::require_geometry(k, geometry);
  return {c,
          c_prime,
          {ModeTag::Transmitted, k},
          {ModeTag::Reflected, -k},
          phi_in,
          wavepacket::momentum_shift(phi_in, geometry * k)};
}

// Fully reflecting mirror in one interferometer arm: arm 1 bypasses it,
// arm 2 is reflected.
inline CompoundMode build_fully_reflecting(cplx c1, cplx c2, const GaussianPacket& phi_in, double k,
                                           double geometry = 2.0) {
  detail::require_unit_weights(c1, c2);
  detail::require_geometry(k, geometry);
  return {c1,
          c2,
          {ModeTag::Arm1, k},
          {ModeTag::Arm2, -k},
          phi_in,
          wavepacket::momentum_shift(phi_in, geometry * k)};
}

// Mode with a prescribed mirror overlap r exp(i beta), realised with unit
// width Gaussians: the momentum offset sets r, the common mean position sets
// beta. r = 0 is approximated by an offset of 80 dp (r underflows to 0).
inline CompoundMode mode_with_overlap(cplx c1, cplx c2, double r, double beta) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("overlap magnitude must lie in [0, 1]");
  const double shift = r > 0.0 ? std::sqrt(-8.0 * std::log(r)) : 80.0;
  const double x0 = shift > 0.0 ? beta / shift : 0.0;
  const GaussianPacket phi1{0.0, 1.0, x0, 0.5, 1.0};
  return {c1, c2, {ModeTag::Arm1, 1.0}, {ModeTag::Arm2, -1.0}, phi1, wavepacket::momentum_shift(phi1, shift)};
}

// --- mode state operators --------------------------------------------------

enum class BasisKind {
  PhotonModes,        // {f1, f2}
  MirrorGramSchmidt,  // {phi1, (phi2 - (phi1, phi2) phi1) / sqrt(1 - r^2)}
  MirrorDegenerate,   // {phi1, unused}: phi2 is parallel to phi1
};

inline std::array<std::string, 2> basis_names(BasisKind kind) {
  switch (kind) {
    case BasisKind::PhotonModes: return {"f1", "f2"};
    case BasisKind::MirrorGramSchmidt: return {"phi1", "(phi2 - (phi1,phi2) phi1) / sqrt(1 - r^2)"};
    case BasisKind::MirrorDegenerate: return {"phi1", "unused"};
  }
  return {"", ""};
}

inline const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::PhotonModes: return "photon_modes";
    case BasisKind::MirrorGramSchmidt: return "mirror_gram_schmidt";
    case BasisKind::MirrorDegenerate: return "mirror_degenerate";
  }
  return "unknown";
}

// 2x2 Hermitian, unit-trace, positive semidefinite operator.
struct ModeStateOperator {
  BasisKind basis;
  Eigen::Matrix2cd m;

  cplx trace() const { return m.trace(); }

  double hermiticity_defect() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

  // Ascending eigenvalues from the 2x2 closed form.
  std::array<double, 2> eigenvalues() const {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return {mean - radius, mean + radius};
  }
};

// Tr_m chi chi^dagger of the ideal mirror: the projector onto
// f_ideal = c1 f1 + c2 f2.
inline ModeStateOperator ideal_reference(const CompoundMode& mode) {
  Eigen::Vector2cd f_ideal(mode.c1(), mode.c2());
  return {BasisKind::PhotonModes, f_ideal * f_ideal.adjoint()};
}

inline ModeStateOperator reduced_photon(const CompoundMode& mode) {
  const cplx c1 = mode.c1();
  const cplx c2 = mode.c2();
  const cplx z = mode.overlap().value();  // (phi1, phi2)
  Eigen::Matrix2cd m;
  m << mode.w1(), c1 * std::conj(c2) * std::conj(z),
       c2 * std::conj(c1) * z, mode.w2();
  return {BasisKind::PhotonModes, m};
}

// rho_m = w1 phi1 phi1^dagger + w2 phi2 phi2^dagger in the Gram-Schmidt basis
// built from (phi1, phi2). When phi2 is parallel to phi1 the second basis
// vector does not exist and the operator is the projector onto phi1.
inline ModeStateOperator reduced_mirror(const CompoundMode& mode) {
  const MirrorOverlap& ov = mode.overlap();
  Eigen::Matrix2cd m;
  if (ov.r_tilde_sq <= 0.0) {
    m << 1.0, 0.0, 0.0, 0.0;
    return {BasisKind::MirrorDegenerate, m};
  }
  const double w1 = mode.w1();
  const double w2 = mode.w2();
  const double rt = ov.r_tilde();
  const cplx off = w2 * rt * ov.value();
  m << w1 + w2 * ov.r * ov.r, off,
       std::conj(off), w2 * ov.r_tilde_sq;
  return {BasisKind::MirrorGramSchmidt, m};
}

// --- normal form -------------------------------------------------------------

// b(i, j): coefficient of phi_j in phibar_i. fbar(i, j): coefficient of f_j
// in fbar_i. Weights are sorted, wbar1 >= wbar2.
struct NormalForm {
  std::array<double, 2> alpha{};
  std::array<double, 2> wbar{};
  Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd fbar = Eigen::Matrix2cd::Zero();
  // wbar1 == wbar2: any orthonormal pair works; the Gram-Schmidt basis is used.
  bool degenerate = false;
  // chi is a product state. phibar2 is then not expressible in (phi1, phi2)
  // and row 1 of b is zero.
  bool rank_one = false;
};

// Mirror Gram matrix G(i, j) = (phi_i, phi_j).
inline Eigen::Matrix2cd mirror_gram(const MirrorOverlap& ov) {
  Eigen::Matrix2cd g;
  g << 1.0, ov.value(), std::conj(ov.value()), 1.0;
  return g;
}

// Coordinates of phibar_i in the Gram-Schmidt basis {e1, e2}:
// e1 = phi1, phi2 = z e1 + r_tilde e2.
inline Eigen::Vector2cd phibar_gram_schmidt(const NormalForm& nf, const MirrorOverlap& ov, int i) {
  const cplx b1 = nf.b(i, 0);
  const cplx b2 = nf.b(i, 1);
  return {b1 + b2 * ov.value(), b2 * ov.r_tilde()};
}

// chi as a 4-vector over f_a (x) e_b, index 2 a + b.
inline Eigen::Vector4cd mode_vector(const CompoundMode& mode) {
  const MirrorOverlap& ov = mode.overlap();
  return {mode.c1(), 0.0, mode.c2() * ov.value(), mode.c2() * ov.r_tilde()};
}

inline Eigen::Vector4cd reconstruct(const NormalForm& nf, const CompoundMode& mode) {
  Eigen::Vector4cd out = Eigen::Vector4cd::Zero();
  for (int i = 0; i < 2; ++i) {
    if (nf.alpha[static_cast<std::size_t>(i)] == 0.0) continue;
    const Eigen::Vector2cd phibar = phibar_gram_schmidt(nf, mode.overlap(), i);
    for (int a = 0; a < 2; ++a) {
      for (int e = 0; e < 2; ++e) {
        out(2 * a + e) += nf.alpha[static_cast<std::size_t>(i)] * nf.fbar(i, a) * phibar(e);
      }
    }
  }
  return out;
}

namespace detail {

inline constexpr double kBoundaryTolerance = 1e-12;

// Make the first non-negligible coefficient real and positive.
inline void fix_phase(Eigen::Matrix2cd& b, int row) {
  const double scale = std::max(std::abs(b(row, 0)), std::abs(b(row, 1)));
  if (scale == 0.0) return;
  const cplx lead = std::abs(b(row, 0)) > 1e-14 * scale ? b(row, 0) : b(row, 1);
  b.row(row) *= std::conj(lead) / std::abs(lead);
}

// Unit vector orthogonal to v in C^2.
inline Eigen::Vector2cd orthogonal_complement(const Eigen::Vector2cd& v) {
  Eigen::Vector2cd w(-std::conj(v(1)), std::conj(v(0)));
  return w / w.norm();
}

inline void order_descending(NormalForm& nf) {
  if (nf.wbar[1] > nf.wbar[0]) {
    std::swap(nf.wbar[0], nf.wbar[1]);
    std::swap(nf.alpha[0], nf.alpha[1]);
    nf.b.row(0).swap(nf.b.row(1));
    nf.fbar.row(0).swap(nf.fbar.row(1));
  }
}

// Product state chi = f (x) phi1 with f = c1 f1 + c2 z f2 (|z| = 1), or a
// single-term mode.
inline NormalForm product_form(const CompoundMode& mode) {
  NormalForm nf;
  nf.rank_one = true;
  nf.wbar = {1.0, 0.0};
  nf.alpha = {1.0, 0.0};
  const MirrorOverlap& ov = mode.overlap();
  Eigen::Vector2cd f;
  if (mode.w1() == 0.0) {
    // chi = c2 f2 (x) phi2.
    nf.b.row(0) << 0.0, 1.0;
    f << 0.0, mode.c2();
  } else if (mode.w2() == 0.0) {
    nf.b.row(0) << 1.0, 0.0;
    f << mode.c1(), 0.0;
  } else {
    nf.b.row(0) << 1.0, 0.0;
    f << mode.c1(), mode.c2() * std::polar(1.0, ov.beta);
  }
  f /= f.norm();
  nf.fbar.row(0) = f.transpose();
  nf.fbar.row(1) = orthogonal_complement(f).transpose();
  return nf;
}

// Orthogonal mirror states: chi is already in normal form up to phases.
inline NormalForm orthogonal_form(const CompoundMode& mode) {
  NormalForm nf;
  nf.wbar = {mode.w1(), mode.w2()};
  nf.alpha = {std::abs(mode.c1()), std::abs(mode.c2())};
  nf.b = Eigen::Matrix2cd::Identity();
  const std::array<cplx, 2> c{mode.c1(), mode.c2()};
  for (int i = 0; i < 2; ++i) {
    const cplx ci = c[static_cast<std::size_t>(i)];
    nf.fbar(i, i) = ci == 0.0 ? cplx{1.0, 0.0} : ci / std::abs(ci);
  }
  nf.degenerate = std::abs(nf.wbar[0] - nf.wbar[1]) <= kBoundaryTolerance;
  order_descending(nf);
  return nf;
}

inline bool single_term(const CompoundMode& mode) { return mode.w1() == 0.0 || mode.w2() == 0.0; }

}  // namespace detail

// Closed-form normal form. With w~ = 1 - wbar the eigenvalue problem for
// rho_m reduces to
//
//   [w~ - w2 r~^2] b^1 + r e^{i beta} w~ b^2 = 0
//   r e^{-i beta} w~ b^1 + [w~ - w1 r~^2] b^2 = 0,     r~^2 = 1 - r^2,
//
// with roots w~_pm = (1 +- sqrt(1 - 4 w1 w2 r~^2)) / 2. Each eigenvector is
// normalised so that |b^1|^2 + |b^2|^2 + 2 Re{b^1* b^2 (phi1, phi2)} = 1 and
// the photon factors follow from fbar_i ~ sum_j c_j (b^-1)_j^i f_j.
inline NormalForm schmidt_closed(const CompoundMode& mode) {
  const MirrorOverlap& ov = mode.overlap();
  if (detail::single_term(mode) || ov.r_tilde_sq <= 2.0 * detail::kBoundaryTolerance) {
    return detail::product_form(mode);
  }
  if (ov.r <= detail::kBoundaryTolerance) return detail::orthogonal_form(mode);

  const double w1 = mode.w1();
  const double w2 = mode.w2();
  const double r = ov.r;
  const double r2 = r * r;
  const double rt2 = ov.r_tilde_sq;
  // 1 - 4 w1 w2 r~^2 = (w1 - w2)^2 + 4 w1 w2 r^2, free of cancellation.
  const double gap = 4.0 * w1 * w2 * r2;
  const double sqrt_disc = std::sqrt((w1 - w2) * (w1 - w2) + gap);
  // x +- sqrt_disc for x = +-(w1 - w2), using x^2 - disc = -gap.
  const auto plus = [&](double x) { return x >= 0.0 ? x + sqrt_disc : gap / (sqrt_disc - x); };
  const auto minus = [&](double x) { return x <= 0.0 ? x - sqrt_disc : -gap / (x + sqrt_disc); };

  const double wt_plus = 0.5 * (1.0 + sqrt_disc);
  const double wt_minus = w1 * w2 * rt2 / wt_plus;

  NormalForm nf;
  // Largest weight first: wbar1 = 1 - w~_minus = w~_plus.
  nf.wbar = {wt_plus, wt_minus};
  nf.degenerate = sqrt_disc <= detail::kBoundaryTolerance;

  const cplx phase = std::polar(1.0, ov.beta);
  for (int i = 0; i < 2; ++i) {
    const double wt = i == 0 ? wt_minus : wt_plus;
    // Row coefficients, with w~ - w_j r~^2 evaluated stably per root.
    double row1_diag = 0.0;  // w~ - w2 r~^2
    double row2_diag = 0.0;  // w~ - w1 r~^2
    if (i == 0) {
      row1_diag = w2 * rt2 * 0.5 * minus(w1 - w2) / wt_plus;
      row2_diag = w1 * rt2 * 0.5 * minus(w2 - w1) / wt_plus;
    } else {
      row1_diag = 0.5 * plus(w1 - w2) + w2 * r2;
      row2_diag = 0.5 * plus(w2 - w1) + w1 * r2;
    }
    const cplx row1_off = r * wt * phase;             // multiplies b^2
    const cplx row2_off = r * wt * std::conj(phase);  // multiplies b^1
    // Null vector of the better-conditioned row.
    cplx b1, b2;
    if (std::abs(row1_diag) + std::abs(row1_off) >= std::abs(row2_diag) + std::abs(row2_off)) {
      b1 = row1_off;
      b2 = -row1_diag;
    } else {
      b1 = row2_diag;
      b2 = -row2_off;
    }
    // (phibar, phibar) evaluated through the eigen relation
    // (phi_j, phibar) = wbar b^j / w_j, which keeps every term positive.
    const double wbar = nf.wbar[static_cast<std::size_t>(i)];
    const double norm_sq = wbar * (std::norm(b1) / w1 + std::norm(b2) / w2);
    const double scale = 1.0 / std::sqrt(norm_sq);
    nf.b(i, 0) = b1 * scale;
    nf.b(i, 1) = b2 * scale;
    detail::fix_phase(nf.b, i);
  }

  const Eigen::Matrix2cd b_inv = nf.b.inverse();
  const std::array<cplx, 2> c{mode.c1(), mode.c2()};
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2cd f_tilde;
    for (int j = 0; j < 2; ++j) f_tilde(j) = c[static_cast<std::size_t>(j)] * b_inv(j, i);
    const double alpha = f_tilde.norm();
    nf.alpha[static_cast<std::size_t>(i)] = alpha;
    nf.fbar.row(i) = (f_tilde / alpha).transpose();
  }
  return nf;
}

// Numerical normal form: eigendecomposition of rho_m, then
// fbar_i ~ (1 (x) phibar_i^dagger) chi.
inline NormalForm schmidt_numeric(const CompoundMode& mode) {
  const MirrorOverlap& ov = mode.overlap();
  const ModeStateOperator rho_m = reduced_mirror(mode);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho_m.m);
  const Eigen::Vector2d values = solver.eigenvalues();   // ascending
  const Eigen::Matrix2cd vectors = solver.eigenvectors();

  NormalForm nf;
  nf.wbar = {values(1), values(0)};
  nf.degenerate = std::abs(values(1) - values(0)) <= detail::kBoundaryTolerance;

  std::array<Eigen::Vector2cd, 2> gs{vectors.col(1), vectors.col(0)};
  if (nf.degenerate) {
    gs = {Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0)};
  }

  const bool parallel = rho_m.basis == BasisKind::MirrorDegenerate;
  nf.rank_one = parallel || nf.wbar[1] <= 0.0;
  const double rt = ov.r_tilde();
  const cplx z = ov.value();
  for (int i = 0; i < 2; ++i) {
    const Eigen::Vector2cd& v = gs[static_cast<std::size_t>(i)];
    if (parallel) {
      if (i == 0) nf.b.row(0) << v(0), 0.0;
      continue;
    }
    // phibar = v1 e1 + v2 e2 = (v1 - v2 z / r~) phi1 + (v2 / r~) phi2.
    nf.b(i, 0) = v(0) - v(1) * z / rt;
    nf.b(i, 1) = v(1) / rt;
    detail::fix_phase(nf.b, i);
  }

  // Mirror states in Gram-Schmidt coordinates.
  const std::array<Eigen::Vector2cd, 2> phi{Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(z, rt)};
  const std::array<cplx, 2> c{mode.c1(), mode.c2()};
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2cd phibar;
    if (parallel && i == 1) {
      nf.alpha[1] = 0.0;
      nf.fbar.row(1) = detail::orthogonal_complement(nf.fbar.row(0).transpose()).transpose();
      break;
    }
    phibar = parallel ? Eigen::Vector2cd(nf.b(i, 0), 0.0) : phibar_gram_schmidt(nf, ov, i);
    Eigen::Vector2cd f_tilde;
    for (int j = 0; j < 2; ++j) f_tilde(j) = c[static_cast<std::size_t>(j)] * phibar.dot(phi[static_cast<std::size_t>(j)]);
    const double alpha = f_tilde.norm();
    nf.alpha[static_cast<std::size_t>(i)] = alpha;
    if (alpha > 0.0) {
      nf.fbar.row(i) = (f_tilde / alpha).transpose();
    } else {
      nf.fbar.row(i) = detail::orthogonal_complement(nf.fbar.row(0).transpose()).transpose();
    }
  }
  return nf;
}

}  // namespace qmirror::entangle
