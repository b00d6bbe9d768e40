#pragma once

// One-dimensional photon-mirror recoil at normal incidence. The photon comes
// in along +x with momentum k > 0, the mirror has momentum p and mass M
// (all in inverse seconds). Conservation laws:
//
//   k' + p' = k + p,     |k'| + p'^2 / 2M = |k| + p^2 / 2M.

#include <algorithm>
#include <cmath>
#include <string>

#include "qmirror/error.hpp"

namespace qmirror::kinematics {

// max(|p|, k) / M below this counts as nonrelativistic.
inline constexpr double kNonrelativisticThreshold = 1e-3;

struct RecoilInput {
  double k;
  double p;
  double M;

  void validate() const {
    if (!std::isfinite(k) || !std::isfinite(p) || !std::isfinite(M)) {
      throw DomainError("recoil input must be finite");
    }
    if (k <= 0.0) throw DomainError("photon momentum k must be positive");
    if (M <= 0.0) throw DomainError("mirror mass M must be positive");
  }

  bool nonrelativistic() const {
    return std::max(std::abs(p), k) / M < kNonrelativisticThreshold;
  }
};

struct RecoilOutcome {
  double k_prime;
  double p_prime;
  double momentum_residual;
  double energy_residual;
  // Set when the input is outside the nonrelativistic regime. The exact
  // solution is still returned.
  bool relativistic_warning = false;
};

namespace detail {

inline RecoilOutcome with_residuals(const RecoilInput& in, double k_prime, double p_prime) {
  RecoilOutcome out{k_prime, p_prime, 0.0, 0.0};
  out.momentum_residual = std::abs((k_prime - in.k) + (p_prime - in.p));
  // p'^2 - p^2 is formed as a product to avoid cancellation.
  const double kinetic_change = (p_prime - in.p) * (p_prime + in.p) / (2.0 * in.M);
  out.energy_residual = std::abs((std::abs(k_prime) - in.k) + kinetic_change);
  out.relativistic_warning = !in.nonrelativistic();
  return out;
}

}  // namespace detail

// Exact reflected solution,
//   |k'| = -k - (M + p) + sqrt((M + p)^2 + 4 M k),
// evaluated through the conjugate form
//   |k'| = k (2M - k - 2p) / (sqrt((M + p)^2 + 4 M k) + k + M + p)
// which has no cancellation for M >> k.
inline RecoilOutcome recoil_exact(const RecoilInput& in) {
  in.validate();
  const double numerator = in.k * ((2.0 * in.M - in.k) - 2.0 * in.p);
  if (!(numerator > 0.0)) {
    throw DomainError("no reflected solution: requires 2M > k + 2p");
  }
  const double mp = in.M + in.p;
  const double root = std::sqrt(mp * mp + 4.0 * in.M * in.k);
  const double reflected = numerator / (root + in.k + mp);
  const double k_prime = -reflected;
  const double p_prime = (in.k + in.p) + reflected;
  return detail::with_residuals(in, k_prime, p_prime);
}

// Leading order: k' = -k, p' = p + 2k. Residuals are reported, not zero.
inline RecoilOutcome recoil_approx(const RecoilInput& in) {
  in.validate();
  if (!in.nonrelativistic()) {
    throw DomainError("recoil_approx requires max(|p|, k) / M < 1e-3");
  }
  return detail::with_residuals(in, -in.k, in.p + 2.0 * in.k);
}

// Assuming the photon keeps moving forward (k' = +|k'| != k), the two
// conservation laws force 2M + |k'| = |k| + 2p. This returns the mismatch
// (2M + |k'|) - (|k| + 2p), with |k'| taken from the exact reflected
// solution. It is of order 2M for every nonrelativistic input, so the
// forward branch is impossible.
inline double rejected_branch_check(const RecoilInput& in) {
  in.validate();
  const double numerator = in.k * ((2.0 * in.M - in.k) - 2.0 * in.p);
  double magnitude = 0.0;
  if (numerator > 0.0) {
    const double mp = in.M + in.p;
    magnitude = numerator / (std::sqrt(mp * mp + 4.0 * in.M * in.k) + in.k + mp);
  }
  return (2.0 * in.M + magnitude) - (in.k + 2.0 * in.p);
}

}  // namespace qmirror::kinematics
