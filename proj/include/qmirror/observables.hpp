#pragma once

// Interference diagnostics for a compound mode and the kappa = dp / k regime
// classification, plus the thermal and mirror-mass estimates.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmirror/entangle.hpp"
#include "qmirror/error.hpp"
#include "qmirror/units.hpp"

namespace qmirror::observables {

using entangle::CompoundMode;
using entangle::ModeStateOperator;

// Two-beam fringe contrast V = 2 |c1 c2| r / (|c1|^2 + |c2|^2). This is not
// taken from the mirror model itself; it is the standard contrast of
// I(theta) = w1 + w2 + 2 Re[c1 c2* (phi2, phi1) e^{i theta}].
inline double visibility(const CompoundMode& mode) {
  const double weight = mode.w1() + mode.w2();
  return 2.0 * std::abs(mode.c1()) * std::abs(mode.c2()) * mode.overlap().r / weight;
}

// Tr(rho^2).
inline double purity(const ModeStateOperator& op) {
  return (op.m * op.m).trace().real();
}

// Trace distance 1/2 Tr|rho_ph - rho_ideal|. The difference is traceless and
// Hermitian, so its eigenvalues are +-sqrt(d00^2 + |d01|^2).
inline double distance_to_ideal(const CompoundMode& mode) {
  const Eigen::Matrix2cd diff = entangle::reduced_photon(mode).m - entangle::ideal_reference(mode).m;
  const double diag = 0.5 * (diff(0, 0) - diff(1, 1)).real();
  return std::hypot(diag, std::abs(diff(0, 1)));
}

inline double kappa(double dp, double k) {
  if (!(dp > 0.0) || !(k > 0.0) || !std::isfinite(dp) || !std::isfinite(k)) {
    throw DomainError("kappa needs positive dp and k");
  }
  return dp / k;
}

// Momentum spread of a mirror at temperature T from (dp)^2 / 2M = T.
// Order-of-magnitude estimate.
inline double thermal_spread(double M, double T) {
  if (!(M > 0.0)) throw DomainError("mirror mass must be positive");
  if (!(T >= 0.0)) throw DomainError("temperature must be non-negative");
  return std::sqrt(2.0 * M * T);
}

// Interference breakdown needs T << k^2 / M; returns k^2 / M.
inline double breakdown_temperature(double M, double k) {
  if (!(M > 0.0) || !(k > 0.0)) throw DomainError("breakdown_temperature needs positive M and k");
  return k * k / M;
}

inline constexpr double kAtomSizeCm = 1e-8;
inline constexpr double kAtomMassGrams = 1e-24;

// Lightest mirror that is still many atoms across a wavelength:
// (lambda / atom_size)^2 atoms of mass atom_mass.
inline units::NaturalQuantity min_mirror_mass(double lambda_cm, double atom_size_cm = kAtomSizeCm,
                                              double atom_mass_g = kAtomMassGrams,
                                              const units::ConstantsTable& constants = {}) {
  if (!(lambda_cm > 0.0) || !(atom_size_cm > 0.0) || !(atom_mass_g > 0.0)) {
    throw DomainError("min_mirror_mass needs positive inputs");
  }
  const double atoms_across = lambda_cm / atom_size_cm;
  return units::grams_to_inverse_seconds(atoms_across * atoms_across * atom_mass_g, constants);
}

// --- regime classification ---------------------------------------------------

inline constexpr double kCaseIKappa = 10.0;
inline constexpr double kCaseIIKappa = 0.1;

enum class Case { CaseI_NoBreakdown, CaseII_Breakdown, Intermediate };
enum class Fuzziness { Regular, Fuzzy, Intermediate };

inline const char* to_string(Case c) {
  switch (c) {
    case Case::CaseI_NoBreakdown: return "CaseI_NoBreakdown";
    case Case::CaseII_Breakdown: return "CaseII_Breakdown";
    case Case::Intermediate: return "Intermediate";
  }
  return "unknown";
}

inline const char* to_string(Fuzziness f) {
  switch (f) {
    case Fuzziness::Regular: return "Regular";
    case Fuzziness::Fuzzy: return "Fuzzy";
    case Fuzziness::Intermediate: return "Intermediate";
  }
  return "unknown";
}

inline Case classify_kappa(double kappa_value) {
  if (kappa_value >= kCaseIKappa) return Case::CaseI_NoBreakdown;
  if (kappa_value <= kCaseIIKappa) return Case::CaseII_Breakdown;
  return Case::Intermediate;
}

// Position spread in units of lambda / (4 pi) = 1 / (2k). The uncertainty
// relation gives kappa >= 1 / fuzziness_ratio, so a CaseII kappa forces a
// Fuzzy ratio for every admissible packet.
inline double fuzziness_ratio(double dx0, double k) { return 2.0 * k * dx0; }

inline Fuzziness classify_fuzziness(double dx0, double k) {
  const double ratio = fuzziness_ratio(dx0, k);
  if (ratio >= 1.0 / kCaseIIKappa) return Fuzziness::Fuzzy;
  if (ratio <= 1.0 / kCaseIKappa) return Fuzziness::Regular;
  return Fuzziness::Intermediate;
}

struct RegimeReport {
  double kappa = 0.0;
  double overlap_r = 0.0;
  // ln r, finite even when r underflows.
  double log_overlap_r = 0.0;
  Case case_label = Case::Intermediate;
  Fuzziness fuzziness = Fuzziness::Intermediate;
  double visibility = 0.0;
  double purity_ph = 1.0;
};

// k is the photon momentum; the mirror spread is read from phi1.
inline RegimeReport classify(const CompoundMode& mode, double k) {
  if (!(k > 0.0)) throw DomainError("photon momentum k must be positive");
  RegimeReport report;
  report.kappa = kappa(mode.phi1().dp, k);
  report.overlap_r = mode.overlap().r;
  report.log_overlap_r = wavepacket::overlap_log(mode.phi1(), mode.phi2()).log_r;
  report.case_label = classify_kappa(report.kappa);
  report.fuzziness = classify_fuzziness(mode.phi1().dx0, k);
  report.visibility = visibility(mode);
  report.purity_ph = purity(entangle::reduced_photon(mode));
  return report;
}

}  // namespace qmirror::observables
