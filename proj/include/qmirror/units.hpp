#pragma once

// Natural units (hbar = c = 1). Mass, energy, momentum, temperature and
// wavenumber are all carried in inverse seconds; lengths in seconds.

#include <cmath>
#include <numbers>
#include <string>

#include "qmirror/error.hpp"

namespace qmirror::units {

enum class Kind { Mass, Temperature, Momentum, Energy, Length, Wavenumber };

inline const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::Mass: return "mass";
    case Kind::Temperature: return "temperature";
    case Kind::Momentum: return "momentum";
    case Kind::Energy: return "energy";
    case Kind::Length: return "length";
    case Kind::Wavenumber: return "wavenumber";
  }
  return "unknown";
}

// A value in natural units tagged with its physical kind. Lengths are in
// seconds, everything else in inverse seconds.
class NaturalQuantity {
 public:
  NaturalQuantity(double value, Kind kind) : value_(value), kind_(kind) {
    if (!std::isfinite(value_)) {
      throw DomainError(std::string("non-finite ") + to_string(kind_));
    }
    // Temperature admits 0 K; mass and wavenumber must be strictly positive.
    const bool strictly_positive = kind_ == Kind::Mass || kind_ == Kind::Wavenumber;
    if ((strictly_positive && value_ <= 0.0) || (kind_ == Kind::Temperature && value_ < 0.0)) {
      throw DomainError(std::string("invalid ") + to_string(kind_) + " value");
    }
  }

  double value() const { return value_; }
  Kind kind() const { return kind_; }

 private:
  double value_;
  Kind kind_;
};

// SI constants. Defaults are the exact / CODATA 2018 values.
struct ConstantsTable {
  double hbar = 1.054571817e-34;  // J s
  double c = 2.99792458e8;        // m / s
  double kB = 1.380649e-23;       // J / K

  static ConstantsTable codata() { return {}; }
};

namespace detail {

inline void require_positive_finite(double x, const char* what) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

inline void require_kind(const NaturalQuantity& q, Kind kind) {
  if (q.kind() != kind) {
    throw DomainError(std::string("expected ") + to_string(kind) + ", got " + to_string(q.kind()));
  }
}

}  // namespace detail

// m c^2 / hbar.
inline NaturalQuantity grams_to_inverse_seconds(double grams,
                                                const ConstantsTable& k = ConstantsTable::codata()) {
  detail::require_positive_finite(grams, "mass");
  return {grams * 1e-3 * (k.c * k.c / k.hbar), Kind::Mass};
}

inline double inverse_seconds_to_grams(const NaturalQuantity& mass,
                                       const ConstantsTable& k = ConstantsTable::codata()) {
  detail::require_kind(mass, Kind::Mass);
  return mass.value() / (k.c * k.c / k.hbar) * 1e3;
}

// kB T / hbar.
inline NaturalQuantity kelvin_to_inverse_seconds(double kelvin,
                                                 const ConstantsTable& k = ConstantsTable::codata()) {
  if (!std::isfinite(kelvin) || kelvin < 0.0) {
    throw DomainError("temperature must be non-negative and finite");
  }
  return {kelvin * (k.kB / k.hbar), Kind::Temperature};
}

inline double inverse_seconds_to_kelvin(const NaturalQuantity& temperature,
                                        const ConstantsTable& k = ConstantsTable::codata()) {
  detail::require_kind(temperature, Kind::Temperature);
  return temperature.value() / (k.kB / k.hbar);
}

// Angular wavenumber 2 pi c / lambda. Note the common order-of-magnitude
// figure k ~ 3e15 / s for green light (lambda = 5e-5 cm) is c / lambda
// without the 2 pi; this function includes it (3.77e15 / s).
inline NaturalQuantity wavelength_to_wavenumber(double lambda_cm,
                                                const ConstantsTable& k = ConstantsTable::codata()) {
  detail::require_positive_finite(lambda_cm, "wavelength");
  const double c_cm = k.c * 1e2;
  return {2.0 * std::numbers::pi * c_cm / lambda_cm, Kind::Wavenumber};
}

inline double wavenumber_to_wavelength(const NaturalQuantity& wavenumber,
                                       const ConstantsTable& k = ConstantsTable::codata()) {
  detail::require_kind(wavenumber, Kind::Wavenumber);
  const double c_cm = k.c * 1e2;
  return 2.0 * std::numbers::pi * c_cm / wavenumber.value();
}

// Light travel time across the length.
inline NaturalQuantity centimeters_to_seconds(double cm,
                                              const ConstantsTable& k = ConstantsTable::codata()) {
  if (!std::isfinite(cm)) throw DomainError("non-finite length");
  return {cm / (k.c * 1e2), Kind::Length};
}

inline double seconds_to_centimeters(const NaturalQuantity& length,
                                     const ConstantsTable& k = ConstantsTable::codata()) {
  detail::require_kind(length, Kind::Length);
  return length.value() * (k.c * 1e2);
}

}  // namespace qmirror::units
