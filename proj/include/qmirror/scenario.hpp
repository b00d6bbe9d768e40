#pragma once

// Scenario files (JSON, schema 1), single-scenario evaluation, parameter
// sweeps and the JSON / CSV renderings used by the command-line tool.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qmirror/entangle.hpp"
#include "qmirror/error.hpp"
#include "qmirror/observables.hpp"
#include "qmirror/units.hpp"
#include "qmirror/wavepacket.hpp"

namespace qmirror::scenario {

using json = nlohmann::json;
using cplx = std::complex<double>;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "kappa,r,visibility,purity,case,fuzziness";

enum class MirrorKind { Semitransparent, FullyReflecting };

struct MassGrams { double grams; };
struct MassNatural { double natural; };
using MassSpec = std::variant<MassGrams, MassNatural>;

struct DpExplicit { double dp; };
struct DpThermal { double T_kelvin; };
struct DpMinimumUncertainty { double dx0; };
using DpSpec = std::variant<DpExplicit, DpThermal, DpMinimumUncertainty>;

struct Sweep {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 2;
  bool log_scale = false;

  std::vector<double> values() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(points - 1);
      out[i] = log_scale ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                         : min + t * (max - min);
    }
    // Pin the endpoints exactly.
    out.front() = min;
    out.back() = max;
    return out;
  }
};

inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"kappa", "dp", "T_kelvin", "dx0", "wavelength_cm", "geometry"};
  return names;
}

struct ScenarioConfig {
  MirrorKind mirror_kind = MirrorKind::Semitransparent;
  cplx c1{1.0 / std::numbers::sqrt2, 0.0};
  cplx c2{1.0 / std::numbers::sqrt2, 0.0};
  double wavelength_cm = 5e-5;
  MassSpec mirror_mass = MassNatural{2.5e31};
  DpSpec dp_spec = DpThermal{300.0};
  double geometry = 2.0;
  std::optional<Sweep> sweep;
  units::ConstantsTable constants;
};

// --- parsing -------------------------------------------------------------------

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError("missing field '" + key + "' in " + where);
  }
  return obj.at(key);
}

inline double number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError("field '" + field + "' must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError("field '" + field + "' must be finite");
  return x;
}

inline cplx complex_number(const json& value, const std::string& field) {
  if (value.is_number()) return {number(value, field), 0.0};
  if (!value.is_array() || value.size() != 2) {
    throw ConfigError("field '" + field + "' must be a number or a [re, im] pair");
  }
  return {number(value[0], field + "[0]"), number(value[1], field + "[1]")};
}

inline void reject_unknown(const json& obj, const std::vector<std::string>& known, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown field '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace detail

inline constexpr double kConfigNormTolerance = 1e-9;

inline ScenarioConfig parse_config(const json& doc) {
  using detail::number;
  using detail::require;
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  detail::reject_unknown(doc,
                         {"schema", "description", "mirror_kind", "c1", "c2", "wavelength_cm", "mirror_mass",
                          "dp", "geometry", "sweep", "constants"},
                         "scenario");

  const json& schema = require(doc, "schema", "scenario");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported schema (expected \"schema\": 1)");
  }

  ScenarioConfig cfg;
  const json& kind = require(doc, "mirror_kind", "scenario");
  if (kind == "semitransparent") {
    cfg.mirror_kind = MirrorKind::Semitransparent;
  } else if (kind == "fully_reflecting") {
    cfg.mirror_kind = MirrorKind::FullyReflecting;
  } else {
    throw ConfigError("field 'mirror_kind' must be \"semitransparent\" or \"fully_reflecting\"");
  }

  cfg.c1 = detail::complex_number(require(doc, "c1", "scenario"), "c1");
  cfg.c2 = detail::complex_number(require(doc, "c2", "scenario"), "c2");
  const double weight = std::norm(cfg.c1) + std::norm(cfg.c2);
  if (std::abs(weight - 1.0) > kConfigNormTolerance) {
    throw ConfigError("amplitudes must satisfy |c1|^2 + |c2|^2 = 1 (got " + fmt::format("{:.17g}", weight) + ")");
  }
  cfg.c1 /= std::sqrt(weight);
  cfg.c2 /= std::sqrt(weight);

  cfg.wavelength_cm = number(require(doc, "wavelength_cm", "scenario"), "wavelength_cm");

  const json& mass = require(doc, "mirror_mass", "scenario");
  if (!mass.is_object() || mass.size() != 1) {
    throw ConfigError("field 'mirror_mass' must hold exactly one of {grams, natural}");
  }
  if (mass.contains("grams")) {
    cfg.mirror_mass = MassGrams{number(mass.at("grams"), "mirror_mass.grams")};
  } else if (mass.contains("natural")) {
    cfg.mirror_mass = MassNatural{number(mass.at("natural"), "mirror_mass.natural")};
  } else {
    throw ConfigError("field 'mirror_mass' must hold exactly one of {grams, natural}");
  }

  const json& dp = require(doc, "dp", "scenario");
  if (!dp.is_object() || dp.size() != 1) {
    throw ConfigError("field 'dp' must hold exactly one of {explicit, thermal, minimum_uncertainty}");
  }
  if (dp.contains("explicit")) {
    cfg.dp_spec = DpExplicit{number(dp.at("explicit"), "dp.explicit")};
  } else if (dp.contains("thermal")) {
    cfg.dp_spec = DpThermal{number(require(dp.at("thermal"), "T_kelvin", "dp.thermal"), "dp.thermal.T_kelvin")};
  } else if (dp.contains("minimum_uncertainty")) {
    cfg.dp_spec = DpMinimumUncertainty{
        number(require(dp.at("minimum_uncertainty"), "dx0", "dp.minimum_uncertainty"), "dp.minimum_uncertainty.dx0")};
  } else {
    throw ConfigError("field 'dp' must hold exactly one of {explicit, thermal, minimum_uncertainty}");
  }

  if (doc.contains("geometry")) cfg.geometry = number(doc.at("geometry"), "geometry");

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    detail::reject_unknown(s, {"parameter", "min", "max", "points", "log_scale"}, "sweep");
    Sweep sweep;
    const json& name = require(s, "parameter", "sweep");
    if (!name.is_string()) throw ConfigError("field 'sweep.parameter' must be a string");
    sweep.parameter = name.get<std::string>();
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), sweep.parameter) == names.end()) {
      throw ConfigError("unknown sweep parameter '" + sweep.parameter + "'");
    }
    sweep.min = number(require(s, "min", "sweep"), "sweep.min");
    sweep.max = number(require(s, "max", "sweep"), "sweep.max");
    const json& points = require(s, "points", "sweep");
    if (!points.is_number_integer() || points.get<long long>() < 2 || points.get<long long>() > 1000000) {
      throw ConfigError("field 'sweep.points' must be an integer in [2, 1000000]");
    }
    sweep.points = points.get<std::size_t>();
    if (s.contains("log_scale")) {
      if (!s.at("log_scale").is_boolean()) throw ConfigError("field 'sweep.log_scale' must be a boolean");
      sweep.log_scale = s.at("log_scale").get<bool>();
    }
    if (sweep.log_scale && !(sweep.min > 0.0 && sweep.max > 0.0)) {
      throw ConfigError("log-scale sweep needs positive bounds");
    }
    cfg.sweep = sweep;
  }

  if (doc.contains("constants")) {
    const json& c = doc.at("constants");
    detail::reject_unknown(c, {"hbar", "c", "kB"}, "constants");
    if (c.contains("hbar")) cfg.constants.hbar = number(c.at("hbar"), "constants.hbar");
    if (c.contains("c")) cfg.constants.c = number(c.at("c"), "constants.c");
    if (c.contains("kB")) cfg.constants.kB = number(c.at("kB"), "constants.kB");
  }
  return cfg;
}

inline ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

// --- evaluation ----------------------------------------------------------------

struct ScenarioResult {
  double k;
  double M;
  double dp;
  double dx0;
  double geometry;
  entangle::CompoundMode mode;
  observables::RegimeReport report;
  entangle::NormalForm normal_form;
};

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const double k = units::wavelength_to_wavenumber(cfg.wavelength_cm, cfg.constants).value();
  const double M = std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, MassGrams>) {
          return units::grams_to_inverse_seconds(spec.grams, cfg.constants).value();
        } else {
          return units::NaturalQuantity(spec.natural, units::Kind::Mass).value();
        }
      },
      cfg.mirror_mass);

  wavepacket::GaussianPacket packet = std::visit(
      [&](const auto& spec) -> wavepacket::GaussianPacket {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, DpExplicit>) {
          return wavepacket::GaussianPacket::minimum_uncertainty(0.0, spec.dp, M);
        } else if constexpr (std::is_same_v<T, DpThermal>) {
          const double T_nat = units::kelvin_to_inverse_seconds(spec.T_kelvin, cfg.constants).value();
          return wavepacket::GaussianPacket::minimum_uncertainty(0.0, observables::thermal_spread(M, T_nat), M);
        } else {
          if (!(spec.dx0 > 0.0)) throw DomainError("position spread dx0 must be positive");
          return {0.0, 0.5 / spec.dx0, 0.0, spec.dx0, M};
        }
      },
      cfg.dp_spec);

  auto mode = cfg.mirror_kind == MirrorKind::Semitransparent
                  ? entangle::build_semitransparent(cfg.c1, cfg.c2, packet, k, cfg.geometry)
                  : entangle::build_fully_reflecting(cfg.c1, cfg.c2, packet, k, cfg.geometry);
  auto report = observables::classify(mode, k);
  auto nf = entangle::schmidt_closed(mode);
  return {k, M, packet.dp, packet.dx0, cfg.geometry, std::move(mode), report, nf};
}

// Configuration for one sweep point.
inline ScenarioConfig sweep_point(const ScenarioConfig& cfg, double value) {
  if (!cfg.sweep) throw ConfigError("scenario has no sweep block");
  ScenarioConfig point = cfg;
  point.sweep.reset();
  const std::string& name = cfg.sweep->parameter;
  if (name == "kappa") {
    const double k = units::wavelength_to_wavenumber(cfg.wavelength_cm, cfg.constants).value();
    point.dp_spec = DpExplicit{value * k};
  } else if (name == "dp") {
    point.dp_spec = DpExplicit{value};
  } else if (name == "T_kelvin") {
    point.dp_spec = DpThermal{value};
  } else if (name == "dx0") {
    point.dp_spec = DpMinimumUncertainty{value};
  } else if (name == "wavelength_cm") {
    point.wavelength_cm = value;
  } else if (name == "geometry") {
    point.geometry = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
  return point;
}

// Evaluates every sweep point (concurrently) and returns the reports in
// sweep order.
inline std::vector<observables::RegimeReport> run_sweep(const ScenarioConfig& cfg, unsigned threads = 0) {
  if (!cfg.sweep) throw ConfigError("scenario has no sweep block");
  const std::vector<double> values = cfg.sweep->values();
  std::vector<std::optional<observables::RegimeReport>> slots(values.size());
  std::vector<std::exception_ptr> errors(values.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, values.size()));
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < values.size(); i += threads) {
          try {
            slots[i] = run_scenario(sweep_point(cfg, values[i])).report;
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  std::vector<observables::RegimeReport> reports;
  reports.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    reports.push_back(*slots[i]);
  }
  return reports;
}

// --- rendering -----------------------------------------------------------------

inline std::string format_number(double x) { return fmt::format("{:.17g}", x); }

inline std::string csv_row(const observables::RegimeReport& r) {
  return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{},{}", r.kappa, r.overlap_r, r.visibility, r.purity_ph,
                     observables::to_string(r.case_label), observables::to_string(r.fuzziness));
}

inline void write_csv(std::ostream& out, const std::vector<observables::RegimeReport>& reports) {
  std::string text = std::string(kCsvHeader) + "\n";
  for (const auto& r : reports) text += csv_row(r) + "\n";
  out << text;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Eigen::Matrix2cd& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) rows.push_back(json::array({to_json(m(i, 0)), to_json(m(i, 1))}));
  return rows;
}

inline json to_json(const entangle::NormalForm& nf) {
  return {{"alpha", {nf.alpha[0], nf.alpha[1]}},
          {"wbar", {nf.wbar[0], nf.wbar[1]}},
          {"b", to_json(nf.b)},
          {"fbar", to_json(nf.fbar)},
          {"degenerate", nf.degenerate},
          {"rank_one", nf.rank_one}};
}

inline json to_json(const entangle::ModeStateOperator& op) {
  const auto names = entangle::basis_names(op.basis);
  return {{"basis", entangle::to_string(op.basis)}, {"basis_elements", {names[0], names[1]}}, {"m", to_json(op.m)}};
}

inline json to_json(const observables::RegimeReport& r) {
  return {{"kappa", r.kappa},
          {"r", r.overlap_r},
          {"log_r", r.log_overlap_r},
          {"visibility", r.visibility},
          {"purity", r.purity_ph},
          {"case", observables::to_string(r.case_label)},
          {"fuzziness", observables::to_string(r.fuzziness)}};
}

inline json to_json(const ScenarioResult& result) {
  return {{"schema", kSchemaVersion},
          {"inputs",
           {{"k", result.k},
            {"M", result.M},
            {"dp", result.dp},
            {"dx0", result.dx0},
            {"geometry", result.geometry},
            {"c1", to_json(result.mode.c1())},
            {"c2", to_json(result.mode.c2())}}},
          {"report", to_json(result.report)},
          {"normal_form", to_json(result.normal_form)},
          {"reduced_photon", to_json(entangle::reduced_photon(result.mode))},
          {"reduced_mirror", to_json(entangle::reduced_mirror(result.mode))}};
}

}  // namespace qmirror::scenario
