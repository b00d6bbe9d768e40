// qmirror: command-line front end for the photon / movable-mirror model.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 physics-domain error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qmirror/entangle.hpp"
#include "qmirror/error.hpp"
#include "qmirror/kinematics.hpp"
#include "qmirror/observables.hpp"
#include "qmirror/plot.hpp"
#include "qmirror/scenario.hpp"
#include "qmirror/units.hpp"
#include "qmirror/wavepacket.hpp"

namespace {

using json = nlohmann::json;
using namespace qmirror;

constexpr int kExitConfig = 1;
constexpr int kExitDomain = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + *path + "'");
  out << text;
}

scenario::ScenarioConfig load_config(const std::string& path) {
  try {
    return scenario::parse_config(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

units::ConstantsTable load_constants(const std::optional<std::string>& path) {
  units::ConstantsTable table;
  if (!path) return table;
  json doc;
  try {
    doc = json::parse(read_file(*path));
  } catch (const json::parse_error& e) {
    throw ConfigError(*path + ": malformed JSON: " + e.what());
  }
  if (doc.contains("constants")) doc = doc.at("constants");
  for (const auto& [key, target] : {std::pair<const char*, double*>{"hbar", &table.hbar},
                                    {"c", &table.c},
                                    {"kB", &table.kB}}) {
    if (doc.contains(key)) {
      if (!doc.at(key).is_number()) throw ConfigError(*path + ": field '" + std::string(key) + "' must be a number");
      *target = doc.at(key).get<double>();
    }
  }
  return table;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon reflection off a movable quantum mirror: entanglement, visibility and regime estimates"};
  app.require_subcommand(1);
  std::optional<unsigned long long> seed;
  app.add_option("--seed", seed, "Reserved; all computations are deterministic");

  // recoil
  auto* recoil = app.add_subcommand("recoil", "Photon-mirror recoil at normal incidence");
  double recoil_k = 0, recoil_p = 0, recoil_m = 0;
  bool recoil_approx = false;
  recoil->add_option("--k", recoil_k, "Photon momentum (1/s)")->required();
  recoil->add_option("--p", recoil_p, "Mirror momentum (1/s)")->default_val(0.0);
  recoil->add_option("--mass", recoil_m, "Mirror mass (1/s)")->required();
  recoil->add_flag("--approx", recoil_approx, "Use k' = -k, p' = p + 2k");

  // overlap
  auto* overlap = app.add_subcommand("overlap", "Overlap of a Gaussian mirror packet with its shifted copy");
  double ov_dp = 1, ov_shift = 0, ov_x0 = 0;
  std::optional<std::size_t> ov_points;
  overlap->add_option("--dp", ov_dp, "Momentum spread (1/s)")->required();
  overlap->add_option("--delta-p", ov_shift, "Momentum shift (1/s)")->required();
  overlap->add_option("--x0", ov_x0, "Mean position (s)")->default_val(0.0);
  overlap->add_option("--grid", ov_points, "Also evaluate on a grid with this many points");

  // schmidt
  auto* schmidt = app.add_subcommand("schmidt", "Normal form of a compound mode");
  std::optional<std::string> schmidt_config;
  double sch_w1 = 0.5, sch_r = 0.6, sch_beta = 0.0;
  bool sch_numeric = false;
  schmidt->add_option("--config", schmidt_config, "Scenario file");
  schmidt->add_option("--w1", sch_w1, "Weight |c1|^2 (when no config is given)")->default_val(0.5);
  schmidt->add_option("--r", sch_r, "Mirror overlap magnitude")->default_val(0.6);
  schmidt->add_option("--beta", sch_beta, "Mirror overlap phase")->default_val(0.0);
  schmidt->add_flag("--numeric", sch_numeric, "Use the eigendecomposition route");

  // classify
  auto* classify = app.add_subcommand("classify", "Run a scenario and report its regime");
  std::string classify_config;
  std::optional<std::string> classify_csv, classify_out;
  classify->add_option("--config", classify_config, "Scenario file")->required();
  classify->add_option("--csv", classify_csv, "Also write the report as a one-row CSV");
  classify->add_option("--out", classify_out, "Write JSON here instead of stdout");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Evaluate a scenario over its sweep block");
  std::string sweep_config;
  std::optional<std::string> sweep_out;
  unsigned sweep_threads = 0;
  sweep->add_option("--config", sweep_config, "Scenario file with a sweep block")->required();
  sweep->add_option("--out", sweep_out, "Write CSV here instead of stdout");
  sweep->add_option("--threads", sweep_threads, "Worker threads (0 = hardware)")->default_val(0);

  // units
  auto* unit_cmd = app.add_subcommand("units", "Natural-unit conversions and order-of-magnitude estimates");
  std::optional<double> u_grams, u_kelvin, u_lambda, u_cm;
  bool u_estimates = false;
  std::optional<std::string> u_constants;
  unit_cmd->add_option("--grams", u_grams, "Mass in grams");
  unit_cmd->add_option("--kelvin", u_kelvin, "Temperature in kelvin");
  unit_cmd->add_option("--wavelength-cm", u_lambda, "Wavelength in cm");
  unit_cmd->add_option("--cm", u_cm, "Length in cm");
  unit_cmd->add_flag("--estimates", u_estimates, "Print the actual-mirror estimates");
  unit_cmd->add_option("--constants", u_constants, "JSON file overriding hbar, c, kB");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render a sweep CSV as an SVG visibility curve");
  std::string plot_csv;
  std::optional<std::string> plot_out;
  plot_cmd->add_option("--csv", plot_csv, "Sweep CSV")->required();
  plot_cmd->add_option("--out", plot_out, "SVG output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*recoil) {
      const kinematics::RecoilInput in{recoil_k, recoil_p, recoil_m};
      const auto out = recoil_approx ? kinematics::recoil_approx(in) : kinematics::recoil_exact(in);
      if (out.relativistic_warning) std::cerr << "warning: input outside the nonrelativistic regime\n";
      std::cout << dump({{"k_prime", out.k_prime},
                         {"p_prime", out.p_prime},
                         {"momentum_residual", out.momentum_residual},
                         {"energy_residual", out.energy_residual},
                         {"nonrelativistic", in.nonrelativistic()},
                         {"rejected_branch_defect", kinematics::rejected_branch_check(in)}});
    } else if (*overlap) {
      const wavepacket::GaussianPacket packet{0.0, ov_dp, ov_x0, 0.5 / ov_dp, 1.0};
      const auto z = wavepacket::overlap_gaussian(packet, ov_shift);
      json doc{{"overlap", scenario::to_json(z)}, {"magnitude", std::abs(z)}, {"phase", std::arg(z)}};
      if (ov_points) {
        const auto a = wavepacket::discretize(packet, *ov_points);
        const auto b = wavepacket::sample(wavepacket::momentum_shift(packet, ov_shift), a.p_min, a.p_step, a.size());
        doc["grid_overlap"] = scenario::to_json(wavepacket::overlap_grid(a, b));
      }
      std::cout << dump(doc);
    } else if (*schmidt) {
      std::optional<entangle::CompoundMode> mode;
      if (schmidt_config) {
        mode = scenario::run_scenario(load_config(*schmidt_config)).mode;
      } else {
        if (!(sch_w1 >= 0.0 && sch_w1 <= 1.0)) throw ConfigError("--w1 must lie in [0, 1]");
        mode = entangle::mode_with_overlap(std::sqrt(sch_w1), std::sqrt(1.0 - sch_w1), sch_r, sch_beta);
      }
      const auto nf = sch_numeric ? entangle::schmidt_numeric(*mode) : entangle::schmidt_closed(*mode);
      std::cout << dump({{"overlap", {{"r", mode->overlap().r}, {"beta", mode->overlap().beta}}},
                         {"normal_form", scenario::to_json(nf)},
                         {"reduced_mirror", scenario::to_json(entangle::reduced_mirror(*mode))},
                         {"reduced_photon", scenario::to_json(entangle::reduced_photon(*mode))}});
    } else if (*classify) {
      const auto result = scenario::run_scenario(load_config(classify_config));
      write_text(classify_out, dump(scenario::to_json(result)));
      if (classify_csv) {
        std::ostringstream csv;
        scenario::write_csv(csv, {result.report});
        write_text(classify_csv, csv.str());
      }
    } else if (*sweep) {
      const auto cfg = load_config(sweep_config);
      if (!cfg.sweep) throw ConfigError(sweep_config + ": scenario has no sweep block");
      std::ostringstream csv;
      scenario::write_csv(csv, scenario::run_sweep(cfg, sweep_threads));
      write_text(sweep_out, csv.str());
    } else if (*unit_cmd) {
      const auto constants = load_constants(u_constants);
      json doc = json::object();
      if (u_grams) {
        doc["mass_inverse_seconds"] = units::grams_to_inverse_seconds(*u_grams, constants).value();
      }
      if (u_kelvin) {
        doc["temperature_inverse_seconds"] = units::kelvin_to_inverse_seconds(*u_kelvin, constants).value();
      }
      if (u_lambda) {
        doc["wavenumber_inverse_seconds"] = units::wavelength_to_wavenumber(*u_lambda, constants).value();
      }
      if (u_cm) doc["length_seconds"] = units::centimeters_to_seconds(*u_cm, constants).value();
      if (u_estimates) {
        constexpr double lambda_cm = 5e-5;
        constexpr double mass = 2.5e31;
        constexpr double k_coarse = 3e15;
        const double t_break = observables::breakdown_temperature(mass, k_coarse);
        const double k = units::wavelength_to_wavenumber(lambda_cm, constants).value();
        const double dp_300 =
            observables::thermal_spread(mass, units::kelvin_to_inverse_seconds(300.0, constants).value());
        doc["estimates"] = {
            {"wavelength_cm", lambda_cm},
            {"min_mirror_mass_inverse_seconds", observables::min_mirror_mass(lambda_cm, observables::kAtomSizeCm,
                                                                             observables::kAtomMassGrams, constants)
                                                    .value()},
            {"breakdown_temperature_inverse_seconds", t_break},
            {"breakdown_temperature_kelvin",
             units::inverse_seconds_to_kelvin({t_break, units::Kind::Temperature}, constants)},
            {"wavenumber_inverse_seconds", k},
            {"thermal_dp_300K_inverse_seconds", dp_300},
            {"thermal_kappa_300K", observables::kappa(dp_300, k)},
            {"thermal_case_300K", observables::to_string(observables::classify_kappa(dp_300 / k))}};
      }
      if (doc.empty()) throw ConfigError("units: give at least one of --grams, --kelvin, --wavelength-cm, --cm, --estimates");
      std::cout << dump(doc);
    } else if (*plot_cmd) {
      std::ifstream in(plot_csv, std::ios::binary);
      if (!in) throw ConfigError("cannot open '" + plot_csv + "'");
      write_text(plot_out, plot::render_svg(plot::read_sweep_csv(in)));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
