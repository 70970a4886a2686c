// Copyright 2026 The cvcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cvcl/cvcl.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cvcl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;
  std::optional<long> seed_override;
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = RunConfig::parse_file(args.config_path);
  if (args.seed_override) cfg.set("seed", std::to_string(*args.seed_override));
  return cfg;
}

json config_json(const ResolvedConfig& rc, const std::string& subcommand) {
  json j;
  j["subcommand"] = subcommand;
  j["config"] = json::object();
  for (const auto& [k, v] : rc.raw()) j["config"][k] = v;
  return j;
}

void emit(const CommonArgs& args, const std::string& name, const CsvTable& table,
          const json& summary) {
  fs::create_directories(args.out_dir);
  const fs::path base = fs::path(args.out_dir) / name;
  table.write((base.string() + ".csv"));
  write_text_file(base.string() + "_summary.json", summary.dump(2) + "\n");
  std::cout << name << ": wrote " << base.string() << ".csv (" << table.row_count()
            << " rows) and " << base.string() << "_summary.json\n";
}

Grid grid_from(const ResolvedConfig& rc) {
  return make_grid(rc.real("grid.x_min"), rc.real("grid.x_max"),
                   static_cast<int>(rc.integer("grid.n_points")));
}

// ---------------------------------------------------------------------------
// measure: Gaussian-family sweep of the coherence quantifiers

int run_measure(const CommonArgs& args) {
  ConfigSchema schema;
  schema.require("grid.n_points", ConfigSchema::Type::integer)
      .optional("grid.margin_sigmas", ConfigSchema::Type::real, "6")
      .choice("kernel.kind", {"gaussian", "none"}, "gaussian")
      .optional("kernel.ell_g", ConfigSchema::Type::real, "1")
      .require("sweep.sigma_start", ConfigSchema::Type::real)
      .require("sweep.sigma_stop", ConfigSchema::Type::real)
      .require("sweep.count", ConfigSchema::Type::integer)
      .optional("state.x0", ConfigSchema::Type::real, "0")
      .optional("seed", ConfigSchema::Type::integer, "0");
  const ResolvedConfig rc = schema.resolve(load_config(args));

  const bool trivial = rc.str("kernel.kind") == "none";
  const double ell = rc.real("kernel.ell_g");
  if (!trivial && !(ell > 0.0))
    throw config_error("config: key 'kernel.ell_g' must be positive");
  const long count = rc.integer("sweep.count");
  if (count < 1) throw config_error("config: key 'sweep.count' must be >= 1");
  const long n_points = rc.integer("grid.n_points");
  const double margin = rc.real("grid.margin_sigmas");
  if (margin < 6.0)
    throw config_error("config: key 'grid.margin_sigmas' must be >= 6");
  const double s0 = rc.real("sweep.sigma_start");
  const double s1 = rc.real("sweep.sigma_stop");
  const double x0 = rc.real("state.x0");

  CsvTable table({{"sigma"}, {"ell_g"}, {"c2_numeric"}, {"c2_closed"},
                  {"crel_numeric", true}, {"crel_bound"}});
  double max_c2_defect = 0.0, min_crel_margin = 1e300;
  for (long i = 0; i < count; ++i) {
    const double sigma = count == 1 ? s0 : s0 + (s1 - s0) * i / (count - 1);
    // one grid per row so that every packet is equally resolved
    const Grid grid = make_grid(x0 - margin * sigma, x0 + margin * sigma,
                                static_cast<int>(n_points));
    const DephasingKernel kernel = trivial
        ? step_kernel(grid, grid.span())  // mask that keeps everything: g == 1
        : gaussian_kernel(grid, ell);
    const WaveFunction psi = gaussian_wavefunction(grid, GaussianParams(x0, sigma));
    const DensityMatrix rho = pure_state_density(psi);
    const double c2_num = c2_g(rho, kernel).value;
    const double crel_num = c_rel_g(rho, kernel).value;
    const double c2_closed = trivial ? 0.0 : c2_gaussian_closed_form(sigma, ell);
    const double bound = trivial ? 0.0 : crel_jensen_bound(sigma, ell);
    table.add_row({sigma, trivial ? 0.0 : ell, c2_num, c2_closed, crel_num, bound});
    max_c2_defect = std::max(max_c2_defect, std::abs(c2_num - c2_closed));
    min_crel_margin = std::min(min_crel_margin, crel_num - bound);
  }

  json j = config_json(rc, "measure");
  j["max_c2_defect"] = max_c2_defect;
  j["min_crel_margin"] = min_crel_margin;
  j["rows"] = table.row_count();
  emit(args, "measure", table, j);

  if (args.plot) {
    std::vector<double> xs, ys;
    for (const auto& r : table.rows()) {
      xs.push_back(r[0]);
      ys.push_back(r[2]);
    }
    write_text_file((fs::path(args.out_dir) / "measure.svg").string(),
                    render_svg_polyline(xs, ys, "sigma", "c2", "HS dephasing loss"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// dynamics: Newtonian wavepacket coherence trajectory

int run_dynamics(const CommonArgs& args) {
  ConfigSchema schema;
  schema.require("scenario.m", ConfigSchema::Type::real)
      .require("scenario.M", ConfigSchema::Type::real)
      .require("scenario.x0", ConfigSchema::Type::real)
      .require("scenario.sigma0", ConfigSchema::Type::real)
      .require("scenario.ell_g", ConfigSchema::Type::real)
      .require("scenario.t_max", ConfigSchema::Type::real)
      .require("scenario.n_steps", ConfigSchema::Type::integer)
      .choice("units.mode", {"SI", "natural"}, "SI")
      .optional("seed", ConfigSchema::Type::integer, "0");
  const ResolvedConfig rc = schema.resolve(load_config(args));

  const Units units = rc.str("units.mode") == "SI" ? Units::si() : Units::natural();
  const NewtonianScenario scenario(
      rc.real("scenario.m"), rc.real("scenario.M"), rc.real("scenario.x0"),
      rc.real("scenario.sigma0"), rc.real("scenario.ell_g"), rc.real("scenario.t_max"),
      static_cast<int>(rc.integer("scenario.n_steps")), units);

  const std::vector<TimeSeriesRow> series = coherence_time_series(scenario);
  CsvTable table({{"t"}, {"sigma_t"}, {"c2"}, {"crel_bound"}, {"delta_crel_bound"}});
  for (const auto& r : series)
    table.add_row({r.t, r.sigma_t, r.c2, r.crel_bound, r.delta_crel_bound});

  json j = config_json(rc, "dynamics");
  j["kappa"] = kappa(scenario);
  j["kappa_t_max"] = kappa(scenario) * scenario.t_max;
  j["x0_over_sigma0"] = scenario.x0 / scenario.sigma0;
  emit(args, "dynamics", table, j);

  if (args.plot) {
    std::vector<double> xs, ys;
    for (const auto& r : series) {
      xs.push_back(r.t);
      ys.push_back(r.delta_crel_bound);
    }
    write_text_file((fs::path(args.out_dir) / "dynamics.svg").string(),
                    render_svg_polyline(xs, ys, "t (s)", "delta crel bound (nats)",
                                        "Dephasing-loss bound growth"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// counterexample: HS-loss monotonicity violation vs entropic monotonicity

int run_counterexample(const CommonArgs& args) {
  ConfigSchema schema;
  schema.require("grid.x_min", ConfigSchema::Type::real)
      .require("grid.x_max", ConfigSchema::Type::real)
      .require("grid.n_points", ConfigSchema::Type::integer)
      .require("kernel.ell_g", ConfigSchema::Type::real)
      .require("phi.sigma", ConfigSchema::Type::real)
      .optional("phi.center", ConfigSchema::Type::real, "0")
      .require("shift.a", ConfigSchema::Type::real)
      .require("shift.b", ConfigSchema::Type::real)
      .optional("seed", ConfigSchema::Type::integer, "0");
  const ResolvedConfig rc = schema.resolve(load_config(args));

  const Grid grid = grid_from(rc);
  const DephasingKernel kernel = gaussian_kernel(grid, rc.real("kernel.ell_g"));
  const GaussianParams phi(rc.real("phi.center"), rc.real("phi.sigma"));
  const double a = rc.real("shift.a"), b = rc.real("shift.b");

  const C2ViolationReport c2rep = verify_c2_monotonicity_violation(grid, phi, a, b, kernel);

  const double width = 12.0 * phi.sigma + 2.0 * std::abs(phi.x0);
  const KrausInstrument instrument = build_counterexample_instrument(grid, width, a, b);
  const WaveFunction pa =
      compact_gaussian_wavefunction(grid, GaussianParams(phi.x0 + a, phi.sigma));
  const WaveFunction pb =
      compact_gaussian_wavefunction(grid, GaussianParams(phi.x0 + b, phi.sigma));
  const DensityMatrix rho =
      mix({pure_state_density(pa), pure_state_density(pb)}, {0.5, 0.5});

  const MonotonicityReport crel = verify_crel_monotonicity(rho, instrument, kernel);
  const StrongMonotonicityReport strong_crel =
      verify_strong_monotonicity(rho, instrument, kernel, MonotoneMeasure::crel);
  const StrongMonotonicityReport strong_c2 =
      verify_strong_monotonicity(rho, instrument, kernel, MonotoneMeasure::c2);
  const InstrumentOutcome outcome = apply_instrument(rho, instrument);

  CsvTable table({{"branch"}, {"probability"}, {"c2_post"}, {"crel_post"}});
  for (std::size_t k = 0; k < outcome.probabilities.size(); ++k) {
    double c2p = 0.0, crelp = 0.0;
    if (outcome.post_states[k]) {
      c2p = c2_g(*outcome.post_states[k], kernel).value;
      crelp = c_rel_g(*outcome.post_states[k], kernel).value;
    }
    table.add_row({static_cast<double>(k), outcome.probabilities[k], c2p, crelp});
  }

  json j = config_json(rc, "counterexample");
  j["c2_in"] = c2rep.c2_in;
  j["c2_out"] = c2rep.c2_out;
  j["ratio"] = c2rep.ratio;
  j["violates_monotonicity"] = c2rep.c2_out > c2rep.c2_in + 1e-12;
  j["crel_before"] = crel.before;
  j["crel_after"] = crel.after;
  j["crel_monotone"] = crel.holds;
  j["strong_crel_lhs"] = strong_crel.lhs;
  j["strong_crel_rhs"] = strong_crel.rhs;
  j["strong_crel_holds"] = strong_crel.holds;
  j["strong_c2_lhs"] = strong_c2.lhs;
  j["strong_c2_rhs"] = strong_c2.rhs;
  j["strong_c2_holds"] = strong_c2.holds;
  j["covariance_defect"] = strong_c2.covariance_defect;
  emit(args, "counterexample", table, j);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// witness: threshold certification in the two-packet sector

int run_witness(const CommonArgs& args) {
  ConfigSchema schema;
  schema.require("state.p", ConfigSchema::Type::real)
      .require("state.c_re", ConfigSchema::Type::real)
      .require("state.c_im", ConfigSchema::Type::real)
      .require("state.d", ConfigSchema::Type::real)
      .require("state.width", ConfigSchema::Type::real)
      .require("kernel.ell_g", ConfigSchema::Type::real)
      .require("witness.c0", ConfigSchema::Type::real)
      .optional("witness.n_theta", ConfigSchema::Type::integer, "64")
      .optional("crosscheck.n_points", ConfigSchema::Type::integer, "0")
      .optional("seed", ConfigSchema::Type::integer, "0");
  const ResolvedConfig rc = schema.resolve(load_config(args));

  const double ell = rc.real("kernel.ell_g");
  const double d = rc.real("state.d");
  const complex_t c(rc.real("state.c_re"), rc.real("state.c_im"));
  const TwoPacketState state(rc.real("state.p"), c, d, rc.real("state.width"));
  const complex_t g_at_d = std::exp(-d * d / (2.0 * ell * ell));
  const double c0 = rc.real("witness.c0");
  const long n_theta = rc.integer("witness.n_theta");
  if (n_theta < 1) throw config_error("config: key 'witness.n_theta' must be >= 1");

  CsvTable table({{"theta"}, {"x_theta"}, {"witness_value"}, {"certified"}});
  double max_x = -1e300;
  for (long i = 0; i < n_theta; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / n_theta;
    const double x = x_theta_expectation(state, theta);
    const CertificationResult cr = certify(state, theta, c0, g_at_d);
    table.add_row({theta, x, cr.witness_value, cr.certified ? 1.0 : 0.0});
    max_x = std::max(max_x, x);
  }

  const double theta_opt = std::arg(c);
  const CertificationResult best = certify(state, theta_opt, c0, g_at_d);
  json j = config_json(rc, "witness");
  j["g_at_d"] = std::abs(g_at_d);
  j["bound"] = witness_bound(c0, g_at_d);
  j["visibility"] = 2.0 * std::abs(c);
  j["max_x_theta_scan"] = max_x;
  j["certified_at_optimum"] = best.certified;
  j["c2_sector"] = c2_two_packet(state, g_at_d);

  const long ncross = rc.integer("crosscheck.n_points");
  if (ncross > 0) {
    const double half = d / 2.0 + 10.0 * state.packet_width;
    const Grid grid = make_grid(-half, half, static_cast<int>(ncross));
    const CrosscheckResult cross =
        full_grid_crosscheck(d, state.packet_width, c, gaussian_kernel(grid, ell));
    j["crosscheck"] = {{"c2_grid", cross.c2_grid},
                       {"c2_sector", cross.c2_sector},
                       {"rel_error", cross.rel_error},
                       {"packet_overlap", cross.packet_overlap},
                       {"overlap_warning", cross.overlap_warning}};
  }
  emit(args, "witness", table, j);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mc-check: Monte Carlo kick sampling against the exact channel

int run_mc_check(const CommonArgs& args) {
  ConfigSchema schema;
  schema.require("grid.x_min", ConfigSchema::Type::real)
      .require("grid.x_max", ConfigSchema::Type::real)
      .require("grid.n_points", ConfigSchema::Type::integer)
      .require("kernel.ell_g", ConfigSchema::Type::real)
      .require("state.sigma", ConfigSchema::Type::real)
      .optional("state.x0", ConfigSchema::Type::real, "0")
      .optional("mc.n_low", ConfigSchema::Type::integer, "10000")
      .optional("mc.n_high", ConfigSchema::Type::integer, "100000")
      .optional("seed", ConfigSchema::Type::integer, "42");
  const ResolvedConfig rc = schema.resolve(load_config(args));

  const Grid grid = grid_from(rc);
  const double ell = rc.real("kernel.ell_g");
  const Units units = Units::natural();
  const DephasingKernel kernel = gaussian_kernel(grid, ell);
  const KickDistribution kicks = KickDistribution::gaussian(units.hbar / ell);
  const DensityMatrix rho = pure_state_density(
      gaussian_wavefunction(grid, GaussianParams(rc.real("state.x0"),
                                                 rc.real("state.sigma"))));
  const DensityMatrix exact = apply_dephasing(rho, kernel);
  const auto seed = static_cast<std::uint64_t>(rc.integer("seed"));
  const long n_low = rc.integer("mc.n_low");
  const long n_high = rc.integer("mc.n_high");
  if (n_low < 1 || n_high <= n_low)
    throw config_error("config: require 1 <= mc.n_low < mc.n_high");

  auto frob_err = [&](long n) {
    const DensityMatrix mc = apply_random_kicks_mc(rho, kicks, n, seed, units);
    return (mc.matrix() - exact.matrix()).norm();
  };
  const double err_low = frob_err(n_low);
  const double err_high = frob_err(n_high);
  const double ratio = err_low / err_high;

  CsvTable table({{"n_samples"}, {"frobenius_error"}});
  table.add_row({static_cast<double>(n_low), err_low});
  table.add_row({static_cast<double>(n_high), err_high});

  const double expected = std::sqrt(static_cast<double>(n_high) / n_low);
  json j = config_json(rc, "mc-check");
  j["error_low"] = err_low;
  j["error_high"] = err_high;
  j["error_ratio"] = ratio;
  j["expected_ratio"] = expected;
  j["within_mc_window"] =
      ratio >= expected * (2.5 / std::sqrt(10.0)) && ratio <= expected * (4.0 / std::sqrt(10.0));
  emit(args, "mc-check", table, j);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stepmask: sharp strip mask diagnostics and the non-CP demonstration

int run_stepmask(const CommonArgs& args) {
  ConfigSchema schema;
  schema.require("grid.x_min", ConfigSchema::Type::real)
      .require("grid.x_max", ConfigSchema::Type::real)
      .require("grid.n_points", ConfigSchema::Type::integer)
      .require("packet.separation", ConfigSchema::Type::real)
      .require("packet.width", ConfigSchema::Type::real)
      .require("step.eps_start", ConfigSchema::Type::real)
      .require("step.eps_stop", ConfigSchema::Type::real)
      .require("step.count", ConfigSchema::Type::integer)
      .optional("seed", ConfigSchema::Type::integer, "0");
  const ResolvedConfig rc = schema.resolve(load_config(args));

  const Grid grid = grid_from(rc);
  const double sep = rc.real("packet.separation");
  const double width = rc.real("packet.width");
  const long count = rc.integer("step.count");
  if (count < 1) throw config_error("config: key 'step.count' must be >= 1");

  // balanced pure superposition of two packets
  const WaveFunction l = gaussian_wavefunction(grid, GaussianParams(-sep / 2.0, width));
  const WaveFunction r = gaussian_wavefunction(grid, GaussianParams(sep / 2.0, width));
  const WaveFunction psi =
      WaveFunction::from_samples(grid, l.amplitudes() + r.amplitudes());
  const DensityMatrix rho = pure_state_density(psi);

  CsvTable table({{"epsilon"}, {"c2_epsilon"}, {"trace"}, {"min_eigenvalue"}, {"is_state"}});
  double min_min = 1e300;
  const double e0 = rc.real("step.eps_start"), e1 = rc.real("step.eps_stop");
  for (long i = 0; i < count; ++i) {
    const double eps = count == 1 ? e0 : e0 + (e1 - e0) * i / (count - 1);
    const StepMaskResult masked = apply_step_projector(rho, eps);
    table.add_row({eps, c2_epsilon(rho, eps), masked.trace, masked.min_eigenvalue,
                   masked.is_state ? 1.0 : 0.0});
    min_min = std::min(min_min, masked.min_eigenvalue);
  }

  json j = config_json(rc, "stepmask");
  j["min_eigenvalue_overall"] = min_min;
  j["noncp_demonstrated"] = min_min < -1e-6;
  emit(args, "stepmask", table, j);

  if (args.plot) {
    std::vector<double> xs, ys;
    for (const auto& row : table.rows()) {
      xs.push_back(row[0]);
      ys.push_back(row[3]);
    }
    write_text_file((fs::path(args.out_dir) / "stepmask.svg").string(),
                    render_svg_polyline(xs, ys, "epsilon", "min eigenvalue",
                                        "Strip-mask spectral validity"));
  }
  return kExitOk;
}

void attach_common(CLI::App* sub, CommonArgs& args, bool with_plot) {
  sub->add_option("--config", args.config_path, "path to key=value config file")
      ->required();
  sub->add_option("--out", args.out_dir, "output directory (default: .)");
  sub->add_option("--seed", args.seed_override, "override the config seed");
  if (with_plot) sub->add_flag("--plot", args.plot, "also write an SVG plot");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-variable position-dephasing coherence toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*runner)(const CommonArgs&) = nullptr;

  auto* measure = app.add_subcommand("measure", "Gaussian-family coherence sweep");
  attach_common(measure, args, true);
  measure->callback([&] { runner = run_measure; });

  auto* dynamics = app.add_subcommand("dynamics", "Newtonian wavepacket time series");
  attach_common(dynamics, args, true);
  dynamics->callback([&] { runner = run_dynamics; });

  auto* counter = app.add_subcommand("counterexample", "HS-loss monotonicity violation");
  attach_common(counter, args, false);
  counter->callback([&] { runner = run_counterexample; });

  auto* witness = app.add_subcommand("witness", "two-packet threshold witness");
  attach_common(witness, args, false);
  witness->callback([&] { runner = run_witness; });

  auto* mc = app.add_subcommand("mc-check", "Monte Carlo kick-channel convergence");
  attach_common(mc, args, false);
  mc->callback([&] { runner = run_mc_check; });

  auto* step = app.add_subcommand("stepmask", "strip-mask diagnostics");
  attach_common(step, args, true);
  step->callback([&] { runner = run_stepmask; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return runner(args);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cvcl::error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
