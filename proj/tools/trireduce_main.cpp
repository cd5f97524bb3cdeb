#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "trireduce/checks.hpp"
#include "trireduce/config.hpp"
#include "trireduce/csv.hpp"
#include "trireduce/dynamics.hpp"
#include "trireduce/expression.hpp"
#include "trireduce/hamiltonian.hpp"

namespace {

using namespace trireduce;

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigFailure = 2, kNumericalFailure = 3, kIoFailure = 4 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("trireduce");
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("TRIREDUCE_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    logger->set_level(spdlog::level::err);
  } else if (level == "debug") {
    logger->set_level(spdlog::level::debug);
  } else {
    logger->set_level(spdlog::level::info);
    if (level != "info") logger->warn("unknown TRIREDUCE_LOG value '{}', using info", level);
  }
  spdlog::set_default_logger(logger);
}

// Writes to `path` when given, otherwise to standard output.
template <typename Writer>
void emit(const std::optional<std::string>& path, Writer&& write) {
  if (!path) {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + *path + "'");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing output file '" + *path + "'");
  spdlog::info("wrote {}", *path);
}

void warn_net_momentum(const RunConfig& cfg) {
  Vec3 P = Vec3::Zero();
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    P += cfg.masses[i] * cfg.initial.v[i];
    scale += cfg.masses[i] * cfg.initial.v[i].norm();
  }
  if (P.norm() > 1e-12 * std::max(1.0, scale)) {
    spdlog::warn("initial total momentum is {:.3g}; E_total includes center-of-mass motion, "
                 "H_reduced does not", P.norm());
  }
}

int cmd_simulate(const RunConfig& cfg, const std::optional<std::string>& out) {
  warn_net_momentum(cfg);
  spdlog::debug("integrating {} steps, dt = {}", cfg.integrator.steps, cfg.integrator.dt);
  const Trajectory traj = integrate(cfg.masses, cfg.initial, cfg.potential, cfg.integrator,
                                    cfg.thresholds);
  const auto path = out ? out : cfg.output.trajectory;
  emit(path, [&](std::ostream& os) { write_trajectory_csv(os, traj); });

  const ConservationReport rep = conservation_report(traj, cfg.thresholds.band);
  // Keep standard output pure CSV when the trajectory went there.
  std::ostream& summary = path ? std::cout : std::cerr;
  summary << fmt::format(
      "samples: {}\n"
      "max_rel_energy_drift: {:.6e}\n"
      "max_angular_momentum_drift: {:.6e}\n"
      "max_rel_angular_momentum_norm_drift: {:.6e}\n"
      "max_H_minus_E_outside_band: {:.6e}\n"
      "max_H_minus_E_inside_band: {:.6e}\n"
      "samples_inside_band: {}\n"
      "samples_undefined: {}\n",
      traj.samples.size(), rep.max_rel_energy_drift, rep.max_angular_momentum_drift,
      rep.max_rel_angular_momentum_norm_drift, rep.max_H_minus_E_outside_band,
      rep.max_H_minus_E_inside_band, rep.samples_inside_band, rep.samples_undefined);
  return kOk;
}

int cmd_evaluate(const RunConfig& cfg, const std::optional<std::string>& out) {
  warn_net_momentum(cfg);
  const ReducedEvaluation ev = evaluate_reduced(cfg.masses, cfg.initial, cfg.potential,
                                                cfg.thresholds);
  if (ev.conditioning_warning) {
    spdlog::warn("sin(phi) = {:.3e} is inside the collinear band; the inertia inverse is "
                 "ill-conditioned", ev.sin_phi);
  }
  if (ev.branch == Branch::Collinear) {
    spdlog::debug("alignment residual {:.3e}, collinear residual {:.3e}", ev.alignment_residual,
                  ev.collinear_residual);
    if (std::abs(ev.collinear_residual) > 1e-8 * std::max(1.0, std::abs(ev.H))) {
      spdlog::warn("transverse velocities leave the plane normal to L; the collinear chart "
                   "misses {:.6e} of kinetic energy", ev.collinear_residual);
    }
  }
  const double E = total_energy(cfg.masses, cfg.initial, cfg.potential);
  const double L = spatial_angular_momentum(jacobi_from_cartesian(cfg.masses, cfg.initial)).norm();
  emit(out ? out : cfg.output.evaluation,
       [&](std::ostream& os) { write_evaluation_csv(os, ev, E, L); });
  return kOk;
}

int cmd_collinear_report(const RunConfig& cfg, const std::optional<std::string>& out) {
  const Trajectory traj = integrate(cfg.masses, cfg.initial, cfg.potential, cfg.integrator,
                                    cfg.thresholds);
  const auto passages =
      detect_collinear_passages(traj, cfg.potential, cfg.passage_threshold, cfg.thresholds);
  spdlog::info("{} collinear passage(s) below sin(phi) = {}", passages.size(),
               cfg.passage_threshold);
  emit(out ? out : cfg.output.passages,
       [&](std::ostream& os) { write_passages_csv(os, passages); });
  return kOk;
}

int cmd_check(std::uint64_t seed) {
  double scale = 1.0;
  if (const char* env = std::getenv("TRIREDUCE_CHECK_TOLERANCE_SCALE")) {
    try {
      std::size_t used = 0;
      scale = std::stod(env, &used);
      if (used != std::string(env).size() || !(scale >= 0.0)) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError("TRIREDUCE_CHECK_TOLERANCE_SCALE", "expected a nonnegative number");
    }
    spdlog::info("tolerance scale {}", scale);
  }
  spdlog::debug("seed {}", seed);
  bool ok = true;
  for (const SuiteResult& r : run_checks(seed, scale)) {
    std::cout << fmt::format("{} {} worst={:.3e} tolerance={:.3e}\n", r.passed ? "PASS" : "FAIL",
                             r.name, r.worst, r.tolerance);
    ok = ok && r.passed;
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Reduced three-body Hamiltonian: simulation, evaluation and checks"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<std::string> out_path;
  std::uint64_t seed = kDefaultCheckSeed;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "output file (default: config output path or stdout)");
    sub->add_option("--seed", seed, "seed for the property suites");
  };
  CLI::App* simulate = app.add_subcommand("simulate", "integrate and write the trajectory CSV");
  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate the reduced Hamiltonian once");
  CLI::App* report = app.add_subcommand("collinear-report", "list collinear passages");
  CLI::App* check = app.add_subcommand("check", "run the invariant suites");
  add_common(simulate, true);
  add_common(evaluate, true);
  add_common(report, true);
  add_common(check, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (check->parsed()) {
      if (!config_path.empty()) load_config(config_path);
      return cmd_check(seed);
    }
    const RunConfig cfg = load_config(config_path);
    if (simulate->parsed()) return cmd_simulate(cfg, out_path);
    if (evaluate->parsed()) return cmd_evaluate(cfg, out_path);
    return cmd_collinear_report(cfg, out_path);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfigFailure;
  } catch (const ParseError& e) {
    spdlog::error("{}: {}", e.kind(), e.what());
    return kConfigFailure;
  } catch (const IoError& e) {
    spdlog::error("I/O error: {}", e.what());
    return kIoFailure;
  } catch (const Error& e) {
    spdlog::error("{}: {}", e.kind(), e.what());
    return kNumericalFailure;
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return kNumericalFailure;
  }
}
