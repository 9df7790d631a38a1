#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdperm/cli.hpp"
#include "hdperm/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Permutation tests for linear models with high-dimensional nuisance"};
  app.require_subcommand(1);

  // ---- test ----
  hdperm::RunConfig config;
  std::string method_name = "flhd-semi";
  std::string format_name = "json";
  std::string stat_name = "partial";
  std::string psi_name = "max";
  bool flip = false, permute = false;
  double lambda = -1.0, lambda_x = -1.0;
  std::uint64_t seed = 1;
  int w = 20000;

  auto* test = app.add_subcommand("test", "Run one permutation test on a CSV file");
  test->add_option("input", config.input_path, "CSV file with header row")->required();
  test->add_option("--y", config.roles.outcome, "outcome column name")->required();
  test->add_option("--x", config.roles.interest,
                   "interest column name(s); all other columns are nuisance")
      ->required();
  test->add_option("--method", method_name,
                   "fl | kennedy | flhd-partial | flhd-semi | dr | flhd-npc");
  test->add_option("--w", w, "number of transformations (identity included)");
  test->add_option("--seed", seed, "plan seed");
  test->add_option("--lambda", lambda, "fixed ridge penalty (default: cross-validated)");
  test->add_option("--lambda-x", lambda_x, "fixed ridge penalty for the X side");
  test->add_flag("--flip", flip, "use sign-flips");
  test->add_flag("--permute", permute, "use permutations (default)");
  test->add_flag("--standardize", config.standardize, "scale columns to unit sd");
  test->add_option("--format", format_name, "json | tsv");
  test->add_option("--stat", stat_name, "partial | semi (classical Freedman-Lane only)");
  test->add_option("--psi", psi_name, "max | mean (NPC combining function)");

  // ---- simulate ----
  hdperm::SimulateConfig sim;
  std::string mode_name = "level";
  std::vector<std::string> override_args;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario preset or scenario file");
  simulate->add_option("scenario", sim.preset_or_file, "preset name or scenario file")
      ->required();
  simulate->add_option("--mode", mode_name, "level | power");
  simulate->add_option("--set", override_args, "override as key=value (repeatable)");
  // Common overrides as first-class flags.
  std::string ov_reps, ov_w, ov_seed, ov_beta, ov_alphas, ov_methods, ov_kind;
  simulate->add_option("--reps", ov_reps, "repetition count");
  simulate->add_option("--w", ov_w, "transformations per test");
  simulate->add_option("--seed", ov_seed, "master seed");
  simulate->add_option("--beta", ov_beta, "coefficient(s) of interest, comma-separated");
  simulate->add_option("--alpha", ov_alphas, "cutoff list, comma-separated");
  simulate->add_option("--methods", ov_methods, "method list, comma-separated");
  bool sim_flip = false;
  simulate->add_flag("--flip", sim_flip, "use sign-flips");

  auto* presets = app.add_subcommand("presets", "List scenario presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test) {
      config.spec.method = hdperm::method_from_string(method_name);
      config.spec.w = w;
      config.spec.seed = seed;
      config.spec.kind =
          flip && !permute ? hdperm::TransformKind::SignFlip : hdperm::TransformKind::Permutation;
      if (lambda >= 0.0) {
        config.spec.penalty.mode = hdperm::PenaltyPolicy::Mode::Fixed;
        config.spec.penalty.lambda = lambda;
        config.spec.penalty.lambda_x = lambda_x >= 0.0 ? lambda_x : lambda;
      }
      config.spec.classic_stat = stat_name == "semi" ? hdperm::StatisticKind::SemiPartial
                                                     : hdperm::StatisticKind::Partial;
      config.spec.psi = psi_name == "mean" ? hdperm::Psi::MeanAbs : hdperm::Psi::MaxAbs;
      config.format =
          format_name == "tsv" ? hdperm::OutputFormat::Tsv : hdperm::OutputFormat::Json;
      return hdperm::cmd_test(config, std::cout, std::cerr);
    }
    if (*simulate) {
      sim.mode = mode_name == "power" ? hdperm::ScenarioMode::Power : hdperm::ScenarioMode::Level;
      for (const auto& arg : override_args) {
        auto eq = arg.find('=');
        if (eq == std::string::npos) {
          std::cerr << "override must be key=value: " << arg << '\n';
          return 2;
        }
        sim.overrides[arg.substr(0, eq)] = arg.substr(eq + 1);
      }
      if (!ov_reps.empty()) sim.overrides["reps"] = ov_reps;
      if (!ov_w.empty()) sim.overrides["w"] = ov_w;
      if (!ov_seed.empty()) sim.overrides["seed"] = ov_seed;
      if (!ov_beta.empty()) sim.overrides["beta"] = ov_beta;
      if (!ov_alphas.empty()) sim.overrides["alphas"] = ov_alphas;
      if (!ov_methods.empty()) sim.overrides["methods"] = ov_methods;
      if (sim_flip) sim.overrides["kind"] = "flip";
      return hdperm::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*presets) return hdperm::cmd_presets(std::cout);
  } catch (const hdperm::ZeroVariance& e) {
    std::cerr << "degenerate statistic: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
