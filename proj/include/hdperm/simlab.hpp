#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdperm/methods.hpp"
#include "hdperm/rng.hpp"

namespace hdperm {

enum class ErrorLaw { Gaussian, CubedExponential, Heteroscedastic };

ErrorLaw error_law_from_string(const std::string& name);
const char* to_string(ErrorLaw law);

/// Covariate design: one multinormal block with homogeneous correlation rho,
/// or independent blocks with homogeneous within-block correlation.
struct Design {
  enum class Kind { Homogeneous, Clusters };
  Kind kind = Kind::Homogeneous;
  double rho = 0.0;                // Homogeneous
  std::vector<int> cluster_sizes;  // Clusters; must sum to d + q
  double rho_within = 0.0;         // Clusters
};

/// Full description of a synthetic level/power experiment.
struct Scenario {
  std::string name;
  int n = 30;
  int d = 1;
  int q = 60;
  Eigen::VectorXd beta;  // length d
  Eigen::VectorXd gamma; // length q; first entry mirrors the zero intercept
  Design design;
  ErrorLaw error_law = ErrorLaw::Gaussian;
  int reps = 1000;
  int w = 1000;
  std::vector<double> alphas{0.05, 0.01};
  std::vector<MethodSpec> methods;
  std::uint64_t master_seed = 1;
};

struct RejectionTable {
  enum class Mode { Level, Power };
  Mode mode = Mode::Level;
  std::vector<std::string> method_names;
  std::vector<double> alphas;
  // rates[m][a], ses[m][a]
  std::vector<std::vector<double>> rates;
  std::vector<std::vector<double>> ses;
  int reps = 0;
  int failed_reps = 0;
  std::vector<std::string> failure_messages; // first few, deduplicated

  double rate(int method, int alpha) const { return rates[method][alpha]; }
  double se(int method, int alpha) const { return ses[method][alpha]; }
};

/// n x p matrix of covariates with mean 0, variance 1 and the requested
/// correlation structure (one-factor construction per row).
Eigen::MatrixXd gen_covariates(int n, int p_total, const Design& design, SimRng& rng);

/// Error vector with unit variance (Gaussian and cubed-exponential laws) or
/// entrywise sd |x_i| for the heteroscedastic law.
Eigen::VectorXd gen_errors(int n, ErrorLaw law, const Eigen::VectorXd& x_col, SimRng& rng);

/// Runs the scenario: per repetition, fresh covariates and errors, centered
/// data, every method evaluated, rejection indicators at each alpha.
/// Deterministic in master_seed; repetitions run in parallel.
RejectionTable run_scenario(const Scenario& s);

enum class ScenarioMode { Level, Power };

/// Named scenario presets mirroring the simulation battery. Preset names
/// table2..table9_* index the presets themselves; see preset_registry_note()
/// for how they line up with the source tables.
Scenario preset(const std::string& name, ScenarioMode mode = ScenarioMode::Level);
std::vector<std::string> preset_names();
std::string preset_registry_note();

/// Serializes a RejectionTable as TSV: rows = alpha, one rate and SE column
/// per method.
std::string to_tsv(const RejectionTable& table);

} // namespace hdperm
