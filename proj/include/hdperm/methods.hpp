#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdperm/dataset.hpp"
#include "hdperm/kernels.hpp"
#include "hdperm/perm.hpp"
#include "hdperm/ridge.hpp"

namespace hdperm {

enum class Method {
  FlClassic,
  Kennedy,
  FlhdPartial,
  FlhdSemipartial,
  DoubleResid,
  FlhdNpc,
};

Method method_from_string(const std::string& name);
const char* to_string(Method m);

enum class Sidedness { One, Two };

enum class Psi { MaxAbs, MeanAbs };

CombiningFunction psi_function(Psi psi);

/// Penalty choice: cross-validated on the unpermuted model, or fixed values.
struct PenaltyPolicy {
  enum class Mode { AutoCv, Fixed };
  Mode mode = Mode::AutoCv;
  double lambda = 0.0;   // Fixed only
  double lambda_x = 0.0; // Fixed only, methods that residualize X
  int folds = 10;
  GridSpec grid;
};

struct MethodSpec {
  Method method = Method::FlhdSemipartial;
  int w = 20000;
  std::uint64_t seed = 0;
  TransformKind kind = TransformKind::Permutation;
  PenaltyPolicy penalty;
  Psi psi = Psi::MaxAbs;              // NPC only
  int col = 0;                        // tested column, scalar methods
  StatisticKind classic_stat = StatisticKind::Partial; // FlClassic variant
};

struct TestOutcome {
  std::vector<double> statistics; // T_1..T_w (combined Psi values for NPC)
  double p_value = 1.0;
  Sidedness sidedness = Sidedness::Two;
  std::string method;
  std::optional<double> lambda;
  std::optional<double> lambda_x;
  std::uint64_t plan_seed = 0;
  StatisticKind statistic_kind = StatisticKind::Partial;
};

/// Classical Freedman-Lane: permute least-squares residuals, refit, correlate.
/// Requires q < n with full-rank Z.
TestOutcome freedman_lane(const Dataset& data, const MethodSpec& spec);
TestOutcome freedman_lane(const Dataset& data, const MethodSpec& spec,
                          const TransformationPlan& plan);

/// Kennedy scheme: correlate permuted y-residuals with the x-residuals.
TestOutcome kennedy(const Dataset& data, const MethodSpec& spec);
TestOutcome kennedy(const Dataset& data, const MethodSpec& spec,
                    const TransformationPlan& plan);

/// Freedman-Lane HD: ridge residualization with the penalty fixed from the
/// unpermuted model; partial or semi-partial statistic per spec.method.
TestOutcome freedman_lane_hd(const Dataset& data, const MethodSpec& spec);
TestOutcome freedman_lane_hd(const Dataset& data, const MethodSpec& spec,
                             const TransformationPlan& plan);

/// Double Residualization: ridge-residualize both sides, permute the
/// y-residuals keeping the fitted part in the model.
TestOutcome double_residualization(const Dataset& data, const MethodSpec& spec);
TestOutcome double_residualization(const Dataset& data, const MethodSpec& spec,
                                   const TransformationPlan& plan);

/// Multi-column extension of Freedman-Lane HD (semi-partial statistics): one
/// residual application per transformation, d correlations, combined via psi.
TestOutcome flhd_npc(const Dataset& data, const MethodSpec& spec);
TestOutcome flhd_npc(const Dataset& data, const MethodSpec& spec,
                     const TransformationPlan& plan);

/// Dispatch on spec.method.
TestOutcome run_test(const Dataset& data, const MethodSpec& spec);
TestOutcome run_test(const Dataset& data, const MethodSpec& spec,
                     const TransformationPlan& plan);

} // namespace hdperm
