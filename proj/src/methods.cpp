#include "hdperm/methods.hpp"

#include <cmath>

#include "hdperm/errors.hpp"
#include "hdperm/parallel.hpp"
#include "hdperm/rng.hpp"

namespace hdperm {

Method method_from_string(const std::string& name) {
  if (name == "fl" || name == "freedman-lane") return Method::FlClassic;
  if (name == "kennedy") return Method::Kennedy;
  if (name == "flhd-partial" || name == "flh1") return Method::FlhdPartial;
  if (name == "flhd-semi" || name == "flh2") return Method::FlhdSemipartial;
  if (name == "dr" || name == "double-resid") return Method::DoubleResid;
  if (name == "flhd-npc" || name == "npc") return Method::FlhdNpc;
  throw Error("unknown method: " + name);
}

const char* to_string(Method m) {
  switch (m) {
    case Method::FlClassic: return "freedman-lane";
    case Method::Kennedy: return "kennedy";
    case Method::FlhdPartial: return "flhd-partial";
    case Method::FlhdSemipartial: return "flhd-semi";
    case Method::DoubleResid: return "dr";
    case Method::FlhdNpc: return "flhd-npc";
  }
  return "?";
}

CombiningFunction psi_function(Psi psi) {
  switch (psi) {
    case Psi::MaxAbs: return combining_max_abs;
    case Psi::MeanAbs: return combining_mean_abs;
  }
  return combining_max_abs;
}

namespace {

TransformationPlan default_plan(const Dataset& data, const MethodSpec& spec) {
  return TransformationPlan::sample(data.n(), spec.w, spec.kind, spec.seed);
}

// Penalty for the y-side CV (target regressed on Z alone), computed once for
// the unpermuted model.
double resolve_lambda(const Dataset& data, const MethodSpec& spec,
                      const Eigen::VectorXd& target, std::uint64_t stream) {
  if (spec.penalty.mode == PenaltyPolicy::Mode::Fixed)
    return stream == 0 ? spec.penalty.lambda : spec.penalty.lambda_x;
  const std::uint64_t cv_seed = mix_seed(spec.seed, 0xCAFEF00DULL + stream);
  const double chosen =
      select_penalty(data.Z, target, spec.penalty.folds, spec.penalty.grid, cv_seed).chosen;
  // The selected penalty is expressed per unit outcome variance; rescale by
  // the standard deviation of the target so that it applies to the raw scale.
  const Eigen::VectorXd centered = target.array() - target.mean();
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(target.size()));
  return chosen * sd;
}

std::vector<double> statistic_loop(const TransformationPlan& plan,
                                   const std::function<double(const Transformation&)>& stat) {
  std::vector<double> T(static_cast<std::size_t>(plan.size()));
  parallel_for(T.size(), [&](std::size_t j) { T[j] = stat(plan.at(static_cast<int>(j))); });
  return T;
}

} // namespace

TestOutcome freedman_lane(const Dataset& data, const MethodSpec& spec) {
  return freedman_lane(data, spec, default_plan(data, spec));
}

TestOutcome freedman_lane(const Dataset& data, const MethodSpec& spec,
                          const TransformationPlan& plan) {
  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  if (!proj.ols_allowed()) throw NotLowDimensional();
  if (spec.classic_stat != StatisticKind::Partial &&
      spec.classic_stat != StatisticKind::SemiPartial)
    throw Error("classical Freedman-Lane supports partial or semi-partial statistics");

  const Eigen::VectorXd xcol = data.X.col(spec.col);
  const Eigen::VectorXd ry = proj.residual(0.0, data.y);
  const Eigen::VectorXd hy = data.y - ry;
  const bool partial = spec.classic_stat == StatisticKind::Partial;
  const Eigen::VectorXd target = partial ? proj.residual(0.0, xcol) : xcol;

  std::vector<double> T = statistic_loop(plan, [&](const Transformation& t) {
    Eigen::VectorXd v = t.apply(ry) + hy;
    return pearson(proj.residual(0.0, v), target);
  });

  TestOutcome out;
  out.statistics = std::move(T);
  out.p_value = p_two_sided(out.statistics);
  out.sidedness = Sidedness::Two;
  out.method = to_string(Method::FlClassic);
  out.plan_seed = plan.seed();
  out.statistic_kind = spec.classic_stat;
  return out;
}

TestOutcome kennedy(const Dataset& data, const MethodSpec& spec) {
  return kennedy(data, spec, default_plan(data, spec));
}

TestOutcome kennedy(const Dataset& data, const MethodSpec& spec,
                    const TransformationPlan& plan) {
  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  if (!proj.ols_allowed()) throw NotLowDimensional();

  const Eigen::VectorXd ry = proj.residual(0.0, data.y);
  const Eigen::VectorXd rx = proj.residual(0.0, data.X.col(spec.col));

  std::vector<double> T = statistic_loop(
      plan, [&](const Transformation& t) { return pearson(t.apply(ry), rx); });

  TestOutcome out;
  out.statistics = std::move(T);
  out.p_value = p_two_sided(out.statistics);
  out.sidedness = Sidedness::Two;
  out.method = to_string(Method::Kennedy);
  out.plan_seed = plan.seed();
  out.statistic_kind = StatisticKind::Partial;
  return out;
}

TestOutcome freedman_lane_hd(const Dataset& data, const MethodSpec& spec) {
  return freedman_lane_hd(data, spec, default_plan(data, spec));
}

TestOutcome freedman_lane_hd(const Dataset& data, const MethodSpec& spec,
                             const TransformationPlan& plan) {
  const bool partial = spec.method == Method::FlhdPartial;
  if (!partial && spec.method != Method::FlhdSemipartial)
    throw Error("freedman_lane_hd expects an FLHD method spec");

  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  const Eigen::VectorXd xcol = data.X.col(spec.col);
  const double lambda = resolve_lambda(data, spec, data.y, 0);

  const Eigen::VectorXd ry = proj.residual(lambda, data.y);
  const Eigen::VectorXd hy = data.y - ry;

  TestOutcome out;
  Eigen::VectorXd target;
  if (partial) {
    const double lambda_x = resolve_lambda(data, spec, xcol, 1);
    target = proj.residual(lambda_x, xcol);
    out.lambda_x = lambda_x;
    out.statistic_kind = StatisticKind::GeneralizedPartial;
  } else {
    target = xcol;
    out.statistic_kind = StatisticKind::GeneralizedSemiPartial;
  }

  out.statistics = statistic_loop(plan, [&](const Transformation& t) {
    Eigen::VectorXd v = t.apply(ry) + hy;
    return pearson(proj.residual(lambda, v), target);
  });
  out.p_value = p_two_sided(out.statistics);
  out.sidedness = Sidedness::Two;
  out.method = to_string(spec.method);
  out.lambda = lambda;
  out.plan_seed = plan.seed();
  return out;
}

TestOutcome double_residualization(const Dataset& data, const MethodSpec& spec) {
  return double_residualization(data, spec, default_plan(data, spec));
}

TestOutcome double_residualization(const Dataset& data, const MethodSpec& spec,
                                   const TransformationPlan& plan) {
  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  const Eigen::VectorXd xcol = data.X.col(spec.col);
  const double lambda = resolve_lambda(data, spec, data.y, 0);
  const double lambda_x = resolve_lambda(data, spec, xcol, 1);

  const Eigen::VectorXd ry = proj.residual(lambda, data.y);
  const Eigen::VectorXd hy = data.y - ry;
  const Eigen::VectorXd rx = proj.residual(lambda_x, xcol);

  // No outer ridge residualization of the transformed outcome; the fitted
  // part H_lambda y stays in the model. The identity gives back y itself.
  std::vector<double> T = statistic_loop(plan, [&](const Transformation& t) {
    if (t.is_identity()) return pearson(data.y, rx);
    return pearson(t.apply(ry) + hy, rx);
  });

  TestOutcome out;
  out.statistics = std::move(T);
  out.p_value = p_two_sided(out.statistics);
  out.sidedness = Sidedness::Two;
  out.method = to_string(Method::DoubleResid);
  out.lambda = lambda;
  out.lambda_x = lambda_x;
  out.plan_seed = plan.seed();
  out.statistic_kind = StatisticKind::PlainPearson;
  return out;
}

TestOutcome flhd_npc(const Dataset& data, const MethodSpec& spec) {
  return flhd_npc(data, spec, default_plan(data, spec));
}

TestOutcome flhd_npc(const Dataset& data, const MethodSpec& spec,
                     const TransformationPlan& plan) {
  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  const double lambda = resolve_lambda(data, spec, data.y, 0);
  const Eigen::VectorXd ry = proj.residual(lambda, data.y);
  const Eigen::VectorXd hy = data.y - ry;
  const CombiningFunction psi = psi_function(spec.psi);

  const int d = data.d();
  Eigen::MatrixXd stats(plan.size(), d);
  parallel_for(static_cast<std::size_t>(plan.size()), [&](std::size_t j) {
    Eigen::VectorXd v = plan.at(static_cast<int>(j)).apply(ry) + hy;
    Eigen::VectorXd u = proj.residual(lambda, v);
    for (int l = 0; l < d; ++l)
      stats(static_cast<Eigen::Index>(j), l) = pearson(u, data.X.col(l));
  });

  TestOutcome out;
  out.statistics.resize(static_cast<std::size_t>(plan.size()));
  for (int j = 0; j < plan.size(); ++j)
    out.statistics[static_cast<std::size_t>(j)] = psi(stats.row(j).transpose());
  out.p_value = p_one_sided(out.statistics);
  out.sidedness = Sidedness::One;
  out.method = to_string(Method::FlhdNpc);
  out.lambda = lambda;
  out.plan_seed = plan.seed();
  out.statistic_kind = StatisticKind::GeneralizedSemiPartial;
  return out;
}

TestOutcome run_test(const Dataset& data, const MethodSpec& spec) {
  return run_test(data, spec, default_plan(data, spec));
}

TestOutcome run_test(const Dataset& data, const MethodSpec& spec,
                     const TransformationPlan& plan) {
  switch (spec.method) {
    case Method::FlClassic: return freedman_lane(data, spec, plan);
    case Method::Kennedy: return kennedy(data, spec, plan);
    case Method::FlhdPartial:
    case Method::FlhdSemipartial: return freedman_lane_hd(data, spec, plan);
    case Method::DoubleResid: return double_residualization(data, spec, plan);
    case Method::FlhdNpc: return flhd_npc(data, spec, plan);
  }
  throw Error("unhandled method");
}

} // namespace hdperm
