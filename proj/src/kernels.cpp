#include "hdperm/kernels.hpp"

#include <cmath>
#include <string>

#include "hdperm/errors.hpp"
#include "hdperm/ridge.hpp"

namespace hdperm {

const char* to_string(StatisticKind k) {
  switch (k) {
    case StatisticKind::Partial: return "partial";
    case StatisticKind::SemiPartial: return "semi-partial";
    case StatisticKind::GeneralizedPartial: return "generalized-partial";
    case StatisticKind::GeneralizedSemiPartial: return "generalized-semi-partial";
    case StatisticKind::PlainPearson: return "pearson";
  }
  return "?";
}

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double kahan_mean(const Eigen::VectorXd& v) {
  KahanSum s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s.add(v(i));
  return s.sum / static_cast<double>(v.size());
}

// Treats a centered vector whose root-mean-square is below 1e-12 of its raw
// magnitude as degenerate; exact residuals of in-span vectors land here even
// with rounding noise.
bool numerically_constant(double sumsq, double scale, Eigen::Index n) {
  double rms = std::sqrt(sumsq / static_cast<double>(n));
  return rms <= 1e-12 * std::max(scale, 1e-30);
}

// A residual vector that is vanishingly small relative to the vector it came
// from carries no usable signal: the original was (numerically) in span(Z).
void require_residual_signal(const Eigen::VectorXd& resid, const Eigen::VectorXd& source,
                             const char* what) {
  double r = resid.cwiseAbs().maxCoeff();
  double s = source.cwiseAbs().maxCoeff();
  if (r <= 1e-12 * std::max(s, 1e-30))
    throw ZeroVariance(std::string(what) + " lies in the span of the nuisance columns");
}

} // namespace

double pearson(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const Eigen::Index n = u.size();
  if (v.size() != n) throw LengthMismatch("pearson arguments differ in length");
  if (n < 3) throw Error("pearson requires n >= 3");

  const double mu = kahan_mean(u);
  const double mv = kahan_mean(v);
  KahanSum suv, suu, svv;
  double scale_u = 0.0, scale_v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = u(i) - mu;
    const double b = v(i) - mv;
    suv.add(a * b);
    suu.add(a * a);
    svv.add(b * b);
    scale_u = std::max(scale_u, std::abs(u(i)));
    scale_v = std::max(scale_v, std::abs(v(i)));
  }
  if (numerically_constant(suu.sum, scale_u, n))
    throw ZeroVariance("first pearson argument is constant after centering");
  if (numerically_constant(svv.sum, scale_v, n))
    throw ZeroVariance("second pearson argument is constant after centering");
  return suv.sum / std::sqrt(suu.sum * svv.sum);
}

double partial_cor(const Dataset& data, int col) {
  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  if (!proj.ols_allowed()) throw NotLowDimensional();
  Eigen::VectorXd ry = proj.residual(0.0, data.y);
  Eigen::VectorXd rx = proj.residual(0.0, data.X.col(col));
  require_residual_signal(ry, data.y, "outcome");
  require_residual_signal(rx, data.X.col(col), "interest column");
  return pearson(ry, rx);
}

double semi_partial_cor(const Dataset& data, int col) {
  RidgeProjector proj = RidgeProjector::decompose(data.Z);
  if (!proj.ols_allowed()) throw NotLowDimensional();
  Eigen::VectorXd ry = proj.residual(0.0, data.y);
  require_residual_signal(ry, data.y, "outcome");
  return pearson(ry, data.X.col(col));
}

double generalized_partial_cor(const Eigen::VectorXd& ry, const Eigen::VectorXd& rx) {
  return pearson(ry, rx);
}

double generalized_semi_partial_cor(const Eigen::VectorXd& ry, const Eigen::VectorXd& x) {
  return pearson(ry, x);
}

} // namespace hdperm
