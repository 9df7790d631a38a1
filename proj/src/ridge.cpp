#include "hdperm/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdperm/errors.hpp"
#include "hdperm/rng.hpp"

namespace hdperm {

RidgeProjector::RidgeProjector(Eigen::MatrixXd u, Eigen::VectorXd s, int q)
    : u_(std::move(u)), s_(std::move(s)), q_(q) {}

RidgeProjector RidgeProjector::decompose(const Eigen::MatrixXd& Z) {
  if (!Z.allFinite()) throw NonFinite("nuisance matrix contains a non-finite entry");
  const int n = static_cast<int>(Z.rows());
  const int q = static_cast<int>(Z.cols());

  Eigen::BDCSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = 1e-12 * std::max(n, q) * smax;

  int r = 0;
  while (r < sv.size() && sv(r) > tol && sv(r) > 0.0) ++r;
  if (r == 0) throw AllZeroNuisance();

  return RidgeProjector(svd.matrixU().leftCols(r), sv.head(r), q);
}

Eigen::VectorXd RidgeProjector::shrinkage_factors(double lambda) const {
  Eigen::ArrayXd s2 = s_.array().square();
  return (s2 / (s2 + lambda)).matrix();
}

Eigen::VectorXd RidgeProjector::hat(double lambda, const Eigen::VectorXd& v) const {
  if (v.size() != u_.rows())
    throw LengthMismatch("vector length does not match the nuisance row count");
  if (lambda < 0.0) throw Error("penalty must be nonnegative");
  if (lambda == 0.0 && !ols_allowed()) throw SingularAtZero();

  Eigen::VectorXd coef = u_.transpose() * v;
  coef.array() *= shrinkage_factors(lambda).array();
  return u_ * coef;
}

Eigen::VectorXd RidgeProjector::residual(double lambda, const Eigen::VectorXd& v) const {
  return v - hat(lambda, v);
}

namespace {

std::vector<double> log_grid(const GridSpec& spec) {
  if (spec.count < 1 || spec.lo <= 0.0 || spec.hi <= spec.lo)
    throw Error("penalty grid requires 0 < lo < hi and count >= 1");
  std::vector<double> grid(spec.count);
  if (spec.count == 1) {
    grid[0] = spec.lo;
    return grid;
  }
  const double ratio = std::log(spec.hi / spec.lo) / (spec.count - 1);
  for (int i = 0; i < spec.count; ++i) grid[i] = spec.lo * std::exp(ratio * i);
  return grid;
}

} // namespace

PenaltySelection select_penalty(const Eigen::MatrixXd& Z, const Eigen::VectorXd& target,
                                int folds, const GridSpec& grid_spec, std::uint64_t seed) {
  const int n = static_cast<int>(Z.rows());
  if (target.size() != n) throw LengthMismatch("target length does not match Z rows");
  if (folds < 2) throw DegenerateFolds("need at least two folds");
  if (n < folds) throw DegenerateFolds("more folds than observations leaves a fold empty");

  PenaltySelection sel;
  sel.grid = log_grid(grid_spec);
  sel.seed = seed;

  // Seeded shuffle split into K near-equal contiguous blocks.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 eng(mix_seed(seed, 0));
  std::shuffle(order.begin(), order.end(), eng);

  sel.fold_assignment.assign(n, 0);
  std::vector<std::vector<int>> fold_rows(folds);
  for (int i = 0; i < n; ++i) {
    int f = static_cast<int>((static_cast<long long>(i) * folds) / n);
    sel.fold_assignment[order[i]] = f + 1;
    fold_rows[f].push_back(order[i]);
  }
  for (const auto& rows : fold_rows)
    if (rows.empty()) throw DegenerateFolds("empty cross-validation fold");

  const int ncand = static_cast<int>(sel.grid.size());
  sel.cv_errors.assign(ncand, 0.0);

  for (int f = 0; f < folds; ++f) {
    std::vector<int> train;
    train.reserve(n - fold_rows[f].size());
    for (int g = 0; g < folds; ++g)
      if (g != f) train.insert(train.end(), fold_rows[g].begin(), fold_rows[g].end());
    const auto& test = fold_rows[f];
    const int m = static_cast<int>(train.size());
    const int t = static_cast<int>(test.size());

    Eigen::MatrixXd Ztr(m, Z.cols());
    Eigen::VectorXd ytr(m);
    for (int i = 0; i < m; ++i) {
      Ztr.row(i) = Z.row(train[i]);
      ytr(i) = target(train[i]);
    }
    // Intercept via training-mean centering.
    Eigen::RowVectorXd zbar = Ztr.colwise().mean();
    Ztr.rowwise() -= zbar;
    const double ybar = ytr.mean();
    ytr.array() -= ybar;

    // Dual form: predictions depend on (Ztr Ztr' + m*lambda I)^{-1} y only,
    // so one eigendecomposition of the m x m Gram matrix serves every
    // candidate.
    Eigen::MatrixXd gram = Ztr * Ztr.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const Eigen::VectorXd& evals = eig.eigenvalues();
    const Eigen::MatrixXd& evecs = eig.eigenvectors();
    Eigen::VectorXd ycoef = evecs.transpose() * ytr;

    Eigen::MatrixXd Zte(t, Z.cols());
    Eigen::VectorXd yte(t);
    for (int i = 0; i < t; ++i) {
      Zte.row(i) = Z.row(test[i]);
      yte(i) = target(test[i]);
    }
    Zte.rowwise() -= zbar;
    Eigen::MatrixXd cross = (Zte * Ztr.transpose()) * evecs; // t x m

    for (int c = 0; c < ncand; ++c) {
      const double lam_eff = m * sel.grid[c]; // per-observation penalty convention
      Eigen::VectorXd a = ycoef.array() / (evals.array() + lam_eff).max(1e-300);
      Eigen::VectorXd pred = cross * a;
      pred.array() += ybar;
      sel.cv_errors[c] += (yte - pred).squaredNorm() / t;
    }
  }
  for (auto& e : sel.cv_errors) e /= folds;

  int best = 0;
  for (int c = 1; c < ncand; ++c)
    if (sel.cv_errors[c] < sel.cv_errors[best]) best = c; // ties keep the smaller penalty
  sel.chosen = n * sel.grid[best];
  return sel;
}

} // namespace hdperm
