#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hdperm/errors.hpp"
#include "hdperm/ridge.hpp"
#include "hdperm/rng.hpp"
#include "oracle.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace hdperm;

namespace {

MatrixXd random_matrix(int n, int q, std::uint64_t seed) {
  SimRng rng(seed);
  MatrixXd m(n, q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = rng.normal();
  return m;
}

} // namespace

TEST_CASE("decompose: 2x1 ones column has closed-form SVD") {
  MatrixXd Z = MatrixXd::Ones(2, 1);
  auto proj = RidgeProjector::decompose(Z);
  REQUIRE(proj.rank() == 1);
  CHECK(proj.singular_values()(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(proj.left_vectors()(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(proj.left_vectors()(0, 0) == doctest::Approx(proj.left_vectors()(1, 0)));
}

TEST_CASE("decompose: identity nuisance") {
  auto proj = RidgeProjector::decompose(MatrixXd::Identity(3, 3));
  CHECK(proj.rank() == 3);
  for (int i = 0; i < 3; ++i) CHECK(proj.singular_values()(i) == doctest::Approx(1.0));
  CHECK(proj.ols_allowed() == false); // q == n
}

TEST_CASE("decompose: wide Gaussian matrix matches a dense SVD oracle") {
  MatrixXd Z = random_matrix(5, 50, 42);
  auto proj = RidgeProjector::decompose(Z);
  REQUIRE(proj.rank() == 5);

  Eigen::JacobiSVD<MatrixXd> dense(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (int i = 0; i < 5; ++i)
    CHECK(proj.singular_values()(i) == doctest::Approx(dense.singularValues()(i)).epsilon(1e-10));
  // Reconstruction through the orthonormal basis: U U' Z == Z for full row rank.
  MatrixXd recon = proj.left_vectors() * (proj.left_vectors().transpose() * Z);
  CHECK((recon - Z).norm() < 1e-10 * Z.norm());
  // U'U = I
  MatrixXd gram = proj.left_vectors().transpose() * proj.left_vectors();
  CHECK((gram - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("decompose: all-zero nuisance is an error") {
  CHECK_THROWS_AS(RidgeProjector::decompose(MatrixXd::Zero(4, 2)), AllZeroNuisance);
}

TEST_CASE("apply_hat: closed-form 2x1 examples") {
  auto proj = RidgeProjector::decompose(MatrixXd::Ones(2, 1));
  VectorXd v(2);
  v << 1, 3;

  VectorXd h0 = proj.hat(0.0, v);
  CHECK(h0(0) == doctest::Approx(2.0));
  CHECK(h0(1) == doctest::Approx(2.0));

  VectorXd h2 = proj.hat(2.0, v); // H_2 = (1/4) * [[1,1],[1,1]]
  CHECK(h2(0) == doctest::Approx(1.0));
  CHECK(h2(1) == doctest::Approx(1.0));

  VectorXd hbig = proj.hat(1e14, v);
  CHECK(std::abs(hbig(0)) < 1e-10);
  CHECK(std::abs(hbig(1)) < 1e-10);
}

TEST_CASE("apply_hat: lambda = 0 requires a low-dimensional full-rank nuisance") {
  CHECK_THROWS_AS(RidgeProjector::decompose(random_matrix(2, 3, 7)).hat(0.0, VectorXd::Zero(2)),
                  SingularAtZero);
  MatrixXd Z(4, 2); // duplicated column -> rank deficient
  Z.col(0) = random_matrix(4, 1, 8);
  Z.col(1) = 2.0 * Z.col(0);
  CHECK_THROWS_AS(RidgeProjector::decompose(Z).hat(0.0, VectorXd::Zero(4)), SingularAtZero);
}

TEST_CASE("apply_residual: complements apply_hat") {
  auto proj = RidgeProjector::decompose(MatrixXd::Ones(2, 1));
  VectorXd v(2);
  v << 1, 3;
  VectorXd r = proj.residual(2.0, v);
  CHECK(r(0) == doctest::Approx(0.0));
  CHECK(r(1) == doctest::Approx(2.0));
  VectorXd sum = proj.hat(2.0, v) + r;
  CHECK(sum(0) == v(0));
  CHECK(sum(1) == v(1));
}

TEST_CASE("apply_residual: exact projection and idempotence at lambda = 0") {
  MatrixXd Z = random_matrix(8, 3, 11);
  auto proj = RidgeProjector::decompose(Z);
  VectorXd in_span = Z * VectorXd::Ones(3);
  CHECK(proj.residual(0.0, in_span).norm() < 1e-12 * in_span.norm());

  VectorXd v = random_matrix(8, 1, 12);
  VectorXd once = proj.residual(0.0, v);
  VectorXd twice = proj.residual(0.0, once);
  CHECK((once - twice).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("hat operator: eigenvalue identity against dense assembly") {
  MatrixXd Z = random_matrix(10, 25, 13);
  auto proj = RidgeProjector::decompose(Z);
  for (double lambda : {0.1, 1.0, 10.0}) {
    MatrixXd H = oracle::dense_hat(Z, lambda);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(H);
    VectorXd expected = proj.shrinkage_factors(lambda); // descending in s, ascending eig order
    VectorXd got = eig.eigenvalues().tail(proj.rank()).reverse();
    VectorXd exp_sorted = expected; // s_ sorted descending already
    for (int i = 0; i < proj.rank(); ++i)
      CHECK(std::abs(got(i) - exp_sorted(i)) < 1e-10);
    for (int i = 0; i < proj.rank(); ++i) {
      CHECK(exp_sorted(i) > 0.0);
      CHECK(exp_sorted(i) < 1.0);
    }
  }
}

TEST_CASE("hat operator: H - H^2 positive definite on the column space") {
  MatrixXd Z = random_matrix(10, 25, 17);
  auto proj = RidgeProjector::decompose(Z);
  SimRng rng(19);
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (int t = 0; t < 20; ++t) {
      VectorXd v(10);
      for (int i = 0; i < 10; ++i) v(i) = rng.normal();
      VectorXd hv = proj.hat(lambda, v);
      double quad = v.dot(hv) - hv.squaredNorm(); // v'(H - H^2)v
      CHECK(quad > 0.0);
    }
  }
}

TEST_CASE("hat operator: agrees with dense primal and dual forms") {
  SUBCASE("tall (q < n)") {
    MatrixXd Z = random_matrix(12, 4, 23);
    auto proj = RidgeProjector::decompose(Z);
    VectorXd v = random_matrix(12, 1, 24);
    for (double lambda : {0.0, 0.5, 7.0}) {
      VectorXd dense = oracle::dense_hat(Z, lambda) * v;
      VectorXd fast = proj.hat(lambda, v);
      CHECK((dense - fast).norm() < 1e-8 * std::max(1.0, dense.norm()));
    }
  }
  SUBCASE("wide (q >= n), dual n x n form") {
    MatrixXd Z = random_matrix(6, 20, 25);
    auto proj = RidgeProjector::decompose(Z);
    VectorXd v = random_matrix(6, 1, 26);
    for (double lambda : {0.5, 7.0}) {
      MatrixXd K = Z * Z.transpose();
      MatrixXd A = K;
      A.diagonal().array() += lambda;
      VectorXd dual = K * A.fullPivLu().solve(v);
      VectorXd fast = proj.hat(lambda, v);
      CHECK((dual - fast).norm() < 1e-8 * std::max(1.0, dual.norm()));
    }
  }
}

TEST_CASE("select_penalty: noiseless in-span target picks the grid minimum") {
  MatrixXd Z = random_matrix(50, 3, 31);
  VectorXd coef(3);
  coef << 1.0, -2.0, 0.5;
  VectorXd target = Z * coef;
  auto sel = select_penalty(Z, target, 10, GridSpec{}, 5);
  CHECK(sel.chosen == doctest::Approx(50 * 1e-5).epsilon(1e-12));
}

TEST_CASE("select_penalty: pure-noise target drives the penalty up the grid") {
  MatrixXd Z = random_matrix(200, 5, 37);
  VectorXd target = random_matrix(200, 1, 38);
  auto sel = select_penalty(Z, target, 10, GridSpec{}, 5);
  // CV error is (stochastically) decreasing in lambda for noise targets.
  CHECK(sel.chosen > 200 * 1.0);
  CHECK(sel.cv_errors.front() > sel.cv_errors.back());
}

TEST_CASE("select_penalty: deterministic in the seed") {
  MatrixXd Z = random_matrix(30, 40, 41);
  VectorXd target = random_matrix(30, 1, 43);
  auto a = select_penalty(Z, target, 10, GridSpec{}, 99);
  auto b = select_penalty(Z, target, 10, GridSpec{}, 99);
  CHECK(a == b);
  auto c = select_penalty(Z, target, 10, GridSpec{}, 100);
  CHECK(c.fold_assignment != a.fold_assignment);
}

TEST_CASE("select_penalty: fold assignment is balanced and complete") {
  MatrixXd Z = random_matrix(23, 4, 47);
  VectorXd target = random_matrix(23, 1, 48);
  const int K = 10;
  auto sel = select_penalty(Z, target, K, GridSpec{}, 7);
  std::vector<int> sizes(K, 0);
  for (int f : sel.fold_assignment) {
    REQUIRE(f >= 1);
    REQUIRE(f <= K);
    sizes[f - 1]++;
  }
  int lo = *std::min_element(sizes.begin(), sizes.end());
  int hi = *std::max_element(sizes.begin(), sizes.end());
  CHECK(lo >= 1);
  CHECK(hi - lo <= 1);
}

TEST_CASE("select_penalty: degenerate folds rejected") {
  MatrixXd Z = random_matrix(5, 2, 51);
  VectorXd target = random_matrix(5, 1, 52);
  CHECK_THROWS_AS(select_penalty(Z, target, 6, GridSpec{}, 1), DegenerateFolds);
  CHECK_THROWS_AS(select_penalty(Z, target, 1, GridSpec{}, 1), DegenerateFolds);
}
