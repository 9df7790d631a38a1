#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "hdperm/errors.hpp"
#include "hdperm/perm.hpp"

using namespace hdperm;

TEST_CASE("sample_plan: w = 1 is the identity-only plan") {
  auto plan = TransformationPlan::sample(5, 1, TransformKind::Permutation, 3);
  CHECK(plan.size() == 1);
  CHECK(plan.at(0).is_identity());
}

TEST_CASE("sample_plan: uniform over S_3 against exhaustive enumeration") {
  const int w = 60000;
  auto plan = TransformationPlan::sample(3, w, TransformKind::Permutation, 12345);
  auto all = exhaustive_permutation_plan(3);
  REQUIRE(all.size() == 6);

  std::map<std::vector<std::int32_t>, int> counts;
  for (int j = 0; j < 6; ++j) counts[all.at(j).perm] = 0;
  for (int j = 1; j < w; ++j) counts.at(plan.at(j).perm)++;

  const double p = 1.0 / 6.0;
  const double expected = (w - 1) * p;
  const double band = 3.0 * std::sqrt((w - 1) * p * (1 - p));
  for (const auto& [perm, count] : counts) CHECK(std::abs(count - expected) <= band);
}

TEST_CASE("sample_plan: deterministic and order-independent") {
  auto a = TransformationPlan::sample(10, 100, TransformKind::Permutation, 77);
  auto b = TransformationPlan::sample(10, 100, TransformKind::Permutation, 77);
  // Request in different orders; entries depend only on (seed, index).
  CHECK(a.at(42).perm == b.at(42).perm);
  CHECK(a.at(7).perm == b.at(7).perm);
  CHECK(a.at(99).perm == b.at(99).perm);
  auto c = TransformationPlan::sample(10, 100, TransformKind::Permutation, 78);
  CHECK(c.at(42).perm != a.at(42).perm);
}

TEST_CASE("sample_plan: sign-flip entries are fair coins") {
  const int w = 4000;
  auto plan = TransformationPlan::sample(8, w, TransformKind::SignFlip, 5);
  CHECK(plan.at(0).is_identity());
  long plus = 0, total = 0;
  for (int j = 1; j < w; ++j) {
    for (std::int8_t s : plan.at(j).signs) {
      REQUIRE((s == 1 || s == -1));
      plus += s == 1;
      ++total;
    }
  }
  const double band = 3.0 * std::sqrt(total * 0.25);
  CHECK(std::abs(plus - total / 2.0) <= band);
}

TEST_CASE("apply: explicit relabelings") {
  Eigen::VectorXd v(3);
  v << 1, 2, 3;

  Transformation id = Transformation::identity(3, TransformKind::Permutation);
  CHECK(id.apply(v) == v);

  Transformation rot;
  rot.kind = TransformKind::Permutation;
  rot.perm = {1, 2, 0};
  Eigen::VectorXd r = rot.apply(v);
  CHECK(r(0) == 2);
  CHECK(r(1) == 3);
  CHECK(r(2) == 1);

  Transformation flip;
  flip.kind = TransformKind::SignFlip;
  flip.signs = {-1, 1, -1};
  Eigen::VectorXd f = flip.apply(v);
  CHECK(f(0) == -1);
  CHECK(f(1) == 2);
  CHECK(f(2) == -3);

  Eigen::VectorXd wrong(2);
  CHECK_THROWS_AS(rot.apply(wrong), LengthMismatch);
}

TEST_CASE("p_one_sided: direct counts") {
  CHECK(p_one_sided({3, 1, 2}) == doctest::Approx(1.0 / 3));
  CHECK(p_one_sided({5, 5, 5, 5}) == doctest::Approx(1.0));
  CHECK(p_one_sided({2.0, 1.0, 3.0, 2.0}) == doctest::Approx(3.0 / 4));
}

TEST_CASE("p_two_sided: direct counts and clamp") {
  CHECK(p_two_sided({3, 1, 2, 0}) == doctest::Approx(0.5));
  CHECK(p_two_sided({5, 5, 5}) == doctest::Approx(1.0));
  CHECK(p_two_sided({2.0, 1.0, 3.0, 2.0}) == doctest::Approx(1.0)); // 1.5 clamped
}

TEST_CASE("p-values: tie monotonicity in T_1") {
  std::mt19937_64 eng(9);
  std::normal_distribution<double> dist;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> T(25);
    for (auto& x : T) x = dist(eng);
    double base = p_one_sided(T);
    T[0] += std::abs(dist(eng));
    CHECK(p_one_sided(T) <= base);
  }
}

TEST_CASE("p-values: Monte Carlo exactness for i.i.d. continuous statistics") {
  const int w = 20;
  const int reps = 4000;
  std::mt19937_64 eng(2024);
  std::normal_distribution<double> dist;

  std::vector<double> cutoffs_one = {1.0 / w, 3.0 / w, 10.0 / w};
  std::vector<double> cutoffs_two = {2.0 / w, 6.0 / w, 14.0 / w};
  std::vector<int> hits_one(cutoffs_one.size(), 0), hits_two(cutoffs_two.size(), 0);

  for (int r = 0; r < reps; ++r) {
    std::vector<double> T(w);
    for (auto& x : T) x = dist(eng);
    double p1 = p_one_sided(T);
    double p2 = p_two_sided(T);
    for (std::size_t c = 0; c < cutoffs_one.size(); ++c) hits_one[c] += p1 <= cutoffs_one[c];
    for (std::size_t c = 0; c < cutoffs_two.size(); ++c) hits_two[c] += p2 <= cutoffs_two[c];
  }
  auto check_band = [&](double cutoff, int hits) {
    double band = 3.0 * std::sqrt(reps * cutoff * (1 - cutoff));
    CHECK(std::abs(hits - reps * cutoff) <= band);
  };
  for (std::size_t c = 0; c < cutoffs_one.size(); ++c) check_band(cutoffs_one[c], hits_one[c]);
  for (std::size_t c = 0; c < cutoffs_two.size(); ++c) check_band(cutoffs_two[c], hits_two[c]);
}

TEST_CASE("combining functions") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  CHECK(combining_max_abs(zero) == 0.0);
  CHECK(combining_mean_abs(zero) == 0.0);

  Eigen::VectorXd t(2);
  t << -3, 2;
  CHECK(combining_max_abs(t) == doctest::Approx(3.0));
  CHECK(combining_mean_abs(t) == doctest::Approx(2.5));

  Eigen::VectorXd swapped(2);
  swapped << 2, -3;
  CHECK(combining_max_abs(swapped) == combining_max_abs(t));
  CHECK(combining_mean_abs(swapped) == combining_mean_abs(t));
}

TEST_CASE("npc_combine: scalar reduction and worked rows") {
  Eigen::MatrixXd col(3, 1);
  col << 3, 1, 2;
  CHECK(npc_combine(col, combining_max_abs) == doctest::Approx(1.0 / 3));

  Eigen::MatrixXd rows(3, 2);
  rows << 1, -5, 2, 2, 4, 0;
  CHECK(npc_combine(rows, combining_max_abs) == doctest::Approx(1.0 / 3)); // psi = (5,2,4)
  CHECK(npc_combine(rows, combining_mean_abs) == doctest::Approx(1.0 / 3)); // psi = (3,2,2)

  CHECK_THROWS_AS(npc_combine(Eigen::MatrixXd(0, 0), combining_max_abs), DimensionMismatch);
}

TEST_CASE("exhaustive_permutation_plan: starts at the identity, refuses huge n") {
  auto plan = exhaustive_permutation_plan(4);
  CHECK(plan.size() == 24);
  CHECK(plan.at(0).is_identity());
  CHECK_THROWS_AS(exhaustive_permutation_plan(12), Error);
}
