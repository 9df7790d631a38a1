#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace hdperm {

enum class TransformKind { Permutation, SignFlip };

const char* to_string(TransformKind k);

/// One random transformation of an n-vector: either a relabeling
/// out[i] = v[perm[i]] or an entrywise sign flip.
struct Transformation {
  TransformKind kind = TransformKind::Permutation;
  std::vector<std::int32_t> perm; // Permutation only
  std::vector<std::int8_t> signs; // SignFlip only, entries in {-1,+1}

  static Transformation identity(int n, TransformKind kind);

  int size() const;
  bool is_identity() const;

  /// Throws LengthMismatch if v has the wrong length.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  void apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;
};

/// A seeded sequence of w transformations, the first always the identity.
/// Randomly sampled plans are a pure function of (n, w, kind, seed) and are
/// materialized lazily from counter-based streams, so requesting entries in
/// any order (or from any number of threads) yields the same plan.
class TransformationPlan {
public:
  static TransformationPlan sample(int n, int w, TransformKind kind, std::uint64_t seed);

  /// Wraps an explicit list (first entry must be the identity).
  static TransformationPlan from_list(TransformKind kind, std::vector<Transformation> list);

  int n() const { return n_; }
  int size() const { return w_; }
  TransformKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  /// j in [0, w); j = 0 is the identity.
  Transformation at(int j) const;

private:
  TransformationPlan() = default;

  int n_ = 0;
  int w_ = 0;
  TransformKind kind_ = TransformKind::Permutation;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const std::vector<Transformation>> explicit_list_;
};

/// All n! permutations in lexicographic order (identity first). Testing
/// oracle; refuses n! > 1e6.
TransformationPlan exhaustive_permutation_plan(int n);

/// Eq.-style Monte Carlo p-values: T[0] is the observed statistic and counts
/// itself, so the one-sided value is at least 1/w.
double p_one_sided(const std::vector<double>& T);

/// Two-sided doubling rule, clamped to 1.
double p_two_sided(const std::vector<double>& T);

using CombiningFunction = std::function<double(const Eigen::VectorXd&)>;

double combining_max_abs(const Eigen::VectorXd& t);
double combining_mean_abs(const Eigen::VectorXd& t);

/// Nonparametric combination: applies psi to every row of the w x d statistic
/// matrix (rows computed under the same transformation) and returns the
/// one-sided p-value of the combined statistics.
double npc_combine(const Eigen::MatrixXd& stats, const CombiningFunction& psi);

} // namespace hdperm
