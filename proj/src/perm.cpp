#include "hdperm/perm.hpp"

#include <algorithm>
#include <numeric>

#include "hdperm/errors.hpp"
#include "hdperm/rng.hpp"

namespace hdperm {

const char* to_string(TransformKind k) {
  return k == TransformKind::Permutation ? "permutation" : "sign-flip";
}

Transformation Transformation::identity(int n, TransformKind kind) {
  Transformation t;
  t.kind = kind;
  if (kind == TransformKind::Permutation) {
    t.perm.resize(n);
    std::iota(t.perm.begin(), t.perm.end(), 0);
  } else {
    t.signs.assign(n, 1);
  }
  return t;
}

int Transformation::size() const {
  return kind == TransformKind::Permutation ? static_cast<int>(perm.size())
                                            : static_cast<int>(signs.size());
}

bool Transformation::is_identity() const {
  if (kind == TransformKind::Permutation) {
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != static_cast<std::int32_t>(i)) return false;
    return true;
  }
  return std::all_of(signs.begin(), signs.end(), [](std::int8_t s) { return s == 1; });
}

void Transformation::apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
  const int n = size();
  if (v.size() != n) throw LengthMismatch("transformation length does not match vector");
  out.resize(n);
  if (kind == TransformKind::Permutation) {
    for (int i = 0; i < n; ++i) out(i) = v(perm[i]);
  } else {
    for (int i = 0; i < n; ++i) out(i) = signs[i] * v(i);
  }
}

Eigen::VectorXd Transformation::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out;
  apply(v, out);
  return out;
}

TransformationPlan TransformationPlan::sample(int n, int w, TransformKind kind,
                                              std::uint64_t seed) {
  if (w < 1) throw Error("plan needs w >= 1");
  if (n < 2) throw Error("plan needs n >= 2");
  TransformationPlan plan;
  plan.n_ = n;
  plan.w_ = w;
  plan.kind_ = kind;
  plan.seed_ = seed;
  return plan;
}

TransformationPlan TransformationPlan::from_list(TransformKind kind,
                                                 std::vector<Transformation> list) {
  if (list.empty()) throw Error("explicit plan must be nonempty");
  if (!list.front().is_identity()) throw Error("first transformation must be the identity");
  TransformationPlan plan;
  plan.n_ = list.front().size();
  plan.w_ = static_cast<int>(list.size());
  plan.kind_ = kind;
  plan.explicit_list_ = std::make_shared<const std::vector<Transformation>>(std::move(list));
  return plan;
}

Transformation TransformationPlan::at(int j) const {
  if (j < 0 || j >= w_) throw Error("plan index out of range");
  if (explicit_list_) return (*explicit_list_)[j];
  if (j == 0) return Transformation::identity(n_, kind_);

  CounterRng rng(seed_, static_cast<std::uint64_t>(j));
  Transformation t;
  t.kind = kind_;
  if (kind_ == TransformKind::Permutation) {
    t.perm.resize(n_);
    std::iota(t.perm.begin(), t.perm.end(), 0);
    for (int i = n_ - 1; i > 0; --i) {
      int k = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
      std::swap(t.perm[i], t.perm[k]);
    }
  } else {
    t.signs.resize(n_);
    for (int i = 0; i < n_; ++i) t.signs[i] = rng.flip() ? 1 : -1;
  }
  return t;
}

TransformationPlan exhaustive_permutation_plan(int n) {
  if (n < 2) throw Error("exhaustive plan needs n >= 2");
  long long fact = 1;
  for (int i = 2; i <= n; ++i) {
    fact *= i;
    if (fact > 1000000) throw Error("exhaustive plan limited to n! <= 1e6");
  }
  std::vector<std::int32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Transformation> list;
  list.reserve(static_cast<std::size_t>(fact));
  do {
    Transformation t;
    t.kind = TransformKind::Permutation;
    t.perm = idx;
    list.push_back(std::move(t));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return TransformationPlan::from_list(TransformKind::Permutation, std::move(list));
}

double p_one_sided(const std::vector<double>& T) {
  if (T.empty()) throw Error("empty statistic vector");
  const double t1 = T.front();
  std::size_t ge = 0;
  for (double t : T)
    if (t >= t1) ++ge;
  return static_cast<double>(ge) / static_cast<double>(T.size());
}

double p_two_sided(const std::vector<double>& T) {
  if (T.empty()) throw Error("empty statistic vector");
  const double t1 = T.front();
  std::size_t ge = 0, le = 0;
  for (double t : T) {
    if (t >= t1) ++ge;
    if (t <= t1) ++le;
  }
  double p = 2.0 * static_cast<double>(std::min(ge, le)) / static_cast<double>(T.size());
  return std::min(p, 1.0);
}

double combining_max_abs(const Eigen::VectorXd& t) {
  return t.size() == 0 ? 0.0 : t.cwiseAbs().maxCoeff();
}

double combining_mean_abs(const Eigen::VectorXd& t) {
  return t.size() == 0 ? 0.0 : t.cwiseAbs().mean();
}

double npc_combine(const Eigen::MatrixXd& stats, const CombiningFunction& psi) {
  if (stats.cols() < 1 || stats.rows() < 1)
    throw DimensionMismatch("npc statistic matrix must be w x d with w, d >= 1");
  if (!psi) throw Error("missing combining function");
  std::vector<double> combined(static_cast<std::size_t>(stats.rows()));
  for (Eigen::Index j = 0; j < stats.rows(); ++j)
    combined[static_cast<std::size_t>(j)] = psi(stats.row(j).transpose());
  return p_one_sided(combined);
}

} // namespace hdperm
