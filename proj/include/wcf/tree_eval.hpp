#ifndef WCF_TREE_EVAL_HPP
#define WCF_TREE_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "wcf/types.hpp"

namespace wcf {

enum class NodeKind { WSUM, WRMS, MAX };

/// Combining rule for the two children (bit 0 on the left) at one tree level.
struct NodeOp {
  NodeKind kind = NodeKind::WSUM;
  double weight = 0.5;  // unused for MAX

  template <typename Scalar>
  Scalar operator()(Scalar left, Scalar right) const {
    using std::max;
    using std::sqrt;
    const Scalar w(weight);
    switch (kind) {
      case NodeKind::WSUM: return w * left + (Scalar(1) - w) * right;
      case NodeKind::WRMS: return sqrt(w * left * left + (Scalar(1) - w) * right * right);
      case NodeKind::MAX: return max(left, right);
    }
    return left;
  }
};

/// ops[i-1] combines the pair of subtrees that differ in qubit i; ops[0] sits
/// at the root and ops[n-1] directly above the leaves.
struct AltChain {
  std::vector<NodeOp> ops;

  int n() const { return static_cast<int>(ops.size()); }
};

// Chains for the two cheating parties. The "sum-max" forms are the trees on
// which dual certificates are evaluated; the "rms" forms replace every MAX by
// the weighted RMS with the same level weight and give the closed-form
// bounds on E1 (beta) and E0 (alpha).
AltChain beta_sum_max_chain(const ProtocolParams& p);
AltChain alpha_sum_max_chain(const ProtocolParams& p);
AltChain beta_rms_chain(const ProtocolParams& p);
AltChain alpha_rms_chain(const ProtocolParams& p);
AltChain linear_chain(const ProtocolParams& p);

/// Value of the complete binary tree with the given leaves.
template <typename Scalar>
Scalar eval_tree_dense(const AltChain& chain, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& leaves) {
  const int n = chain.n();
  if (n > kMaxDiagonalN) throw ResourceLimit("dense tree evaluation is limited to n <= 14");
  if (leaves.size() != (Eigen::Index{1} << n))
    throw InvalidArgument("leaf count does not match 2^n for the chain");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> level = leaves;
  for (int q = n; q >= 1; --q) {
    const NodeOp& op = chain.ops[static_cast<std::size_t>(q - 1)];
    const Eigen::Index half = level.size() / 2;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> up(half);
    for (Eigen::Index j = 0; j < half; ++j) up[j] = op(level[2 * j], level[2 * j + 1]);
    level = std::move(up);
  }
  return level[0];
}

inline double eval_tree_dense(const AltChain& chain, const DiagonalOperator& leaves) {
  return eval_tree_dense<double>(chain, leaves.d);
}

/// Root value of Tr_{a1} RMS_{a2} Tr_{a3} ... E1 (or the all-linear variant)
/// in O(n) via the High/Low recurrence. Even n is evaluated as the odd
/// instance (a_1, ..., a_n, 0), which leaves E1 unchanged.
template <typename Scalar>
Scalar high_low_root(std::span<const Scalar> a, bool linear) {
  using std::sqrt;
  const int n = static_cast<int>(a.size());
  if (n < 1) throw InvalidArgument("recurrence needs at least one weight");
  const int m = n % 2 == 1 ? n : n + 1;
  Scalar high(1), low(0);
  for (int i = n; i >= 2; --i) {
    const Scalar w = a[static_cast<std::size_t>(i - 1)];
    if ((m - i) % 2 == 0) {
      low = w * high + (Scalar(1) - w) * low;
    } else {
      high = linear ? w * low + (Scalar(1) - w) * high
                    : sqrt(w * low * low + (Scalar(1) - w) * high * high);
    }
  }
  return a[0] * high + (Scalar(1) - a[0]) * low;
}

/// The (High_1, Low_1) pair feeding the root; the root value is affine in
/// a_1 with these coefficients. `rest` holds a_2..a_n.
template <typename Scalar>
std::pair<Scalar, Scalar> high_low_below_root(std::span<const Scalar> rest, bool linear) {
  std::vector<Scalar> a(rest.size() + 1);
  std::copy(rest.begin(), rest.end(), a.begin() + 1);
  a[0] = Scalar(1);
  const Scalar high = high_low_root<Scalar>(a, linear);
  a[0] = Scalar(0);
  const Scalar low = high_low_root<Scalar>(a, linear);
  return {high, low};
}

double eval_beta_fast(const ProtocolParams& p);
double eval_alpha_fast(const ProtocolParams& p);
double eval_constraint_fast(const ProtocolParams& p);

struct BoundReport {
  double alpha = 0;
  double beta = 0;
  double constraint = 0;
  double bias_bound = 0;  // max(alpha, beta) - c
};

/// beta = root^2 / c and alpha = root_A^2 / (1 - c). For c != 1/2 this is an
/// extrapolation of the fair-coin formulas.
BoundReport bounds(const ProtocolParams& p);

/// Bounds with c replaced by the parameters' actual honest probability,
/// i.e. the values a dual certificate for these parameters certifies.
BoundReport bounds_at_constraint(const ProtocolParams& p);

}  // namespace wcf

#endif  // WCF_TREE_EVAL_HPP
