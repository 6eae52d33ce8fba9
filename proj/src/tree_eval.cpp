#include "wcf/tree_eval.hpp"

#include <cassert>
#include <limits>

#include "wcf/protocol.hpp"

namespace wcf {

namespace {

// Odd qubits belong to Alice, even qubits to Bob. A cheater maximizes over
// their own qubits; the honest party's qubits are averaged.
AltChain make_chain(const ProtocolParams& p, bool cheater_is_bob, NodeKind cheater_kind) {
  AltChain chain;
  chain.ops.reserve(static_cast<std::size_t>(p.n));
  for (int i = 1; i <= p.n; ++i) {
    const bool bob_qubit = i % 2 == 0;
    const NodeKind kind = bob_qubit == cheater_is_bob ? cheater_kind : NodeKind::WSUM;
    chain.ops.push_back({kind, p.weight(i)});
  }
  return chain;
}

double squared_root_over(double root, double honest_probability) {
  if (honest_probability <= 0.0) return std::numeric_limits<double>::infinity();
  return root * root / honest_probability;
}

double beta_root(const ProtocolParams& p) {
  p.validate();
  return high_low_root<double>(p.a, false);
}

// Alice's bound is Bob's bound for the instance (1, a_1, ..., a_n) with the
// roles switched.
double alpha_root(const ProtocolParams& p) {
  p.validate();
  std::vector<double> shifted(p.a.size() + 1);
  shifted[0] = 1.0;
  std::copy(p.a.begin(), p.a.end(), shifted.begin() + 1);
  return high_low_root<double>(shifted, false);
}

#ifndef NDEBUG
void spot_check(const ProtocolParams& p, double beta_root_value, double alpha_root_value) {
  if (p.n > 10) return;
  const auto proj = build_outcome_projectors(p.n);
  const double beta_dense = eval_tree_dense(beta_rms_chain(p), proj.e1);
  const double alpha_dense = eval_tree_dense(alpha_rms_chain(p), proj.e0);
  assert(std::abs(beta_dense - beta_root_value) <= 1e-12 * std::max(1.0, beta_dense));
  assert(std::abs(alpha_dense - alpha_root_value) <= 1e-12 * std::max(1.0, alpha_dense));
}
#endif

}  // namespace

AltChain beta_sum_max_chain(const ProtocolParams& p) { return make_chain(p, true, NodeKind::MAX); }
AltChain alpha_sum_max_chain(const ProtocolParams& p) { return make_chain(p, false, NodeKind::MAX); }
AltChain beta_rms_chain(const ProtocolParams& p) { return make_chain(p, true, NodeKind::WRMS); }
AltChain alpha_rms_chain(const ProtocolParams& p) { return make_chain(p, false, NodeKind::WRMS); }

AltChain linear_chain(const ProtocolParams& p) {
  AltChain chain;
  for (int i = 1; i <= p.n; ++i) chain.ops.push_back({NodeKind::WSUM, p.weight(i)});
  return chain;
}

double eval_beta_fast(const ProtocolParams& p) {
  const double root = beta_root(p);
#ifndef NDEBUG
  spot_check(p, root, alpha_root(p));
#endif
  return squared_root_over(root, p.c);
}

double eval_alpha_fast(const ProtocolParams& p) {
  return squared_root_over(alpha_root(p), 1.0 - p.c);
}

double eval_constraint_fast(const ProtocolParams& p) {
  p.validate();
  return high_low_root<double>(p.a, true);
}

BoundReport bounds(const ProtocolParams& p) {
  BoundReport r;
  r.alpha = eval_alpha_fast(p);
  r.beta = eval_beta_fast(p);
  r.constraint = eval_constraint_fast(p);
  r.bias_bound = std::max(r.alpha, r.beta) - p.c;
  return r;
}

BoundReport bounds_at_constraint(const ProtocolParams& p) {
  BoundReport r;
  r.constraint = eval_constraint_fast(p);
  r.beta = squared_root_over(beta_root(p), r.constraint);
  r.alpha = squared_root_over(alpha_root(p), 1.0 - r.constraint);
  r.bias_bound = std::max(r.alpha, r.beta) - r.constraint;
  return r;
}

}  // namespace wcf
