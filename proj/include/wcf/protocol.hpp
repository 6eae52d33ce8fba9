#ifndef WCF_PROTOCOL_HPP
#define WCF_PROTOCOL_HPP

#include <cstdint>
#include <utility>

#include "wcf/types.hpp"

namespace wcf {

struct OutcomeProjectors {
  DiagonalOperator e0;  // Alice wins
  DiagonalOperator e1;  // Bob wins
};

/// E0/E1 over n qubits, built by the induction
///   E0(k+1) = I (x) E1(k) + |1..1><1..1|,  E1(k+1) = I (x) E0(k) - |1..1><1..1|
/// from the single-qubit base case E1 = |0><0|, E0 = |1><1|.
OutcomeProjectors build_outcome_projectors(int n);

/// 1 iff scanning b_n, ..., b_1 the first zero sits at an odd position.
/// All-ones strings belong to Alice.
int bob_wins(std::uint64_t index, int n);

/// sqrt(a)|00> + sqrt(1-a)|11>.
PureState build_phi(double a);

/// Honest joint state on 2n particles; |phi_i> lives on particles i and n+i.
PureState build_honest_state(const ProtocolParams& p);

/// Product state (x)_i (sqrt(a_i)|0> + sqrt(1-a_i)|1>) on n qubits.
PureState build_xi(const ProtocolParams& p);

/// Squared amplitudes of |xi>, i.e. prod_i w_i(b_i) with w(0)=a, w(1)=1-a.
Eigen::VectorXd xi_weights(const ProtocolParams& p);

struct XiSides {
  PureState xi_a;  // E0|xi>/sqrt(c_A)
  PureState xi_b;  // E1|xi>/sqrt(c_B)
  double c_a = 0;
  double c_b = 0;
};

XiSides build_xi_sides(const ProtocolParams& p);

/// Rank-one projector |v><v| with v normalized.
struct RankOneProjector {
  PureState v;

  double expectation(const PureState& psi) const { return std::norm(v.amp.dot(psi.amp)); }
  Eigen::MatrixXcd dense() const;
};

/// F_i = (E_i (x) E_i)|psi><psi|(E_i (x) E_i) / <psi|E_i (x) E_i|psi>.
RankOneProjector build_verification_projector(const ProtocolParams& p, int outcome);

struct Transcript {
  int alice_outcome = 0;
  int bob_outcome = 0;
  bool verification_passed = false;
};

/// Honest execution sampler. Probabilities come from the full 2n-qubit state
/// and are computed once; each run draws from a generator seeded by `seed`.
class HonestSimulator {
 public:
  explicit HonestSimulator(const ProtocolParams& p);

  Transcript run(std::uint64_t seed) const;

  double alice_probability(int outcome) const { return p_alice_[outcome]; }

 private:
  double p_alice_[2] = {0, 0};
  double p_bob_given_alice_[2] = {0, 0};  // P(Bob sees same outcome | Alice's)
  double p_verify_[2] = {0, 0};           // P(loser accepts winner's qubits)
};

Transcript simulate_honest_run(const ProtocolParams& p, std::uint64_t seed);

/// ||(E_k (x) I)|psi> - (I (x) E_k)|psi>|| for outcome k.
double correlation_residual(const ProtocolParams& p, int outcome);

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
inline double unit_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace wcf

#endif  // WCF_PROTOCOL_HPP
