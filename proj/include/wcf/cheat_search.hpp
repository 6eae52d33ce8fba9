#ifndef WCF_CHEAT_SEARCH_HPP
#define WCF_CHEAT_SEARCH_HPP

#include <cstdint>
#include <vector>

#include "wcf/types.hpp"

namespace wcf {

/// Total simulated qubits (2n + ancilla) allowed in a cheating run.
inline constexpr int kMaxCheatQubits = 22;
/// Largest register a single stage unitary may act on.
inline constexpr int kMaxStageQubits = 10;

/// Purified cheating strategy. The cheater starts with a workspace of
/// 2 * (own messages) + ancilla qubits in initial_state. Before each of their
/// own messages they apply the next stage and send the first workspace
/// qubit; qubits received from the honest party are appended to the
/// workspace. A last stage precedes the n-qubit dump, which takes the first
/// n workspace qubits.
struct CheatStrategy {
  Side side = Side::B;
  int ancilla_qubits = 0;
  std::vector<Eigen::MatrixXcd> stages;
  PureState initial_state;
};

/// Qubit wiring of one (n, side, ancilla) cheating game.
struct CheatLayout {
  int n = 0;
  Side side = Side::B;
  int ancilla_qubits = 0;
  int total_qubits = 0;
  int honest_qubits = 0;                   // the honest party's phi pairs come first
  int initial_workspace = 0;
  std::vector<std::vector<int>> stage_targets;
  std::vector<int> particle_order;         // physical qubit of particles 1..2n, then leftovers
};

CheatLayout cheat_layout(int n, Side side, int ancilla_qubits);

/// Probability that the honest party's final verification declares the
/// cheater the winner.
double cheat_value(const ProtocolParams& p, const CheatStrategy& strategy);

/// The cheater follows the protocol; its value is the honest winning
/// probability of `side`.
CheatStrategy honest_strategy(const ProtocolParams& p, Side side, int ancilla_qubits = 0);

/// Haar-like random stages and initial state.
CheatStrategy random_strategy(const ProtocolParams& p, Side side, int ancilla_qubits,
                              std::uint64_t seed);

enum class AscentRule {
  SeeSaw,     // exact stage-wise maximization
  HillClimb,  // random tangent directions, adaptive step
};

struct AscentResult {
  double value = 0;
  CheatStrategy strategy;
  int iterations = 0;
  std::vector<double> trace;     // value after each iteration, trace[0] = start
  double max_evaluated = 0;      // largest value of any strategy evaluated
};

/// Local ascent from random_strategy(p, side, ancilla_qubits, seed).
AscentResult ascend(const ProtocolParams& p, Side side, int ancilla_qubits, int iters,
                    std::uint64_t seed, AscentRule rule = AscentRule::SeeSaw);

struct GapRow {
  Side side = Side::B;
  double lower = 0;
  double upper = 0;
  double gap = 0;
};

struct GapConfig {
  int ancilla_qubits = 2;
  int iters = 200;
  std::uint64_t seed = 1;
};

/// Ascent lower bound against the dual bound (capped at 1) for each side
/// whose winning outcome has positive honest probability.
std::vector<GapRow> gap_report(const ProtocolParams& p, const GapConfig& cfg = {});

}  // namespace wcf

#endif  // WCF_CHEAT_SEARCH_HPP
