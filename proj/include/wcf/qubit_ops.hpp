#ifndef WCF_QUBIT_OPS_HPP
#define WCF_QUBIT_OPS_HPP

#include <span>

#include <Eigen/Dense>

namespace wcf {

// State vectors over Q qubits; qubit 0 is the most significant bit of the
// amplitude index.

/// Returns the state with qubits relabelled so that new qubit p is old qubit
/// order[p]. order must be a permutation of 0..Q-1.
Eigen::VectorXcd reorder_qubits(const Eigen::VectorXcd& psi, int num_qubits,
                                std::span<const int> order);

/// Applies U (2^m x 2^m) to the listed qubits; targets[0] is the most
/// significant qubit of U's index.
void apply_on_qubits(Eigen::VectorXcd& psi, int num_qubits, std::span<const int> targets,
                     const Eigen::MatrixXcd& U);

/// Views psi, after moving `targets` to the front, as a 2^m x 2^(Q-m)
/// matrix whose rows are indexed by the targets.
Eigen::MatrixXcd split_qubits(const Eigen::VectorXcd& psi, int num_qubits,
                              std::span<const int> targets);

/// Permutation matrix sending basis |b_0..b_{m-1}> to the string whose
/// position p holds b_{perm[p]}.
Eigen::MatrixXcd qubit_permutation_matrix(std::span<const int> perm);

}  // namespace wcf

#endif  // WCF_QUBIT_OPS_HPP
