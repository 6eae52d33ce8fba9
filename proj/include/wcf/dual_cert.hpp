#ifndef WCF_DUAL_CERT_HPP
#define WCF_DUAL_CERT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wcf/types.hpp"

namespace wcf {

/// Scaling factors attached to one max node of the odd-n tree the
/// certificate was built on. sigma is infinite when the whole subtree below
/// the node carries zero weighted E mass.
struct SigmaNode {
  int depth = 0;
  std::uint64_t prefix = 0;  // basis prefix b_1..b_depth
  double sigma = 0;
  double sigma_left = 0;
  double sigma_right = 0;
};

/// Diagonal dual solution Z_{n+1} for one cheating side.
///
/// z = (K / c_side) S^{-1} E restricted to E's support, where E is E1 for a
/// cheating Bob and E0 for a cheating Alice, and c_side is that party's
/// honest winning probability. The certified bound is the value of the
/// side's sum-max tree on z.
struct DualCertificate {
  ProtocolParams params;
  Side side = Side::B;
  DiagonalOperator s;
  DiagonalOperator z;
  double honest_probability = 0;  // c_side
  double K = 0;                   // sum_j s_j xi_j^2 e_j
  double bound = 0;

  int instance_n = 0;             // odd size of the tree the sigmas live on
  std::vector<SigmaNode> sigma;
};

struct CertReport {
  double domination_margin = 0;  // 1 - sum_j |v_j|^2 / z_j
  bool support_contained = false;
  double balance_residual = 0;
  double tree_match_residual = 0;
  std::optional<double> psd_min_eig;  // min eig of diag(z) - v v^dagger
  bool accepted = false;
  std::string diagnostic;
};

/// Tolerances used by verify_certificate.
inline constexpr double kCertTolerance = 1e-9;

/// Builds the certificate by the bottom-up sigma recursion. Odd n for side B
/// is built directly; the other cases go through (a, 0) padding and the
/// (1, a) role switch and are mapped back to the n-qubit space.
DualCertificate build_certificate(const ProtocolParams& p, Side side);

/// Certificate for an arbitrary positive scaling S: z is the smallest
/// multiple of S^{-1}E that dominates |xi_side><xi_side|, and the bound is the
/// sum-max tree value of z. Invariant under S -> tS.
DualCertificate certificate_from_scaling(const ProtocolParams& p, Side side,
                                         const DiagonalOperator& s);

/// oracle_max_qubits bounds the dimension of the dense eigenvalue check.
CertReport verify_certificate(const DualCertificate& cert, int oracle_max_qubits = 8);

/// The vector the side's verification reduces to: E|xi>/sqrt(c_side).
Eigen::VectorXd side_vector(const ProtocolParams& p, Side side, double* honest_probability = nullptr);

struct Domination {
  double margin = 0;
  bool support_contained = true;
  Eigen::Index violating_index = -1;
};

/// diag(z) >= v v^dagger iff supp(v) is inside supp(z) and sum |v|^2/z <= 1.
Domination rank_one_domination(const Eigen::VectorXd& z, const Eigen::VectorXcd& v);

/// Smallest eigenvalue of diag(z) - v v^dagger (dense).
double psd_min_eig(const Eigen::VectorXd& z, const Eigen::VectorXcd& v);

struct MinTraceResult {
  double optimum = 0;
  DiagonalOperator z;
};

/// Minimizes Tr(Z D), D = diag(|psi><psi|), over real diagonal Z with
/// Z >= 2 E|psi><psi|E. Optimum 2<psi|E|psi>^2 at Z = 2<psi|E|psi> E.
MinTraceResult lemma_min_trace(const PureState& psi, const DiagonalOperator& e);

struct AbsorbResult {
  Eigen::MatrixXcd B;
  double lambda = 0;  // top eigenvalue of H on the complement of P
  double gamma = 0;   // ||P H (I - P)||
  double y = 0;
  std::optional<double> min_eig;  // min eig of B - H, dims <= 2^8
};

/// Space ordering is M's space (x) kept (x) phi's space, and
/// P = I (x) I_kept (x) |phi><phi|. Given M (x) I_kept >= T(H), with
/// T(H) = (I (x) <phi|) H (I (x) |phi>), returns the block-diagonal B with
/// block M (x) I_kept + eps I on range(P) and (lambda + y) I on its
/// complement, so that B >= H and T(B) = (M + eps I) (x) I_kept.
AbsorbResult block_absorb_certificate(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& H,
                                      const Eigen::VectorXcd& phi, int kept_dim, double eps);

}  // namespace wcf

#endif  // WCF_DUAL_CERT_HPP
