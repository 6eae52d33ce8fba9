#include "wcf/dual_cert.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wcf/protocol.hpp"
#include "wcf/tree_eval.hpp"

namespace wcf {

namespace {

struct SigmaTree {
  int n = 0;  // odd
  Eigen::VectorXd s;
  std::vector<SigmaNode> nodes;
};

// Bottom-up sigma recursion on an odd-n tree whose leaves are the 0/1
// entries of e and whose level-i weight is w[i-1]. Max nodes sit at odd
// depth d and split on qubit d+1. r = 1/sigma is carried instead of sigma so
// that an all-zero subtree (r = 0) stays finite.
SigmaTree sigma_recursion(const std::vector<double>& w, const Eigen::VectorXd& e) {
  const int n = static_cast<int>(w.size());
  SigmaTree out;
  out.n = n;
  struct Level {
    Eigen::VectorXd r, left, right;
  };
  std::vector<Level> levels(static_cast<std::size_t>(n));
  for (int d = n - 2; d >= 1; d -= 2) {
    const Eigen::Index count = Eigen::Index{1} << d;
    Level lv{Eigen::VectorXd(count), Eigen::VectorXd(count), Eigen::VectorXd(count)};
    const double a_max = w[static_cast<std::size_t>(d)];       // a_{d+1}
    const double a_sum = w[static_cast<std::size_t>(d + 1)];   // a_{d+2}
    for (Eigen::Index p = 0; p < count; ++p) {
      double sig[2];
      for (int c = 0; c < 2; ++c) {
        const Eigen::Index child = 2 * p + c;
        double v0, v1;
        if (d + 2 == n) {
          v0 = e[2 * child];
          v1 = e[2 * child + 1];
        } else {
          const auto& below = levels[static_cast<std::size_t>(d + 2)].r;
          v0 = below[2 * child];
          v1 = below[2 * child + 1];
        }
        sig[c] = a_sum * v0 + (1.0 - a_sum) * v1;
      }
      lv.left[p] = sig[0];
      lv.right[p] = sig[1];
      lv.r[p] = std::sqrt(a_max * sig[0] * sig[0] + (1.0 - a_max) * sig[1] * sig[1]);
      out.nodes.push_back({d, static_cast<std::uint64_t>(p),
                           lv.r[p] > 0 ? 1.0 / lv.r[p] : std::numeric_limits<double>::infinity(),
                           sig[0], sig[1]});
    }
    levels[static_cast<std::size_t>(d)] = std::move(lv);
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  out.s = Eigen::VectorXd::Ones(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    double s = 1.0;
    for (int d = 1; d <= n - 2; d += 2) {
      const Level& lv = levels[static_cast<std::size_t>(d)];
      const Eigen::Index p = j >> (n - d);
      const int dir = static_cast<int>((j >> (n - d - 1)) & 1);
      const double sig = dir == 0 ? lv.left[p] : lv.right[p];
      if (lv.r[p] <= 0.0 || sig <= 0.0) {
        s = 0.0;
        break;
      }
      s *= sig / lv.r[p];
    }
    out.s[j] = s;
  }
  return out;
}

// Sum-max tree value of the leaves, with the largest relative mismatch
// between the two values entering any max node where both are nonzero.
struct TreeScan {
  double value = 0;
  double balance = 0;
};

TreeScan scan_sum_max(const AltChain& chain, const Eigen::VectorXd& leaves) {
  TreeScan out;
  Eigen::VectorXd level = leaves;
  for (int q = chain.n(); q >= 1; --q) {
    const NodeOp& op = chain.ops[static_cast<std::size_t>(q - 1)];
    const Eigen::Index half = level.size() / 2;
    Eigen::VectorXd up(half);
    for (Eigen::Index j = 0; j < half; ++j) {
      const double l = level[2 * j], r = level[2 * j + 1];
      if (op.kind == NodeKind::MAX && l > 0.0 && r > 0.0)
        out.balance = std::max(out.balance, std::abs(l - r) / std::max(l, r));
      up[j] = op(l, r);
    }
    level = std::move(up);
  }
  out.value = level[0];
  return out;
}

AltChain sum_max_chain(const ProtocolParams& p, Side side) {
  return side == Side::B ? beta_sum_max_chain(p) : alpha_sum_max_chain(p);
}

void check_certificate_size(int n) {
  if (n > kMaxDiagonalN) {
    std::ostringstream os;
    os << "certificates are built for n <= " << kMaxDiagonalN << " only";
    throw ResourceLimit(os.str());
  }
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

double min_eigenvalue(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

Eigen::VectorXd side_vector(const ProtocolParams& p, Side side, double* honest_probability) {
  const auto proj = build_outcome_projectors(p.n);
  const Eigen::VectorXd& e = side == Side::B ? proj.e1.d : proj.e0.d;
  const Eigen::VectorXd w = xi_weights(p);
  const double c = w.dot(e);
  if (c <= 0.0) throw DegenerateProtocol("cheating side has zero honest winning probability");
  if (honest_probability) *honest_probability = c;
  return w.cwiseSqrt().cwiseProduct(e) / std::sqrt(c);
}

DualCertificate certificate_from_scaling(const ProtocolParams& p, Side side,
                                         const DiagonalOperator& s) {
  p.validate();
  check_certificate_size(p.n);
  if (s.n != p.n) throw InvalidArgument("scaling size does not match n");
  if (!s.is_nonnegative()) throw InvalidArgument("scaling must be nonnegative");
  const auto proj = build_outcome_projectors(p.n);
  const Eigen::VectorXd& e = side == Side::B ? proj.e1.d : proj.e0.d;
  const Eigen::VectorXd w = xi_weights(p);

  DualCertificate cert;
  cert.params = p;
  cert.side = side;
  cert.s = s;
  cert.honest_probability = w.dot(e);
  if (cert.honest_probability <= 0.0)
    throw DegenerateProtocol("cheating side has zero honest winning probability");
  cert.K = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (e[j] == 0.0) continue;
    if (s[j] <= 0.0 && w[j] > 0.0) {
      std::ostringstream os;
      os << "scaling vanishes on winning string " << basis::to_string(static_cast<std::uint64_t>(j), p.n)
         << " that carries honest weight";
      throw DegenerateCertificate(os.str());
    }
    cert.K += s[j] * w[j];
  }
  if (!(cert.K > 0.0) || !std::isfinite(cert.K))
    throw DegenerateCertificate("certificate normalization K is not positive and finite");
  const double scale = cert.K / cert.honest_probability;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (e[j] != 0.0 && s[j] > 0.0) z[j] = scale / s[j];
  cert.z = DiagonalOperator(p.n, std::move(z));
  cert.bound = scan_sum_max(sum_max_chain(p, side), cert.z.d).value;
  cert.instance_n = p.n;
  return cert;
}

DualCertificate build_certificate(const ProtocolParams& p, Side side) {
  p.validate();
  check_certificate_size(p.n);

  // The tree must have odd depth so that the lowest max nodes see leaf pairs
  // with a guaranteed winning left leaf.
  std::vector<double> inst;
  if (side == Side::A) inst.push_back(1.0);
  inst.insert(inst.end(), p.a.begin(), p.a.end());
  const bool pad = inst.size() % 2 == 0;
  if (pad) inst.push_back(0.0);
  const int m = static_cast<int>(inst.size());
  check_certificate_size(m);

  const auto inst_proj = build_outcome_projectors(m);
  const SigmaTree tree = sigma_recursion(inst, inst_proj.e1.d);

  // Side A prepends a 0 bit (index unchanged); padding appends a 1 bit.
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  Eigen::VectorXd s(dim);
  for (Eigen::Index j = 0; j < dim; ++j) s[j] = tree.s[pad ? (2 * j + 1) : j];

  DualCertificate cert = certificate_from_scaling(p, side, DiagonalOperator(p.n, std::move(s)));
  cert.bound = cert.K * cert.K / cert.honest_probability;
  cert.instance_n = m;
  cert.sigma = tree.nodes;
  return cert;
}

Domination rank_one_domination(const Eigen::VectorXd& z, const Eigen::VectorXcd& v) {
  if (z.size() != v.size()) throw InvalidArgument("domination check: size mismatch");
  Domination out;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double v2 = std::norm(v[j]);
    if (v2 == 0.0) continue;
    if (!(z[j] > 0.0)) {
      out.support_contained = false;
      out.violating_index = j;
      out.margin = -std::numeric_limits<double>::infinity();
      return out;
    }
    sum += v2 / z[j];
  }
  out.margin = 1.0 - sum;
  return out;
}

double psd_min_eig(const Eigen::VectorXd& z, const Eigen::VectorXcd& v) {
  Eigen::MatrixXcd m = -(v * v.adjoint());
  m.diagonal() += z.cast<Complex>();
  return min_eigenvalue(m);
}

CertReport verify_certificate(const DualCertificate& cert, int oracle_max_qubits) {
  const ProtocolParams& p = cert.params;
  p.validate();
  check_certificate_size(p.n);
  if (cert.z.n != p.n || cert.z.size() != (Eigen::Index{1} << p.n))
    throw InvalidArgument("certificate z does not match n");

  CertReport rep;
  const Eigen::VectorXd v = side_vector(p, cert.side);
  const Domination dom = rank_one_domination(cert.z.d, v.cast<Complex>());
  rep.domination_margin = dom.margin;
  rep.support_contained = dom.support_contained;
  if (!dom.support_contained) {
    rep.diagnostic = "support of xi_" + std::string(1, side_char(cert.side)) +
                     " is not contained in supp(z): z vanishes at " +
                     basis::to_string(static_cast<std::uint64_t>(dom.violating_index), p.n);
    rep.balance_residual = std::numeric_limits<double>::infinity();
    rep.tree_match_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  if (!cert.z.is_nonnegative()) {
    rep.diagnostic = "z has negative entries";
    return rep;
  }

  const TreeScan scan = scan_sum_max(sum_max_chain(p, cert.side), cert.z.d);
  rep.balance_residual = scan.balance;
  rep.tree_match_residual =
      std::abs(scan.value - cert.bound) / std::max(std::abs(cert.bound), 1e-300);
  if (p.n <= oracle_max_qubits) rep.psd_min_eig = psd_min_eig(cert.z.d, v.cast<Complex>());

  rep.accepted = rep.domination_margin >= -kCertTolerance && rep.balance_residual <= kCertTolerance &&
                 rep.tree_match_residual <= kCertTolerance;
  if (!rep.accepted) {
    std::ostringstream os;
    if (rep.domination_margin < -kCertTolerance)
      os << "z does not dominate |xi><xi| (margin " << rep.domination_margin << "); ";
    if (rep.balance_residual > kCertTolerance)
      os << "max-node inputs unbalanced (residual " << rep.balance_residual << "); ";
    if (rep.tree_match_residual > kCertTolerance)
      os << "tree value " << scan.value << " differs from bound " << cert.bound << "; ";
    rep.diagnostic = os.str();
  }
  return rep;
}

MinTraceResult lemma_min_trace(const PureState& psi, const DiagonalOperator& e) {
  if (psi.amp.size() != e.size()) throw InvalidArgument("lemma_min_trace: dimension mismatch");
  if (!e.is_projector()) throw InvalidArgument("lemma_min_trace: E must be a 0/1 projector");
  const double overlap = (psi.amp.cwiseAbs2().array() * e.d.array()).sum();
  MinTraceResult out;
  out.optimum = 2.0 * overlap * overlap;
  out.z = DiagonalOperator(e.n, 2.0 * overlap * e.d);
  return out;
}

AbsorbResult block_absorb_certificate(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& H,
                                      const Eigen::VectorXcd& phi, int kept_dim, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (kept_dim < 1 || M.rows() != M.cols() || phi.size() < 1)
    throw InvalidArgument("block_absorb: malformed inputs");
  const Eigen::Index d_ab = M.rows() * kept_dim;
  const Eigen::Index d_c = phi.size();
  const Eigen::Index dim = d_ab * d_c;
  if (H.rows() != dim || H.cols() != dim)
    throw InvalidArgument("block_absorb: H does not act on M-space (x) kept (x) phi-space");
  const double h_scale = std::max(1.0, H.norm());
  if ((H - H.adjoint()).norm() > 1e-12 * h_scale || (M - M.adjoint()).norm() > 1e-12 * std::max(1.0, M.norm()))
    throw InvalidArgument("block_absorb: M and H must be Hermitian");
  const double phi_norm = phi.norm();
  if (phi_norm == 0.0) throw InvalidArgument("block_absorb: phi must be nonzero");
  const Eigen::VectorXcd unit_phi = phi / phi_norm;

  const Eigen::MatrixXcd id_ab = Eigen::MatrixXcd::Identity(d_ab, d_ab);
  const Eigen::MatrixXcd embed = kron(id_ab, unit_phi);  // range(P)
  const Eigen::MatrixXcd m_kept = kron(M, Eigen::MatrixXcd::Identity(kept_dim, kept_dim));

  const Eigen::MatrixXcd t_h = embed.adjoint() * H * embed;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_kept - t_h);
    if (es.eigenvalues()[0] < -1e-10 * h_scale) {
      std::ostringstream os;
      os << "block_absorb precondition M (x) I >= T(H) fails: eigenvalue " << es.eigenvalues()[0]
         << " with eigenvector [" << es.eigenvectors().col(0).transpose() << "]";
      throw InvalidArgument(os.str());
    }
  }

  AbsorbResult out;
  Eigen::MatrixXcd perp_proj = Eigen::MatrixXcd::Zero(dim, dim);
  if (d_c > 1) {
    // Columns 2.. of the Householder Q span the complement of phi.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(unit_phi);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d_c, d_c);
    const Eigen::MatrixXcd perp = kron(id_ab, q.rightCols(d_c - 1));
    const Eigen::MatrixXcd h_perp = perp.adjoint() * H * perp;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_perp, Eigen::EigenvaluesOnly);
    out.lambda = es.eigenvalues().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(embed.adjoint() * H * perp);
    out.gamma = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
    perp_proj = perp * perp.adjoint();
  }
  out.y = (1.0 + 1e-3) * std::max(out.gamma * out.gamma / eps, out.gamma);
  if (out.y <= 0.0) out.y = eps;

  const Eigen::MatrixXcd parallel = m_kept + eps * id_ab;
  out.B = embed * parallel * embed.adjoint() + (out.lambda + out.y) * perp_proj;
  if (dim <= 256) out.min_eig = min_eigenvalue(out.B - H);
  return out;
}

}  // namespace wcf
