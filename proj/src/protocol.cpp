#include "wcf/protocol.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace wcf {

namespace {

void check_state_cap(int n) {
  if (n > kMaxStateN) {
    std::ostringstream os;
    os << "full-state simulation is limited to n <= " << kMaxStateN << " (got n = " << n << ")";
    throw ResourceLimit(os.str());
  }
}

// Applies the diagonal projector to the first n qubits of a 2n-qubit state.
Eigen::VectorXcd apply_left(const DiagonalOperator& e, const Eigen::VectorXcd& psi) {
  const Eigen::Index half = e.size();
  Eigen::VectorXcd out = psi;
  for (Eigen::Index hi = 0; hi < half; ++hi)
    if (e[hi] == 0.0) out.segment(hi * half, half).setZero();
  return out;
}

// Same projector on the last n qubits.
Eigen::VectorXcd apply_right(const DiagonalOperator& e, const Eigen::VectorXcd& psi) {
  const Eigen::Index half = e.size();
  Eigen::VectorXcd out = psi;
  for (Eigen::Index hi = 0; hi < half; ++hi)
    out.segment(hi * half, half).array() *= e.d.array().cast<Complex>();
  return out;
}

}  // namespace

OutcomeProjectors build_outcome_projectors(int n) {
  if (n < 1) throw InvalidArgument("outcome projectors need n >= 1");
  if (n > kMaxDiagonalN) {
    std::ostringstream os;
    os << "diagonal operators are limited to n <= " << kMaxDiagonalN;
    throw ResourceLimit(os.str());
  }
  Eigen::VectorXd e0(2), e1(2);
  e0 << 0, 1;
  e1 << 1, 0;
  for (int k = 1; k < n; ++k) {
    const Eigen::Index dim = e0.size();
    Eigen::VectorXd next0(2 * dim), next1(2 * dim);
    next0 << e1, e1;
    next1 << e0, e0;
    next0[2 * dim - 1] += 1.0;
    next1[2 * dim - 1] -= 1.0;
    e0 = std::move(next0);
    e1 = std::move(next1);
  }
  return {DiagonalOperator(n, std::move(e0)), DiagonalOperator(n, std::move(e1))};
}

int bob_wins(std::uint64_t index, int n) {
  for (int i = n; i >= 1; --i)
    if (basis::bit(index, n, i) == 0) return i % 2;
  return 0;
}

PureState build_phi(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("phi weight outside [0,1]");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v[0] = std::sqrt(a);
  v[3] = std::sqrt(1.0 - a);
  return {2, std::move(v)};
}

Eigen::VectorXd xi_weights(const ProtocolParams& p) {
  p.validate();
  if (p.n > kMaxDiagonalN) throw ResourceLimit("xi is limited to n <= 14");
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  for (int i = 1; i <= p.n; ++i) {
    // Qubit i is less significant than qubits 1..i-1.
    Eigen::VectorXd inter(2 * w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      inter[2 * j] = p.weight(i) * w[j];
      inter[2 * j + 1] = (1.0 - p.weight(i)) * w[j];
    }
    w = std::move(inter);
  }
  return w;
}

PureState build_xi(const ProtocolParams& p) {
  return {p.n, xi_weights(p).cwiseSqrt().cast<Complex>()};
}

PureState build_honest_state(const ProtocolParams& p) {
  p.validate();
  check_state_cap(p.n);
  const Eigen::VectorXd w = xi_weights(p);
  const Eigen::Index half = w.size();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(half * half);
  // Particles i and n+i carry the same bit; only "diagonal" strings survive.
  for (Eigen::Index j = 0; j < half; ++j) psi[j * half + j] = std::sqrt(w[j]);
  return {2 * p.n, std::move(psi)};
}

XiSides build_xi_sides(const ProtocolParams& p) {
  const auto [e0, e1] = build_outcome_projectors(p.n);
  const Eigen::VectorXd w = xi_weights(p);
  const double c_b = w.dot(e1.d);
  const double c_a = w.dot(e0.d);
  if (c_b <= 0.0 || c_a <= 0.0)
    throw DegenerateProtocol("one outcome has zero honest probability; xi side undefined");
  const Eigen::VectorXd amp = w.cwiseSqrt();
  XiSides out;
  out.c_a = c_a;
  out.c_b = c_b;
  out.xi_a = PureState(p.n, (amp.cwiseProduct(e0.d) / std::sqrt(c_a)).cast<Complex>());
  out.xi_b = PureState(p.n, (amp.cwiseProduct(e1.d) / std::sqrt(c_b)).cast<Complex>());
  return out;
}

double correlation_residual(const ProtocolParams& p, int outcome) {
  if (outcome != 0 && outcome != 1) throw InvalidArgument("outcome must be 0 or 1");
  const PureState psi = build_honest_state(p);
  const auto proj = build_outcome_projectors(p.n);
  const DiagonalOperator& e = outcome == 0 ? proj.e0 : proj.e1;
  return (apply_left(e, psi.amp) - apply_right(e, psi.amp)).norm();
}

Eigen::MatrixXcd RankOneProjector::dense() const { return v.amp * v.amp.adjoint(); }

RankOneProjector build_verification_projector(const ProtocolParams& p, int outcome) {
  if (outcome != 0 && outcome != 1) throw InvalidArgument("outcome must be 0 or 1");
  const PureState psi = build_honest_state(p);
  const auto proj = build_outcome_projectors(p.n);
  const DiagonalOperator& e = outcome == 0 ? proj.e0 : proj.e1;
  Eigen::VectorXcd v = apply_right(e, apply_left(e, psi.amp));
  const double mass = v.squaredNorm();
  if (mass <= 0.0)
    throw DegenerateProtocol("verification projector undefined: <psi|E(x)E|psi> = 0");
  v /= std::sqrt(mass);
  return {PureState(2 * p.n, std::move(v))};
}

HonestSimulator::HonestSimulator(const ProtocolParams& p) {
  const PureState psi = build_honest_state(p);
  const auto proj = build_outcome_projectors(p.n);
  for (int k = 0; k < 2; ++k) {
    const DiagonalOperator& e = k == 0 ? proj.e0 : proj.e1;
    const Eigen::VectorXcd after_alice = apply_left(e, psi.amp);
    p_alice_[k] = after_alice.squaredNorm();
    if (p_alice_[k] <= 0.0) continue;
    const Eigen::VectorXcd after_both = apply_right(e, after_alice);
    const double both = after_both.squaredNorm();
    p_bob_given_alice_[k] = both / p_alice_[k];
    if (both <= 0.0) continue;
    // The loser tests the post-measurement state against F_k.
    const RankOneProjector f = build_verification_projector(p, k);
    const PureState post(2 * p.n, after_both / std::sqrt(both));
    p_verify_[k] = f.expectation(post);
  }
}

Transcript HonestSimulator::run(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Transcript t;
  t.alice_outcome = unit_uniform(rng()) < p_alice_[0] ? 0 : 1;
  const bool same = unit_uniform(rng()) < p_bob_given_alice_[t.alice_outcome];
  t.bob_outcome = same ? t.alice_outcome : 1 - t.alice_outcome;
  t.verification_passed = same && unit_uniform(rng()) < p_verify_[t.alice_outcome];
  return t;
}

Transcript simulate_honest_run(const ProtocolParams& p, std::uint64_t seed) {
  return HonestSimulator(p).run(seed);
}

}  // namespace wcf
