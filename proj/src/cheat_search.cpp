#include "wcf/cheat_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wcf/protocol.hpp"
#include "wcf/qubit_ops.hpp"
#include "wcf/tree_eval.hpp"

namespace wcf {

namespace {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool cheater_owns(Side side, int i) { return side == Side::B ? i % 2 == 0 : i % 2 == 1; }

int own_count(int n, Side side) {
  int k = 0;
  for (int i = 1; i <= n; ++i) k += cheater_owns(side, i) ? 1 : 0;
  return k;
}

Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  Eigen::VectorXcd out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x[i] * y;
  return out;
}

std::vector<int> inverse_permutation(const std::vector<int>& order) {
  std::vector<int> inv(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) inv[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
  return inv;
}

Eigen::VectorXcd gaussian_vector(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

Eigen::MatrixXcd random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

// Everything about a game that does not depend on the strategy.
struct Game {
  CheatLayout layout;
  Eigen::VectorXcd honest_initial;  // phi pairs of the honest party
  Eigen::VectorXcd target;          // normalized (E (x) E)|psi> on particles 1..2n
};

Game make_game(const ProtocolParams& p, Side side, int ancilla_qubits) {
  p.validate();
  Game g;
  g.layout = cheat_layout(p.n, side, ancilla_qubits);
  g.honest_initial = Eigen::VectorXcd::Ones(1);
  for (int i = 1; i <= p.n; ++i)
    if (!cheater_owns(side, i)) g.honest_initial = kron_vec(g.honest_initial, build_phi(p.weight(i)).amp);
  g.target = build_verification_projector(p, side == Side::B ? 1 : 0).v.amp;
  return g;
}

void check_shape(const Game& g, const CheatStrategy& s) {
  const CheatLayout& l = g.layout;
  if (s.side != l.side || s.ancilla_qubits != l.ancilla_qubits)
    throw InvalidArgument("strategy side or ancilla budget does not match the game");
  if (s.stages.size() != l.stage_targets.size()) {
    std::ostringstream os;
    os << "strategy has " << s.stages.size() << " stages, the game needs " << l.stage_targets.size();
    throw InvalidArgument(os.str());
  }
  for (std::size_t j = 0; j < s.stages.size(); ++j) {
    const Eigen::Index dim = Eigen::Index{1} << l.stage_targets[j].size();
    const Eigen::MatrixXcd& u = s.stages[j];
    if (u.rows() != dim || u.cols() != dim) {
      std::ostringstream os;
      os << "stage " << j << " must be " << dim << "x" << dim;
      throw InvalidArgument(os.str());
    }
    if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
      std::ostringstream os;
      os << "stage " << j << " is not unitary within 1e-10";
      throw InvalidArgument(os.str());
    }
  }
  if (s.initial_state.amp.size() != (Eigen::Index{1} << l.initial_workspace))
    throw InvalidArgument("initial state does not match the cheater's workspace");
  if (std::abs(s.initial_state.norm_squared() - 1.0) > 1e-10)
    throw InvalidArgument("initial state is not normalized");
}

// hist[j] is the joint state before stage j; hist.back() is the final state.
std::vector<Eigen::VectorXcd> forward(const Game& g, const CheatStrategy& s) {
  const CheatLayout& l = g.layout;
  std::vector<Eigen::VectorXcd> hist;
  hist.reserve(s.stages.size() + 1);
  hist.push_back(kron_vec(g.honest_initial, s.initial_state.amp));
  for (std::size_t j = 0; j < s.stages.size(); ++j) {
    Eigen::VectorXcd next = hist.back();
    apply_on_qubits(next, l.total_qubits, l.stage_targets[j], s.stages[j]);
    hist.push_back(std::move(next));
  }
  return hist;
}

// ||(<target| (x) I) final||^2 with the leftover amplitudes in w.
double final_value(const Game& g, const Eigen::VectorXcd& final_state, Eigen::VectorXcd* w) {
  const CheatLayout& l = g.layout;
  const Eigen::VectorXcd ordered = reorder_qubits(final_state, l.total_qubits, l.particle_order);
  const Eigen::Index rows = g.target.size();
  Eigen::Map<const RowMat> m(ordered.data(), rows, ordered.size() / rows);
  const Eigen::VectorXcd amp = (g.target.adjoint() * m).transpose();
  if (w) *w = amp;
  return amp.squaredNorm();
}

double strategy_value(const Game& g, const CheatStrategy& s) {
  return final_value(g, forward(g, s).back(), nullptr);
}

// Maximizes the value over stage j (or over the initial state when
// j == stages.size()) with everything else fixed.
void seesaw_update(const Game& g, CheatStrategy& s, std::size_t j) {
  const CheatLayout& l = g.layout;
  const int q = l.total_qubits;
  const auto hist = forward(g, s);
  Eigen::VectorXcd w;
  final_value(g, hist.back(), &w);
  const double wn = w.norm();
  if (wn > 0) {
    w /= wn;
  } else {
    w = Eigen::VectorXcd::Zero(w.size());
    w[0] = 1.0;
  }
  Eigen::VectorXcd b = reorder_qubits(kron_vec(g.target, w), q, inverse_permutation(l.particle_order));
  const std::size_t stop = j == s.stages.size() ? 0 : j + 1;
  for (std::size_t jj = s.stages.size(); jj-- > stop;)
    apply_on_qubits(b, q, l.stage_targets[jj], s.stages[jj].adjoint());

  if (j == s.stages.size()) {
    const Eigen::Index hdim = g.honest_initial.size();
    Eigen::Map<const RowMat> bm(b.data(), hdim, b.size() / hdim);
    Eigen::VectorXcd next = (g.honest_initial.adjoint() * bm).transpose();
    const double nn = next.norm();
    if (nn > 0) s.initial_state.amp = next / nn;
    return;
  }
  const Eigen::MatrixXcd ma = split_qubits(hist[j], q, l.stage_targets[j]);
  const Eigen::MatrixXcd mb = split_qubits(b, q, l.stage_targets[j]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ma * mb.adjoint(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.stages[j] = svd.matrixV() * svd.matrixU().adjoint();
}

Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd& herm, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases[i] = std::polar(1.0, t * es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

CheatLayout cheat_layout(int n, Side side, int ancilla_qubits) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (ancilla_qubits < 0) throw InvalidArgument("ancilla count must be nonnegative");
  if (n > kMaxStateN) {
    std::ostringstream os;
    os << "cheating simulation is limited to n <= " << kMaxStateN;
    throw ResourceLimit(os.str());
  }
  CheatLayout l;
  l.n = n;
  l.side = side;
  l.ancilla_qubits = ancilla_qubits;
  l.total_qubits = 2 * n + ancilla_qubits;
  if (l.total_qubits > kMaxCheatQubits) {
    std::ostringstream os;
    os << "cheating simulation needs " << l.total_qubits << " qubits, limit is " << kMaxCheatQubits;
    throw ResourceLimit(os.str());
  }
  const int own = own_count(n, side);
  l.honest_qubits = 2 * (n - own);
  l.initial_workspace = 2 * own + ancilla_qubits;

  std::vector<int> particle(static_cast<std::size_t>(2 * n + 1), -1);
  std::vector<int> honest_send(static_cast<std::size_t>(n + 1), -1);
  int q = 0;
  for (int i = 1; i <= n; ++i) {
    if (cheater_owns(side, i)) continue;
    // q holds particle i, q + 1 particle n + i. Alice keeps i, Bob keeps n + i.
    if (side == Side::B) {
      particle[static_cast<std::size_t>(i)] = q;
      honest_send[static_cast<std::size_t>(i)] = q + 1;
    } else {
      particle[static_cast<std::size_t>(n + i)] = q + 1;
      honest_send[static_cast<std::size_t>(i)] = q;
    }
    q += 2;
  }
  std::vector<int> work;
  for (int w = l.honest_qubits; w < l.total_qubits; ++w) work.push_back(w);
  for (int i = 1; i <= n; ++i) {
    if (cheater_owns(side, i)) {
      l.stage_targets.push_back(work);
      particle[static_cast<std::size_t>(side == Side::B ? i : n + i)] = work.front();
      work.erase(work.begin());
    } else {
      work.push_back(honest_send[static_cast<std::size_t>(i)]);
    }
  }
  l.stage_targets.push_back(work);
  const int first = side == Side::B ? n + 1 : 1;
  for (int k = 0; k < n; ++k) particle[static_cast<std::size_t>(first + k)] = work[static_cast<std::size_t>(k)];
  for (int p = 1; p <= 2 * n; ++p) l.particle_order.push_back(particle[static_cast<std::size_t>(p)]);
  l.particle_order.insert(l.particle_order.end(), work.begin() + n, work.end());

  for (const auto& t : l.stage_targets) {
    if (static_cast<int>(t.size()) > kMaxStageQubits) {
      std::ostringstream os;
      os << "a cheating stage would act on " << t.size() << " qubits, limit is " << kMaxStageQubits;
      throw ResourceLimit(os.str());
    }
  }
  return l;
}

double cheat_value(const ProtocolParams& p, const CheatStrategy& strategy) {
  const Game g = make_game(p, strategy.side, strategy.ancilla_qubits);
  check_shape(g, strategy);
  return strategy_value(g, strategy);
}

CheatStrategy honest_strategy(const ProtocolParams& p, Side side, int ancilla_qubits) {
  p.validate();
  const CheatLayout l = cheat_layout(p.n, side, ancilla_qubits);
  CheatStrategy s;
  s.side = side;
  s.ancilla_qubits = ancilla_qubits;

  // Track which particle label sits in each workspace slot; -1 is ancilla.
  std::vector<int> labels;
  Eigen::VectorXcd init = Eigen::VectorXcd::Ones(1);
  for (int i = 1; i <= p.n; ++i) {
    if (!cheater_owns(side, i)) continue;
    init = kron_vec(init, build_phi(p.weight(i)).amp);
    labels.push_back(i);
    labels.push_back(p.n + i);
  }
  Eigen::VectorXcd zeros = Eigen::VectorXcd::Zero(Eigen::Index{1} << ancilla_qubits);
  zeros[0] = 1.0;
  init = kron_vec(init, zeros);
  labels.insert(labels.end(), static_cast<std::size_t>(ancilla_qubits), -1);
  s.initial_state = PureState(l.initial_workspace, std::move(init));

  auto arrange = [&](const std::vector<int>& wanted_front) {
    std::vector<int> perm;
    for (int want : wanted_front)
      perm.push_back(static_cast<int>(std::find(labels.begin(), labels.end(), want) - labels.begin()));
    for (int slot = 0; slot < static_cast<int>(labels.size()); ++slot)
      if (std::find(perm.begin(), perm.end(), slot) == perm.end()) perm.push_back(slot);
    std::vector<int> next(labels.size());
    for (std::size_t pos = 0; pos < perm.size(); ++pos) next[pos] = labels[static_cast<std::size_t>(perm[pos])];
    labels = std::move(next);
    s.stages.push_back(qubit_permutation_matrix(perm));
  };

  for (int i = 1; i <= p.n; ++i) {
    if (cheater_owns(side, i)) {
      arrange({side == Side::B ? i : p.n + i});
      labels.erase(labels.begin());
    } else {
      labels.push_back(side == Side::B ? p.n + i : i);
    }
  }
  std::vector<int> dump;
  for (int k = 1; k <= p.n; ++k) dump.push_back(side == Side::B ? p.n + k : k);
  arrange(dump);
  return s;
}

CheatStrategy random_strategy(const ProtocolParams& p, Side side, int ancilla_qubits,
                              std::uint64_t seed) {
  p.validate();
  const CheatLayout l = cheat_layout(p.n, side, ancilla_qubits);
  std::mt19937_64 rng(seed);
  CheatStrategy s;
  s.side = side;
  s.ancilla_qubits = ancilla_qubits;
  for (const auto& t : l.stage_targets) s.stages.push_back(random_unitary(Eigen::Index{1} << t.size(), rng));
  Eigen::VectorXcd v = gaussian_vector(Eigen::Index{1} << l.initial_workspace, rng);
  s.initial_state = PureState(l.initial_workspace, v / v.norm());
  return s;
}

AscentResult ascend(const ProtocolParams& p, Side side, int ancilla_qubits, int iters,
                    std::uint64_t seed, AscentRule rule) {
  if (iters < 0) throw InvalidArgument("iteration count must be nonnegative");
  const Game g = make_game(p, side, ancilla_qubits);
  AscentResult res;
  res.strategy = random_strategy(p, side, ancilla_qubits, seed);
  res.value = strategy_value(g, res.strategy);
  res.max_evaluated = res.value;
  res.trace.push_back(res.value);

  const std::size_t components = res.strategy.stages.size() + 1;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> step(components, 0.3);

  auto try_candidate = [&](CheatStrategy cand) {
    const double v = strategy_value(g, cand);
    res.max_evaluated = std::max(res.max_evaluated, v);
    if (v > res.value) {
      res.value = v;
      res.strategy = std::move(cand);
      return true;
    }
    return false;
  };

  for (int it = 0; it < iters; ++it) {
    if (rule == AscentRule::SeeSaw) {
      for (std::size_t j = 0; j < components; ++j) {
        CheatStrategy cand = res.strategy;
        seesaw_update(g, cand, j);
        try_candidate(std::move(cand));
      }
    } else {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(0, components - 1)(rng);
      CheatStrategy cand = res.strategy;
      if (j < res.strategy.stages.size()) {
        const Eigen::Index dim = cand.stages[j].rows();
        Eigen::MatrixXcd h(dim, dim);
        for (Eigen::Index c = 0; c < dim; ++c) h.col(c) = gaussian_vector(dim, rng);
        h = (h + h.adjoint()).eval();
        h /= h.norm();
        cand.stages[j] = unitary_exp(h, step[j]) * cand.stages[j];
      } else {
        Eigen::VectorXcd v = cand.initial_state.amp + step[j] * gaussian_vector(cand.initial_state.amp.size(), rng) /
                                                          std::sqrt(static_cast<double>(cand.initial_state.amp.size()));
        cand.initial_state.amp = v / v.norm();
      }
      step[j] = try_candidate(std::move(cand)) ? std::min(1.0, step[j] * 1.5) : std::max(1e-6, step[j] * 0.8);
    }
    res.trace.push_back(res.value);
  }
  res.iterations = iters;
  return res;
}

std::vector<GapRow> gap_report(const ProtocolParams& p, const GapConfig& cfg) {
  p.validate();
  const BoundReport b = bounds_at_constraint(p);
  std::vector<GapRow> rows;
  for (Side side : {Side::A, Side::B}) {
    GapRow row;
    row.side = side;
    row.upper = std::min(1.0, side == Side::B ? b.beta : b.alpha);
    try {
      row.lower = ascend(p, side, cfg.ancilla_qubits, cfg.iters, cfg.seed).value;
    } catch (const DegenerateProtocol&) {
      continue;  // the side can never win honestly; no verification target
    }
    row.gap = row.upper - row.lower;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wcf
