// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and time budgets are fixed here.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wcf/cheat_search.hpp"
#include "wcf/dual_cert.hpp"
#include "wcf/protocol.hpp"
#include "wcf/tree_eval.hpp"
#include "wcf/tuner.hpp"

using namespace wcf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

const std::vector<double> kPublished3 = {0.74094, 0.479696, 0.186312};
const std::vector<double> kPublished8 = {0.680706, 0.43281,  0.323787, 0.264123,
                                     0.224377, 0.197997, 0.177191, 0.0834815};

Outcome published_point() {
  Outcome o;
  const auto t0 = Clock::now();
  const BoundReport b = bounds(ProtocolParams::make(kPublished3));
  const double t = seconds_since(t0);
  note(o, std::abs(b.constraint - 0.5) <= 1e-5, "constraint " + fmt("%.10f", b.constraint));
  note(o, std::abs(b.alpha - 0.6990) <= 5e-4, "alpha " + fmt("%.8f", b.alpha));
  note(o, std::abs(b.beta - 0.6990) <= 5e-4, "beta " + fmt("%.8f", b.beta));
  note(o, t < 0.1, "time " + fmt("%.2es", t));
  return o;
}

Outcome published_eight() {
  Outcome o;
  const auto t0 = Clock::now();
  const BoundReport b = bounds(ProtocolParams::make(kPublished8));
  const double t = seconds_since(t0);
  const double bias = std::max(b.alpha, b.beta) - 0.5;
  note(o, std::abs(bias - 0.1931) <= 2e-4, "bias " + fmt("%.8f", bias));
  note(o, std::abs(b.constraint - 0.5) <= 1e-4, "constraint " + fmt("%.10f", b.constraint));
  note(o, t < 0.1, "time " + fmt("%.2es", t));
  return o;
}

Outcome optimizer() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<std::pair<int, double>> targets = {{3, 0.1992}, {4, 0.1958}, {6, 0.1938}, {8, 0.1932}, {10, 0.1928}};
  for (const auto& [n, target] : targets) {
    TuneConfig cfg;
    cfg.n = n;
    const TuneResult r = optimize_bias(cfg);
    const double dc = std::abs(eval_constraint_fast(r.params) - 0.5);
    note(o, r.bias <= target && dc <= 1e-12,
         "n=" + std::to_string(n) + " bias " + fmt("%.6f", r.bias) + " |dc| " + fmt("%.1e", dc));
  }
  const double t = seconds_since(t0);
  note(o, t <= 600, "time " + fmt("%.1fs", t));
  return o;
}

Outcome sweep() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto rows = sweep_reciprocal(10000);
  const double t = seconds_since(t0);
  const double m = std::max(rows.back().alpha, rows.back().beta);
  bool ordered = true;
  for (const auto& r : rows) ordered = ordered && r.beta >= r.alpha;
  note(o, rows.back().n == 10000 && m >= 0.6920 && m <= 0.6925, "max(alpha,beta) at n=10^4 " + fmt("%.6f", m));
  note(o, ordered, "beta >= alpha on every even row");
  note(o, t <= 10, "time " + fmt("%.2fs", t));
  return o;
}

Outcome sr_family() {
  Outcome o;
  double worst_c = 0, worst_prod = 0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const BoundReport b = bounds(ProtocolParams::make({x, 1 - 1 / (2 * x)}));
    worst_c = std::max(worst_c, std::abs(b.constraint - 0.5));
    worst_prod = std::max(worst_prod, std::abs(b.alpha * b.beta - 0.5));
  }
  const double x = 1 / std::sqrt(2.0);
  const BoundReport s = bounds(ProtocolParams::make({x, 1 - x}));
  note(o, worst_c <= 1e-15, "max |constraint-1/2| " + fmt("%.1e", worst_c));
  note(o, worst_prod <= 1e-9, "max |alpha*beta-1/2| " + fmt("%.1e", worst_prod));
  note(o, std::abs(s.alpha - x) <= 1e-9 && std::abs(s.beta - x) <= 1e-9,
       "symmetric point bias " + fmt("%.6f", std::max(s.alpha, s.beta) - 0.5));
  return o;
}

Outcome dense_vs_fast() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int n = 1; n <= 12; ++n) {
    const auto proj = build_outcome_projectors(n);
    for (int d = 0; d < 200; ++d) {
      const ProtocolParams p = ProtocolParams::make(oracle::random_weights(n, rng, 0.0, 1.0));
      const double rb = eval_tree_dense(beta_rms_chain(p), proj.e1);
      const double ra = eval_tree_dense(alpha_rms_chain(p), proj.e0);
      worst = std::max(worst, oracle::rel_err(rb * rb / p.c, eval_beta_fast(p)));
      worst = std::max(worst, oracle::rel_err(ra * ra / (1 - p.c), eval_alpha_fast(p)));
      worst = std::max(worst, oracle::rel_err(eval_tree_dense(linear_chain(p), proj.e1), eval_constraint_fast(p)));
    }
  }
  const double t = seconds_since(t0);
  note(o, worst <= 1e-12, "worst relative disagreement " + fmt("%.1e", worst));
  note(o, t <= 60, "time " + fmt("%.1fs", t));
  return o;
}

Outcome certificates() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  int built = 0, accepted = 0;
  double worst_res = 0, worst_bound = 0, worst_eig = 0;
  auto check = [&](const ProtocolParams& p, Side side) {
    ++built;
    const DualCertificate cert = build_certificate(p, side);
    const CertReport rep = verify_certificate(cert, 8);
    if (rep.accepted) ++accepted;
    worst_res = std::max({worst_res, -rep.domination_margin, rep.balance_residual, rep.tree_match_residual});
    const BoundReport b = bounds_at_constraint(p);
    worst_bound = std::max(worst_bound, oracle::rel_err(cert.bound, side == Side::B ? b.beta : b.alpha));
    if (rep.psd_min_eig) worst_eig = std::min(worst_eig, *rep.psd_min_eig);
  };
  for (int n : {3, 5, 7, 9, 11}) {
    for (int d = 0; d < 100; ++d) {
      auto a = oracle::random_weights(n, rng, 0.01, 0.99);
      ProtocolParams p = ProtocolParams::make(a);
      p.c = eval_constraint_fast(p);
      check(p, Side::B);
    }
  }
  // Reduced cases: even n through padding, and Alice's side through the role switch.
  for (int n : {2, 4, 6, 8, 10}) {
    for (int d = 0; d < 40; ++d) {
      ProtocolParams p = ProtocolParams::make(oracle::random_weights(n, rng, 0.01, 0.99));
      p.c = eval_constraint_fast(p);
      check(p, Side::B);
      check(p, Side::A);
    }
  }
  for (int n : {3, 5, 7}) {
    for (int d = 0; d < 40; ++d) {
      ProtocolParams p = ProtocolParams::make(oracle::random_weights(n, rng, 0.01, 0.99));
      p.c = eval_constraint_fast(p);
      check(p, Side::A);
    }
  }
  const double t = seconds_since(t0);
  note(o, accepted == built, std::to_string(accepted) + "/" + std::to_string(built) + " accepted");
  note(o, worst_res <= 1e-9, "worst residual " + fmt("%.1e", worst_res));
  note(o, worst_bound <= 1e-10, "worst bound mismatch " + fmt("%.1e", worst_bound));
  note(o, worst_eig >= -1e-10, "eigenvalue oracle min " + fmt("%.1e", worst_eig));
  note(o, t <= 120, "time " + fmt("%.1fs", t));
  return o;
}

Outcome honest_protocol() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  double worst = 0;
  long failures = 0, disagreements = 0, runs = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int d = 0; d < 20; ++d) {
      const ProtocolParams p = ProtocolParams::make(oracle::random_weights(n, rng, 0.0, 1.0));
      worst = std::max({worst, correlation_residual(p, 0), correlation_residual(p, 1)});
    }
    const HonestSimulator sim(ProtocolParams::make(oracle::random_weights(n, rng)));
    for (std::uint64_t s = 0; s < 100000; ++s) {
      const Transcript tr = sim.run(s);
      ++runs;
      failures += tr.verification_passed ? 0 : 1;
      disagreements += tr.alice_outcome != tr.bob_outcome ? 1 : 0;
    }
  }
  const double t = seconds_since(t0);
  note(o, worst <= 1e-12, "correlation residual " + fmt("%.1e", worst));
  note(o, failures == 0 && disagreements == 0,
       std::to_string(failures) + " verification failures in " + std::to_string(runs) + " runs");
  note(o, t <= 60, "time " + fmt("%.1fs", t));
  return o;
}

Outcome lemmas() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  double worst_trace = 0;
  for (int i = 0; i < 200; ++i) {
    const int k = 1 + i % 8;
    const Eigen::Index d = Eigen::Index{1} << k;
    Eigen::VectorXcd amp(d);
    for (Eigen::Index j = 0; j < d; ++j) amp[j] = Complex(g(rng), g(rng));
    amp.normalize();
    Eigen::VectorXd e(d);
    for (Eigen::Index j = 0; j < d; ++j) e[j] = (rng() >> 7) & 1u ? 1.0 : 0.0;
    double overlap = 0;
    for (Eigen::Index j = 0; j < d; ++j) overlap += e[j] * std::norm(amp[j]);
    const MinTraceResult r = lemma_min_trace(PureState(k, amp), DiagonalOperator(k, e));
    worst_trace = std::max(worst_trace, std::abs(r.optimum - 2 * overlap * overlap));
  }
  double worst_eig = 0;
  int absorbed = 0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index da = 1 + i % 4, dk = 1 + (i / 4) % 4, dc = 2 + i % 7;
    if (da * dk * dc > 256) continue;
    const Eigen::Index dim = da * dk * dc;
    Eigen::MatrixXcd x(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) x(r, c) = Complex(g(rng), g(rng));
    const Eigen::MatrixXcd h = (x + x.adjoint()) / 2.0;
    Eigen::VectorXcd phi(dc);
    for (Eigen::Index j = 0; j < dc; ++j) phi[j] = Complex(g(rng), g(rng));
    phi.normalize();
    Eigen::MatrixXcd embed = Eigen::MatrixXcd::Zero(dim, da * dk);
    for (Eigen::Index j = 0; j < da * dk; ++j) embed.block(j * dc, j, dc, 1) = phi;
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(embed.adjoint() * h * embed,
                                                                       Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
    const Eigen::MatrixXcd m = (top + 1e-3) * Eigen::MatrixXcd::Identity(da, da);
    const AbsorbResult r = block_absorb_certificate(m, h, phi, static_cast<int>(dk), 1e-2);
    ++absorbed;
    worst_eig = std::min(worst_eig, r.min_eig.value_or(-1.0));
  }
  const double t = seconds_since(t0);
  note(o, worst_trace <= 1e-12, "min-trace worst error " + fmt("%.1e", worst_trace));
  note(o, absorbed == 100 && worst_eig >= -1e-10,
       std::to_string(absorbed) + " absorb instances, min eig(B-H) " + fmt("%.1e", worst_eig));
  note(o, t <= 60, "time " + fmt("%.1fs", t));
  return o;
}

Outcome sandwich() {
  Outcome o;
  const auto t0 = Clock::now();
  const double x = 1 / std::sqrt(2.0);
  const ProtocolParams p = ProtocolParams::make({x, 1 - x});
  const BoundReport b = bounds_at_constraint(p);
  for (Side side : {Side::A, Side::B}) {
    const double bound = side == Side::B ? b.beta : b.alpha;
    const AscentResult r = ascend(p, side, 2, 500, 1);
    note(o, r.value >= 0.700, std::string("side ") + side_char(side) + " value " + fmt("%.9f", r.value));
    note(o, r.max_evaluated <= bound + 1e-9,
         std::string("side ") + side_char(side) + " max evaluated - bound " + fmt("%.1e", r.max_evaluated - bound));
  }
  const double t = seconds_since(t0);
  note(o, t <= 300, "time " + fmt("%.1fs", t));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"published three-message point", published_point},
      {"published eight-message point", published_eight},
      {"optimizer reproduction", optimizer},
      {"reciprocal sweep", sweep},
      {"two-message family tradeoff", sr_family},
      {"dense vs fast evaluation", dense_vs_fast},
      {"certificate suite", certificates},
      {"honest protocol suite", honest_protocol},
      {"lemma suites", lemmas},
      {"primal/dual sandwich", sandwich},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
