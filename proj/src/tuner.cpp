#include "wcf/tuner.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "wcf/nelder_mead.hpp"
#include "wcf/tree_eval.hpp"

namespace wcf {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ProtocolParams reciprocal_params(int n, int offset) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) a[static_cast<std::size_t>(k - 1)] = 1.0 / (k + offset);
  return ProtocolParams::make(std::move(a), 0.5);
}

SweepRow sweep_row(int n, int offset) {
  const BoundReport b = bounds(reciprocal_params(n, offset));
  if (std::abs(b.constraint - 0.5) > 1e-12) {
    std::ostringstream os;
    os << "reciprocal family misses the constraint at n = " << n << ": " << b.constraint;
    throw std::logic_error(os.str());
  }
  return {n, b.alpha, b.beta, b.constraint};
}

}  // namespace

void TuneConfig::validate() const {
  if (n < 2) throw InvalidArgument("optimize needs n >= 2");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (max_evals < 1) throw InvalidArgument("max_evals must be at least 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("c must lie in (0,1)");
}

std::optional<double> solve_constraint_for_a1(std::span<const double> a_rest, double c) {
  for (double x : a_rest)
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("weights must lie in [0,1]");
  const auto [high, low] = high_low_below_root<double>(a_rest, true);
  if (high == low) return std::nullopt;
  const double a1 = (c - low) / (high - low);
  if (!(a1 >= 0.0 && a1 <= 1.0)) return std::nullopt;
  return a1;
}

TuneResult optimize_bias(const TuneConfig& cfg) {
  cfg.validate();
  const int dim = cfg.n - 1;
  long evals = 0;

  auto params_from = [&](const Eigen::VectorXd& x) -> std::optional<ProtocolParams> {
    std::vector<double> a(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i + 1)] = logistic(x[i]);
    const auto a1 = solve_constraint_for_a1(std::span<const double>(a).subspan(1), cfg.c);
    if (!a1) return std::nullopt;
    a[0] = *a1;
    return ProtocolParams{cfg.n, std::move(a), cfg.c};
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    ++evals;
    const auto p = params_from(x);
    if (!p) {
      // Distance of the would-be a_1 from the middle steers back to feasibility.
      std::vector<double> rest(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) rest[static_cast<std::size_t>(i)] = logistic(x[i]);
      const auto [high, low] = high_low_below_root<double>(rest, true);
      const double a1 = high != low ? (cfg.c - low) / (high - low) : 1e6;
      return 10.0 + std::min(std::abs(a1 - 0.5), 1e6);
    }
    return std::max(eval_alpha_fast(*p), eval_beta_fast(*p));
  };

  NelderMeadOptions opt;
  opt.max_evals = cfg.max_evals;
  opt.x_tol = cfg.tol;
  opt.f_tol = cfg.tol * 1e-4;

  double best_f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> g(-1.0, 1.0);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = g(rng);
    // Re-initializing the simplex at the incumbent escapes collapsed simplices.
    double prev = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 8; ++rep) {
      const auto res = nelder_mead<double>(objective, x, opt);
      x = res.x;
      const bool stalled = prev - res.f <= cfg.tol * 1e-2;
      prev = std::min(prev, res.f);
      if (stalled) break;
    }
    if (prev < best_f) {
      best_f = prev;
      best_x = x;
    }
  }

  const auto p = params_from(best_x);
  if (!p) throw DegenerateProtocol("optimizer found no parameters meeting the constraint");
  TuneResult out;
  out.params = *p;
  const BoundReport b = bounds(out.params);
  out.alpha = b.alpha;
  out.beta = b.beta;
  out.bias = std::max(b.alpha, b.beta) - cfg.c;
  if (std::abs(out.bias + cfg.c - best_f) > 1e-12)
    throw std::logic_error("recomputed bias disagrees with the optimizer's incumbent");
  out.evals = evals;
  out.alpha_beta_residual = std::abs(b.alpha - b.beta);
  return out;
}

std::vector<SweepRow> sweep_reciprocal(int n_max) {
  if (n_max < 2) throw InvalidArgument("sweep needs n_max >= 2");
  std::vector<SweepRow> rows;
  for (int n = 2; n <= n_max; n += 2) rows.push_back(sweep_row(n, 0));
  return rows;
}

std::vector<SweepRow> sweep_reciprocal_odd(int n_max) {
  if (n_max < 1) throw InvalidArgument("sweep needs n_max >= 1");
  std::vector<SweepRow> rows;
  for (int n = 1; n <= n_max; n += 2) rows.push_back(sweep_row(n, 1));
  return rows;
}

}  // namespace wcf
