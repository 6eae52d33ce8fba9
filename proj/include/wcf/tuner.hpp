#ifndef WCF_TUNER_HPP
#define WCF_TUNER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wcf/types.hpp"

namespace wcf {

struct TuneConfig {
  int n = 3;
  int restarts = 100;
  long max_evals = 20000;  // per local simplex run
  std::uint64_t seed = 0;
  double tol = 1e-10;
  double c = 0.5;

  void validate() const;
};

struct TuneResult {
  ProtocolParams params;
  double alpha = 0;
  double beta = 0;
  double bias = 0;  // max(alpha, beta) - c
  long evals = 0;
  double alpha_beta_residual = 0;  // |alpha - beta|
};

/// The constraint's root value is a_1 H_1 + (1 - a_1) L_1 with (H_1, L_1)
/// from the linear recurrence over a_2..a_n. Returns the a_1 that makes it
/// equal c, or nothing when H_1 = L_1 or the solution leaves [0,1].
std::optional<double> solve_constraint_for_a1(std::span<const double> a_rest, double c);

/// Multi-start simplex minimization of max(alpha, beta) over logit(a_2..a_n).
TuneResult optimize_bias(const TuneConfig& cfg);

struct SweepRow {
  int n = 0;
  double alpha = 0;
  double beta = 0;
  double constraint = 0;
};

/// a_k = 1/k for every even n <= n_max.
std::vector<SweepRow> sweep_reciprocal(int n_max);

/// a_k = 1/(k+1) for every odd n <= n_max.
std::vector<SweepRow> sweep_reciprocal_odd(int n_max);

}  // namespace wcf

#endif  // WCF_TUNER_HPP
