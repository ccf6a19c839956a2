#pragma once

#include <cstdint>

#include "maxproj/equality.hpp"

namespace maxproj {

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 5000;  // per smoothing level
  double eps_start = 1e-2;
  double eps_end = 1e-10;
  double eps_factor = 0.1;       // geometric schedule
  double backtrack_shrink = 0.5;
  std::uint64_t seed = 0;
  double convergence_tol = 1e-10;
  int threads = 1;

  void validate() const;
};

struct OptResult {
  double best_value = 0.0;
  WeightedFrame best_frame;
  std::vector<double> per_restart;
  bool converged = false;
};

/// Exact maximizer of t^T M t over unit nonnegative t, M the entrywise-modulus
/// Gram matrix: the Perron vector, by shifted power iteration.
std::vector<double> perron_weights(const std::vector<KVector>& vectors);

/// Estimates lambda_K(n,N): alternating ascent over tight frames (orthonormal
/// N x n factor, QR retraction, smoothed modulus) and weights (Perron step).
OptResult maximize_lambda_rel(Field field, int n, int N, const OptimizerConfig& cfg = {});

/// Estimates mu_K(n,N): same frame ascent with weights frozen at 1/sqrt(N).
OptResult mu(Field field, int n, int N, const OptimizerConfig& cfg = {});

struct DivisibilityReport {
  double mu_value = 0.0;
  double delta = 0.0;
  bool equality = false;
  bool divisible = false;
  int restarts_used = 0;
};

/// mu_K(n,N) attains delta_K(n) exactly when d_K(n) divides N; checks the two
/// sides agree on the catalogued dimensions.
DivisibilityReport divisibility_check(Field field, int n, int N, const OptimizerConfig& cfg = {});

/// One frame-ascent pass at fixed weights starting from the given frame;
/// returns the drift in the unsmoothed objective (stationarity probe).
double frame_ascent_drift(const WeightedFrame& start, const OptimizerConfig& cfg = {});

}  // namespace maxproj
