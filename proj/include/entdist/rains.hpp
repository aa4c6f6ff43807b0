#pragma once

#include <optional>

#include "entdist/channels.hpp"
#include "entdist/linalg.hpp"
#include "entdist/optimize.hpp"

namespace entdist {

struct RainsOptions {
  int max_iter = 2500;       // projected-gradient iteration budget
  double fp_tol = 1e-11;     // relative fixed-point movement tolerance
  double gap_target = 1e-5;  // accepted linearization gap
  bool compute_gap = true;
};

inline RainsOptions rains_exploration_options() {
  RainsOptions o;
  o.max_iter = 260;
  o.fp_tol = 1e-9;
  o.compute_gap = false;
  return o;
}

/// Outcome of min over PPT' of D(rho||sigma). `minimizer` is PSD within
/// 1e-8 with ||sigma^TB||_1 <= 1 + 1e-8; its trace may be below 1.
struct RainsResult {
  double value = 0.0;  // bits
  Mat minimizer;
  double gap_estimate = 0.0;
  int iterations = 0;
};

/// Frobenius projection onto PPT' = {sigma >= 0, ||sigma^TB||_1 <= 1}
/// for a bipartite da x db system, via Dykstra's alternating projections.
Mat project_pptprime(const Mat& sigma, int da, int db);

/// Rains relative entropy across the cut after the first `cut` subsystems.
RainsResult rains_relative_entropy(const DensityMatrix& rho, int cut, const RainsOptions& opts = {},
                                   const std::optional<Mat>& init = std::nullopt);

/// Channel Rains information: multi-start outer maximization over input
/// density matrices of the Rains relative entropy of the channel output.
double rains_information_channel(const QuantumChannel& ch,
                                 const NelderMeadOptions& outer = NelderMeadOptions{140, 1e-6, 0.3},
                                 const RainsOptions& polish = {});

}  // namespace entdist
