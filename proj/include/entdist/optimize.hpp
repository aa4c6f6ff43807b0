#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "entdist/linalg.hpp"

namespace entdist {

/// Worker cap from ENTDIST_THREADS, defaulting to available parallelism.
int worker_count();

/// Runs fn(0..n-1) across workers; callers own deterministic reduction.
void parallel_for(int n, const std::function<void(int)>& fn);

uint64_t splitmix64_next(uint64_t& state);
uint64_t derive_seed(uint64_t seed, uint64_t stream);

struct NelderMeadOptions {
  int max_iter = 500;      // function evaluations budget
  double tol = 1e-7;       // simplex value-spread convergence
  double initial_step = 0.3;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evals = 0;
};

/// Derivative-free maximization of f from x0.
NelderMeadResult nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x0, const NelderMeadOptions& opts);

/// Unconstrained parametrization of d-dim density matrices by a lower
/// triangular factor L, rho = L L^dag / tr(L L^dag).
int density_param_count(int d);
Mat density_from_params(const Eigen::VectorXd& x, int d);
Eigen::VectorXd params_maximally_mixed(int d);   // L = I/sqrt(d)
Eigen::VectorXd params_entangled_marginal(int d);  // L = I, same marginal, rescaled chart
Eigen::VectorXd params_near_pure(int d);

struct InputSearchResult {
  double value = 0.0;
  Mat input;  // argmax input density matrix
  int start_index = -1;
};

/// Multi-start maximization over input density matrices. Each start draws a
/// fresh objective from the factory (objectives may carry warm-start state);
/// starts run in parallel and reduce deterministically.
InputSearchResult maximize_over_inputs(
    int d, const std::function<std::function<double(const Mat&)>()>& objective_factory,
    const NelderMeadOptions& opts, int n_random_starts = 6, uint64_t seed = 0x51a7b2c9u);

}  // namespace entdist
