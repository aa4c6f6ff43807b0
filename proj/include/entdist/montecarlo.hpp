#pragma once

#include <cstdint>
#include <random>

#include "entdist/channels.hpp"
#include "entdist/linalg.hpp"

namespace entdist {

/// Outcome of a finite-n protocol simulation. Identical seeds reproduce the
/// report bit-for-bit regardless of how blocks were scheduled.
struct SimReport {
  long long n_uses = 0;  // protocol repetitions (samples or blocks)
  double empirical_rate = 0.0;
  double std_err = 0.0;
  double success_prob_hat = 0.0;
  double analytic_rate = 0.0;
  uint64_t seed = 0;
};

/// Flag-discard protocol on a pair of erasure channels: Bernoulli erasure
/// flags, keep pairs where both sides arrive intact.
SimReport simulate_erasure_protocol(double p1, double p2, int d, long long n, uint64_t seed);

/// Single multi-rail block: exact Kraus trajectory on psi_k followed by the
/// sampled one-particle-sector projection on both sides.
struct MultirailBlock {
  bool success = false;
  double hashing_rate = 0.0;   // max coherent-information direction, clamped at 0
  double fidelity_phi_k = 0.0; // post-selected branch fidelity to phi_k (0 on failure)
};

MultirailBlock run_multirail_block(const QuantumChannel& side1, const QuantumChannel& side2, int k,
                                   std::mt19937_64& rng);

/// Multi-rail post-selection + hashing rate estimate over n_blocks trajectories.
SimReport simulate_multirail(double gamma1, double gamma2, double t1, double t2, int k,
                             long long n_blocks, uint64_t seed);

/// Outcome-resolved teleportation simulation check over random pure inputs;
/// returns the maximum trace distance between the outcome-averaged corrected
/// output and the directly applied channel.
double simulate_teleportation_check(const ChannelParams& cp, int n_inputs, uint64_t seed);

}  // namespace entdist
