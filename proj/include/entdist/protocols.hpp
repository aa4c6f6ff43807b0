#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entdist/channels.hpp"
#include "entdist/linalg.hpp"

namespace entdist {

/// Named (lower, upper) capacity bounds in bits per channel use.
struct BoundInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_source;
  std::string upper_source;
};

/// POVM on the helper subsystem: PSD operators summing to identity.
struct MeasurementFamily {
  std::vector<Mat> operators;
};

/// Coherent information, reverse coherent information and Rains information
/// of one channel; closed forms for erasure/dephasing/identity, optimizer
/// and solver values for GADC/Pauli.
struct ChannelQuantities {
  double ic = 0.0;
  double ir = 0.0;
  double rains = 0.0;
  bool closed_form = false;
};

ChannelQuantities channel_quantities(const ChannelParams& cp);

/// Per-channel capacity surrogates with provenance labels. q_lower is a
/// lower bound on Q, ecpp_lower a lower bound on E_cpp (>= q_lower by
/// construction), rains_upper an upper bound on E_cpp.
struct ChannelRates {
  double q_lower = 0.0;
  double ecpp_lower = 0.0;
  double rains_upper = 0.0;
  std::string q_source;
  std::string ecpp_source;
  std::string rains_source;
};

ChannelRates channel_rate_estimates(const ChannelParams& cp);
ChannelRates rates_from_quantities(const ChannelParams& cp, const ChannelQuantities& q);

/// Exact EPR distribution capacity of two qudit erasure channels.
double erasure_capacity(double p1, double p2, int d);

/// GHZ capacity when the worst channel is dephasing: returns 1 - h2(p) when
/// every supplied Q lower bound reaches it, nullopt otherwise.
std::optional<double> dephasing_ghz_capacity(double p, const std::vector<double>& other_q_lower_bounds);

/// max{min{Q1, Ecpp2}, min{Q2, Ecpp1}}; requires Ecpp_i >= Q_i.
double composition_lower_bound(double q1, double ecpp1, double q2, double ecpp2);

/// Multi-rail achievable rate through a pair of GADCs: one-particle-sector
/// post-selection followed by hashing, per channel use.
double multirail_rate(double gamma1, double gamma2, double t1, double t2, int k);

/// Best multi-rail rate over k in [2, 6], reporting the argmax.
std::pair<double, int> best_multirail_rate(double gamma1, double gamma2, double t1, double t2);

/// Measurement-search lower bound on the entanglement of assistance of
/// J_1 (x) J_2 with the source as helper; deterministic for a fixed seed and
/// nondecreasing in n_measurements.
double assisted_distillation_lower_bound(const QuantumChannel& ch1, const QuantumChannel& ch2,
                                         int n_measurements, uint64_t seed);

BoundInterval epr_bounds(const ChannelParams& c1, const ChannelParams& c2);

/// Same interval assembled from precomputed per-channel rates (sweep cache path).
BoundInterval epr_bounds_with_rates(const ChannelParams& c1, const ChannelParams& c2,
                                    const ChannelRates& r1, const ChannelRates& r2);

BoundInterval ghz_bounds(const std::vector<ChannelParams>& channels);

}  // namespace entdist
