#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entdist/linalg.hpp"

namespace entdist {

/// Kraus-operator representation of a CPTP map; each operator is
/// out_dim x in_dim and the family satisfies sum K_i^dag K_i = I.
struct QuantumChannel {
  std::vector<Mat> kraus;
  int in_dim = 0;
  int out_dim = 0;
  std::string label;
};

enum class ChannelKind { Erasure, Dephasing, Gadc, Pauli, Identity };

struct ChannelParams {
  ChannelKind kind = ChannelKind::Identity;
  double p = 0.0;      // erasure / dephasing probability
  double gamma = 0.0;  // GADC damping
  double T = 0.0;      // GADC thermal parameter
  double px = 0.0, py = 0.0, pz = 0.0;  // Pauli error probabilities
  int d = 2;           // erasure input dimension / identity dimension

  /// Parse a channel spec string, grammar: kind ':' key '=' value
  /// (',' key '=' value)*, e.g. "erasure:p=0.1,d=2", "gadc:gamma=0.3,T=0.1",
  /// "dephasing:p=0.05", "pauli:px=0.1,py=0.1,pz=0.1", "identity:d=2".
  /// Throws std::invalid_argument naming the offending token.
  static ChannelParams parse(const std::string& spec);

  std::string to_string() const;
};

QuantumChannel make_channel(const ChannelParams& params);

/// Apply to one subsystem of a composite state; output dims updated there.
DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho, int subsystem = 0);

/// Choi state J = (id (x) N)(phi_d), dims [in_dim, out_dim].
DensityMatrix choi_state(const QuantumChannel& ch);

/// Shift and clock unitaries and their products X^a Z^b.
Mat pauli_shift(int d);
Mat pauli_clock(int d);
Mat generalized_pauli(int d, int a, int b);

/// Result of the numerical teleportation-covariance decision: when
/// covariant, corrections[a*d+b] is the output unitary V paired with the
/// input Pauli X^a Z^b.
struct TeleportCovariance {
  bool covariant = false;
  int d = 0;
  std::vector<Mat> corrections;
};

TeleportCovariance teleportation_covariance(const QuantumChannel& ch);
bool is_teleportation_covariant(const QuantumChannel& ch);

struct TeleportOutcome {
  double prob;
  Mat corrected;  // unnormalized post-measurement output after correction
};

/// Outcome-resolved Choi-state teleportation of rho through the channel;
/// one entry per generalized Bell outcome, probabilities sum to 1.
std::vector<TeleportOutcome> teleport_outcomes(const QuantumChannel& ch, const DensityMatrix& rho,
                                               const TeleportCovariance& cov);

/// Outcome-averaged Choi-state simulation; equals apply(ch, rho) for
/// teleportation-covariant channels. Throws if the channel is not covariant.
DensityMatrix simulate_via_choi(const QuantumChannel& ch, const DensityMatrix& rho);
DensityMatrix simulate_via_choi(const QuantumChannel& ch, const DensityMatrix& rho,
                                const TeleportCovariance& cov);

}  // namespace entdist
