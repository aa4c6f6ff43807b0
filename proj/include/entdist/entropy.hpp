#pragma once

#include <string>

#include "entdist/channels.hpp"
#include "entdist/linalg.hpp"
#include "entdist/optimize.hpp"

namespace entdist {

/// Labeled entropic quantity in bits; `quantity` is one of
/// {S, D, Ic_state, Ic_channel, Ir_channel, h2}.
struct EntropicValue {
  double value = 0.0;
  std::string quantity;
};

/// Von Neumann entropy in bits; eigenvalues below 1e-12 are excluded.
double von_neumann_entropy(const DensityMatrix& rho);

/// Binary Shannon entropy; throws outside [0,1].
double binary_entropy(double p);

/// Quantum relative entropy D(rho||sigma) in bits. Returns +infinity when
/// rho has more than tolerance weight outside the support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// I_c(A>B) = S(B) - S(AB) for a bipartite state. May be negative.
double coherent_information_state(const DensityMatrix& rho_ab);

/// Channel coherent information: max over input density matrices of
/// I_c(A>B) on (id (x) N)(purification). Certified lower bound on Q.
double coherent_information_channel(const QuantumChannel& ch, const NelderMeadOptions& opts = {});

/// Reverse coherent information: max over inputs of S(A) - S(AB).
/// Lower bound on the CPP-assisted entanglement generation capacity.
double reverse_coherent_information_channel(const QuantumChannel& ch,
                                            const NelderMeadOptions& opts = {});

/// Internal hook shared with the Rains outer maximization: builds the joint
/// output state (id (x) N)(purification(rho_in)) with dims [in_dim, out_dim].
DensityMatrix channel_output_state(const QuantumChannel& ch, const Mat& rho_in);

}  // namespace entdist
