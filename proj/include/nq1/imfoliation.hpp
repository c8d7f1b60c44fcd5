#pragma once

#include "nq1/reduction.hpp"

#include <optional>

namespace nq1 {

/// Infinitesimal ideal system (B, F, nabla) on a Lie algebroid, with an
/// optional flat frame of E/B in complement coordinates.
struct IMFoliation {
  LieAlgebroidData algebroid;
  ClassicalTriple triple;
  std::optional<PolyMatrix> flat_frame;
};

/// Flat frame of I: the supplied one, else flat_frame_solve. Throws
/// ClassicalError when none is available.
PolyMatrix imf_flat_frame(const IMFoliation& i);

/// Entries, in order: B closed under the bracket, then axioms (i)-(iv)
/// on frame representatives, then (iii) again through the symbol of
/// [Q, b] (second code path).
AxiomReport imf_check_axioms(const IMFoliation& i, const SampleOptions& opt = {});

/// Requires D certified, involutive and Q-invariant.
IMFoliation imf_from_distribution(const Distribution& d, const VectorField& q);

struct IMDistribution {
  Distribution distribution;
  InvolutivityCheck involutive;
  QInvarianceCheck q_invariant;
};

/// classical_to_dist on the flat frame, followed by direct verification
/// that the result is involutive and preserved by [Q, .].
IMDistribution distribution_from_imf(const IMFoliation& i, const SampleOptions& opt = {});

}  // namespace nq1
