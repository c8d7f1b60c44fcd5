#pragma once

#include "nq1/distribution.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nq1 {

enum class ReductionMode { point_body, adapted };
const char* to_string(ReductionMode m);

/// Declared regularity data for a quotient. In adapted mode F must be
/// spanned by the coordinate fields d/dx_i, i in fiber_coords; the
/// remaining coordinates are transverse and descend to the quotient.
struct ReductionSetting {
  ReductionMode mode = ReductionMode::point_body;
  std::vector<int> fiber_coords;
  std::optional<PolyMatrix> flat_frame;
  int max_xi_degree = -1;  // -1: the rank
  int max_base_degree = 6;
  SampleOptions samples;
};

/// Point body when n = 0; otherwise adapted, with fiber coordinates the
/// i for which d/dx_i lies in the span of the degree 0 symbols.
ReductionSetting detect_setting(const Distribution& d, ReductionSetting base = {});

class ReductionError : public Error {
public:
  using Error::Error;
};

struct FlatFrameResult {
  bool ok = false;
  PolyMatrix frame;
  std::string failure;
};

/// Flat frame of E/B. Supported: all connection matrices zero (identity
/// frame), or F generated by constant multiples of coordinate fields with
/// constant, commuting, nilpotent connection matrices (finite
/// exponential). Anything else fails with an explanation.
FlatFrameResult flat_frame_solve(const ClassicalTriple& t);

struct InvariantBasis {
  std::vector<Function> basis;
  int max_xi_degree = 0;
  int max_base_degree = 0;
};

/// Basis of the D-invariant functions up to the cutoffs. Point bodies
/// give the full answer; in adapted mode coefficients are searched among
/// polynomials of degree <= max_base_degree in all base coordinates.
InvariantBasis invariant_functions(const Distribution& d, const ReductionSetting& s);

struct QuotientResult {
  bool singular = false;
  LieAlgebroidData algebroid;
  VectorField q;
  /// Functions on E[1] that become the reduced coordinates: transverse
  /// x's (by index) and the odd coordinates zeta_g.
  std::vector<int> transverse_coords;
  std::vector<Function> zeta;
  /// Singular point-body path: the invariant algebra, Q on it, and the
  /// number of algebra generators in each degree.
  InvariantBasis invariants;
  std::vector<std::pair<Function, Function>> q_on_invariants;
  std::map<int, int> generator_degrees;
};

QuotientResult reduce(const VectorField& q, const Distribution& d, const ReductionSetting& s);

}  // namespace nq1
