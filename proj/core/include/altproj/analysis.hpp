#pragma once
//
// Friedrichs angle between two subspaces and the rate identity
// ||(P2 P1)^n - P_M|| = c^(2n-1).
//

#include <vector>

#include "altproj/linalg.hpp"

namespace altproj {

// Residual threshold for dropping a direction when removing M = S1 ∩ S2.
inline constexpr double kDeflationTol = 1e-10;

// Cosine of the Friedrichs angle, in [0, 1]. 0 when either space is contained
// in the other's intersection (nothing left after deflation).
double friedrichs_cosine(const Subspace& s1, const Subspace& s2);

struct RateCurve {
  double c = 0.0;
  std::vector<double> measured;   // ||(P2 P1)^n - P_M||, n = 1..N
  std::vector<double> predicted;  // c^(2n-1)
  std::vector<double> abs_err;
  std::vector<bool> flagged;      // abs_err >= kRateTol

  static constexpr double kRateTol = 1e-8;

  bool all_within_tol() const;
};

RateCurve rate_curve(const Subspace& s1, const Subspace& s2, int N);

}  // namespace altproj
