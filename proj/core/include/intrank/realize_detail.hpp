#pragma once

#include "intrank/realize.hpp"

// Shared internals of the realization constructions.  Not installed.

namespace intrank::detail {

// Thrown inside a construction attempt to request another refinement round
// (all neighbourhood radii halved).  Distinct from ConstructionFailed, which
// is raised only once the schedule is exhausted.
struct RetryNeeded {
  std::string why;
};

constexpr int kMaxRefinementRounds = 24;

// Exact postcondition check shared by every construction.
void verify_realization(const IntervalMatrix& alpha, const RationalMatrix& M,
                        std::size_t target, RankMode mode);

// Rational lower bound of half the distance from v to the nearer endpoint.
Rational half_min_slack(const QuadExt& v, const RatInterval& box);

}  // namespace intrank::detail
