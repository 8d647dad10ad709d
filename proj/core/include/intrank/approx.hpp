#pragma once

#include <optional>
#include <vector>

#include "intrank/interval.hpp"
#include "intrank/quadext.hpp"

namespace intrank {

// Denominator-escalation schedule used by every rounding step: continued
// fraction convergents with denominator bound 2^e for e walking this list,
// capped by the precision budget (INTERVAL_RANK_PRECISION_BUDGET, default 64).
std::vector<int> denominator_schedule(int budget_exponent);

int default_precision_budget();

// Best continued-fraction convergent of `x` with denominator <= 2^bound_exp.
// Exact for rational x once the bound reaches its denominator.
Rational cf_approx(const QuadExt& x, int bound_exp);

// Rational approximation of x with |x - result| < eps, eps > 0 rational.
Rational approx_within(const QuadExt& x, const Rational& eps);

// Rounds x to a rational inside `box`.  Walks the denominator schedule; the
// first convergent landing in the box wins, so coarse values are preferred.
// BoxTooTight if the schedule is exhausted (x on or outside the boundary).
Rational round_in_box(const QuadExt& x, const RatInterval& box,
                      int budget_exponent = default_precision_budget());

// Like round_in_box but additionally requires a nonzero result whenever
// x != 0 (used where a construction divides by the rounded value).
Rational round_in_box_nonzero(const QuadExt& x, const RatInterval& box,
                              int budget_exponent = default_precision_budget());

// Outward rational enclosure of x with radius <= `radius` and x strictly
// interior whenever x is irrational; degenerate enclosures are never produced
// here (pinning is the caller's decision).
RatInterval enclose(const QuadExt& x, const Rational& radius);

// Rational lower bound of a positive QuadExt (0 < result <= x).
Rational positive_rational_lb(const QuadExt& x);

// Closed rational box around x with the given radius, clipped to `clip`
// when provided.  x need not be rational; endpoints are chosen so that the
// box always contains x.
RatInterval box_around(const QuadExt& x, const Rational& radius);
RatInterval box_around_clipped(const QuadExt& x, const Rational& radius,
                               const RatInterval& clip);

}  // namespace intrank
