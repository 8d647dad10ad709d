#include "intrank/approx.hpp"

#include <cstdlib>

namespace intrank {

int default_precision_budget() {
  static const int budget = [] {
    if (const char* env = std::getenv("INTERVAL_RANK_PRECISION_BUDGET")) {
      int v = std::atoi(env);
      if (v >= 1 && v <= 64) return v;
    }
    return 64;
  }();
  return budget;
}

std::vector<int> denominator_schedule(int budget_exponent) {
  std::vector<int> out;
  for (int e : {0, 1, 2, 4, 8, 16, 24, 32, 48, 64}) {
    if (e >= budget_exponent) {
      out.push_back(budget_exponent);
      break;
    }
    out.push_back(e);
  }
  return out;
}

Rational cf_approx(const QuadExt& x, int bound_exp) {
  Integer bound = Integer(1) << bound_exp;
  // convergent recurrence p_k = a_k p_{k-1} + p_{k-2}
  Integer p_prev(1), q_prev(0);  // p_{-1}/q_{-1}
  Integer p_cur, q_cur;
  QuadExt t = x;
  bool have = false;
  for (int iter = 0; iter < 512; ++iter) {
    Integer a = t.floor();
    Integer p = have ? a * p_cur + p_prev : a;
    Integer q = have ? a * q_cur + q_prev : Integer(1);
    if (have && q > bound) break;
    if (!have) {
      p_cur = p;
      q_cur = q;
      have = true;
    } else {
      p_prev = p_cur;
      q_prev = q_cur;
      p_cur = p;
      q_cur = q;
    }
    QuadExt frac = t - QuadExt(Rational(a));
    if (frac.is_zero()) break;  // x rational, expansion terminates
    t = QuadExt(Rational(1)) / frac;
  }
  Rational out{p_cur, q_cur};
  out.canonicalize();
  return out;
}

Rational approx_within(const QuadExt& x, const Rational& eps) {
  internal_check(sign(eps) > 0, "approx_within needs positive eps");
  if (x.is_rational()) return x.as_rational();
  for (int e = 1; e <= 256; e *= 2) {
    Rational cand = cf_approx(x, e);
    if ((x - QuadExt(cand)).abs() < QuadExt(eps)) return cand;
  }
  fail(ErrorKind::Internal, "approx_within did not converge");
}

Rational round_in_box(const QuadExt& x, const RatInterval& box, int budget_exponent) {
  if (x.is_rational() && box.contains(x.as_rational())) return x.as_rational();
  for (int e : denominator_schedule(budget_exponent)) {
    Rational cand = cf_approx(x, e);
    if (box.contains(cand)) return cand;
  }
  // One directed fallback: an endpoint or midpoint may still work when the
  // convergents oscillate out of a one-sided box.
  if (box.contains(x)) {
    if (x.is_rational()) return x.as_rational();
    Rational m = box.mid();
    if (box.contains(m)) return m;
  }
  fail(ErrorKind::BoxTooTight,
       "no rational approximation of " + x.str() + " inside " + box.str());
}

Rational round_in_box_nonzero(const QuadExt& x, const RatInterval& box,
                              int budget_exponent) {
  internal_check(x.sign() != 0, "round_in_box_nonzero on zero");
  if (x.is_rational() && box.contains(x.as_rational())) return x.as_rational();
  for (int e : denominator_schedule(budget_exponent)) {
    Rational cand = cf_approx(x, e);
    if (sign(cand) != 0 && box.contains(cand)) return cand;
  }
  fail(ErrorKind::BoxTooTight,
       "no nonzero rational approximation of " + x.str() + " inside " + box.str());
}

RatInterval enclose(const QuadExt& x, const Rational& radius) {
  internal_check(sign(radius) > 0, "enclose needs positive radius");
  Rational half = radius / 2;
  Rational center = approx_within(x, half);
  RatInterval out(center - radius, center + radius);
  internal_check(out.contains(x), "enclosure misses the value");
  if (!x.is_rational())
    internal_check(out.interior(x), "irrational value must be interior");
  return out;
}

Rational positive_rational_lb(const QuadExt& x) {
  internal_check(x.sign() > 0, "positive_rational_lb needs positive input");
  if (x.is_rational()) return x.as_rational();
  for (int e = 2;; e *= 2) {
    Rational cand = cf_approx(x, e);
    // back off a little so cand < x holds regardless of rounding side
    Rational lb = cand - pow2(-e);
    if (sign(lb) > 0 && QuadExt(lb) < x) return lb;
    internal_check(e <= 512, "positive_rational_lb did not converge");
  }
}

RatInterval box_around(const QuadExt& x, const Rational& radius) {
  internal_check(sign(radius) > 0, "box_around needs positive radius");
  if (x.is_rational())
    return RatInterval(x.as_rational() - radius, x.as_rational() + radius);
  Rational center = approx_within(x, radius / 2);
  RatInterval out(center - radius, center + radius);
  internal_check(out.interior(x), "box_around must contain x strictly");
  return out;
}

RatInterval box_around_clipped(const QuadExt& x, const Rational& radius,
                               const RatInterval& clip) {
  RatInterval raw = box_around(x, radius);
  Rational lo = rat_max(raw.lo(), clip.lo());
  Rational hi = rat_min(raw.hi(), clip.hi());
  internal_check(lo <= hi, "clipped box is empty");
  RatInterval out(lo, hi);
  internal_check(out.contains(x), "clipped box lost the value");
  return out;
}

}  // namespace intrank
