#include "intrank/interval.hpp"

#include <algorithm>

namespace intrank {

RatInterval::RatInterval(Rational lo, Rational hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) fail(ErrorKind::Internal, "interval with lo > hi");
}

RatInterval interval_add(const RatInterval& a, const RatInterval& b) {
  return RatInterval(a.lo() + b.lo(), a.hi() + b.hi());
}

RatInterval interval_sub(const RatInterval& a, const RatInterval& b) {
  return RatInterval(a.lo() - b.hi(), a.hi() - b.lo());
}

RatInterval interval_mul(const RatInterval& a, const RatInterval& b) {
  Rational p1 = a.lo() * b.lo(), p2 = a.lo() * b.hi();
  Rational p3 = a.hi() * b.lo(), p4 = a.hi() * b.hi();
  Rational lo = rat_min(rat_min(p1, p2), rat_min(p3, p4));
  Rational hi = rat_max(rat_max(p1, p2), rat_max(p3, p4));
  return RatInterval(lo, hi);
}

RatInterval interval_div(const RatInterval& a, const RatInterval& b) {
  if (sign(b.lo()) <= 0 && sign(b.hi()) >= 0)
    fail(ErrorKind::DivisorContainsZero,
         "divisor interval " + b.str() + " contains zero");
  Rational p1 = a.lo() / b.lo(), p2 = a.lo() / b.hi();
  Rational p3 = a.hi() / b.lo(), p4 = a.hi() / b.hi();
  Rational lo = rat_min(rat_min(p1, p2), rat_min(p3, p4));
  Rational hi = rat_max(rat_max(p1, p2), rat_max(p3, p4));
  return RatInterval(lo, hi);
}

RatInterval interval_scale(const Rational& s, const RatInterval& a) {
  if (sign(s) >= 0) return RatInterval(s * a.lo(), s * a.hi());
  return RatInterval(s * a.hi(), s * a.lo());
}

RatInterval interval_hull(const RatInterval& a, const RatInterval& b) {
  return RatInterval(rat_min(a.lo(), b.lo()), rat_max(a.hi(), b.hi()));
}

QuadInterval::QuadInterval(QuadExt lo, QuadExt hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) fail(ErrorKind::Internal, "quad interval with lo > hi");
}

QuadInterval QuadInterval::operator*(const QuadInterval& o) const {
  QuadExt ps[4] = {lo_ * o.lo_, lo_ * o.hi_, hi_ * o.lo_, hi_ * o.hi_};
  QuadExt lo = ps[0], hi = ps[0];
  for (int i = 1; i < 4; ++i) {
    if (ps[i] < lo) lo = ps[i];
    if (ps[i] > hi) hi = ps[i];
  }
  return QuadInterval(lo, hi);
}

QuadInterval QuadInterval::operator/(const QuadInterval& o) const {
  if (!o.excludes_zero())
    fail(ErrorKind::DivisorContainsZero, "quad divisor interval contains zero");
  QuadExt ps[4] = {lo_ / o.lo_, lo_ / o.hi_, hi_ / o.lo_, hi_ / o.hi_};
  QuadExt lo = ps[0], hi = ps[0];
  for (int i = 1; i < 4; ++i) {
    if (ps[i] < lo) lo = ps[i];
    if (ps[i] > hi) hi = ps[i];
  }
  return QuadInterval(lo, hi);
}

}  // namespace intrank
