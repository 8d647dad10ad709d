#pragma once

#include <string>

#include "intrank/quadext.hpp"
#include "intrank/rational.hpp"

namespace intrank {

// Closed interval [lo, hi] with rational endpoints, lo <= hi.
// Degeneracy is the predicate lo == hi, not a separate type.
class RatInterval {
 public:
  RatInterval() : lo_(0), hi_(0) {}
  RatInterval(Rational lo, Rational hi);
  static RatInterval point(const Rational& v) { return RatInterval(v, v); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  bool degenerate() const { return lo_ == hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational mid() const { return (lo_ + hi_) / 2; }

  bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
  bool contains(const QuadExt& v) const {
    return v >= QuadExt(lo_) && v <= QuadExt(hi_);
  }
  // componentwise interval containment (subset)
  bool contains(const RatInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

  // strict interior membership
  bool interior(const QuadExt& v) const {
    return v > QuadExt(lo_) && v < QuadExt(hi_);
  }

  friend bool operator==(const RatInterval& a, const RatInterval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  std::string str() const { return lo_.get_str() + ":" + hi_.get_str(); }

 private:
  Rational lo_, hi_;
};

// Exact set images over the endpoints.
RatInterval interval_add(const RatInterval& a, const RatInterval& b);
RatInterval interval_sub(const RatInterval& a, const RatInterval& b);
RatInterval interval_mul(const RatInterval& a, const RatInterval& b);
// Requires 0 not in b; DivisorContainsZero otherwise.
RatInterval interval_div(const RatInterval& a, const RatInterval& b);
RatInterval interval_scale(const Rational& s, const RatInterval& a);
RatInterval interval_hull(const RatInterval& a, const RatInterval& b);

RatInterval parse_interval(const std::string& token, int line = 0, int column = 0);

// Operator sugar so interval matrices can flow through the generic
// elimination-free templates (determinant enclosures and the like).
inline RatInterval operator+(const RatInterval& a, const RatInterval& b) {
  return interval_add(a, b);
}
inline RatInterval operator-(const RatInterval& a, const RatInterval& b) {
  return interval_sub(a, b);
}
inline RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  return interval_mul(a, b);
}
inline RatInterval operator-(const RatInterval& a) {
  return RatInterval(-a.hi(), -a.lo());
}

// Interval with endpoints in Q(sqrt d).  Internal workhorse for the
// neighbourhood-inclusion conditions of the realization proofs, where sums
// mix rational boxes with irrational scalar coefficients.  Closed intervals
// throughout; the open-neighbourhood conditions of the source constructions
// are checked on closed enclosures, which is only stricter.
class QuadInterval {
 public:
  QuadInterval() = default;
  QuadInterval(QuadExt lo, QuadExt hi);
  static QuadInterval point(const QuadExt& v) { return QuadInterval(v, v); }
  static QuadInterval of(const RatInterval& r) {
    return QuadInterval(QuadExt(r.lo()), QuadExt(r.hi()));
  }

  const QuadExt& lo() const { return lo_; }
  const QuadExt& hi() const { return hi_; }

  QuadInterval operator+(const QuadInterval& o) const {
    return QuadInterval(lo_ + o.lo_, hi_ + o.hi_);
  }
  QuadInterval operator-(const QuadInterval& o) const {
    return QuadInterval(lo_ - o.hi_, hi_ - o.lo_);
  }
  QuadInterval operator*(const QuadInterval& o) const;
  // requires o sign-definite
  QuadInterval operator/(const QuadInterval& o) const;

  bool inside(const RatInterval& outer) const {
    return QuadExt(outer.lo()) <= lo_ && hi_ <= QuadExt(outer.hi());
  }
  bool inside(const QuadInterval& outer) const {
    return outer.lo_ <= lo_ && hi_ <= outer.hi_;
  }
  bool excludes_zero() const { return lo_.sign() > 0 || hi_.sign() < 0; }

 private:
  QuadExt lo_, hi_;
};

}  // namespace intrank
