#include "intrank/quadext.hpp"

#include <ostream>

namespace intrank {

QuadExt::QuadExt(Rational r, Rational i, std::int64_t d)
    : rat_(std::move(r)), irr_(std::move(i)), d_(d) {
  if (d_ < 0) fail(ErrorKind::MixedRadicand, "negative radicand");
  normalize();
}

void QuadExt::normalize() {
  if (sgn(irr_) == 0) {
    d_ = 0;
  } else if (d_ == 0) {
    fail(ErrorKind::MixedRadicand, "irrational part with no radicand");
  } else if (d_ == 1) {
    // sqrt(1) = 1 folds into the rational part
    rat_ += irr_;
    irr_ = 0;
    d_ = 0;
  }
}

const Rational& QuadExt::as_rational() const {
  if (!is_rational()) fail(ErrorKind::Internal, "as_rational on irrational value");
  return rat_;
}

std::int64_t QuadExt::merged(const QuadExt& a, const QuadExt& b) {
  if (a.d_ == 0) return b.d_;
  if (b.d_ == 0 || a.d_ == b.d_) return a.d_;
  fail(ErrorKind::MixedRadicand,
       "cannot combine sqrt(" + std::to_string(a.d_) + ") with sqrt(" +
           std::to_string(b.d_) + ")");
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  d_ = merged(*this, o);
  rat_ += o.rat_;
  irr_ += o.irr_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  d_ = merged(*this, o);
  rat_ -= o.rat_;
  irr_ -= o.irr_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  std::int64_t d = merged(*this, o);
  Rational r = rat_ * o.rat_ + irr_ * o.irr_ * Rational(d);
  Rational i = rat_ * o.irr_ + irr_ * o.rat_;
  rat_ = r;
  irr_ = i;
  d_ = d;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
  if (o.is_zero()) fail(ErrorKind::Internal, "division by zero in Q(sqrt d)");
  std::int64_t d = merged(*this, o);
  // multiply by the conjugate; the norm r^2 - i^2 d vanishes only at 0
  Rational norm = o.rat_ * o.rat_ - o.irr_ * o.irr_ * Rational(o.d_ == 0 ? d : o.d_);
  QuadExt conj(o.rat_, -o.irr_, o.d_ == 0 ? 0 : o.d_);
  *this *= conj;
  rat_ /= norm;
  irr_ /= norm;
  d_ = merged(*this, o);
  normalize();
  return *this;
}

int QuadExt::sign() const {
  int sr = sgn(rat_);
  int si = sgn(irr_);
  if (si == 0) return sr;
  if (sr == 0) return si;
  if (sr == si) return sr;
  // opposite signs: compare rat_^2 with irr_^2 * d exactly
  Rational r2 = rat_ * rat_;
  Rational i2d = irr_ * irr_ * Rational(d_);
  int c = cmp(r2, i2d);
  if (c == 0) return 0;  // cannot happen for square-free d>1, kept for safety
  return c > 0 ? sr : si;
}

Rational sqrt_lower_bound(std::int64_t d, int k) {
  // floor(sqrt(d * 4^k)) / 2^k
  Integer scaled(d);
  scaled <<= 2 * k;
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Integer den(1);
  den <<= k;
  Rational out{root, den};
  out.canonicalize();
  return out;
}

Integer QuadExt::floor() const {
  if (is_rational()) return rat_floor(rat_);
  for (int k = 4;; k += 8) {
    Rational lo = sqrt_lower_bound(d_, k);
    Rational hi = lo + pow2(-k);
    Rational vlo, vhi;
    if (sgn(irr_) > 0) {
      vlo = rat_ + irr_ * lo;
      vhi = rat_ + irr_ * hi;
    } else {
      vlo = rat_ + irr_ * hi;
      vhi = rat_ + irr_ * lo;
    }
    Integer flo = rat_floor(vlo), fhi = rat_floor(vhi);
    if (flo == fhi) return flo;
    // The value itself is irrational so the bracket eventually separates
    // from every integer.
  }
}

std::string QuadExt::str() const {
  if (is_rational()) return rat_.get_str();
  std::string irr = irr_.get_str() + "*sqrt(" + std::to_string(d_) + ")";
  if (sgn(rat_) == 0) return irr;
  if (sgn(irr_) > 0) return rat_.get_str() + "+" + irr;
  Rational neg = -irr_;
  return rat_.get_str() + "-" + neg.get_str() + "*sqrt(" + std::to_string(d_) + ")";
}

std::ostream& operator<<(std::ostream& os, const QuadExt& q) { return os << q.str(); }

}  // namespace intrank
