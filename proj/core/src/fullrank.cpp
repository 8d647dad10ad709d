#include "intrank/fullrank.hpp"

#include "intrank/linalg.hpp"

namespace intrank {

SignVector sign_vector_from_counter(unsigned long long t, std::size_t n) {
  SignVector s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (t >> j) & 1ULL ? 1 : -1;
  return s;
}

FullRankVerdict square_full_rank(const IntervalMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::NotSquare, "square_full_rank");
  const std::size_t p = m.rows();
  MidRadMod mrm = mid_rad_mod(m);
  Rational det_mid = det(mrm.mid);
  FullRankVerdict out;
  if (sign(det_mid) == 0) {
    out.full_rank = false;
    out.square_violation = SquareCertificate{sign_vector_from_counter(0, p),
                                             sign_vector_from_counter(0, p),
                                             det_mid, det_mid};
    return out;
  }
  const unsigned long long lim = 1ULL << p;
  for (unsigned long long tx = 0; tx < lim; ++tx) {
    SignVector x = sign_vector_from_counter(tx, p);
    for (unsigned long long ty = 0; ty < lim; ++ty) {
      SignVector y = sign_vector_from_counter(ty, p);
      RationalMatrix D(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
          D(i, j) = mrm.mid(i, j) - Rational(x[i] * y[j]) * mrm.rad(i, j);
      Rational dd = det(D);
      if (sign(det_mid * dd) <= 0) {
        out.full_rank = false;
        out.square_violation = SquareCertificate{x, y, det_mid, dd};
        return out;
      }
    }
  }
  out.full_rank = true;
  return out;
}

FullRankVerdict rect_full_rank(const IntervalMatrix& m) {
  const std::size_t p = m.rows(), q = m.cols();
  if (p < q) fail(ErrorKind::DimensionMismatch, "rect_full_rank needs p >= q");
  MidRadMod mrm = mid_rad_mod(m);
  FullRankVerdict out;
  const unsigned long long lim = 1ULL << q;
  for (unsigned long long ts = 0; ts < lim; ++ts) {
    SignVector s = sign_vector_from_counter(ts, q);
    std::vector<LinIneq> sys;
    // orthant: s_j x_j >= 0
    for (std::size_t j = 0; j < q; ++j) {
      LinIneq c;
      c.coeffs.assign(q, Rational(0));
      c.coeffs[j] = Rational(s[j]);
      c.rel = Rel::GE;
      c.rhs = 0;
      sys.push_back(std::move(c));
    }
    // -rad (S x) <= mid x <= rad (S x), componentwise
    for (std::size_t i = 0; i < p; ++i) {
      LinIneq up, down;
      up.coeffs.assign(q, Rational(0));
      down.coeffs.assign(q, Rational(0));
      for (std::size_t j = 0; j < q; ++j) {
        Rational rads = mrm.rad(i, j) * Rational(s[j]);
        up.coeffs[j] = mrm.mid(i, j) - rads;    // (mid - rad S) x <= 0
        down.coeffs[j] = -mrm.mid(i, j) - rads; // (-mid - rad S) x <= 0
      }
      up.rel = Rel::LE;
      up.rhs = 0;
      down.rel = Rel::LE;
      down.rhs = 0;
      sys.push_back(std::move(up));
      sys.push_back(std::move(down));
    }
    // nontriviality: sum_j s_j x_j = 1
    LinIneq norm;
    norm.coeffs.assign(q, Rational(0));
    for (std::size_t j = 0; j < q; ++j) norm.coeffs[j] = Rational(s[j]);
    norm.rel = Rel::EQ;
    norm.rhs = 1;
    sys.push_back(std::move(norm));

    if (auto w = lp_feasible(sys, q)) {
      out.full_rank = false;
      out.orthant_violation = OrthantCertificate{s, *w};
      return out;
    }
  }
  out.full_rank = true;
  return out;
}

bool regularity_oracle(const IntervalMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::NotSquare, "regularity_oracle");
  const std::size_t p = m.rows();
  if (p * p > 16) fail(ErrorKind::TooLarge, "regularity_oracle limited to p*p <= 16");
  const unsigned long long lim = 1ULL << (p * p);
  int seen = 0;  // +1 / -1 once a sign is fixed
  for (unsigned long long t = 0; t < lim; ++t) {
    RationalMatrix V(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        const RatInterval& e = m(i, j);
        V(i, j) = (t >> (i * p + j)) & 1ULL ? e.hi() : e.lo();
      }
    int s = sign(det(V));
    if (s == 0) return false;
    if (seen == 0) seen = s;
    else if (seen != s) return false;
  }
  return true;
}

}  // namespace intrank
