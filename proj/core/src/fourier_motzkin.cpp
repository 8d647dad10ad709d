#include "intrank/fourier_motzkin.hpp"

#include <algorithm>

#include "intrank/errors.hpp"

namespace intrank {

namespace {

// internal row form: coeffs . x <= rhs
struct Row {
  std::vector<Rational> c;
  Rational b;
};

// canonical scaling so duplicate constraints collapse
void normalize(Row& r) {
  for (const Rational& x : r.c) {
    if (sgn(x) != 0) {
      Rational s = rat_abs(x);
      for (Rational& y : r.c) y /= s;
      r.b /= s;
      return;
    }
  }
}

std::vector<Row> dedupe(std::vector<Row> rows) {
  // keep the tightest rhs per coefficient vector
  std::vector<Row> out;
  for (Row& r : rows) {
    normalize(r);
    bool merged = false;
    for (Row& o : out) {
      if (o.c == r.c) {
        o.b = rat_min(o.b, r.b);
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::optional<std::vector<Rational>> lp_feasible(const std::vector<LinIneq>& system,
                                                 std::size_t nvars) {
  std::vector<Row> rows;
  for (const LinIneq& q : system) {
    if (q.coeffs.size() != nvars)
      fail(ErrorKind::DimensionMismatch, "lp_feasible constraint width");
    Row le{q.coeffs, q.rhs};
    Row ge{q.coeffs, q.rhs};
    for (Rational& x : ge.c) x = -x;
    ge.b = -ge.b;
    switch (q.rel) {
      case Rel::LE: rows.push_back(std::move(le)); break;
      case Rel::GE: rows.push_back(std::move(ge)); break;
      case Rel::EQ:
        rows.push_back(std::move(le));
        rows.push_back(std::move(ge));
        break;
    }
  }

  // stages[k] holds the constraints in variables 0..k before eliminating k
  std::vector<std::vector<Row>> stages(nvars + 1);
  stages[nvars] = dedupe(std::move(rows));
  for (std::size_t k = nvars; k-- > 0;) {
    const std::vector<Row>& cur = stages[k + 1];
    std::vector<Row> next;
    std::vector<const Row*> pos, neg;
    for (const Row& r : cur) {
      int s = sgn(r.c[k]);
      if (s > 0)
        pos.push_back(&r);
      else if (s < 0)
        neg.push_back(&r);
      else
        next.push_back(r);
    }
    for (const Row* p : pos) {
      for (const Row* n : neg) {
        // combine to cancel x_k: p/p_k + (-n)/(-n_k)
        Row r;
        r.c.assign(nvars, Rational(0));
        Rational pk = p->c[k], nk = -n->c[k];
        for (std::size_t j = 0; j < k; ++j) r.c[j] = p->c[j] / pk + n->c[j] / nk;
        r.b = p->b / pk + n->b / nk;
        next.push_back(std::move(r));
      }
    }
    stages[k] = dedupe(std::move(next));
  }
  // Rows with all-zero coefficients percolate down to stage 0.
  for (const Row& r : stages[0]) {
    if (sgn(r.b) < 0) return std::nullopt;  // 0 <= negative
  }

  // back substitution for a witness
  std::vector<Rational> x(nvars, Rational(0));
  for (std::size_t k = 0; k < nvars; ++k) {
    bool has_lo = false, has_hi = false;
    Rational lo(0), hi(0);
    for (const Row& r : stages[k + 1]) {
      int s = sgn(r.c[k]);
      if (s == 0) continue;
      Rational bound = r.b;
      for (std::size_t j = 0; j < k; ++j) bound -= r.c[j] * x[j];
      bound /= r.c[k];
      if (s > 0) {  // x_k <= bound
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      } else {  // x_k >= bound
        if (!has_lo || bound > lo) lo = bound;
        has_lo = true;
      }
    }
    if (has_lo && has_hi) {
      internal_check(lo <= hi, "FM back substitution produced an empty range");
      x[k] = (lo + hi) / 2;
    } else if (has_lo) {
      x[k] = lo + 1;
    } else if (has_hi) {
      x[k] = hi - 1;
    } else {
      x[k] = 0;
    }
  }
  return x;
}

}  // namespace intrank
