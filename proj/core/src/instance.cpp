#include "intrank/instance.hpp"

#include <algorithm>

#include "intrank/approx.hpp"

namespace intrank {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // rejection keeps the draw unbiased and platform-pinned
  std::uint64_t lim = ~0ULL - ~0ULL % n;
  for (;;) {
    std::uint64_t v = next();
    if (v < lim) return v % n;
  }
}

long Rng::range(long lo, long hi) {
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Rational Rng::rational(long max_num, long max_den) {
  Rational r(range(-max_num, max_num), range(1, max_den));
  r.canonicalize();
  return r;
}

Rational Rng::rational_nonzero(long max_num, long max_den) {
  for (;;) {
    Rational r = rational(max_num, max_den);
    if (sgn(r) != 0) return r;
  }
}

QuadExt Rng::irrational(std::int64_t d, long max_num, long max_den) {
  return QuadExt(rational(max_num, max_den), rational_nonzero(max_num, max_den), d);
}

QuadExt Rng::mixed(std::int64_t d) {
  return coin() ? QuadExt(rational()) : irrational(d);
}

namespace {

bool square_free(std::int64_t d) {
  for (std::int64_t f = 2; f * f <= d; ++f)
    if (d % (f * f) == 0) return false;
  return true;
}

void validate_spec(const InstanceSpec& spec) {
  if (spec.p == 0 || spec.q == 0)
    fail(ErrorKind::UnsatisfiableSpec, "dimensions must be positive");
  if (spec.d <= 0 || !square_free(spec.d))
    fail(ErrorKind::UnsatisfiableSpec, "radicand must be positive and square-free");
  if (sgn(spec.enclosure_radius) <= 0)
    fail(ErrorKind::UnsatisfiableSpec, "enclosure radius must be positive");
  if (spec.degenerate_fraction < 0 || spec.degenerate_fraction > 1)
    fail(ErrorKind::UnsatisfiableSpec, "degenerate fraction must lie in [0,1]");
}

// Encloses the witness and pins `fraction` of the rational-valued cells.
IntervalMatrix enclose_with_pins(const QuadMatrix& A, const Rational& radius,
                                 const Rational& fraction, Rng& rng,
                                 const std::vector<std::pair<std::size_t, std::size_t>>&
                                     forced_pins = {},
                                 bool generic_pins = true) {
  const std::size_t p = A.rows(), q = A.cols();
  IntervalMatrix alpha(p, q);
  std::vector<std::pair<std::size_t, std::size_t>> rational_cells;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      alpha(i, j) = enclose(A(i, j), radius);
      if (A(i, j).is_rational()) rational_cells.emplace_back(i, j);
    }
  for (auto [i, j] : forced_pins) {
    internal_check(A(i, j).is_rational(), "forced pin on an irrational value");
    alpha(i, j) = RatInterval::point(A(i, j).as_rational());
  }
  if (!generic_pins || sgn(fraction) == 0 || rational_cells.empty()) return alpha;
  // floor(fraction * #rational cells) pins, chosen without replacement
  Integer want_i = rat_floor(fraction * Rational(long(rational_cells.size())));
  std::size_t want = static_cast<std::size_t>(want_i.get_ui());
  std::vector<std::size_t> order(rational_cells.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  for (std::size_t t = order.size(); t > 1; --t)
    std::swap(order[t - 1], order[rng.below(t)]);
  for (std::size_t t = 0; t < want && t < order.size(); ++t) {
    auto [i, j] = rational_cells[order[t]];
    alpha(i, j) = RatInterval::point(A(i, j).as_rational());
  }
  return alpha;
}

// -------------------------------------------------------------------------
// generic (untargeted) plants per rank class
// -------------------------------------------------------------------------

PlantedInstance plant_rank0(const InstanceSpec& spec, Rng& rng) {
  IntervalMatrix alpha(spec.p, spec.q);
  std::size_t pins_left = static_cast<std::size_t>(
      rat_floor(spec.degenerate_fraction * Rational(long(spec.p * spec.q))).get_ui());
  for (std::size_t i = 0; i < spec.p; ++i)
    for (std::size_t j = 0; j < spec.q; ++j) {
      if (pins_left > 0 && rng.coin()) {
        alpha(i, j) = RatInterval::point(0);
        --pins_left;
      } else {
        Rational lo = -rat_abs(rng.rational());
        Rational hi = rat_abs(rng.rational());
        alpha(i, j) = RatInterval(lo, hi);
      }
    }
  return PlantedInstance{std::monostate{}, alpha, 0};
}

PlantedInstance plant_rank1(const InstanceSpec& spec, Rng& rng) {
  Rank1Witness w;
  for (;;) {
    w.a.clear();
    w.c.clear();
    for (std::size_t i = 0; i < spec.p; ++i) w.a.push_back(rng.mixed(spec.d));
    for (std::size_t j = 0; j < spec.q; ++j) w.c.push_back(rng.mixed(spec.d));
    bool a_live = false, c_live = false;
    for (const auto& x : w.a) a_live = a_live || !x.is_zero();
    for (const auto& x : w.c) c_live = c_live || !x.is_zero();
    if (a_live && c_live) break;
  }
  QuadMatrix R = w.matrix();
  IntervalMatrix alpha =
      enclose_with_pins(R, spec.enclosure_radius, spec.degenerate_fraction, rng);
  return PlantedInstance{w, alpha, 1};
}

PlantedInstance plant_rank2(const InstanceSpec& spec, Rng& rng) {
  internal_check(spec.q >= 2 && spec.p >= spec.q, "rank-2 plant needs p >= q >= 2");
  Rank2Witness w;
  for (;;) {
    w.a.clear();
    w.b.clear();
    w.c.clear();
    w.d.clear();
    for (std::size_t i = 0; i < spec.p; ++i) {
      w.a.push_back(rng.mixed(spec.d));
      w.b.push_back(rng.mixed(spec.d));
    }
    for (std::size_t j = 0; j < spec.q; ++j) {
      w.c.push_back(rng.mixed(spec.d));
      w.d.push_back(rng.mixed(spec.d));
    }
    for (std::size_t j = 0; j < spec.q; ++j)
      if (w.c[j].is_zero() && w.d[j].is_zero()) w.d[j] = rng.irrational(spec.d);
    if (rank(w.matrix()) == 2) break;
  }
  IntervalMatrix alpha =
      enclose_with_pins(w.matrix(), spec.enclosure_radius, spec.degenerate_fraction, rng);
  return PlantedInstance{w, alpha, 2};
}

QuadMatrix random_full_span(Rng& rng, std::size_t p, std::size_t cols, std::int64_t d) {
  for (;;) {
    QuadMatrix A(p, cols);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < cols; ++j) A(i, j) = rng.mixed(d);
    if (rank(A) == cols) return A;
  }
}

PlantedInstance plant_full(const InstanceSpec& spec, Rng& rng) {
  internal_check(spec.p >= spec.q, "full-rank plant needs p >= q");
  FullRankWitness w{random_full_span(rng, spec.p, spec.q, spec.d)};
  IntervalMatrix alpha =
      enclose_with_pins(w.A, spec.enclosure_radius, spec.degenerate_fraction, rng);
  return PlantedInstance{w, alpha, spec.q};
}

PlantedInstance plant_qm1(const InstanceSpec& spec, Rng& rng) {
  internal_check(spec.q >= 2 && spec.p >= spec.q, "q-1 plant needs p >= q >= 2");
  const std::size_t span = spec.q - 1;
  QuadMatrix S = random_full_span(rng, spec.p, span, spec.d);
  ColumnDep1Witness w;
  w.A = QuadMatrix(spec.p, spec.q);
  for (std::size_t j = 0; j < span; ++j) w.c.push_back(rng.mixed(spec.d));
  for (std::size_t i = 0; i < spec.p; ++i) {
    QuadExt acc{Rational(0)};
    for (std::size_t j = 0; j < span; ++j) {
      w.A(i, j) = S(i, j);
      acc += w.c[j] * S(i, j);
    }
    w.A(i, span) = acc;
  }
  IntervalMatrix alpha =
      enclose_with_pins(w.A, spec.enclosure_radius, spec.degenerate_fraction, rng);
  return PlantedInstance{w, alpha, spec.q - 1};
}

ColumnDep2Witness make_coldep2(const QuadMatrix& S, const std::vector<QuadExt>& b,
                               const std::vector<QuadExt>& c) {
  const std::size_t p = S.rows(), span = S.cols();
  ColumnDep2Witness w;
  w.A = QuadMatrix(p, span + 2);
  w.b = b;
  w.c = c;
  for (std::size_t i = 0; i < p; ++i) {
    QuadExt accY{Rational(0)}, accZ{Rational(0)};
    for (std::size_t j = 0; j < span; ++j) {
      w.A(i, j) = S(i, j);
      accY += b[j] * S(i, j);
      accZ += c[j] * S(i, j);
    }
    w.A(i, span) = accY;
    w.A(i, span + 1) = accZ;
  }
  return w;
}

PlantedInstance plant_qm2(const InstanceSpec& spec, Rng& rng) {
  internal_check(spec.q >= 3 && spec.p >= spec.q, "q-2 plant needs p >= q >= 3");
  const std::size_t span = spec.q - 2;
  QuadMatrix S = random_full_span(rng, spec.p, span, spec.d);
  std::vector<QuadExt> b, c;
  for (std::size_t j = 0; j < span; ++j) {
    b.push_back(rng.mixed(spec.d));
    c.push_back(rng.mixed(spec.d));
    if (b[j].is_zero() && c[j].is_zero()) c[j] = rng.irrational(spec.d);
  }
  ColumnDep2Witness w = make_coldep2(S, b, c);
  IntervalMatrix alpha =
      enclose_with_pins(w.A, spec.enclosure_radius, spec.degenerate_fraction, rng);
  return PlantedInstance{w, alpha, spec.q - 2};
}

// -------------------------------------------------------------------------
// proof-branch targets.  Each target dictates its own dimensions and pin
// mask; values follow the one-radicand cancellation pattern (pure sqrt(d)
// coefficients against pure sqrt(d) entries give rational pinned values).
// -------------------------------------------------------------------------

QuadExt pure(std::int64_t d, Rng& rng) {
  return QuadExt(Rational(0), rng.rational_nonzero(3, 3), d);
}

PlantedInstance plant_thm8_target(const InstanceSpec& spec, Rng& rng,
                                  const std::string& tag) {
  const std::int64_t d = spec.d;
  Rank2Witness w;
  std::vector<std::pair<std::size_t, std::size_t>> pins;
  Rational radius = spec.enclosure_radius;
  std::size_t p = std::max<std::size_t>(spec.p, 3), q = std::max<std::size_t>(spec.q, 3);
  if (p < q) p = q;

  auto fill_generic = [&](std::size_t rows, std::size_t cols) {
    w.a.assign(rows, QuadExt());
    w.b.assign(rows, QuadExt());
    w.c.assign(cols, QuadExt());
    w.d.assign(cols, QuadExt());
  };

  if (tag == "thm8-rkG-ge1") {
    // all of row 0 pinned across three columns; rational a, c against pure
    // irrational b, d keep every entry of the witness rational
    fill_generic(p, q);
    for (;;) {
      for (std::size_t i = 0; i < p; ++i) {
        w.a[i] = QuadExt(rng.rational_nonzero());
        w.b[i] = pure(d, rng);
      }
      for (std::size_t j = 0; j < q; ++j) {
        w.c[j] = QuadExt(rng.rational_nonzero());
        w.d[j] = pure(d, rng);
      }
      if (rank(w.matrix()) == 2) break;
    }
    pins = {{0, 0}, {0, 1}, {0, 2}};
  } else if (tag == "thm8-rkG0" || tag == "thm8-Ti1" || tag == "thm8-case1") {
    fill_generic(p, q);
    for (;;) {
      for (std::size_t i = 0; i < p; ++i) {
        w.a[i] = i == 0 ? QuadExt(rng.rational_nonzero()) : rng.mixed(d);
        w.b[i] = i == 0 ? QuadExt(rng.rational_nonzero()) : rng.mixed(d);
      }
      for (std::size_t j = 0; j < q; ++j) {
        w.c[j] = j <= 1 ? QuadExt(rng.rational_nonzero()) : rng.mixed(d);
        w.d[j] = j <= 1 ? QuadExt(rng.rational_nonzero()) : rng.mixed(d);
      }
      for (std::size_t j = 0; j < q; ++j)
        if (w.c[j].is_zero() && w.d[j].is_zero()) w.d[j] = rng.irrational(d);
      bool det_live = !(w.c[0] * w.d[1] - w.c[1] * w.d[0]).is_zero();
      if (tag == "thm8-case1" && !det_live) continue;
      if (rank(w.matrix()) == 2) break;
    }
    pins = tag == "thm8-Ti1" ? std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}}
                             : std::vector<std::pair<std::size_t, std::size_t>>{{0, 0},
                                                                                {0, 1}};
  } else if (tag == "thm8-case2.1") {
    // columns 0 and 1 proportional in (c, d); everything on row 0 rational
    fill_generic(p, q);
    for (;;) {
      for (std::size_t i = 0; i < p; ++i) {
        w.a[i] = i == 0 ? QuadExt(rng.rational_nonzero()) : rng.mixed(d);
        w.b[i] = i == 0 ? QuadExt(rng.rational_nonzero()) : rng.mixed(d);
      }
      Rational t = rng.rational_nonzero();
      w.c[0] = QuadExt(rng.rational_nonzero());
      w.d[0] = QuadExt(rng.rational());
      w.c[1] = QuadExt(t) * w.c[0];
      w.d[1] = QuadExt(t) * w.d[0];
      for (std::size_t j = 2; j < q; ++j) {
        w.c[j] = rng.mixed(d);
        w.d[j] = rng.mixed(d);
        if (w.c[j].is_zero() && w.d[j].is_zero()) w.d[j] = rng.irrational(d);
      }
      if (rank(w.matrix()) == 2) break;
    }
    pins = {{0, 0}, {0, 1}};
  } else if (tag == "thm8-case2.2") {
    // c vanishes on the pinned columns; pure irrational b against pure
    // irrational d keeps the pinned values rational
    fill_generic(p, q);
    for (;;) {
      for (std::size_t i = 0; i < p; ++i) {
        w.a[i] = QuadExt(rng.rational());
        w.b[i] = i == 0 ? pure(d, rng) : rng.mixed(d);
      }
      w.c[0] = QuadExt(Rational(0));
      w.c[1] = QuadExt(Rational(0));
      w.d[0] = pure(d, rng);
      w.d[1] = pure(d, rng);
      for (std::size_t j = 2; j < q; ++j) {
        w.c[j] = QuadExt(rng.rational_nonzero());
        w.d[j] = rng.mixed(d);
      }
      if (!w.b[0].is_rational() && rank(w.matrix()) == 2) break;
    }
    pins = {{0, 0}, {0, 1}};
  } else if (tag == "thm8-rank1-fixup") {
    // no pinned cells; the d-dyad is small enough that the coarse first
    // rounding collapses it to zero, forcing the rank repair
    p = std::max<std::size_t>(spec.p, 2);
    q = std::max<std::size_t>(spec.q, 2);
    if (p < q) p = q;
    fill_generic(p, q);
    radius = 1;
    for (;;) {
      for (std::size_t i = 0; i < p; ++i) {
        w.a[i] = QuadExt(rng.rational_nonzero(2, 1));
        w.b[i] = QuadExt(rng.rational_nonzero(2, 2));
      }
      for (std::size_t j = 0; j < q; ++j) {
        w.c[j] = QuadExt(rng.rational_nonzero(2, 2));
        w.d[j] = QuadExt(Rational(0), Rational(1, 32 * rng.range(1, 3)), d);
      }
      if (rank(w.matrix()) == 2) break;
    }
    pins.clear();
  } else {
    fail(ErrorKind::UnsatisfiableSpec, "unknown case target '" + tag + "'");
  }

  QuadMatrix R = w.matrix();
  for (auto [i, j] : pins)
    internal_check(R(i, j).is_rational(), "target pin landed on an irrational value");
  IntervalMatrix alpha = enclose_with_pins(R, radius, Rational(0), rng, pins, false);
  return PlantedInstance{w, alpha, 2};
}

PlantedInstance plant_thm9_target(const InstanceSpec& spec, Rng& rng,
                                  const std::string& tag) {
  const std::int64_t d = spec.d;
  // span 2 keeps every subcase expressible; q = 4, p = q + 1 rows:
  // two spanning-identity rows, two filler rows, one target row
  std::size_t span = 2, q = span + 2, p = q + 1;
  const std::size_t target = p - 1;
  QuadMatrix S(p, span);
  std::vector<QuadExt> b(span), c(span);
  std::vector<std::pair<std::size_t, std::size_t>> pins;
  const std::size_t ycol = span, zcol = span + 1;

  Rational t0 = rng.rational_nonzero(3, 2);
  Rational t1 = rng.rational_nonzero(3, 2);

  // spanning block: scaled identity on top, rational filler below
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < span; ++j) S(i, j) = QuadExt(Rational(0));
  S(0, 0) = QuadExt(rng.rational_nonzero(2, 1));
  S(1, 1) = QuadExt(rng.rational_nonzero(2, 1));
  for (std::size_t i = 2; i + 1 < p; ++i)
    for (std::size_t j = 0; j < span; ++j) S(i, j) = QuadExt(rng.rational(2, 2));

  if (tag == "thm9-case0") {
    b = {rng.irrational(d), QuadExt(rng.rational_nonzero())};
    c = {QuadExt(rng.rational_nonzero()), rng.irrational(d)};
    S(target, 0) = rng.irrational(d);
    S(target, 1) = rng.irrational(d);
    // no pins: every row keeps free dependent entries
  } else if (tag == "thm9-case1.1") {
    b = {pure(d, rng), QuadExt(rng.rational_nonzero())};
    c = {pure(d, rng), QuadExt(rng.rational())};
    S(target, 0) = pure(d, rng);
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, ycol}};
  } else if (tag == "thm9-case1.2") {
    b = {QuadExt(Rational(0)), QuadExt(rng.rational_nonzero())};
    c = {QuadExt(rng.rational_nonzero()), rng.mixed(d)};
    S(target, 0) = rng.irrational(d);  // b_0 = 0 kills the irrational term
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, ycol}};
  } else if (tag == "thm9-case1.3") {
    b = {QuadExt(rng.rational_nonzero()), QuadExt(rng.rational())};
    c = {rng.irrational(d), QuadExt(rng.rational_nonzero())};
    S(target, 0) = QuadExt(rng.rational());
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, ycol}};
  } else if (tag == "thm9-case2.1") {
    c = {pure(d, rng), QuadExt(rng.rational_nonzero())};
    b = {pure(d, rng), QuadExt(rng.rational())};
    S(target, 0) = pure(d, rng);
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, zcol}};
  } else if (tag == "thm9-case2.2") {
    c = {QuadExt(Rational(0)), QuadExt(rng.rational_nonzero())};
    b = {QuadExt(rng.rational_nonzero()), rng.mixed(d)};
    S(target, 0) = rng.irrational(d);
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, zcol}};
  } else if (tag == "thm9-case3.1") {
    b = {pure(d, rng), QuadExt(Rational(0))};
    c = {QuadExt(Rational(0)), pure(d, rng)};
    S(target, 0) = pure(d, rng);
    S(target, 1) = pure(d, rng);
    pins = {{target, ycol}, {target, zcol}};
  } else if (tag == "thm9-case3.2") {
    b = {pure(d, rng), QuadExt(Rational(0))};
    c = {pure(d, rng), pure(d, rng)};
    S(target, 0) = pure(d, rng);
    S(target, 1) = pure(d, rng);
    pins = {{target, ycol}, {target, zcol}};
  } else if (tag == "thm9-case3.2-coupled-degenerate") {
    // proportional coefficient pairs on the irrational support: every
    // coupling coefficient vanishes and the balance systems take over
    Rational w0 = rng.rational_nonzero(3, 2);
    Rational v0 = rng.rational_nonzero(3, 2);
    Rational s = rng.rational_nonzero(2, 2);
    b = {QuadExt(Rational(0), w0, d), QuadExt(Rational(0), w0 * s, d)};
    c = {QuadExt(Rational(0), v0, d), QuadExt(Rational(0), v0 * s, d)};
    S(target, 0) = pure(d, rng);
    S(target, 1) = pure(d, rng);
    pins = {{target, ycol}, {target, zcol}};
  } else if (tag == "thm9-case3.3") {
    b = {pure(d, rng), QuadExt(rng.rational())};
    c = {QuadExt(Rational(0)), QuadExt(rng.rational_nonzero())};
    S(target, 0) = pure(d, rng);
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, ycol}, {target, zcol}};
  } else if (tag == "thm9-case3.4") {
    c = {pure(d, rng), QuadExt(rng.rational())};
    b = {QuadExt(Rational(0)), QuadExt(rng.rational_nonzero())};
    S(target, 0) = pure(d, rng);
    S(target, 1) = QuadExt(rng.rational());
    pins = {{target, ycol}, {target, zcol}};
  } else if (tag == "thm9-ybyc") {
    // irrational coefficient pairs cancel against the rational target row
    Rational w0 = rng.rational_nonzero(3, 2);
    b = {QuadExt(Rational(0), w0, d), QuadExt(Rational(0), -w0 * t0 / t1, d)};
    c = {QuadExt(rng.rational_nonzero()), QuadExt(rng.rational())};
    S(target, 0) = QuadExt(t0);
    S(target, 1) = QuadExt(t1);
    pins = {{target, ycol}, {target, zcol}};
  } else {
    fail(ErrorKind::UnsatisfiableSpec, "unknown case target '" + tag + "'");
  }

  for (std::size_t j = 0; j < span; ++j)
    internal_check(!(b[j].is_zero() && c[j].is_zero()),
                   "target coefficients break the per-column assumption");
  internal_check(rank_field(S.submatrix({0, 1}, {0, 1})) == span,
                 "spanning block degenerated");
  ColumnDep2Witness w = make_coldep2(S, b, c);
  for (auto [i, j] : pins)
    internal_check(w.A(i, j).is_rational(), "target pin landed on an irrational value");
  IntervalMatrix alpha =
      enclose_with_pins(w.A, spec.enclosure_radius, Rational(0), rng, pins, false);
  return PlantedInstance{w, alpha, q - 2};
}

}  // namespace

PlantedInstance plant(const InstanceSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed * 0x100000001b3ULL + 17);
  if (!spec.case_targets.empty()) {
    const std::string& tag = spec.case_targets.front();
    if (tag.rfind("thm8-", 0) == 0) return plant_thm8_target(spec, rng, tag);
    if (tag.rfind("thm9-", 0) == 0) return plant_thm9_target(spec, rng, tag);
    fail(ErrorKind::UnsatisfiableSpec, "unknown case target '" + tag + "'");
  }
  if (spec.rank_class == "0") return plant_rank0(spec, rng);
  if (spec.rank_class == "1") return plant_rank1(spec, rng);
  if (spec.rank_class == "2") {
    if (spec.q < 2 || spec.p < spec.q)
      fail(ErrorKind::UnsatisfiableSpec, "rank 2 needs p >= q >= 2");
    return plant_rank2(spec, rng);
  }
  if (spec.rank_class == "q") {
    if (spec.p < spec.q) fail(ErrorKind::UnsatisfiableSpec, "rank q needs p >= q");
    return plant_full(spec, rng);
  }
  if (spec.rank_class == "q-1") {
    if (spec.q < 2 || spec.p < spec.q)
      fail(ErrorKind::UnsatisfiableSpec, "rank q-1 needs p >= q >= 2");
    return plant_qm1(spec, rng);
  }
  if (spec.rank_class == "q-2") {
    if (spec.q < 3 || spec.p < spec.q)
      fail(ErrorKind::UnsatisfiableSpec, "rank q-2 needs p >= q >= 3");
    return plant_qm2(spec, rng);
  }
  fail(ErrorKind::UnsatisfiableSpec, "unknown rank class '" + spec.rank_class + "'");
}

std::size_t minrank_upper_oracle(const IntervalMatrix& alpha, std::size_t budget) {
  const std::size_t p = alpha.rows(), q = alpha.cols();
  std::size_t best = std::min(p, q);
  auto consider = [&](const RationalMatrix& M) { best = std::min(best, rank(M)); };

  MidRadMod mrm = mid_rad_mod(alpha);
  consider(mrm.mid);

  if (p * q <= 20 && (std::size_t(1) << (p * q)) <= budget) {
    const std::size_t lim = std::size_t(1) << (p * q);
    for (std::size_t t = 0; t < lim; ++t) {
      RationalMatrix V(p, q);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j)
          V(i, j) = (t >> (i * q + j)) & 1U ? alpha(i, j).hi() : alpha(i, j).lo();
      consider(V);
    }
  }

  Rng rng(0x5eedULL);
  for (std::size_t s = 0; s < budget; ++s) {
    RationalMatrix M(p, q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        const RatInterval& e = alpha(i, j);
        // random convex combination with small denominator
        Rational t(rng.range(0, 8), 8);
        t.canonicalize();
        M(i, j) = e.lo() + t * (e.hi() - e.lo());
      }
    consider(M);
  }
  return best;
}

CertReport check_certificate(const IntervalMatrix& alpha, const RealizationResult& result) {
  CertReport rep;
  const RationalMatrix& M = result.matrix;
  rep.contained = true;
  rep.degenerate_exact = true;
  if (M.rows() != alpha.rows() || M.cols() != alpha.cols()) {
    rep.contained = false;
    rep.violations.push_back("shape mismatch");
    return rep;
  }
  for (std::size_t i = 0; i < alpha.rows(); ++i)
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      const RatInterval& e = alpha(i, j);
      if (M(i, j) < e.lo() || M(i, j) > e.hi()) {
        rep.contained = false;
        rep.violations.push_back("entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") outside its interval");
      }
      if (e.degenerate() && M(i, j) != e.lo()) {
        rep.degenerate_exact = false;
        rep.violations.push_back("degenerate entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") not hit exactly");
      }
    }
  // independent rank route: plain field elimination, not Bareiss
  rep.computed_rank = rank_field(M);
  rep.rank_ok = result.mode == RankMode::Exact ? rep.computed_rank == result.target_rank
                                               : rep.computed_rank <= result.target_rank;
  if (!rep.rank_ok)
    rep.violations.push_back("rank " + std::to_string(rep.computed_rank) +
                             " violates target " + std::to_string(result.target_rank) +
                             (result.mode == RankMode::Exact ? " (exact)" : " (at most)"));
  return rep;
}

}  // namespace intrank
