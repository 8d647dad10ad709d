#include <algorithm>
#include <map>

#include "intrank/approx.hpp"
#include "intrank/realize.hpp"
#include "intrank/realize_detail.hpp"

// Rational realization of ranks 1 and 2 from dyadic witnesses.  The rank-2
// construction follows the degenerate-cell analysis: the pinned cells of a
// row force polynomial relations between the column vectors c and d, these
// relations form a homogeneous linear system whose matrix depends on c, and
// the rounded c~ / d~ are chosen so that d~ stays in the kernel of the
// system evaluated at c~.  Every open condition is restored by halving all
// neighbourhood radii and retrying.

namespace intrank {

namespace {

using detail::RetryNeeded;

template <class F>
F to_field(const Rational& r);
template <>
Rational to_field<Rational>(const Rational& r) { return r; }
template <>
QuadExt to_field<QuadExt>(const Rational& r) { return QuadExt(r); }
template <>
RatInterval to_field<RatInterval>(const Rational& r) { return RatInterval::point(r); }

Rational det2(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  return a * d - b * c;
}
QuadExt det2(const QuadExt& a, const QuadExt& b, const QuadExt& c, const QuadExt& d) {
  return a * d - b * c;
}

// ---------------------------------------------------------------------------
// The homogeneous system attached to the pinned cells (unknowns indexed by
// the pinned columns).  Two row families:
//   * triples (i; j, h<k) of pinned cells in one row: the compatibility
//     cubic, coefficients quadratic in gamma;
//   * pairs (i; h<k) with c_h = c_k = 0: value cross products, constant.
// ---------------------------------------------------------------------------
struct PinnedSystem {
  std::vector<std::size_t> t2;                 // pinned columns, ascending
  std::map<std::size_t, std::size_t> local;    // global column -> t2 position
  struct Triple {
    std::size_t row;
    std::size_t j, h, k;  // local indices
    Rational vj, vh, vk;  // pinned values of (row, .)
  };
  struct Pair {
    std::size_t row;
    std::size_t h, k;     // local indices
    Rational vh, vk;
  };
  std::vector<Triple> triples;
  std::vector<Pair> pairs;

  std::size_t rows() const { return triples.size() + pairs.size(); }

  template <class F>
  Mat<F> eval(const std::vector<F>& g) const {
    Mat<F> G(rows(), t2.size());
    std::size_t r = 0;
    for (const Triple& t : triples) {
      F mjh = g[t.j] * to_field<F>(t.vh) - g[t.h] * to_field<F>(t.vj);
      F mjk = g[t.j] * to_field<F>(t.vk) - g[t.k] * to_field<F>(t.vj);
      G(r, t.k) = G(r, t.k) + g[t.j] * mjh;
      G(r, t.h) = G(r, t.h) - g[t.j] * mjk;
      G(r, t.j) = G(r, t.j) + (g[t.h] * mjk - g[t.k] * mjh);
      ++r;
    }
    for (const Pair& pr : pairs) {
      G(r, pr.k) = G(r, pr.k) + to_field<F>(pr.vh);
      G(r, pr.h) = G(r, pr.h) - to_field<F>(pr.vk);
      ++r;
    }
    return G;
  }
};

struct PinSets {
  std::vector<std::vector<std::size_t>> row_cells;  // T(i,.) per row
  std::vector<std::size_t> t1;                      // rows with a pinned cell
  std::vector<std::size_t> t2;                      // columns with a pinned cell
};

PinSets pin_sets(const IntervalMatrix& m) {
  PinSets out;
  out.row_cells.assign(m.rows(), {});
  std::vector<bool> col_seen(m.cols(), false);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).degenerate()) {
        out.row_cells[i].push_back(j);
        col_seen[j] = true;
      }
    }
    if (!out.row_cells[i].empty()) out.t1.push_back(i);
  }
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (col_seen[j]) out.t2.push_back(j);
  return out;
}

// Shrinks per-row/-column boxes until the dyad product enclosure fits inside
// every nondegenerate entry.  All witness values must be interior there
// (boundary riders were pinned beforehand).
struct DyadBoxes {
  std::vector<RatInterval> A, B;  // around a_i, b_i
  std::vector<RatInterval> C, D;  // around c_j, d_j
};

DyadBoxes dyad_boxes(const IntervalMatrix& work, const Rank2Witness& w, int round) {
  const std::size_t p = work.rows(), q = work.cols();
  for (int t = round; t <= round + 60; ++t) {
    Rational r = pow2(-(t + 1));
    DyadBoxes bx;
    for (std::size_t i = 0; i < p; ++i) {
      bx.A.push_back(box_around(w.a[i], r));
      bx.B.push_back(box_around(w.b[i], r));
    }
    for (std::size_t j = 0; j < q; ++j) {
      bx.C.push_back(box_around(w.c[j], r));
      bx.D.push_back(box_around(w.d[j], r));
    }
    bool ok = true;
    for (std::size_t i = 0; i < p && ok; ++i)
      for (std::size_t j = 0; j < q && ok; ++j) {
        if (work(i, j).degenerate()) continue;
        RatInterval prod = interval_add(interval_mul(bx.A[i], bx.C[j]),
                                        interval_mul(bx.B[i], bx.D[j]));
        ok = work(i, j).contains(prod);
      }
    if (ok) return bx;
  }
  throw RetryNeeded{"dyad product boxes would not fit"};
}

DyadBoxes rank1_boxes(const IntervalMatrix& work, const Rank1Witness& w, int round) {
  const std::size_t p = work.rows(), q = work.cols();
  for (int t = round; t <= round + 60; ++t) {
    Rational r = pow2(-(t + 1));
    DyadBoxes bx;
    for (std::size_t i = 0; i < p; ++i) bx.A.push_back(box_around(w.a[i], r));
    for (std::size_t j = 0; j < q; ++j) bx.C.push_back(box_around(w.c[j], r));
    bool ok = true;
    for (std::size_t i = 0; i < p && ok; ++i)
      for (std::size_t j = 0; j < q && ok; ++j) {
        if (work(i, j).degenerate()) continue;
        ok = work(i, j).contains(interval_mul(bx.A[i], bx.C[j]));
      }
    if (ok) return bx;
  }
  throw RetryNeeded{"dyad product boxes would not fit"};
}

}  // namespace

// ---------------------------------------------------------------------------
// rank 1
// ---------------------------------------------------------------------------

RealizationResult realize_rank1(const IntervalMatrix& alpha, const Rank1Witness& w) {
  const std::size_t p = alpha.rows(), q = alpha.cols();
  if (w.a.size() != p || w.c.size() != q)
    fail(ErrorKind::WitnessInvalid, "dyad1 shape differs from alpha");
  QuadMatrix R = w.matrix();
  if (!contains(alpha, R)) fail(ErrorKind::WitnessInvalid, "witness not contained");
  if (rank(R) != 1) fail(ErrorKind::WitnessInvalid, "dyad witness must have rank 1");

  IntervalMatrix work = pin_boundary_entries(alpha, R);

  for (int round = 0; round <= detail::kMaxRefinementRounds; ++round) {
    try {
      DyadBoxes bx = rank1_boxes(work, w, round);
      PinSets T = pin_sets(work);
      std::map<std::size_t, std::size_t> local;
      for (std::size_t l = 0; l < T.t2.size(); ++l) local[T.t2[l]] = l;

      // c~ on the pinned columns: keep the zero pattern and the per-row
      // value proportions exactly.
      LinearSystem sys = LinearSystem::empty(T.t2.size());
      std::vector<QuadExt> point;
      std::vector<RatInterval> box;
      for (std::size_t j : T.t2) {
        point.push_back(w.c[j]);
        box.push_back(bx.C[j]);
      }
      for (std::size_t l = 0; l < T.t2.size(); ++l) {
        if (w.c[T.t2[l]].is_zero()) {
          std::vector<Rational> e(T.t2.size(), Rational(0));
          e[l] = 1;
          sys.add_equation(e, Rational(0));
        }
      }
      for (std::size_t i : T.t1) {
        const auto& cells = T.row_cells[i];
        for (std::size_t u = 0; u + 1 < cells.size(); ++u)
          for (std::size_t v = u + 1; v < cells.size(); ++v) {
            // value(i,ju) * c~_jv - value(i,jv) * c~_ju = 0
            std::vector<Rational> e(T.t2.size(), Rational(0));
            e[local[cells[v]]] += work(i, cells[u]).lo();
            e[local[cells[u]]] -= work(i, cells[v]).lo();
            sys.add_equation(e, Rational(0));
          }
      }
      std::vector<Rational> ct_pinned = rational_solution_near(sys, point, box);
      for (std::size_t l = 0; l < T.t2.size(); ++l)
        if (!w.c[T.t2[l]].is_zero() && sgn(ct_pinned[l]) == 0)
          throw RetryNeeded{"zero pattern of c~ broke"};

      std::vector<Rational> ct(q), at(p);
      for (std::size_t j = 0; j < q; ++j) {
        auto it = local.find(j);
        if (it != local.end())
          ct[j] = ct_pinned[it->second];
        else if (w.c[j].is_zero())
          ct[j] = 0;
        else
          ct[j] = round_in_box_nonzero(w.c[j], bx.C[j]);
      }
      for (std::size_t i = 0; i < p; ++i) {
        const auto& cells = T.row_cells[i];
        std::size_t piv = q;
        for (std::size_t j : cells)
          if (sgn(ct[j]) != 0) {
            piv = j;
            break;
          }
        if (piv < q) {
          at[i] = work(i, piv).lo() / ct[piv];
        } else if (w.a[i].is_zero()) {
          at[i] = 0;
        } else {
          at[i] = round_in_box_nonzero(w.a[i], bx.A[i]);
        }
        for (std::size_t j : cells)
          if (at[i] * ct[j] != work(i, j).lo())
            throw RetryNeeded{"pinned cell missed in rank-1 assembly"};
      }

      RationalMatrix Q(p, q);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) Q(i, j) = at[i] * ct[j];
      if (!contains(work, Q)) throw RetryNeeded{"rank-1 product left a cell"};
      if (rank(Q) != 1) throw RetryNeeded{"rank-1 product degenerated"};

      RealizationResult res{Q, 1, RankMode::Exact};
      detail::verify_realization(alpha, Q, 1, RankMode::Exact);
      return res;
    } catch (const RetryNeeded&) {
      continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoxTooTight) continue;
      throw;
    }
  }
  fail(ErrorKind::ConstructionFailed, "rank-1 refinement schedule exhausted");
}

// ---------------------------------------------------------------------------
// rank 2
// ---------------------------------------------------------------------------

namespace {

struct Rank2State {
  const IntervalMatrix& work;
  const Rank2Witness& w;
  DyadBoxes bx;
  PinSets T;
  PinnedSystem S;
  std::vector<QuadExt> c_pin, d_pin;  // witness c, d on the pinned columns
  std::vector<Rational> ct_pin, dt_pin;
};

PinnedSystem build_pinned_system(const IntervalMatrix& work, const PinSets& T,
                                 const Rank2Witness& w) {
  PinnedSystem S;
  S.t2 = T.t2;
  for (std::size_t l = 0; l < S.t2.size(); ++l) S.local[S.t2[l]] = l;
  for (std::size_t i : T.t1) {
    const auto& cells = T.row_cells[i];
    if (cells.size() >= 3) {
      for (std::size_t jj : cells) {
        for (std::size_t u = 0; u < cells.size(); ++u) {
          for (std::size_t v = u + 1; v < cells.size(); ++v) {
            std::size_t h = cells[u], k = cells[v];
            if (h == jj || k == jj) continue;
            PinnedSystem::Triple t;
            t.row = i;
            t.j = S.local[jj];
            t.h = S.local[h];
            t.k = S.local[k];
            t.vj = work(i, jj).lo();
            t.vh = work(i, h).lo();
            t.vk = work(i, k).lo();
            S.triples.push_back(t);
          }
        }
      }
    }
    for (std::size_t u = 0; u + 1 < cells.size(); ++u) {
      for (std::size_t v = u + 1; v < cells.size(); ++v) {
        std::size_t h = cells[u], k = cells[v];
        if (!w.c[h].is_zero() || !w.c[k].is_zero()) continue;
        PinnedSystem::Pair pr;
        pr.row = i;
        pr.h = S.local[h];
        pr.k = S.local[k];
        pr.vh = work(i, h).lo();
        pr.vk = work(i, k).lo();
        S.pairs.push_back(pr);
      }
    }
  }
  return S;
}

// Conditions (c), (d), (e) on a candidate d~.
bool dt_conditions_hold(const Rank2State& st, const std::vector<Rational>& dt) {
  const std::size_t n = st.S.t2.size();
  for (std::size_t l = 0; l < n; ++l) {
    if (!st.d_pin[l].is_zero() && sgn(dt[l]) == 0) return false;          // (d)
    if (!st.bx.D[st.S.t2[l]].contains(dt[l])) return false;               // (e)
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      QuadExt orig = det2(st.c_pin[u], st.d_pin[u], st.c_pin[v], st.d_pin[v]);
      if (orig.sign() != 0 &&
          sgn(det2(st.ct_pin[u], dt[u], st.ct_pin[v], dt[v])) == 0)
        return false;                                                      // (c)
    }
  return true;
}

// Chooses rational c~ (zero pattern, proportionality relations, inside the
// boxes) and d~ (in the kernel of the pinned system at c~ when its rank is
// positive).  Throws RetryNeeded when an open condition fails.
void choose_cd(Rank2State& st, Rank2Trace* trace) {
  const std::size_t n = st.S.t2.size();
  st.c_pin.clear();
  st.d_pin.clear();
  for (std::size_t j : st.S.t2) {
    st.c_pin.push_back(st.w.c[j]);
    st.d_pin.push_back(st.w.d[j]);
  }

  Mat<QuadExt> Gc = st.S.eval(st.c_pin);
  const std::size_t srank = rank_field(Gc);
  if (trace) trace->system_rank_positive = srank >= 1;

  // linear constraints on c~: zero pattern plus the value-proportionality
  // relations that hold at c (condition (b)).
  LinearSystem sys = LinearSystem::empty(n);
  for (std::size_t l = 0; l < n; ++l) {
    if (st.c_pin[l].is_zero()) {
      std::vector<Rational> e(n, Rational(0));
      e[l] = 1;
      sys.add_equation(e, Rational(0));
    }
  }
  for (std::size_t i : st.T.t1) {
    const auto& cells = st.T.row_cells[i];
    for (std::size_t u = 0; u < cells.size(); ++u) {
      for (std::size_t v = u + 1; v < cells.size(); ++v) {
        std::size_t j = cells[u], h = cells[v];
        const QuadExt& cj = st.w.c[j];
        const QuadExt& ch = st.w.c[h];
        Rational vj = st.work(i, j).lo(), vh = st.work(i, h).lo();
        if (cj.is_zero() || ch.is_zero() || sgn(vj) == 0 || sgn(vh) == 0) continue;
        if ((cj * QuadExt(vh) - ch * QuadExt(vj)).sign() != 0) continue;
        std::vector<Rational> e(n, Rational(0));
        e[st.S.local[j]] += vh;
        e[st.S.local[h]] -= vj;
        sys.add_equation(e, Rational(0));
      }
    }
  }

  std::vector<RatInterval> cbox;
  for (std::size_t j : st.S.t2) cbox.push_back(st.bx.C[j]);

  std::vector<std::size_t> I, J;
  std::vector<QuadExt> lambda;
  if (srank >= 1) {
    Echelon<QuadExt> ge = field_echelon(Gc);
    I = ge.pivot_rows;
    std::sort(I.begin(), I.end());
    J = ge.pivot_cols;
    // shrink the c~ boxes until the pivot minor of the pinned system is
    // sign-definite over them (rank cannot drop inside the boxes)
    for (int t = 0;; ++t) {
      if (t > 60) throw RetryNeeded{"pivot minor would not stabilize"};
      std::vector<RatInterval> g;
      for (std::size_t l = 0; l < n; ++l) g.push_back(cbox[l]);
      Mat<RatInterval> Gi = st.S.eval(g);
      RatInterval mr = interval_det(Gi.submatrix(I, J));
      if (sign(mr.lo()) > 0 || sign(mr.hi()) < 0) break;
      for (std::size_t l = 0; l < n; ++l) {
        Rational quarter = cbox[l].width() / 4;
        if (st.c_pin[l].is_rational()) {
          Rational cv = st.c_pin[l].as_rational();
          cbox[l] = RatInterval(rat_max(cbox[l].lo(), cv - quarter),
                                rat_min(cbox[l].hi(), cv + quarter));
        } else {
          cbox[l] = box_around_clipped(st.c_pin[l], quarter, cbox[l]);
        }
      }
    }
    // coordinates of d in the minor-vector basis at c
    std::vector<std::size_t> freeJ;
    for (std::size_t l = 0; l < n; ++l)
      if (std::find(J.begin(), J.end(), l) == J.end()) freeJ.push_back(l);
    for (std::size_t fj : freeJ) {
      std::vector<std::size_t> Jp = J;
      Jp.push_back(fj);
      std::sort(Jp.begin(), Jp.end());
      std::vector<QuadExt> vf = minor_kernel_vector(Gc, I, Jp);
      internal_check(!(vf[fj] == QuadExt(Rational(0))), "pivot minor vanished");
      lambda.push_back(st.d_pin[fj] / vf[fj]);
    }
    // sanity: d really is that combination (it lies in the kernel at c)
    std::vector<QuadExt> recon(n, QuadExt(Rational(0)));
    for (std::size_t f = 0; f < freeJ.size(); ++f) {
      std::vector<std::size_t> Jp = J;
      Jp.push_back(freeJ[f]);
      std::sort(Jp.begin(), Jp.end());
      std::vector<QuadExt> vf = minor_kernel_vector(Gc, I, Jp);
      for (std::size_t l = 0; l < n; ++l) recon[l] += lambda[f] * vf[l];
    }
    for (std::size_t l = 0; l < n; ++l)
      internal_check(recon[l] == st.d_pin[l],
                     "witness d escaped the kernel of the pinned system");
  }

  st.ct_pin = rational_solution_near(sys, st.c_pin, cbox);
  for (std::size_t l = 0; l < n; ++l)
    if (!st.c_pin[l].is_zero() && sgn(st.ct_pin[l]) == 0)
      throw RetryNeeded{"zero pattern of c~ broke"};

  Mat<Rational> Gt = st.S.eval(st.ct_pin);
  if (srank == 0) {
    for (std::size_t r = 0; r < Gt.rows(); ++r)
      for (std::size_t l = 0; l < n; ++l)
        internal_check(sgn(Gt(r, l)) == 0,
                       "pinned system must stay zero at c~ (degenerate branch)");
    // free choice of d~ under (c), (d), (e)
    for (int e : denominator_schedule(default_precision_budget())) {
      std::vector<Rational> dt(n);
      for (std::size_t l = 0; l < n; ++l) {
        if (st.d_pin[l].is_zero())
          dt[l] = 0;
        else
          dt[l] = cf_approx(st.d_pin[l], e);
      }
      if (dt_conditions_hold(st, dt)) {
        st.dt_pin = dt;
        return;
      }
    }
    throw RetryNeeded{"no admissible d~ in the degenerate branch"};
  }

  if (rank_bareiss(Gt) != srank)
    throw RetryNeeded{"rank of the pinned system moved under rounding"};

  // d~ = sum of rounded coordinates times the minor vectors at c~
  std::vector<std::size_t> freeJ;
  for (std::size_t l = 0; l < n; ++l)
    if (std::find(J.begin(), J.end(), l) == J.end()) freeJ.push_back(l);
  std::vector<std::vector<Rational>> vt;
  for (std::size_t fj : freeJ) {
    std::vector<std::size_t> Jp = J;
    Jp.push_back(fj);
    std::sort(Jp.begin(), Jp.end());
    vt.push_back(minor_kernel_vector(Gt, I, Jp));
  }
  for (int e : denominator_schedule(default_precision_budget())) {
    std::vector<Rational> dt(n, Rational(0));
    for (std::size_t f = 0; f < freeJ.size(); ++f) {
      Rational lf = cf_approx(lambda[f], e);
      for (std::size_t l = 0; l < n; ++l) dt[l] += lf * vt[f][l];
    }
    if (!dt_conditions_hold(st, dt)) continue;
    st.dt_pin = dt;
    // the key invariant: both c~ and d~ lie in ker of the system at c~
    for (std::size_t r = 0; r < Gt.rows(); ++r) {
      Rational accC(0), accD(0);
      for (std::size_t l = 0; l < n; ++l) {
        accC += Gt(r, l) * st.ct_pin[l];
        accD += Gt(r, l) * dt[l];
      }
      internal_check(sgn(accC) == 0, "c~ escaped the kernel at c~");
      internal_check(sgn(accD) == 0, "d~ escaped the kernel at c~");
    }
    return;
  }
  throw RetryNeeded{"no admissible d~ at this precision"};
}

}  // namespace

RealizationResult realize_rank2(const IntervalMatrix& alpha, const Rank2Witness& w,
                                Rank2Trace* trace) {
  const std::size_t p = alpha.rows(), q = alpha.cols();
  if (w.a.size() != p || w.b.size() != p || w.c.size() != q || w.d.size() != q)
    fail(ErrorKind::WitnessInvalid, "dyad2 shape differs from alpha");
  if (p < q) fail(ErrorKind::WitnessInvalid, "rank-2 realization needs p >= q");
  for (std::size_t j = 0; j < q; ++j)
    if (w.c[j].is_zero() && w.d[j].is_zero())
      fail(ErrorKind::WitnessInvalid,
           "column " + std::to_string(j + 1) + " has c_j = d_j = 0");
  QuadMatrix R = w.matrix();
  if (!contains(alpha, R)) fail(ErrorKind::WitnessInvalid, "witness not contained");
  if (rank(R) != 2) fail(ErrorKind::WitnessInvalid, "dyad witness must have rank 2");

  IntervalMatrix work = pin_boundary_entries(alpha, R);

  for (int round = 0; round <= detail::kMaxRefinementRounds; ++round) {
    if (trace) {
      trace->row_cases.clear();
      trace->refinement_rounds = round;
    }
    try {
      Rank2State st{work, w, dyad_boxes(work, w, round), pin_sets(work), {}, {}, {}, {}, {}};
      st.S = build_pinned_system(work, st.T, w);

      std::vector<Rational> ct(q), dt(q), at(p), bt(p);
      if (!st.T.t2.empty()) {
        choose_cd(st, trace);
        for (std::size_t l = 0; l < st.S.t2.size(); ++l) {
          ct[st.S.t2[l]] = st.ct_pin[l];
          dt[st.S.t2[l]] = st.dt_pin[l];
        }
      }
      for (std::size_t j = 0; j < q; ++j) {
        if (st.S.local.count(j)) continue;
        ct[j] = round_in_box(w.c[j], st.bx.C[j]);
        dt[j] = round_in_box(w.d[j], st.bx.D[j]);
      }

      // per-row choices on the pinned rows
      for (std::size_t i : st.T.t1) {
        const auto& cells = st.T.row_cells[i];
        auto pin = [&](std::size_t j) { return work(i, j).lo(); };
        if (cells.size() == 1) {
          std::size_t jb = cells[0];
          if (sgn(ct[jb]) != 0) {
            bool done = false;
            for (int e : denominator_schedule(default_precision_budget())) {
              Rational bi = cf_approx(w.b[i], e);
              if (!st.bx.B[i].contains(bi)) continue;
              Rational ai = (pin(jb) - bi * dt[jb]) / ct[jb];
              if (st.bx.A[i].contains(ai)) {
                at[i] = ai;
                bt[i] = bi;
                done = true;
                break;
              }
            }
            if (!done) throw RetryNeeded{"single-cell row would not fit"};
          } else {
            internal_check(sgn(dt[jb]) != 0, "pinned column with c~ = d~ = 0");
            bt[i] = pin(jb) / dt[jb];
            if (!st.bx.B[i].contains(bt[i]))
              throw RetryNeeded{"forced b~ left its neighbourhood"};
            at[i] = round_in_box(w.a[i], st.bx.A[i]);
          }
          if (trace) trace->row_cases.emplace_back(i, "single");
        } else {
          // locate a pair with nonzero cross determinant of (c~, d~)
          std::size_t pj = q, ph = q;
          for (std::size_t u = 0; u < cells.size() && pj == q; ++u)
            for (std::size_t v = u + 1; v < cells.size(); ++v) {
              if (sgn(det2(ct[cells[u]], dt[cells[u]], ct[cells[v]], dt[cells[v]])) != 0) {
                pj = cells[u];
                ph = cells[v];
                break;
              }
            }
          if (pj < q) {
            // cross determinant alive: b~ is forced by the two pinned values
            bt[i] = (ct[pj] * pin(ph) - ct[ph] * pin(pj)) /
                    (ct[pj] * dt[ph] - ct[ph] * dt[pj]);
            std::size_t js = q;
            for (std::size_t j : cells)
              if (sgn(ct[j]) != 0) {
                js = j;
                break;
              }
            internal_check(js < q, "live cross determinant needs a nonzero c~");
            at[i] = (pin(js) - bt[i] * dt[js]) / ct[js];
            if (trace) trace->row_cases.emplace_back(i, "case1");
          } else {
            std::size_t js = q;
            for (std::size_t j : cells)
              if (sgn(ct[j]) != 0) {
                js = j;
                break;
              }
            if (js < q) {
              // all cross determinants vanish, some c~ alive: b~ is free
              bt[i] = round_in_box(w.b[i], st.bx.B[i]);
              at[i] = (pin(js) - bt[i] * dt[js]) / ct[js];
              if (trace) trace->row_cases.emplace_back(i, "case2.1");
            } else {
              // every c~ vanishes on the row: divide by d~
              std::size_t j0 = cells[0];
              internal_check(sgn(dt[j0]) != 0, "pinned column with c~ = d~ = 0");
              bt[i] = pin(j0) / dt[j0];
              at[i] = round_in_box(w.a[i], st.bx.A[i]);
              if (trace) trace->row_cases.emplace_back(i, "case2.2");
            }
          }
          for (std::size_t j : cells)
            if (at[i] * ct[j] + bt[i] * dt[j] != pin(j))
              throw RetryNeeded{"pinned cell missed in rank-2 assembly"};
        }
      }
      for (std::size_t i = 0; i < p; ++i) {
        if (std::find(st.T.t1.begin(), st.T.t1.end(), i) != st.T.t1.end()) continue;
        at[i] = round_in_box(w.a[i], st.bx.A[i]);
        bt[i] = round_in_box(w.b[i], st.bx.B[i]);
      }

      RationalMatrix Q(p, q);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) Q(i, j) = at[i] * ct[j] + bt[i] * dt[j];
      if (!contains(work, Q)) throw RetryNeeded{"dyad sum left a cell"};

      // rank repair: raise rank 0/1 to 2 by moving one nondegenerate entry
      // to an interval endpoint (two passes cover the rank-0 corner)
      std::size_t rk = rank(Q);
      internal_check(rk <= 2, "dyad sum exceeded rank 2");
      while (rk < 2) {
        if (trace) trace->fixup_used = true;
        bool bumped = false;
        for (std::size_t i = 0; i < p && !bumped; ++i)
          for (std::size_t j = 0; j < q && !bumped; ++j) {
            if (work(i, j).degenerate()) continue;
            for (const Rational& val : {work(i, j).lo(), work(i, j).hi()}) {
              if (val == Q(i, j)) continue;
              RationalMatrix Q2 = Q;
              Q2(i, j) = val;
              if (rank(Q2) == rk + 1) {
                Q = Q2;
                bumped = true;
                break;
              }
            }
          }
        if (!bumped) throw RetryNeeded{"no single-entry rank repair available"};
        ++rk;
      }

      RealizationResult res{Q, 2, RankMode::Exact};
      detail::verify_realization(alpha, Q, 2, RankMode::Exact);
      return res;
    } catch (const RetryNeeded&) {
      continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoxTooTight) continue;
      throw;
    }
  }
  fail(ErrorKind::ConstructionFailed, "rank-2 refinement schedule exhausted");
}

}  // namespace intrank
