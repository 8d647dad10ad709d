#include <algorithm>
#include <cstdint>
#include <map>

#include "intrank/approx.hpp"
#include "intrank/fourier_motzkin.hpp"
#include "intrank/realize.hpp"
#include "intrank/realize_detail.hpp"

// Rational realization from column dependences.  The witness presents the
// last column (or the last two) as exact combinations of the spanning
// columns; the construction rationalizes the spanning entries and the
// combination coefficients while hitting every pinned cell exactly.  Rows
// whose dependent entries are free get their irrational entries replaced
// first; rows with pinned dependent entries are classified by which
// coefficient family can absorb the error, and one spanning entry per
// pinned dependent entry acts as the pivot that restores exactness.

namespace intrank {

namespace {

using detail::RetryNeeded;

bool strictly_inside(const QuadInterval& inner, const RatInterval& outer) {
  return QuadExt(outer.lo()) < inner.lo() && inner.hi() < QuadExt(outer.hi());
}

QuadInterval term_of(const QuadExt& coeff, const QuadExt& value,
                     const RatInterval* box) {
  QuadInterval c = QuadInterval::point(coeff);
  return box ? c * QuadInterval::of(*box) : c * QuadInterval::point(value);
}

// Replaces the irrational spanning entries of a row whose dependent entries
// are all nondegenerate, keeping each recomputed dependent value strictly
// interior.  `deps` pairs a coefficient vector with its dependent column.
void preprocess_free_row(Mat<QuadExt>& val, const IntervalMatrix& work, std::size_t i,
                         std::size_t span,
                         const std::vector<std::pair<const std::vector<QuadExt>*,
                                                     std::size_t>>& deps,
                         int round) {
  std::vector<std::size_t> N;
  for (std::size_t j = 0; j < span; ++j)
    if (!val(i, j).is_rational()) N.push_back(j);
  if (N.empty()) return;
  for (int t = 0; t <= 60; ++t) {
    Rational r = pow2(-(round + 1 + t));
    std::map<std::size_t, RatInterval> U;
    for (std::size_t j : N) U.emplace(j, box_around_clipped(val(i, j), r, work(i, j)));
    bool ok = true;
    for (const auto& [coeff, dep] : deps) {
      QuadInterval E = QuadInterval::point(QuadExt(Rational(0)));
      for (std::size_t j = 0; j < span; ++j) {
        auto it = U.find(j);
        E = E + term_of((*coeff)[j], val(i, j), it == U.end() ? nullptr : &it->second);
      }
      if (!strictly_inside(E, work(i, dep))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (std::size_t j : N) val(i, j) = QuadExt(round_in_box(val(i, j), U.at(j)));
    for (const auto& [coeff, dep] : deps) {
      QuadExt acc{Rational(0)};
      for (std::size_t j = 0; j < span; ++j) acc += (*coeff)[j] * val(i, j);
      val(i, dep) = acc;
      internal_check(work(i, dep).interior(acc), "preprocessed row left its cell");
    }
    return;
  }
  throw RetryNeeded{"free-row preprocessing would not fit"};
}

std::vector<std::size_t> irrational_support(const Mat<QuadExt>& val, std::size_t i,
                                            std::size_t span) {
  std::vector<std::size_t> N;
  for (std::size_t j = 0; j < span; ++j)
    if (!val(i, j).is_rational()) N.push_back(j);
  return N;
}

// (coeff_j | rounded) interval: a box for irrational coefficients, the exact
// value otherwise.
RatInterval coeff_box(const QuadExt& coeff, const std::map<std::size_t, RatInterval>& boxes,
                      std::size_t j) {
  if (coeff.is_rational()) return RatInterval::point(coeff.as_rational());
  return boxes.at(j);
}

}  // namespace

// ---------------------------------------------------------------------------
// rank <= q-1: single dependent column
// ---------------------------------------------------------------------------

RealizationResult realize_rank_le_qm1(const IntervalMatrix& alpha,
                                      const ColumnDep1Witness& w, ColSpanTrace* trace) {
  const std::size_t p = alpha.rows(), q = alpha.cols();
  if (q < 2) fail(ErrorKind::WitnessInvalid, "coldep1 needs q >= 2");
  if (w.A.rows() != p || w.A.cols() != q || w.c.size() != q - 1)
    fail(ErrorKind::WitnessInvalid, "coldep1 shape differs from alpha");
  const std::size_t span = q - 1, dep = q - 1;
  for (std::size_t i = 0; i < p; ++i) {
    QuadExt acc{Rational(0)};
    for (std::size_t j = 0; j < span; ++j) acc += w.c[j] * w.A(i, j);
    if (!(acc == w.A(i, dep)))
      fail(ErrorKind::WitnessInvalid, "column relation does not hold exactly");
  }
  if (!contains(alpha, w.A)) fail(ErrorKind::WitnessInvalid, "witness not contained");

  IntervalMatrix work = pin_boundary_entries(alpha, w.A);

  std::vector<std::size_t> C;  // irrational coefficients
  for (std::size_t j = 0; j < span; ++j)
    if (!w.c[j].is_rational()) C.push_back(j);

  for (int round = 0; round <= detail::kMaxRefinementRounds; ++round) {
    if (trace) {
      trace->row_cases.clear();
      trace->refinement_rounds = round;
    }
    try {
      Mat<QuadExt> val = w.A;
      // rows with a free dependent entry lose their irrational entries first
      for (std::size_t i = 0; i < p; ++i) {
        if (work(i, dep).degenerate()) continue;
        preprocess_free_row(val, work, i, span, {{&w.c, dep}}, round);
        if (trace) trace->row_cases.emplace_back(i, "qm1-free");
      }

      // classify pinned rows
      std::vector<std::size_t> system_rows;              // (N)-rows
      std::vector<std::pair<std::size_t, std::size_t>> pivot_rows;  // (row, pivot col)
      for (std::size_t i = 0; i < p; ++i) {
        if (!work(i, dep).degenerate()) continue;
        auto N = irrational_support(val, i, span);
        std::size_t piv = span;
        for (std::size_t j : N)
          if (!w.c[j].is_zero()) {
            piv = j;
            break;
          }
        if (piv == span) {
          system_rows.push_back(i);
          if (trace) trace->row_cases.emplace_back(i, "qm1-system");
        } else {
          pivot_rows.emplace_back(i, piv);
          if (trace) trace->row_cases.emplace_back(i, "qm1-pivot");
        }
      }

      // choose V boxes (irrational coefficients) and U boxes (pivot rows)
      std::map<std::size_t, RatInterval> V;
      std::map<std::pair<std::size_t, std::size_t>, RatInterval> U;
      bool boxed = false;
      for (int t = 0; t <= 40 && !boxed; ++t) {
        Rational r = pow2(-(round + 1 + t));
        V.clear();
        U.clear();
        for (std::size_t j : C) V.emplace(j, box_around(w.c[j], r));
        for (auto [i, piv] : pivot_rows) {
          auto N = irrational_support(val, i, span);
          for (std::size_t j : N)
            if (j != piv) U.emplace(std::make_pair(i, j),
                                    box_around_clipped(val(i, j), r, work(i, j)));
        }
        boxed = true;
        // free rows were preprocessed, so their spanning entries are exact
        // rationals; the sum over the rounded coefficients must stay inside
        for (std::size_t i = 0; i < p && boxed; ++i) {
          if (work(i, dep).degenerate()) continue;
          RatInterval E = RatInterval::point(0);
          for (std::size_t j = 0; j < span; ++j)
            E = E + coeff_box(w.c[j], V, j) * RatInterval::point(val(i, j).as_rational());
          boxed = work(i, dep).contains(E);
        }
        // pivot rows: the forced pivot entry lands inside its cell
        for (auto [i, piv] : pivot_rows) {
          if (!boxed) break;
          const QuadExt& cp = w.c[piv];
          RatInterval den = cp.is_rational() ? RatInterval::point(cp.as_rational())
                                             : V.at(piv);
          if (sign(den.lo()) <= 0 && sign(den.hi()) >= 0) {
            boxed = false;
            break;
          }
          RatInterval E = RatInterval::point(-work(i, dep).lo());
          for (std::size_t j = 0; j < span; ++j) {
            if (j == piv) continue;
            auto it = U.find({i, j});
            RatInterval vv = it != U.end()
                                 ? it->second
                                 : RatInterval::point(val(i, j).as_rational());
            E = E + coeff_box(w.c[j], V, j) * vv;
          }
          RatInterval forced = interval_div(RatInterval(-E.hi(), -E.lo()), den);
          boxed = work(i, piv).contains(forced);
        }
      }
      if (!boxed) throw RetryNeeded{"qm1 neighbourhoods would not fit"};

      // (N): pinned rows without a pivot constrain the rounded coefficients
      LinearSystem N_sys = LinearSystem::empty(C.size());
      std::map<std::size_t, std::size_t> cpos;
      for (std::size_t l = 0; l < C.size(); ++l) cpos[C[l]] = l;
      for (std::size_t i : system_rows) {
        std::vector<Rational> coeffs(C.size(), Rational(0));
        Rational rhs = work(i, dep).lo();
        for (std::size_t j = 0; j < span; ++j) {
          if (w.c[j].is_zero()) continue;
          if (w.c[j].is_rational())
            rhs -= w.c[j].as_rational() * val(i, j).as_rational();
          else
            coeffs[cpos[j]] += val(i, j).as_rational();
        }
        N_sys.add_equation(coeffs, rhs);
      }
      if (trace) trace->used_system_N = N_sys.A.rows() > 0;

      std::vector<QuadExt> cpoint;
      std::vector<RatInterval> cbox;
      for (std::size_t j : C) {
        cpoint.push_back(w.c[j]);
        cbox.push_back(V.at(j));
      }
      std::vector<Rational> chat = rational_solution_near(N_sys, cpoint, cbox);
      std::vector<Rational> cc(span);
      for (std::size_t j = 0; j < span; ++j)
        cc[j] = w.c[j].is_rational() ? w.c[j].as_rational() : chat[cpos[j]];

      // round the remaining irrational entries
      for (std::size_t i : system_rows) {
        for (std::size_t j : irrational_support(val, i, span)) {
          internal_check(w.c[j].is_zero(), "system row with live irrational entry");
          Rational r = pow2(-(round + 1));
          val(i, j) = QuadExt(round_in_box(val(i, j),
                                           box_around_clipped(val(i, j), r, work(i, j))));
        }
      }
      for (auto [i, piv] : pivot_rows) {
        for (std::size_t j : irrational_support(val, i, span)) {
          if (j == piv) continue;
          auto it = U.find({i, j});
          if (it != U.end()) {
            val(i, j) = QuadExt(round_in_box(val(i, j), it->second));
          } else {
            internal_check(w.c[j].is_zero(), "unboxed irrational entry with c != 0");
            Rational r = pow2(-(round + 1));
            val(i, j) = QuadExt(round_in_box(val(i, j),
                                             box_around_clipped(val(i, j), r, work(i, j))));
          }
        }
        // pivot entry forced by the pinned dependent value
        Rational acc = -work(i, dep).lo();
        for (std::size_t j = 0; j < span; ++j) {
          if (j == piv) continue;
          if (w.c[j].is_zero()) continue;
          acc += cc[j] * val(i, j).as_rational();
        }
        internal_check(sgn(cc[piv]) != 0, "vanishing pivot coefficient");
        Rational forced = -acc / cc[piv];
        if (!work(i, piv).contains(forced))
          throw RetryNeeded{"forced pivot entry left its cell"};
        val(i, piv) = QuadExt(forced);
      }

      // assemble
      RationalMatrix H(p, q);
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < span; ++j) {
          internal_check(val(i, j).is_rational(), "irrational entry survived");
          H(i, j) = val(i, j).as_rational();
        }
        Rational acc(0);
        for (std::size_t j = 0; j < span; ++j) acc += cc[j] * H(i, j);
        H(i, dep) = acc;
      }
      if (!contains(work, H)) throw RetryNeeded{"assembled matrix left a cell"};
      internal_check(rank(H) <= q - 1, "dependent column broke");
      detail::verify_realization(alpha, H, q - 1, RankMode::AtMost);
      return RealizationResult{H, q - 1, RankMode::AtMost};
    } catch (const RetryNeeded&) {
      continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoxTooTight) continue;
      throw;
    }
  }
  fail(ErrorKind::ConstructionFailed, "qm1 refinement schedule exhausted");
}

// ---------------------------------------------------------------------------
// rank <= q-2: two dependent columns
// ---------------------------------------------------------------------------

namespace {

enum class RowKind {
  Free,      // both dependent entries nondegenerate
  C11, C12, C13,          // y pinned, z free
  C21, C22, C23,          // z pinned, y free (mirror)
  C31, C32, C33, C34, YbYc  // both pinned
};

const char* row_kind_name(RowKind k) {
  switch (k) {
    case RowKind::Free: return "case0";
    case RowKind::C11: return "case1.1";
    case RowKind::C12: return "case1.2";
    case RowKind::C13: return "case1.3";
    case RowKind::C21: return "case2.1";
    case RowKind::C22: return "case2.2";
    case RowKind::C23: return "case2.3";
    case RowKind::C31: return "case3.1";
    case RowKind::C32: return "case3.2";
    case RowKind::C33: return "case3.3";
    case RowKind::C34: return "case3.4";
    case RowKind::YbYc: return "ybyc";
  }
  return "?";
}

struct RowInfo {
  RowKind kind = RowKind::Free;
  std::vector<std::size_t> N;   // irrational spanning entries
  std::size_t jbar = SIZE_MAX;  // b-side pivot
  std::size_t jhat = SIZE_MAX;  // c-side pivot
};

struct Qm2State {
  const IntervalMatrix& work;
  const ColumnDep2Witness& w;
  std::size_t p, q, span, ycol, zcol;
  Mat<QuadExt> val;
  std::vector<RowInfo> rows;
  std::vector<std::size_t> B, C;          // irrational coefficient indices
  std::map<std::size_t, std::size_t> bpos, cpos;
  std::vector<std::size_t> Mrows, Nrows;  // rows feeding systems (M) / (N)
  std::vector<std::size_t> Wrows;         // doubly pinned coupled rows (case 3.2)
  std::map<std::size_t, std::size_t> Gstar;  // W rows with a live coefficient -> j*
  std::map<std::size_t, RatInterval> Z, V;   // boxes for b~, c~
  std::map<std::pair<std::size_t, std::size_t>, RatInterval> U;
  std::vector<Rational> bb, cc;           // final rounded coefficient vectors

  Rational pin(std::size_t i, std::size_t col) const { return work(i, col).lo(); }
};

void classify_rows(Qm2State& st) {
  st.rows.assign(st.p, {});
  st.Mrows.clear();
  st.Nrows.clear();
  st.Wrows.clear();
  for (std::size_t i = 0; i < st.p; ++i) {
    RowInfo& info = st.rows[i];
    info.N = irrational_support(st.val, i, st.span);
    bool ydeg = st.work(i, st.ycol).degenerate();
    bool zdeg = st.work(i, st.zcol).degenerate();
    bool b_dead = true, c_dead = true;  // all coefficients vanish on N
    for (std::size_t j : info.N) {
      if (!st.w.b[j].is_zero()) b_dead = false;
      if (!st.w.c[j].is_zero()) c_dead = false;
    }
    if (!ydeg && !zdeg) {
      info.kind = RowKind::Free;
      continue;
    }
    if (ydeg && !zdeg) {
      if (!b_dead) {
        info.kind = RowKind::C11;
        for (std::size_t j : info.N)
          if (!st.w.b[j].is_zero()) {
            info.jbar = j;
            break;
          }
      } else {
        info.kind = info.N.empty() ? RowKind::C13 : RowKind::C12;
        st.Mrows.push_back(i);
      }
      continue;
    }
    if (!ydeg && zdeg) {
      if (!c_dead) {
        info.kind = RowKind::C21;
        for (std::size_t j : info.N)
          if (!st.w.c[j].is_zero()) {
            info.jhat = j;
            break;
          }
      } else {
        info.kind = info.N.empty() ? RowKind::C23 : RowKind::C22;
        st.Nrows.push_back(i);
      }
      continue;
    }
    // both pinned
    if (b_dead && c_dead) {
      // with the per-column nonvanishing assumption N_i is empty here;
      // otherwise the leftover entries sit in inert columns
      info.kind = RowKind::YbYc;
      st.Mrows.push_back(i);
      st.Nrows.push_back(i);
      continue;
    }
    if (!b_dead && !c_dead) {
      std::size_t both = SIZE_MAX;
      for (std::size_t j : info.N)
        if (!st.w.b[j].is_zero() && !st.w.c[j].is_zero()) {
          both = j;
          break;
        }
      if (both != SIZE_MAX) {
        info.kind = RowKind::C32;
        info.jbar = both;
        st.Wrows.push_back(i);
      } else {
        info.kind = RowKind::C31;
        for (std::size_t j : info.N)
          if (!st.w.b[j].is_zero()) {
            info.jbar = j;
            break;
          }
        for (std::size_t j : info.N)
          if (!st.w.c[j].is_zero()) {
            info.jhat = j;
            break;
          }
      }
      continue;
    }
    if (c_dead) {
      // z-column follows the rounded coefficients: (N)-row; y pinned via pivot
      info.kind = RowKind::C33;
      for (std::size_t j : info.N)
        if (!st.w.b[j].is_zero()) {
          info.jbar = j;
          break;
        }
      st.Nrows.push_back(i);
    } else {
      info.kind = RowKind::C34;
      for (std::size_t j : info.N)
        if (!st.w.c[j].is_zero()) {
          info.jhat = j;
          break;
        }
      st.Mrows.push_back(i);
    }
  }
}

// the pivot-forcing enclosure used by cases 1.1 / 2.1 / 3.x: the value the
// pivot entry must take, as an interval over the current boxes
RatInterval forced_pivot_range(const Qm2State& st, std::size_t i, std::size_t piv,
                               const std::vector<QuadExt>& coeff,
                               const std::map<std::size_t, RatInterval>& cboxes,
                               std::size_t pinned_col,
                               const std::vector<std::size_t>& exclude) {
  RatInterval E = RatInterval::point(-st.pin(i, pinned_col));
  for (std::size_t j = 0; j < st.span; ++j) {
    if (j == piv) continue;
    if (std::find(exclude.begin(), exclude.end(), j) != exclude.end()) continue;
    if (coeff[j].is_zero()) continue;
    auto it = st.U.find({i, j});
    RatInterval vv = it != st.U.end() ? it->second
                                      : RatInterval::point(st.val(i, j).is_rational()
                                                               ? st.val(i, j).as_rational()
                                                               : Rational(0));
    if (!st.val(i, j).is_rational() && it == st.U.end())
      fail(ErrorKind::Internal, "irrational entry without a box in pivot range");
    E = E + coeff_box(coeff[j], cboxes, j) * vv;
  }
  RatInterval den = coeff[piv].is_rational()
                        ? RatInterval::point(coeff[piv].as_rational())
                        : cboxes.at(piv);
  return interval_div(RatInterval(-E.hi(), -E.lo()), den);
}

bool den_sign_definite(const QuadExt& coeff, const std::map<std::size_t, RatInterval>& boxes,
                       std::size_t j) {
  if (coeff.is_rational()) return !coeff.is_zero();
  const RatInterval& b = boxes.at(j);
  return sign(b.lo()) > 0 || sign(b.hi()) < 0;
}

// Chooses Z / V / U so that every inclusion condition of the classification
// holds.  Pivot target boxes keep a fixed radius while everything else
// shrinks; if the fixed tier is itself too wide it is halved and the inner
// search restarts.
void choose_boxes(Qm2State& st, int round) {
  for (int tier = 0; tier <= 14; ++tier) {
    std::map<std::pair<std::size_t, std::size_t>, RatInterval> pivotU;
    for (std::size_t i = 0; i < st.p; ++i) {
      const RowInfo& info = st.rows[i];
      if (info.kind == RowKind::C11) {
        Rational rho = detail::half_min_slack(st.val(i, info.jbar), st.work(i, info.jbar));
        rho = rho / pow2(tier) * 2;
        pivotU.emplace(std::make_pair(i, info.jbar),
                       box_around_clipped(st.val(i, info.jbar), rho, st.work(i, info.jbar)));
      } else if (info.kind == RowKind::C21) {
        Rational rho = detail::half_min_slack(st.val(i, info.jhat), st.work(i, info.jhat));
        rho = rho / pow2(tier) * 2;
        pivotU.emplace(std::make_pair(i, info.jhat),
                       box_around_clipped(st.val(i, info.jhat), rho, st.work(i, info.jhat)));
      }
    }
    for (int t = 0; t <= 30; ++t) {
      Rational r = pow2(-(round + 1 + t));
      st.Z.clear();
      st.V.clear();
      st.U.clear();
      for (std::size_t j : st.B) st.Z.emplace(j, box_around(st.w.b[j], r));
      for (std::size_t j : st.C) st.V.emplace(j, box_around(st.w.c[j], r));
      for (std::size_t i = 0; i < st.p; ++i) {
        const RowInfo& info = st.rows[i];
        for (std::size_t j : info.N) {
          auto key = std::make_pair(i, j);
          auto pv = pivotU.find(key);
          if (pv != pivotU.end())
            st.U.emplace(key, pv->second);
          else
            st.U.emplace(key, box_around_clipped(st.val(i, j), r, st.work(i, j)));
        }
      }

      bool ok = true;
      for (std::size_t i = 0; i < st.p && ok; ++i) {
        const RowInfo& info = st.rows[i];
        auto sum_inside = [&](const std::vector<QuadExt>& coeff,
                              const std::map<std::size_t, RatInterval>& cb,
                              std::size_t target_col) {
          RatInterval E = RatInterval::point(0);
          for (std::size_t j = 0; j < st.span; ++j) {
            if (coeff[j].is_zero()) continue;
            auto it = st.U.find({i, j});
            RatInterval vv;
            if (it != st.U.end())
              vv = it->second;
            else
              vv = RatInterval::point(st.val(i, j).as_rational());
            E = E + coeff_box(coeff[j], cb, j) * vv;
          }
          return st.work(i, target_col).contains(E);
        };
        switch (info.kind) {
          case RowKind::Free:
            ok = sum_inside(st.w.b, st.Z, st.ycol) && sum_inside(st.w.c, st.V, st.zcol);
            break;
          case RowKind::C11:
            ok = den_sign_definite(st.w.b[info.jbar], st.Z, info.jbar) &&
                 sum_inside(st.w.c, st.V, st.zcol) &&
                 st.U.at({i, info.jbar})
                     .contains(forced_pivot_range(st, i, info.jbar, st.w.b, st.Z,
                                                  st.ycol, {}));
            break;
          case RowKind::C12:
          case RowKind::C13:
            ok = sum_inside(st.w.c, st.V, st.zcol);
            break;
          case RowKind::C21:
            ok = den_sign_definite(st.w.c[info.jhat], st.V, info.jhat) &&
                 sum_inside(st.w.b, st.Z, st.ycol) &&
                 st.U.at({i, info.jhat})
                     .contains(forced_pivot_range(st, i, info.jhat, st.w.c, st.V,
                                                  st.zcol, {}));
            break;
          case RowKind::C22:
          case RowKind::C23:
            ok = sum_inside(st.w.b, st.Z, st.ycol);
            break;
          case RowKind::C31:
            ok = den_sign_definite(st.w.b[info.jbar], st.Z, info.jbar) &&
                 den_sign_definite(st.w.c[info.jhat], st.V, info.jhat) &&
                 st.work(i, info.jbar)
                     .contains(forced_pivot_range(st, i, info.jbar, st.w.b, st.Z,
                                                  st.ycol, {info.jhat})) &&
                 st.work(i, info.jhat)
                     .contains(forced_pivot_range(st, i, info.jhat, st.w.c, st.V,
                                                  st.zcol, {info.jbar}));
            break;
          case RowKind::C32:
            ok = den_sign_definite(st.w.b[info.jbar], st.Z, info.jbar) &&
                 den_sign_definite(st.w.c[info.jbar], st.V, info.jbar) &&
                 st.work(i, info.jbar)
                     .contains(forced_pivot_range(st, i, info.jbar, st.w.b, st.Z,
                                                  st.ycol, {})) &&
                 st.work(i, info.jbar)
                     .contains(forced_pivot_range(st, i, info.jbar, st.w.c, st.V,
                                                  st.zcol, {}));
            break;
          case RowKind::C33:
            ok = den_sign_definite(st.w.b[info.jbar], st.Z, info.jbar) &&
                 st.work(i, info.jbar)
                     .contains(forced_pivot_range(st, i, info.jbar, st.w.b, st.Z,
                                                  st.ycol, {}));
            break;
          case RowKind::C34:
            ok = den_sign_definite(st.w.c[info.jhat], st.V, info.jhat) &&
                 st.work(i, info.jhat)
                     .contains(forced_pivot_range(st, i, info.jhat, st.w.c, st.V,
                                                  st.zcol, {}));
            break;
          case RowKind::YbYc:
            break;
        }
      }
      if (ok) return;
    }
  }
  throw RetryNeeded{"qm2 neighbourhoods would not fit"};
}

// K_j at the exact witness coefficients, for a coupled row with pivot jbar:
//   b_j / b_jbar - c_j / c_jbar
QuadExt coupling_coefficient(const Qm2State& st, std::size_t i, std::size_t j) {
  const RowInfo& info = st.rows[i];
  return st.w.b[j] / st.w.b[info.jbar] - st.w.c[j] / st.w.c[info.jbar];
}

struct LinearExpr {
  std::vector<Rational> coeffs;
  Rational constant;
};

// One bilinear balance equation per coupled row (the right side of the
// coupled-pivot identity cleared of denominators), plus one proportionality
// equation per remaining irrational entry of that row.
struct BalanceEq {
  std::size_t i;
  bool proportion;      // true: the j-indexed proportionality form
  std::size_t j = SIZE_MAX;
};

std::vector<BalanceEq> balance_equations(const Qm2State& st) {
  std::vector<BalanceEq> out;
  for (std::size_t i : st.Wrows) {
    if (st.Gstar.count(i)) continue;  // live rows are solved directly
    out.push_back({i, false, SIZE_MAX});
    for (std::size_t j : st.rows[i].N)
      if (j != st.rows[i].jbar) out.push_back({i, true, j});
  }
  return out;
}

bool balance_has_b_unknowns(const Qm2State& st, const BalanceEq& eq) {
  const RowInfo& info = st.rows[eq.i];
  if (eq.proportion)
    return !st.w.b[eq.j].is_rational() || !st.w.b[info.jbar].is_rational();
  if (!st.w.b[info.jbar].is_rational()) return true;
  for (std::size_t j = 0; j < st.span; ++j) {
    if (std::find(info.N.begin(), info.N.end(), j) != info.N.end()) continue;
    if (!st.w.b[j].is_rational()) return true;
  }
  return false;
}

// For b~-free balance equations: the linear form in the c~ unknowns.
LinearExpr balance_as_c_linear(const Qm2State& st, const BalanceEq& eq) {
  const RowInfo& info = st.rows[eq.i];
  LinearExpr e;
  e.coeffs.assign(st.C.size(), Rational(0));
  e.constant = 0;
  auto add_c = [&](std::size_t j, const Rational& mult) {
    if (st.w.c[j].is_rational())
      e.constant += mult * st.w.c[j].as_rational();
    else
      e.coeffs[st.cpos.at(j)] += mult;
  };
  if (eq.proportion) {
    // b_j c_jbar - c_j b_jbar = 0, both b rational
    add_c(info.jbar, st.w.b[eq.j].as_rational());
    add_c(eq.j, -st.w.b[info.jbar].as_rational());
    return e;
  }
  // b_jbar (pin_z - sum_{j notin N} c_j val) + sum_{j notin N} b_j c_jbar val
  //   - c_jbar pin_y = 0, all b rational
  Rational bj = st.w.b[info.jbar].as_rational();
  e.constant += bj * st.pin(eq.i, st.zcol);
  Rational cbar_mult = -st.pin(eq.i, st.ycol);
  for (std::size_t j = 0; j < st.span; ++j) {
    if (std::find(info.N.begin(), info.N.end(), j) != info.N.end()) continue;
    Rational v = st.val(eq.i, j).as_rational();
    add_c(j, -bj * v);
    if (!st.w.b[j].is_zero()) cbar_mult += st.w.b[j].as_rational() * v;
  }
  add_c(info.jbar, cbar_mult);
  return e;
}

// Instantiation of a balance equation at fixed c~ = cc: linear form in b~.
LinearExpr balance_at_c(const Qm2State& st, const BalanceEq& eq,
                        const std::vector<Rational>& cc) {
  const RowInfo& info = st.rows[eq.i];
  LinearExpr e;
  e.coeffs.assign(st.B.size(), Rational(0));
  e.constant = 0;
  auto add_b = [&](std::size_t j, const Rational& mult) {
    if (st.w.b[j].is_rational())
      e.constant += mult * st.w.b[j].as_rational();
    else
      e.coeffs[st.bpos.at(j)] += mult;
  };
  if (eq.proportion) {
    add_b(eq.j, cc[info.jbar]);
    add_b(info.jbar, -cc[eq.j]);
    return e;
  }
  Rational t1 = st.pin(eq.i, st.zcol);
  for (std::size_t j = 0; j < st.span; ++j) {
    if (std::find(info.N.begin(), info.N.end(), j) != info.N.end()) continue;
    t1 -= cc[j] * st.val(eq.i, j).as_rational();
  }
  add_b(info.jbar, t1);
  for (std::size_t j = 0; j < st.span; ++j) {
    if (std::find(info.N.begin(), info.N.end(), j) != info.N.end()) continue;
    if (j == info.jbar) continue;
    add_b(j, cc[info.jbar] * st.val(eq.i, j).as_rational());
  }
  e.constant -= cc[info.jbar] * st.pin(eq.i, st.ycol);
  return e;
}

// exact evaluation of a balance equation at the witness coefficients
QuadExt balance_at_witness(const Qm2State& st, const BalanceEq& eq) {
  const RowInfo& info = st.rows[eq.i];
  if (eq.proportion)
    return st.w.b[eq.j] * st.w.c[info.jbar] - st.w.c[eq.j] * st.w.b[info.jbar];
  QuadExt acc = st.w.b[info.jbar] * QuadExt(st.pin(eq.i, st.zcol)) -
                st.w.c[info.jbar] * QuadExt(st.pin(eq.i, st.ycol));
  for (std::size_t j = 0; j < st.span; ++j) {
    if (std::find(info.N.begin(), info.N.end(), j) != info.N.end()) continue;
    acc += (st.w.b[j] * st.w.c[info.jbar] - st.w.c[j] * st.w.b[info.jbar]) *
           st.val(eq.i, j);
  }
  return acc;
}

}  // namespace

RealizationResult realize_rank_le_qm2(const IntervalMatrix& alpha,
                                      const ColumnDep2Witness& w, ColSpanTrace* trace) {
  const std::size_t p = alpha.rows(), q = alpha.cols();
  if (q < 3) fail(ErrorKind::WitnessInvalid, "coldep2 needs q >= 3");
  if (p < q) fail(ErrorKind::WitnessInvalid, "rank <= q-2 realization needs p >= q");
  if (w.A.rows() != p || w.A.cols() != q || w.b.size() != q - 2 || w.c.size() != q - 2)
    fail(ErrorKind::WitnessInvalid, "coldep2 shape differs from alpha");
  const std::size_t span = q - 2, ycol = q - 2, zcol = q - 1;
  // Columns with b_j = c_j = 0 are inert: they feed neither dependent column,
  // so their entries are free to round and every case below ignores them.
  for (std::size_t i = 0; i < p; ++i) {
    QuadExt accY{Rational(0)}, accZ{Rational(0)};
    for (std::size_t j = 0; j < span; ++j) {
      accY += w.b[j] * w.A(i, j);
      accZ += w.c[j] * w.A(i, j);
    }
    if (!(accY == w.A(i, ycol)) || !(accZ == w.A(i, zcol)))
      fail(ErrorKind::WitnessInvalid, "column relations do not hold exactly");
  }
  if (!contains(alpha, w.A)) fail(ErrorKind::WitnessInvalid, "witness not contained");

  IntervalMatrix work = pin_boundary_entries(alpha, w.A);

  for (int round = 0; round <= detail::kMaxRefinementRounds; ++round) {
    if (trace) {
      trace->row_cases.clear();
      trace->refinement_rounds = round;
    }
    try {
      Qm2State st{work, w, p, q, span, ycol, zcol, w.A, {}, {}, {}, {}, {},
                  {}, {}, {}, {}, {}, {}, {}, {}, {}};
      for (std::size_t j = 0; j < span; ++j) {
        if (!w.b[j].is_rational()) {
          st.bpos[j] = st.B.size();
          st.B.push_back(j);
        }
        if (!w.c[j].is_rational()) {
          st.cpos[j] = st.C.size();
          st.C.push_back(j);
        }
      }

      // free rows first: all their spanning entries become rational
      for (std::size_t i = 0; i < p; ++i) {
        if (work(i, ycol).degenerate() || work(i, zcol).degenerate()) continue;
        preprocess_free_row(st.val, work, i, span, {{&w.b, ycol}, {&w.c, zcol}}, round);
      }

      classify_rows(st);
      if (trace)
        for (std::size_t i = 0; i < p; ++i)
          trace->row_cases.emplace_back(i, row_kind_name(st.rows[i].kind));

      choose_boxes(st, round);

      // split the coupled rows by whether a live coefficient exists
      st.Gstar.clear();
      for (std::size_t i : st.Wrows) {
        for (std::size_t j : st.rows[i].N) {
          if (j == st.rows[i].jbar) continue;
          if (coupling_coefficient(st, i, j).sign() != 0) {
            st.Gstar[i] = j;
            break;
          }
        }
      }
      if (trace) {
        trace->coupled_rows = st.Wrows.size();
        trace->coupled_rows_generic = st.Gstar.size();
      }

      auto balances = balance_equations(st);
      for (const BalanceEq& eq : balances)
        internal_check(balance_at_witness(st, eq).is_zero(),
                       "balance equation fails at the witness");

      // ---- system (XN): constraints on c~ ----
      LinearSystem XN = LinearSystem::empty(st.C.size());
      for (std::size_t i : st.Nrows) {
        std::vector<Rational> coeffs(st.C.size(), Rational(0));
        Rational rhs = st.pin(i, zcol);
        for (std::size_t j = 0; j < span; ++j) {
          if (w.c[j].is_zero()) continue;
          if (w.c[j].is_rational())
            rhs -= w.c[j].as_rational() * st.val(i, j).as_rational();
          else
            coeffs[st.cpos.at(j)] += st.val(i, j).as_rational();
        }
        XN.add_equation(coeffs, rhs);
      }
      bool used_x = false;
      for (const BalanceEq& eq : balances) {
        if (balance_has_b_unknowns(st, eq)) continue;
        LinearExpr le = balance_as_c_linear(st, eq);
        bool any = false;
        for (const Rational& cf : le.coeffs)
          if (sgn(cf) != 0) any = true;
        if (!any) {
          internal_check(sgn(le.constant) == 0, "constant balance equation violated");
          continue;
        }
        XN.add_equation(le.coeffs, -le.constant);
        used_x = true;
      }
      if (trace) {
        trace->used_system_N = !st.Nrows.empty();
        trace->used_system_X = used_x;
      }

      // The c~ rounding gets a quadratically tighter box than the b~ one: the
      // solution set of the coefficient system at c~ drifts away from b at a
      // rate proportional to |c~ - c|, so an asymptotically smaller radius
      // keeps it inside the b~ boxes as the rounds progress.
      std::vector<QuadExt> cpoint;
      std::vector<RatInterval> cboxv;
      Rational tight = pow2(-(2 * round + 6));
      for (std::size_t j : st.C) {
        cpoint.push_back(w.c[j]);
        cboxv.push_back(box_around_clipped(w.c[j], tight, st.V.at(j)));
      }
      std::vector<Rational> chat = rational_solution_near(XN, cpoint, cboxv);
      st.cc.assign(span, Rational(0));
      for (std::size_t j = 0; j < span; ++j)
        st.cc[j] = w.c[j].is_rational() ? w.c[j].as_rational() : chat[st.cpos.at(j)];

      // ---- system (P_c M): constraints on b~ at the chosen c~ ----
      LinearSystem PM = LinearSystem::empty(st.B.size());
      for (std::size_t i : st.Mrows) {
        std::vector<Rational> coeffs(st.B.size(), Rational(0));
        Rational rhs = st.pin(i, ycol);
        for (std::size_t j = 0; j < span; ++j) {
          if (w.b[j].is_zero()) continue;
          if (w.b[j].is_rational())
            rhs -= w.b[j].as_rational() * st.val(i, j).as_rational();
          else
            coeffs[st.bpos.at(j)] += st.val(i, j).as_rational();
        }
        PM.add_equation(coeffs, rhs);
      }
      bool used_p = false;
      for (const BalanceEq& eq : balances) {
        LinearExpr le = balance_at_c(st, eq, st.cc);
        bool any = false;
        for (const Rational& cf : le.coeffs)
          if (sgn(cf) != 0) any = true;
        if (!any) {
          if (sgn(le.constant) != 0)
            throw RetryNeeded{"balance constant broke at the rounded c~"};
          continue;
        }
        PM.add_equation(le.coeffs, -le.constant);
        used_p = true;
      }
      if (trace) {
        trace->used_system_M = !st.Mrows.empty();
        trace->used_system_P = used_p;
      }

      // The witness b solves (M) and every balance equation at c exactly, but
      // only approximately at the rounded c~, so b~ cannot be anchored at b.
      // Instead, intersect the affine solution set of the instantiated system
      // with the b~ boxes by exact LP feasibility over the free parameters.
      std::vector<Rational> bhat(st.B.size(), Rational(0));
      if (!st.B.empty() || PM.A.rows() > 0) {
        SolveResult sol = solve(PM);
        if (!sol.feasible) throw RetryNeeded{"coefficient system infeasible at c~"};
        const std::size_t g = sol.kernel.size();
        std::vector<LinIneq> boxes;
        for (std::size_t l = 0; l < st.B.size(); ++l) {
          const RatInterval& zb = st.Z.at(st.B[l]);
          LinIneq up, down;
          up.coeffs.assign(g, Rational(0));
          down.coeffs.assign(g, Rational(0));
          for (std::size_t f = 0; f < g; ++f) {
            up.coeffs[f] = sol.kernel[f][l];
            down.coeffs[f] = -sol.kernel[f][l];
          }
          up.rel = Rel::LE;
          up.rhs = zb.hi() - sol.particular[l];
          down.rel = Rel::LE;
          down.rhs = sol.particular[l] - zb.lo();
          boxes.push_back(std::move(up));
          boxes.push_back(std::move(down));
        }
        auto mu = lp_feasible(boxes, g);
        if (!mu) throw RetryNeeded{"coefficient solution set misses the b~ boxes"};
        for (std::size_t l = 0; l < st.B.size(); ++l) {
          bhat[l] = sol.particular[l];
          for (std::size_t f = 0; f < g; ++f) bhat[l] += (*mu)[f] * sol.kernel[f][l];
        }
      }
      st.bb.assign(span, Rational(0));
      for (std::size_t j = 0; j < span; ++j)
        st.bb[j] = w.b[j].is_rational() ? w.b[j].as_rational() : bhat[st.bpos.at(j)];

      // liveness of the coupled coefficients at the rounded pair
      auto kc = [&](std::size_t i, std::size_t j) -> Rational {
        const RowInfo& info = st.rows[i];
        return Rational(st.bb[j] / st.bb[info.jbar] - st.cc[j] / st.cc[info.jbar]);
      };
      for (std::size_t i : st.Wrows) {
        const RowInfo& info = st.rows[i];
        internal_check(sgn(st.bb[info.jbar]) != 0 && sgn(st.cc[info.jbar]) != 0,
                       "coupled pivot coefficient vanished");
        auto g = st.Gstar.find(i);
        if (g != st.Gstar.end() && sgn(kc(i, g->second)) == 0)
          throw RetryNeeded{"live coupling coefficient died under rounding"};
      }

      // ---- per-row entry choices ----
      for (std::size_t i = 0; i < p; ++i) {
        RowInfo& info = st.rows[i];
        auto free_round = [&](std::size_t j) {
          st.val(i, j) = QuadExt(round_in_box(st.val(i, j), st.U.at({i, j})));
        };
        auto forced_value = [&](std::size_t piv, const std::vector<Rational>& coefv,
                                std::size_t pinned_col,
                                const std::vector<std::size_t>& exclude) -> Rational {
          Rational acc = -st.pin(i, pinned_col);
          for (std::size_t j = 0; j < span; ++j) {
            if (j == piv) continue;
            if (std::find(exclude.begin(), exclude.end(), j) != exclude.end()) continue;
            if (sgn(coefv[j]) == 0) continue;
            acc += coefv[j] * st.val(i, j).as_rational();
          }
          return Rational(-acc / coefv[piv]);
        };
        switch (info.kind) {
          case RowKind::Free:
            break;  // already rational
          case RowKind::C11: {
            for (std::size_t j : info.N)
              if (j != info.jbar) free_round(j);
            Rational forced = forced_value(info.jbar, st.bb, ycol, {});
            if (!st.U.at({i, info.jbar}).contains(forced))
              throw RetryNeeded{"pivot entry left its neighbourhood"};
            st.val(i, info.jbar) = QuadExt(forced);
            break;
          }
          case RowKind::C12:
            for (std::size_t j : info.N) free_round(j);
            break;
          case RowKind::C13:
            break;
          case RowKind::C21: {
            for (std::size_t j : info.N)
              if (j != info.jhat) free_round(j);
            Rational forced = forced_value(info.jhat, st.cc, zcol, {});
            if (!st.U.at({i, info.jhat}).contains(forced))
              throw RetryNeeded{"pivot entry left its neighbourhood"};
            st.val(i, info.jhat) = QuadExt(forced);
            break;
          }
          case RowKind::C22:
            for (std::size_t j : info.N) free_round(j);
            break;
          case RowKind::C23:
            break;
          case RowKind::C31: {
            for (std::size_t j : info.N)
              if (j != info.jbar && j != info.jhat) free_round(j);
            Rational fy = forced_value(info.jbar, st.bb, ycol, {info.jhat});
            Rational fz = forced_value(info.jhat, st.cc, zcol, {info.jbar});
            if (!work(i, info.jbar).contains(fy) || !work(i, info.jhat).contains(fz))
              throw RetryNeeded{"disjoint pivots left their cells"};
            st.val(i, info.jbar) = QuadExt(fy);
            st.val(i, info.jhat) = QuadExt(fz);
            break;
          }
          case RowKind::C32: {
            auto g = st.Gstar.find(i);
            if (g == st.Gstar.end()) {
              // all coupling coefficients vanish and the balance equations
              // zeroed the right side: any admissible rounding works
              for (std::size_t j : info.N)
                if (j != info.jbar) free_round(j);
            } else {
              std::size_t jstar = g->second;
              // solve the one-equation system for the starred entry
              Rational rhs = st.pin(i, ycol) / st.bb[info.jbar] -
                             st.pin(i, zcol) / st.cc[info.jbar];
              for (std::size_t j = 0; j < span; ++j) {
                if (std::find(info.N.begin(), info.N.end(), j) != info.N.end()) continue;
                rhs -= kc(i, j) * st.val(i, j).as_rational();
              }
              Rational acc = rhs;
              for (std::size_t j : info.N) {
                if (j == info.jbar || j == jstar) continue;
                free_round(j);
                acc -= kc(i, j) * st.val(i, j).as_rational();
              }
              Rational forced = acc / kc(i, jstar);
              if (!st.U.at({i, jstar}).contains(forced))
                throw RetryNeeded{"coupled starred entry left its neighbourhood"};
              st.val(i, jstar) = QuadExt(forced);
            }
            Rational fy = forced_value(info.jbar, st.bb, ycol, {});
            Rational fz = forced_value(info.jbar, st.cc, zcol, {});
            internal_check(fy == fz, "coupled pivot members disagree");
            if (!work(i, info.jbar).contains(fy))
              throw RetryNeeded{"coupled pivot left its cell"};
            st.val(i, info.jbar) = QuadExt(fy);
            break;
          }
          case RowKind::C33: {
            for (std::size_t j : info.N)
              if (j != info.jbar) free_round(j);
            Rational fy = forced_value(info.jbar, st.bb, ycol, {});
            if (!work(i, info.jbar).contains(fy))
              throw RetryNeeded{"pivot entry left its cell"};
            st.val(i, info.jbar) = QuadExt(fy);
            break;
          }
          case RowKind::C34: {
            for (std::size_t j : info.N)
              if (j != info.jhat) free_round(j);
            Rational fz = forced_value(info.jhat, st.cc, zcol, {});
            if (!work(i, info.jhat).contains(fz))
              throw RetryNeeded{"pivot entry left its cell"};
            st.val(i, info.jhat) = QuadExt(fz);
            break;
          }
          case RowKind::YbYc:
            for (std::size_t j : info.N) free_round(j);  // inert columns only
            break;
        }
      }

      // ---- assembly ----
      RationalMatrix H(p, q);
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < span; ++j) {
          internal_check(st.val(i, j).is_rational(), "irrational entry survived");
          H(i, j) = st.val(i, j).as_rational();
        }
        Rational accY(0), accZ(0);
        for (std::size_t j = 0; j < span; ++j) {
          accY += st.bb[j] * H(i, j);
          accZ += st.cc[j] * H(i, j);
        }
        H(i, ycol) = accY;
        H(i, zcol) = accZ;
      }
      if (!contains(work, H)) throw RetryNeeded{"assembled matrix left a cell"};
      internal_check(rank(H) <= q - 2, "dependent columns broke");
      detail::verify_realization(alpha, H, q - 2, RankMode::AtMost);
      return RealizationResult{H, q - 2, RankMode::AtMost};
    } catch (const RetryNeeded&) {
      continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoxTooTight) continue;
      throw;
    }
  }
  fail(ErrorKind::ConstructionFailed, "qm2 refinement schedule exhausted");
}

// ---------------------------------------------------------------------------
// exact rank q-1 / q-2
// ---------------------------------------------------------------------------

RealizationResult realize_rank_exact(const IntervalMatrix& alpha, const Witness& w,
                                     std::size_t r, ColSpanTrace* trace) {
  const std::size_t q = alpha.cols();
  const QuadMatrix* A = nullptr;
  if (auto* c1 = std::get_if<ColumnDep1Witness>(&w)) {
    if (r + 1 != q) fail(ErrorKind::WitnessInvalid, "coldep1 realizes rank q-1");
    A = &c1->A;
  } else if (auto* c2 = std::get_if<ColumnDep2Witness>(&w)) {
    if (r + 2 != q) fail(ErrorKind::WitnessInvalid, "coldep2 realizes rank q-2");
    A = &c2->A;
  } else {
    fail(ErrorKind::WitnessInvalid, "exact-rank realization needs a column witness");
  }
  if (rank(*A) != r)
    fail(ErrorKind::WitnessInvalid,
         "witness rank is not exactly " + std::to_string(r));
  if (!contains(alpha, *A)) fail(ErrorKind::WitnessInvalid, "witness not contained");

  // a nonsingular r x r minor of the witness, kept sign-definite over a
  // shrunken sub-interval-matrix: every contained matrix then has rank >= r
  Echelon<QuadExt> e = field_echelon(*A);
  std::vector<std::size_t> rows = e.pivot_rows;
  std::sort(rows.begin(), rows.end());
  IntervalMatrix sub = shrink_to_sign_definite(alpha, *A, rows, e.pivot_cols);

  RealizationResult inner;
  if (auto* c1 = std::get_if<ColumnDep1Witness>(&w))
    inner = realize_rank_le_qm1(sub, *c1, trace);
  else
    inner = realize_rank_le_qm2(sub, *std::get_if<ColumnDep2Witness>(&w), trace);

  RealizationResult res{inner.matrix, r, RankMode::Exact};
  detail::verify_realization(alpha, res.matrix, r, RankMode::Exact);
  return res;
}

}  // namespace intrank
