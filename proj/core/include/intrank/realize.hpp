#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "intrank/linalg.hpp"
#include "intrank/matrix.hpp"

namespace intrank {

// --------------------------------------------------------------------------
// Witness payloads.  The realization theorems are conditional, so every
// operation takes the certifying real matrix (or decomposition) as input;
// instance generation lives in instance.hpp.
// --------------------------------------------------------------------------

// rank-2 witness: r_ij = a_i c_j + b_i d_j, with (c_j, d_j) != (0,0) per j.
struct Rank2Witness {
  std::vector<QuadExt> a, b;  // length p
  std::vector<QuadExt> c, d;  // length q

  QuadMatrix matrix() const;
};

// rank-1 witness: r_ij = a_i c_j.
struct Rank1Witness {
  std::vector<QuadExt> a;  // length p
  std::vector<QuadExt> c;  // length q

  QuadMatrix matrix() const;
};

// Last column is the given combination of the first q-1 columns.
struct ColumnDep1Witness {
  QuadMatrix A;
  std::vector<QuadExt> c;  // length q-1
};

// Last two columns are combinations of the first q-2 columns; per column j
// at least one of b_j, c_j is nonzero.
struct ColumnDep2Witness {
  QuadMatrix A;
  std::vector<QuadExt> b, c;  // length q-2
};

struct FullRankWitness {
  QuadMatrix A;
};

using Witness = std::variant<std::monostate, Rank1Witness, Rank2Witness,
                             ColumnDep1Witness, ColumnDep2Witness, FullRankWitness>;

enum class RankMode { Exact, AtMost };

struct RealizationResult {
  RationalMatrix matrix;
  std::size_t target_rank = 0;
  RankMode mode = RankMode::Exact;
};

// NoWitness is a verdict, not an exception.
struct NoWitness {
  std::string reason;
};

using Realized = std::variant<RealizationResult, NoWitness>;

// --------------------------------------------------------------------------
// Construction traces.  Tests assert which proof branches an instance drove;
// nothing here affects the produced matrix.
// --------------------------------------------------------------------------

struct Rank2Trace {
  bool system_rank_positive = false;  // rank of the degenerate-cell system >= 1
  bool fixup_used = false;
  // per pinned row: "single", "case1", "case2.1", "case2.2"
  std::vector<std::pair<std::size_t, std::string>> row_cases;
  int refinement_rounds = 0;
};

struct ColSpanTrace {
  // per row: "case0", "case1.1", ..., "case3.4", "ybyc"
  std::vector<std::pair<std::size_t, std::string>> row_cases;
  bool used_system_M = false;
  bool used_system_N = false;
  bool used_system_P = false;
  bool used_system_X = false;
  std::size_t coupled_rows = 0;          // rows of the doubly-pinned coupled kind
  std::size_t coupled_rows_generic = 0;  // of those, rows with a live coefficient
  int refinement_rounds = 0;
};

// --------------------------------------------------------------------------
// Operations
// --------------------------------------------------------------------------

// rank 0: the zero matrix, possible iff every entry contains 0.
Realized realize_rank0(const IntervalMatrix& alpha);

// rank q (Remark: trivial case): rational full-rank matrix near the witness.
RealizationResult realize_full_rank(const IntervalMatrix& alpha,
                                    const FullRankWitness& w);

// exact rank 1 from a dyad witness.
RealizationResult realize_rank1(const IntervalMatrix& alpha, const Rank1Witness& w);

// exact rank 2 from a two-dyad witness (p >= q).
RealizationResult realize_rank2(const IntervalMatrix& alpha, const Rank2Witness& w,
                                Rank2Trace* trace = nullptr);

// rank <= q-1 from a single column dependence.
RealizationResult realize_rank_le_qm1(const IntervalMatrix& alpha,
                                      const ColumnDep1Witness& w,
                                      ColSpanTrace* trace = nullptr);

// rank <= q-2 from a double column dependence (p >= q).
RealizationResult realize_rank_le_qm2(const IntervalMatrix& alpha,
                                      const ColumnDep2Witness& w,
                                      ColSpanTrace* trace = nullptr);

// exact rank r in {q-1, q-2}: shrink a rational sub-interval-matrix around
// the witness on which some r x r minor keeps a strict sign, then run the
// at-most construction inside it.
RealizationResult realize_rank_exact(const IntervalMatrix& alpha, const Witness& w,
                                     std::size_t r, ColSpanTrace* trace = nullptr);

// Top-level dispatcher over r in {0, 1, 2, q-2, q-1, q}; UnsupportedRank for
// any other r (rational realization is not guaranteed there: known 12x12
// rank-3 sign-pattern counterexamples).
Realized realize(const IntervalMatrix& alpha, const Witness& w, std::size_t r,
                 RankMode mode = RankMode::Exact);

// Message attached to UnsupportedRank errors and reports.
std::string unsupported_rank_note(std::size_t r, std::size_t q);

// --------------------------------------------------------------------------
// Shared helpers (exposed for the shrink-correctness tests)
// --------------------------------------------------------------------------

// Conservative enclosure of det over an interval box via Laplace expansion;
// if the result excludes zero, every real matrix in the box is nonsingular.
RatInterval interval_det(const Mat<RatInterval>& box);

// Tightens alpha toward the witness until the selected r x r submatrix has
// sign-definite determinant over the whole sub-box.  Returns the shrunken
// interval matrix (contains the witness, subset of alpha).
IntervalMatrix shrink_to_sign_definite(const IntervalMatrix& alpha, const QuadMatrix& A,
                                       const std::vector<std::size_t>& rows,
                                       const std::vector<std::size_t>& cols);

// Entries of `A` that sit exactly on an endpoint of a nondegenerate interval
// are pinned to that endpoint (only rational values can do this).  Keeps the
// neighbourhood machinery interior everywhere it applies.
IntervalMatrix pin_boundary_entries(const IntervalMatrix& alpha, const QuadMatrix& A);

}  // namespace intrank
