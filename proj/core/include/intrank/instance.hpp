#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intrank/realize.hpp"

namespace intrank {

// Recipe for a planted (witness, interval matrix) pair.  Degenerate cells are
// only ever pinned where the planted value is rational, because a degenerate
// rational-endpoint interval can hold nothing else.
struct InstanceSpec {
  std::size_t p = 3, q = 3;
  std::string rank_class = "2";  // "0" | "1" | "2" | "q-2" | "q-1" | "q"
  std::int64_t d = 2;            // positive square-free radicand
  Rational enclosure_radius = Rational(1, 10);
  Rational degenerate_fraction = Rational(0);
  // proof-branch tags, e.g. "thm8-case2.2", "thm9-case3.1"; when nonempty the
  // construction takes over dimensions and the degenerate mask
  std::vector<std::string> case_targets;
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  Witness witness;
  IntervalMatrix alpha;
  std::size_t target_rank = 0;
};

PlantedInstance plant(const InstanceSpec& spec);

// Upper bound on the minimum rank over the box: min over sampled rational
// matrices, plus every vertex matrix when 2^(p*q) fits in the budget.
std::size_t minrank_upper_oracle(const IntervalMatrix& alpha, std::size_t budget);

// Re-derives every certificate property through independent code paths
// (field elimination instead of fraction-free, entrywise comparisons).
struct CertReport {
  bool contained = false;
  bool degenerate_exact = false;
  std::size_t computed_rank = 0;
  bool rank_ok = false;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

CertReport check_certificate(const IntervalMatrix& alpha, const RealizationResult& result);

// Deterministic split-mix generator; all sampling in the lab flows through
// this (std:: distributions are not pinned across platforms).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);
  long range(long lo, long hi);  // inclusive
  bool coin() { return below(2) == 1; }
  Rational rational(long max_num = 4, long max_den = 4);
  Rational rational_nonzero(long max_num = 4, long max_den = 4);
  QuadExt irrational(std::int64_t d, long max_num = 4, long max_den = 4);
  QuadExt mixed(std::int64_t d);  // rational or irrational, fair coin

 private:
  std::uint64_t state_;
};

}  // namespace intrank
