#pragma once

#include <string>

#include "intrank/matrix.hpp"
#include "intrank/realize.hpp"

namespace intrank {

// Interval matrix file:
//   line 1: "p q"
//   then p lines of q whitespace-separated interval tokens "lo:hi",
//   rationals written "n/d" (denominator omitted when 1).
std::string format_interval_matrix(const IntervalMatrix& m);
IntervalMatrix parse_interval_matrix(const std::string& text);

// Witness file:
//   line 1: "field sqrt d"       (d = 0 for a purely rational witness)
//   line 2: kind: dyad1 | dyad2 | matrix | coldep1 | coldep2
//   line 3: "p q"
//   payload: QuadExt tokens "a+b*sqrt(d)" row by row; dyad kinds list their
//   vectors one per line (a, [b,] c, [d]); coldep kinds list the p x q
//   matrix then the coefficient vector(s).
std::string format_witness(const Witness& w, std::size_t p, std::size_t q);
Witness parse_witness(const std::string& text);

std::size_t witness_rows(const Witness& w);
std::size_t witness_cols(const Witness& w);

std::string format_rational_matrix(const RationalMatrix& m);

// FNV-1a 64-bit content digest, hex encoded; used for report provenance.
std::string digest_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace intrank
