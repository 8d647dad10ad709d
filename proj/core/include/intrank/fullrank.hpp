#pragma once

#include <optional>
#include <vector>

#include "intrank/fourier_motzkin.hpp"
#include "intrank/matrix.hpp"

namespace intrank {

// Entries in {-1, +1}.  Enumeration is binary counting: bit j of the counter
// set means +1 at position j, clear means -1, so the all-minus vector comes
// first and violators are reported lexicographically smallest in that order.
using SignVector = std::vector<int>;

SignVector sign_vector_from_counter(unsigned long long t, std::size_t n);

struct SquareCertificate {
  SignVector x, y;        // violating sign pair
  Rational det_mid;       // det(mid)
  Rational det_perturbed; // det(mid - T_x rad T_y) for that pair
};

struct OrthantCertificate {
  SignVector orthant;
  std::vector<Rational> witness;  // nonzero x with |mid x| <= rad |x|
};

struct FullRankVerdict {
  bool full_rank = false;
  std::optional<SquareCertificate> square_violation;
  std::optional<OrthantCertificate> orthant_violation;
};

// Square test: full rank iff det(mid) * det(mid - T_x rad T_y) > 0 for all
// sign pairs (x, y).  4^p determinant pairs; intended for p <= 8.
FullRankVerdict square_full_rank(const IntervalMatrix& m);

// Rectangular test (p >= q): full rank iff |mid x| <= rad |x| only for x = 0.
// Decided per sign orthant with the normalization sum_j s_j x_j = 1, which is
// lossless by scale invariance; each orthant is an exact LP feasibility call.
FullRankVerdict rect_full_rank(const IntervalMatrix& m);

// Brute force over all vertex matrices: the determinant is affine in each
// entry, so its range over the box is spanned by vertex values.  p*p <= 16.
bool regularity_oracle(const IntervalMatrix& m);

}  // namespace intrank
