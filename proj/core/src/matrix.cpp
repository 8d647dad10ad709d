#include "intrank/matrix.hpp"

namespace intrank {

bool IntervalMatrix::subset_of(const IntervalMatrix& outer) const {
  if (rows() != outer.rows() || cols() != outer.cols())
    fail(ErrorKind::DimensionMismatch, "interval matrix containment");
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (!outer(i, j).contains((*this)(i, j))) return false;
  return true;
}

MidRadMod mid_rad_mod(const IntervalMatrix& m) {
  MidRadMod out{RationalMatrix(m.rows(), m.cols()), RationalMatrix(m.rows(), m.cols()),
                RationalMatrix(m.rows(), m.cols())};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const RatInterval& e = m(i, j);
      out.mid(i, j) = (e.lo() + e.hi()) / 2;
      out.rad(i, j) = (e.hi() - e.lo()) / 2;
      out.mod(i, j) = rat_max(rat_abs(e.lo()), rat_abs(e.hi()));
    }
  }
  return out;
}

bool contains(const IntervalMatrix& m, const RationalMatrix& A) {
  if (m.rows() != A.rows() || m.cols() != A.cols())
    fail(ErrorKind::DimensionMismatch, "contains: shapes differ");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).contains(A(i, j))) return false;
  return true;
}

bool contains(const IntervalMatrix& m, const QuadMatrix& A) {
  if (m.rows() != A.rows() || m.cols() != A.cols())
    fail(ErrorKind::DimensionMismatch, "contains: shapes differ");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).contains(A(i, j))) return false;
  return true;
}

}  // namespace intrank
