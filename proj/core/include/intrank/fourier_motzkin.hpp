#pragma once

#include <optional>
#include <vector>

#include "intrank/rational.hpp"

namespace intrank {

enum class Rel { LE, GE, EQ };

// Linear constraint  coeffs . x  (rel)  rhs  over Q.
struct LinIneq {
  std::vector<Rational> coeffs;
  Rel rel = Rel::LE;
  Rational rhs = Rational(0);
};

// Exact feasibility by Fourier-Motzkin elimination.  Returns a rational
// witness point when the system is feasible, std::nullopt otherwise.
std::optional<std::vector<Rational>> lp_feasible(const std::vector<LinIneq>& system,
                                                 std::size_t nvars);

}  // namespace intrank
