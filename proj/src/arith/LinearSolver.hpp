#pragma once

#include <map>
#include <optional>
#include <vector>

#include "arith/ArithLiteral.hpp"

namespace peregrine {

/** One row, read as 0 rel (constant + sum of coeff*var). */
struct LinearConstraint {
  ArithRel rel;
  std::map<unsigned, Rational> coeffs;
  Rational constant;
};

/**
 * Satisfiability of a conjunction of linear constraints by Fourier-Motzkin
 * elimination; disequations case-split, equations turn into two
 * inequalities. Over the integers the relaxation is tightened and
 * fractional picks are repaired by bounded branch-and-bound. Returns a
 * model (picking values of least absolute value, positive on ties, with
 * midpoints for open rational intervals) or nullopt when unsatisfiable.
 *
 * The branch-and-bound budget makes the integer case incomplete in
 * principle; a blown budget reports unsatisfiable, which callers use
 * only to skip an instantiation. Intended for small systems (up to
 * around 8 variables).
 */
std::optional<std::map<unsigned, Rational>> solveLinear(
    const std::vector<LinearConstraint>& constraints, bool integer);

} // namespace peregrine
