#pragma once

#include "parse/Problem.hpp"

namespace peregrine {

class Clause;

enum class Dialect : uint8_t {
  /** Typed first-order syntax that parseTptpString reads back. */
  Tptp,
  /** S-expressions that parseSmtlibString reads back. */
  Smtlib,
  /** Infix arithmetic, for proofs and logs; not meant to be re-parsed. */
  Human,
};

std::string printTerm(const Signature& sig, const TermPtr& t, Dialect d);
std::string printLiteral(const Signature& sig, const Literal& l, Dialect d);
std::string printFormula(const Signature& sig, const FormulaPtr& f, Dialect d);

/** The clause body only: literals joined by '|', no name or annotations. */
std::string printClause(const Signature& sig, const Clause& c, Dialect d);

/**
 * Whole problem, with type declarations, datatype declarations and
 * formulas. TPTP and SMT-LIB output re-parses to an alpha-equivalent
 * problem; SMT-LIB output skips introduced helper formulas and renders a
 * conjecture as its negation under assert.
 */
std::string printProblem(const Problem& p, Dialect d);

} // namespace peregrine
