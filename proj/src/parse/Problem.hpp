#pragma once

#include <stdexcept>

#include "parse/Formula.hpp"

namespace peregrine {

/** Input rejected for structure: bad tokens, unbalanced syntax. */
struct ParseError : std::runtime_error {
  ParseError(const std::string& where, int line, int col, const std::string& what)
      : std::runtime_error(where + ":" + std::to_string(line) + ":" + std::to_string(col) +
                           ": " + what) {}
};

/** Input parsed but ill-sorted or ill-formed at the logical level. */
struct SortError : std::runtime_error {
  explicit SortError(const std::string& what) : std::runtime_error(what) {}
};

/** Constructs outside the supported fragment, reported distinctly. */
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

enum class FormulaRole : uint8_t { Axiom, Hypothesis, Conjecture, NegatedConjecture };

struct InputFormula {
  std::string name;
  FormulaRole role = FormulaRole::Axiom;
  FormulaPtr formula;
  /** Generated during parsing (selector definitions), not user input. */
  bool introduced = false;
};

struct Problem {
  Signature sig;
  std::vector<InputFormula> formulas;
  bool fromSmtlib = false;
  bool conjectureWasNegated = false;

  /** Index of the (possibly negated) conjecture, or -1. */
  long conjectureIndex() const;
};

/**
 * Replaces the conjecture by its negation with role negated_conjecture
 * and records that the negation happened, which decides between the
 * Theorem/CounterSatisfiable and Unsatisfiable/Satisfiable verdict pairs.
 * No-op without a conjecture.
 */
void negateConjecture(Problem& p);

/**
 * Post-parse validation: at most one conjecture (none for SMT-LIB input),
 * sort quantifiers only as outermost prefixes, no unbound variables,
 * variables used at consistent sorts, and every application well-sorted
 * against its declaration. Throws SortError.
 */
void validateProblem(const Problem& p);

} // namespace peregrine
