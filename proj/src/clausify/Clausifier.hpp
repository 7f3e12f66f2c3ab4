#pragma once

#include "kernel/Clause.hpp"
#include "parse/Problem.hpp"

namespace peregrine {

/** Which existential quantifier a skolem symbol stands for. */
struct SkolemEntry {
  SymbolId symbol;
  /** Input formula the quantifier came from. */
  unsigned formulaIndex;
  /** The existential variable replaced, with its declared sort. */
  unsigned varId;
  TermPtr varSort;
};

/**
 * Clause normal form of a problem. Clauses live in the attempt-wide
 * registry; their derivations cite input formula indexes, so the
 * derivation graph is acyclic by construction. The skolem table keeps,
 * in introduction order, which quantifier each skolem symbol replaced;
 * proof printing and the induction rule both read it.
 */
struct ClauseSet {
  std::vector<ClausePtr> clauses;
  std::vector<SkolemEntry> skolems;
};

struct ClausifyOptions {
  /**
   * Distribution multiplies clause counts; a subformula whose count
   * exceeds this factor is named by a fresh predicate instead.
   */
  size_t namingFactor = 4;
};

/**
 * Removes FOOL constructs from a formula. Let bindings are inlined,
 * term-level if-then-else gets a fresh function symbol defined by two
 * guarded equations (conjoined onto the result), and Boolean subterms
 * in argument positions are lifted to formula level. Boolean variables
 * stay behind in v = $true and v = w atoms, which the saturation level
 * handles by instantiation. The result satisfies !hasFool().
 */
FormulaPtr eliminateFool(const FormulaPtr& f, Signature& sig);

/**
 * Clause normal form transformation: FOOL elimination, negation normal
 * form, miniscoping, Skolemization, distribution with subformula
 * naming, then per-literal arithmetic canonicalization and tautology
 * removal. Expects the conjecture to have been negated already.
 */
ClauseSet clausify(Problem& p, const ClausifyOptions& opts, ClauseRegistry& registry);

/**
 * Blocked clause elimination. A literal is blocked when every resolvent
 * on it with the rest of the set (including a renamed copy of its own
 * clause) is a tautology; clauses with a blocked literal are deleted
 * until none is left. Restricted to sets free of equality and
 * arithmetic literals, where the redundancy argument needs no theory
 * reasoning; any other set passes through unchanged.
 */
ClauseSet blockedClauseElimination(const ClauseSet& cs);

/**
 * Pure-predicate deletion: a clause using a predicate that occurs in
 * one polarity only can never take part in a refutation, so it is
 * dropped, repeatedly until the polarity census is clean.
 */
ClauseSet trimUnused(const ClauseSet& cs);

} // namespace peregrine
