#pragma once

#include <memory>

#include "kernel/Literal.hpp"

namespace peregrine {

enum class Rule : uint8_t {
  Input,
  NegateConjecture,
  Cnf,
  TheoryAxiom,
  Resolution,
  Factoring,
  Superposition,
  EqualityResolution,
  EqualityFactoring,
  BoolInstantiation,
  AlascaNormalization,
  AlascaSuperposition,
  TheoryInstantiation,
  Generalization,
  StructuralInduction,
  ForwardDemodulation,
  BackwardDemodulation,
  SubsumptionResolution,
  AvatarSplit,
  AvatarRefutation,
};

/**
 * How a clause came to be. Parents are clause ids, except for Cnf and
 * NegateConjecture steps, whose single parent is an input formula index.
 * `info` is free-form text shown to humans (for induction it names the
 * schema instance); replay never relies on it.
 */
struct Derivation {
  Rule rule = Rule::Input;
  std::vector<unsigned> parents;
  std::string info;
};

/**
 * Immutable clause. Variables are renumbered to 0,1,... in first-occurrence
 * order at creation, so alpha-equivalent clauses built in the same literal
 * order are structurally identical. The assertion set lists the AVATAR
 * propositional names this clause is conditional on.
 */
class Clause {
public:
  const std::vector<Literal>& literals() const { return _lits; }
  bool empty() const { return _lits.empty(); }
  size_t size() const { return _lits.size(); }
  const Literal& operator[](size_t i) const { return _lits[i]; }

  unsigned id() const { return _id; }
  unsigned age() const { return _age; }
  unsigned weight() const { return _weight; }
  const Derivation& derivation() const { return _deriv; }
  const std::vector<int>& assertions() const { return _assertions; }
  bool goalLineage() const { return _goalLineage; }
  bool ground() const { return _ground; }

  void collectVars(std::map<unsigned, TermPtr>& out) const;
  /** 1 + the largest variable id, or 0 if ground. */
  unsigned varBound() const;

  std::string describe() const;

protected:
  Clause() = default;

private:
  friend class ClauseRegistry;

  std::vector<Literal> _lits;
  unsigned _id = 0;
  unsigned _age = 0;
  unsigned _weight = 0;
  bool _goalLineage = false;
  bool _ground = true;
  Derivation _deriv;
  std::vector<int> _assertions;
};

using ClausePtr = std::shared_ptr<const Clause>;

/**
 * Owns every clause an attempt ever creates, including intermediate
 * simplification results, so proofs can cite any ancestor. Also the
 * bookkeeper for the crude memory estimate behind the -m limit.
 */
class ClauseRegistry {
public:
  /**
   * Creates a clause: deduplicates literals (multiset semantics are kept
   * by the inference rules themselves; exact duplicates are merged),
   * renumbers variables canonically, computes age/assertions/lineage
   * from the parents where applicable.
   */
  ClausePtr make(std::vector<Literal> lits, Derivation deriv);

  /** As make(), but with explicit attributes (input clauses, components). */
  ClausePtr makeExplicit(std::vector<Literal> lits, Derivation deriv, unsigned age,
                         std::vector<int> assertions, bool goalLineage);

  const ClausePtr& operator[](unsigned id) const {
    PER_ASSERT(id < _all.size());
    return _all[id];
  }
  unsigned size() const { return static_cast<unsigned>(_all.size()); }

  size_t approxBytes() const { return _approxBytes; }

  /** Normalizes a literal list without registering a clause. */
  static std::vector<Literal> normalizeLiterals(std::vector<Literal> lits);

private:
  std::vector<ClausePtr> _all;
  size_t _approxBytes = 0;
};

} // namespace peregrine
