#pragma once

#include "kernel/Substitution.hpp"

namespace peregrine {

/**
 * A literal: predicate application or equality, with a polarity.
 * Equality literals are symmetric: equals() and hash() ignore the side
 * order. Arithmetic atoms ($less, $lesseq, equality over $real/$int) are
 * ordinary literals here; their polynomial view lives in arith/.
 */
class Literal {
public:
  static Literal mkPred(const Signature& sig, SymbolId p, std::vector<TermPtr> sortArgs,
                        std::vector<TermPtr> args, bool positive);
  static Literal mkEq(TermPtr lhs, TermPtr rhs, bool positive);

  bool positive() const { return _positive; }
  bool isEquality() const { return _eq; }
  SymbolId predicate() const { PER_ASSERT(!_eq); return _pred; }

  const TermPtr& lhs() const { PER_ASSERT(_eq); return _args[0]; }
  const TermPtr& rhs() const { PER_ASSERT(_eq); return _args[1]; }
  const TermPtr& eqSort() const { PER_ASSERT(_eq); return _sortArgs[0]; }

  const std::vector<TermPtr>& args() const { return _args; }
  const std::vector<TermPtr>& sortArgs() const { return _sortArgs; }

  unsigned weight() const { return _weight; }
  size_t hash() const { return _hash; }
  bool ground() const { return _ground; }

  Literal negated() const {
    Literal l = *this;
    l._positive = !_positive;
    return l;
  }

  Literal apply(const Substitution& s) const;

  bool equals(const Literal& o) const { return _positive == o._positive && sameAtom(o); }
  bool sameAtom(const Literal& o) const;
  bool complementary(const Literal& o) const { return _positive != o._positive && sameAtom(o); }

  /** Trivial truths/falsehoods: s = s and s != s. */
  bool isReflexivity() const { return _eq && Term::equal(lhs(), rhs()); }

  void collectVars(std::map<unsigned, TermPtr>& out) const;
  bool hasFool() const;

  /** The atom as a $o-sorted term; equalities are not representable. */
  TermPtr atomTerm(const Signature& sig) const;

  /** True when the atom belongs to linear arithmetic. */
  bool isArithmetic() const;
  /** For arithmetic literals: whether over $int (else $real). */
  bool arithIsInt() const;

  /** Orientation-insensitive total order, consistent with equals(). */
  static int cmp(const Literal& a, const Literal& b);

private:
  Literal() = default;
  void finalize();

  bool _positive = true;
  bool _eq = false;
  bool _ground = false;
  SymbolId _pred = 0;
  std::vector<TermPtr> _sortArgs;
  std::vector<TermPtr> _args;
  unsigned _weight = 1;
  size_t _hash = 0;
};

/**
 * Matching on literals for subsumption: extends `seed` so that
 * sigma(pattern) == target. Equality patterns try both orientations;
 * wantComplement matches against the target's complement instead.
 * Returns every successful extension (both orientations can work).
 */
std::vector<Substitution> matchLiteral(const Literal& pattern, const Literal& target,
                                       const Substitution& seed, bool wantComplement);

/** Unifiers making the two atoms equal; equalities try both orientations. */
std::vector<Substitution> unifyAtoms(const Literal& a, const Literal& b);

} // namespace peregrine
