#pragma once

#include "kernel/Kbo.hpp"
#include "kernel/Substitution.hpp"

namespace peregrine {

/**
 * Linear combination of atoms plus a constant, the flattened view of an
 * arithmetic term. Atoms are maximal non-arithmetic subterms (variables,
 * uninterpreted applications, nonlinear products); the map never holds a
 * zero coefficient. Keyed by the structural term order, so every
 * operation is deterministic.
 */
class Polynomial {
public:
  static Polynomial fromTerm(const TermPtr& t);
  static Polynomial constant(Rational c, bool integer);
  static Polynomial atom(TermPtr t);

  bool intSorted() const { return _int; }
  const std::map<TermPtr, Rational, TermPtrLess>& entries() const { return _entries; }
  const Rational& constantPart() const { return _const; }

  Rational coeffOf(const TermPtr& atom) const;

  Polynomial plus(const Polynomial& o) const;
  Polynomial minus(const Polynomial& o) const;
  Polynomial scaled(const Rational& k) const;
  Polynomial negated() const { return scaled(Rational(-1)); }

  bool isConstant() const { return _entries.empty(); }
  bool isZero() const { return _entries.empty() && _const == 0; }
  /** Exactly one atom with coefficient 1 and no constant. */
  bool isPlainAtom() const;

  /**
   * Canonical term: parts ordered by weight descending then structural
   * order, constant last, sums left-associated. Coefficient 1 renders the
   * bare atom, -1 wraps in unary minus, anything else multiplies by a
   * numeral on the left.
   */
  TermPtr render(const Signature& sig) const;

  /** Replaces one atom by a whole polynomial, recollecting coefficients. */
  Polynomial substituteAtom(const TermPtr& atom, const Polynomial& repl) const;

  /** Applies a substitution to every atom and reflattens. */
  Polynomial applySubst(const Substitution& s) const;

  /** KBO-maximal atom; ties broken by structural order. Requires entries. */
  TermPtr leadingAtom(const Kbo& kbo) const;
  /** True when the given atom is strictly KBO-greater than all others. */
  bool atomStrictlyMaximal(const Kbo& kbo, const TermPtr& atom) const;

  /**
   * Scales so all coefficients and the constant become coprime integers;
   * the overall sign is preserved. No-op on the zero polynomial.
   */
  Polynomial scaledToIntegers() const;

private:
  explicit Polynomial(bool integer) : _int(integer) {}
  void addEntry(const TermPtr& atom, const Rational& c);
  void collect(const TermPtr& t, const Rational& coeff);

  std::map<TermPtr, Rational, TermPtrLess> _entries;
  Rational _const = 0;
  bool _int = false;
};

} // namespace peregrine
