#pragma once

#include <optional>

#include "kernel/Clause.hpp"

namespace peregrine {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Connective : uint8_t {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
  SortForall,
};

/**
 * Immutable formula tree. Atoms carry a Literal of either polarity (a
 * negative literal comes from != and stays distinct from an explicit ~).
 * Quantifiers bind one variable each; sort quantification (rank-1) uses
 * SortForall and is only legal as an outermost prefix, which the problem
 * validator enforces.
 */
class Formula {
public:
  Connective kind() const { return _kind; }
  bool is(Connective c) const { return _kind == c; }

  const Literal& atom() const {
    PER_ASSERT(_kind == Connective::Atom);
    return *_atom;
  }
  const std::vector<FormulaPtr>& subs() const { return _subs; }
  const FormulaPtr& sub(size_t i) const {
    PER_ASSERT(i < _subs.size());
    return _subs[i];
  }

  bool isQuantifier() const {
    return _kind == Connective::Forall || _kind == Connective::Exists ||
           _kind == Connective::SortForall;
  }
  unsigned boundVar() const {
    PER_ASSERT(isQuantifier());
    return _boundVar;
  }
  /** The bound variable's sort; tType for SortForall. */
  const TermPtr& boundSort() const {
    PER_ASSERT(isQuantifier());
    return _boundSort;
  }
  const FormulaPtr& body() const {
    PER_ASSERT(isQuantifier());
    return _subs[0];
  }

  static FormulaPtr mkAtom(Literal l);
  static FormulaPtr mkTruth(bool b);
  static FormulaPtr mkNot(FormulaPtr f);
  /** And/Or. A single operand returns it unwrapped. */
  static FormulaPtr mkJunction(Connective c, std::vector<FormulaPtr> subs);
  static FormulaPtr mkBinary(Connective c, FormulaPtr a, FormulaPtr b);
  static FormulaPtr mkQuant(Connective q, unsigned var, TermPtr sort, FormulaPtr body);

  void collectFreeVars(std::map<unsigned, TermPtr>& out) const;
  bool hasFool() const;

  /** Alpha-equivalence; symbol ids and structure must agree exactly. */
  static bool alphaEqual(const FormulaPtr& a, const FormulaPtr& b);

protected:
  Formula() = default;

private:
  Connective _kind = Connective::True;
  std::optional<Literal> _atom;
  std::vector<FormulaPtr> _subs;
  unsigned _boundVar = 0;
  TermPtr _boundSort;
};

/**
 * Turns a Boolean-sorted term into the formula it encodes, unfolding the
 * scaffolding connective symbols; a plain term t becomes the atom
 * t = $true.
 */
FormulaPtr boolTermToFormula(const TermPtr& t, const Signature& sig);

/**
 * Inverse embedding for formulas appearing inside terms. Quantified
 * formulas are not embeddable; callers reject them upstream.
 */
TermPtr formulaToBoolTerm(const FormulaPtr& f, const Signature& sig);

} // namespace peregrine
