#include "arith/ArithLiteral.hpp"

namespace peregrine {

std::optional<ArithView> ArithView::of(const Literal& lit) {
  if (!lit.isArithmetic()) {
    return std::nullopt;
  }
  if (lit.isEquality()) {
    Polynomial p = Polynomial::fromTerm(lit.rhs()).minus(Polynomial::fromTerm(lit.lhs()));
    return ArithView{lit.positive() ? ArithRel::Eq : ArithRel::Neq, std::move(p)};
  }
  Polynomial a = Polynomial::fromTerm(lit.args()[0]);
  Polynomial b = Polynomial::fromTerm(lit.args()[1]);
  bool isLess = lit.predicate() == SYM_LESS_R || lit.predicate() == SYM_LESS_I;
  if (isLess) {
    // a < b is 0 > a-b; negated it is a >= b, i.e. 0 >= b-a.
    if (lit.positive()) {
      return ArithView{ArithRel::Greater, a.minus(b)};
    }
    return ArithView{ArithRel::Geq, b.minus(a)};
  }
  // a <= b is 0 >= a-b; negated it is a > b, i.e. 0 > b-a.
  if (lit.positive()) {
    return ArithView{ArithRel::Geq, a.minus(b)};
  }
  return ArithView{ArithRel::Greater, b.minus(a)};
}

TermPtr canonicalizeTerm(const TermPtr& t, const Signature& sig) {
  if (t->isVar() || t->isNum()) {
    return t;
  }
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  bool changed = false;
  for (auto& a : t->args()) {
    args.push_back(canonicalizeTerm(a, sig));
    changed = changed || args.back().get() != a.get();
  }
  TermPtr cur = changed ? Term::rebuild(t, t->sort(), t->sortArgs(), std::move(args)) : t;
  const TermPtr& s = cur->sort();
  if (s.get() == Term::realSort().get() || s.get() == Term::intSort().get()) {
    TermPtr rendered = Polynomial::fromTerm(cur).render(sig);
    if (!Term::equal(rendered, cur)) {
      return rendered;
    }
  }
  return cur;
}

namespace {

Literal buildCanonical(ArithRel rel, const Polynomial& poly, const Signature& sig) {
  bool integer = poly.intSorted();
  TermPtr zero = Term::zero(integer);
  TermPtr p = poly.render(sig);
  switch (rel) {
    case ArithRel::Eq:
      return Literal::mkEq(zero, p, true);
    case ArithRel::Neq:
      return Literal::mkEq(zero, p, false);
    case ArithRel::Greater:
      return Literal::mkPred(sig, Signature::lessFor(integer), {}, {p, zero}, true);
    case ArithRel::Geq:
      return Literal::mkPred(sig, Signature::leqFor(integer), {}, {p, zero}, true);
  }
  PER_ASSERT(false);
  return Literal::mkEq(zero, zero, true);
}

} // namespace

bool literalIdentical(const Literal& a, const Literal& b) {
  if (a.positive() != b.positive() || a.isEquality() != b.isEquality()) {
    return false;
  }
  if (!a.isEquality() && a.predicate() != b.predicate()) {
    return false;
  }
  if (a.sortArgs().size() != b.sortArgs().size() || a.args().size() != b.args().size()) {
    return false;
  }
  for (size_t i = 0; i < a.sortArgs().size(); ++i) {
    if (!Term::equal(a.sortArgs()[i], b.sortArgs()[i])) {
      return false;
    }
  }
  for (size_t i = 0; i < a.args().size(); ++i) {
    if (!Term::equal(a.args()[i], b.args()[i])) {
      return false;
    }
  }
  return true;
}

NormalizeOutcome normalizeLiteral(const Literal& lit, const Signature& sig, const Kbo& kbo) {
  auto view = ArithView::of(lit);
  if (!view) {
    // Not arithmetic at the top, but arithmetic may hide below
    // uninterpreted symbols; canonicalize argument positions.
    bool changed = false;
    std::vector<TermPtr> args;
    for (auto& a : lit.args()) {
      args.push_back(canonicalizeTerm(a, sig));
      changed = changed || args.back().get() != a.get();
    }
    if (!changed) {
      return {NormalizeOutcome::Unchanged, lit};
    }
    Literal nl = lit.isEquality()
        ? Literal::mkEq(args[0], args[1], lit.positive())
        : Literal::mkPred(sig, lit.predicate(), lit.sortArgs(), std::move(args), lit.positive());
    return {NormalizeOutcome::Changed, nl};
  }

  // Canonicalize inside the atoms first, then recollect.
  Polynomial poly = Polynomial::constant(view->poly.constantPart(), view->poly.intSorted());
  for (auto& [atom, c] : view->poly.entries()) {
    TermPtr canon = canonicalizeTerm(atom, sig);
    poly = poly.plus(Polynomial::fromTerm(canon).scaled(c));
  }

  if (poly.isConstant()) {
    const Rational& c = poly.constantPart();
    bool truth = false;
    switch (view->rel) {
      case ArithRel::Eq: truth = c == 0; break;
      case ArithRel::Neq: truth = c != 0; break;
      case ArithRel::Greater: truth = c < 0; break;
      case ArithRel::Geq: truth = c <= 0; break;
    }
    return {truth ? NormalizeOutcome::True : NormalizeOutcome::False, lit};
  }

  poly = poly.scaledToIntegers();
  if (view->rel == ArithRel::Eq || view->rel == ArithRel::Neq) {
    // Sign normalization: the leading atom's coefficient is positive.
    // Inequalities cannot be sign-flipped without changing the relation,
    // so only (dis)equations get this treatment.
    TermPtr lead = poly.leadingAtom(kbo);
    if (poly.coeffOf(lead) < 0) {
      poly = poly.negated();
    }
  }

  Literal canonical = buildCanonical(view->rel, poly, sig);
  if (literalIdentical(canonical, lit)) {
    return {NormalizeOutcome::Unchanged, lit};
  }
  return {NormalizeOutcome::Changed, canonical};
}

std::optional<IsolatedRule> isolateLeading(const Literal& lit, const Kbo& kbo) {
  if (!lit.positive() || !lit.isEquality() || !lit.isArithmetic()) {
    return std::nullopt;
  }
  auto view = ArithView::of(lit);
  PER_ASSERT(view && view->rel == ArithRel::Eq);
  if (view->poly.entries().empty()) {
    return std::nullopt;
  }
  TermPtr lead = view->poly.leadingAtom(kbo);
  if (!view->poly.atomStrictlyMaximal(kbo, lead)) {
    return std::nullopt;
  }
  Rational c = view->poly.coeffOf(lead);
  if (view->poly.intSorted() && c != 1 && c != -1) {
    return std::nullopt;
  }
  // 0 = c*lead + q, so lead = -q/c.
  Polynomial q = view->poly.substituteAtom(lead, Polynomial::constant(Rational(0), view->poly.intSorted()));
  return IsolatedRule{lead, q.scaled(Rational(-1) / c)};
}

} // namespace peregrine
