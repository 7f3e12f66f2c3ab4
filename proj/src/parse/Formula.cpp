#include "parse/Formula.hpp"

#include "kernel/Builtins.hpp"

namespace peregrine {

namespace {
struct Build : Formula {};

std::shared_ptr<Build> blank() { return std::make_shared<Build>(); }
} // namespace

FormulaPtr Formula::mkAtom(Literal l) {
  auto f = blank();
  static_cast<Formula&>(*f)._kind = Connective::Atom;
  static_cast<Formula&>(*f)._atom = std::move(l);
  return f;
}

FormulaPtr Formula::mkTruth(bool b) {
  auto f = blank();
  static_cast<Formula&>(*f)._kind = b ? Connective::True : Connective::False;
  return f;
}

FormulaPtr Formula::mkNot(FormulaPtr sub) {
  auto f = blank();
  static_cast<Formula&>(*f)._kind = Connective::Not;
  static_cast<Formula&>(*f)._subs = {std::move(sub)};
  return f;
}

FormulaPtr Formula::mkJunction(Connective c, std::vector<FormulaPtr> subs) {
  PER_ASSERT(c == Connective::And || c == Connective::Or);
  PER_ASSERT(!subs.empty());
  if (subs.size() == 1) {
    return subs[0];
  }
  auto f = blank();
  static_cast<Formula&>(*f)._kind = c;
  static_cast<Formula&>(*f)._subs = std::move(subs);
  return f;
}

FormulaPtr Formula::mkBinary(Connective c, FormulaPtr a, FormulaPtr b) {
  PER_ASSERT(c == Connective::Implies || c == Connective::Iff);
  auto f = blank();
  static_cast<Formula&>(*f)._kind = c;
  static_cast<Formula&>(*f)._subs = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr Formula::mkQuant(Connective q, unsigned var, TermPtr sort, FormulaPtr body) {
  PER_ASSERT(q == Connective::Forall || q == Connective::Exists || q == Connective::SortForall);
  PER_ASSERT(sort != nullptr);
  PER_ASSERT(q != Connective::SortForall || sort.get() == Term::tType().get());
  auto f = blank();
  static_cast<Formula&>(*f)._kind = q;
  static_cast<Formula&>(*f)._boundVar = var;
  static_cast<Formula&>(*f)._boundSort = std::move(sort);
  static_cast<Formula&>(*f)._subs = {std::move(body)};
  return f;
}

void Formula::collectFreeVars(std::map<unsigned, TermPtr>& out) const {
  switch (_kind) {
    case Connective::Atom:
      _atom->collectVars(out);
      return;
    case Connective::True:
    case Connective::False:
      return;
    case Connective::Forall:
    case Connective::Exists:
    case Connective::SortForall: {
      std::map<unsigned, TermPtr> inner;
      _subs[0]->collectFreeVars(inner);
      // Sorts of other variables may mention the bound sort variable; those
      // occurrences are bound as well, so strip by id only.
      inner.erase(_boundVar);
      for (auto& [id, sort] : inner) {
        out.emplace(id, sort);
      }
      return;
    }
    default:
      for (const FormulaPtr& s : _subs) {
        s->collectFreeVars(out);
      }
      return;
  }
}

bool Formula::hasFool() const {
  if (_kind == Connective::Atom) {
    if (_atom->hasFool()) {
      return true;
    }
    // An equality over $o is itself an embedded Boolean structure.
    return _atom->isEquality() && _atom->eqSort().get() == Term::boolSort().get();
  }
  for (const FormulaPtr& s : _subs) {
    if (s->hasFool()) {
      return true;
    }
  }
  return false;
}

namespace {

bool termAlphaEqual(const TermPtr& a, const TermPtr& b, std::map<unsigned, unsigned>& ab,
                    std::map<unsigned, unsigned>& ba) {
  if (a->tag() != b->tag()) {
    return false;
  }
  switch (a->tag()) {
    case Term::Tag::Var: {
      auto ia = ab.find(a->varId());
      auto ib = ba.find(b->varId());
      if (ia == ab.end() && ib == ba.end()) {
        // Free variables must correspond one-to-one as well.
        ab.emplace(a->varId(), b->varId());
        ba.emplace(b->varId(), a->varId());
        return true;
      }
      return ia != ab.end() && ib != ba.end() && ia->second == b->varId() &&
             ib->second == a->varId();
    }
    case Term::Tag::Num:
      return a->sort().get() == b->sort().get() && a->number() == b->number();
    case Term::Tag::App: {
      if (a->symbol() != b->symbol() || a->sortArgs().size() != b->sortArgs().size() ||
          a->args().size() != b->args().size()) {
        return false;
      }
      for (size_t i = 0; i < a->sortArgs().size(); ++i) {
        if (!termAlphaEqual(a->sortArgs()[i], b->sortArgs()[i], ab, ba)) {
          return false;
        }
      }
      for (size_t i = 0; i < a->args().size(); ++i) {
        if (!termAlphaEqual(a->args()[i], b->args()[i], ab, ba)) {
          return false;
        }
      }
      return true;
    }
    case Term::Tag::Let:
      return termAlphaEqual(a->letVar(), b->letVar(), ab, ba) &&
             termAlphaEqual(a->letValue(), b->letValue(), ab, ba) &&
             termAlphaEqual(a->letBody(), b->letBody(), ab, ba);
  }
  return false;
}

bool literalAlphaEqual(const Literal& a, const Literal& b, std::map<unsigned, unsigned>& ab,
                       std::map<unsigned, unsigned>& ba) {
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
    if (!termAlphaEqual(a.sortArgs()[i], b.sortArgs()[i], ab, ba)) {
      return false;
    }
  }
  for (size_t i = 0; i < a.args().size(); ++i) {
    if (!termAlphaEqual(a.args()[i], b.args()[i], ab, ba)) {
      return false;
    }
  }
  return true;
}

bool alphaEqualRec(const FormulaPtr& a, const FormulaPtr& b, std::map<unsigned, unsigned>& ab,
                   std::map<unsigned, unsigned>& ba) {
  if (a->kind() != b->kind()) {
    return false;
  }
  switch (a->kind()) {
    case Connective::Atom:
      return literalAlphaEqual(a->atom(), b->atom(), ab, ba);
    case Connective::True:
    case Connective::False:
      return true;
    case Connective::Forall:
    case Connective::Exists:
    case Connective::SortForall: {
      std::map<unsigned, unsigned> ab2 = ab;
      std::map<unsigned, unsigned> ba2 = ba;
      ab2[a->boundVar()] = b->boundVar();
      ba2[b->boundVar()] = a->boundVar();
      if (!termAlphaEqual(a->boundSort(), b->boundSort(), ab2, ba2)) {
        return false;
      }
      return alphaEqualRec(a->body(), b->body(), ab2, ba2);
    }
    default: {
      if (a->subs().size() != b->subs().size()) {
        return false;
      }
      for (size_t i = 0; i < a->subs().size(); ++i) {
        if (!alphaEqualRec(a->sub(i), b->sub(i), ab, ba)) {
          return false;
        }
      }
      return true;
    }
  }
}

} // namespace

bool Formula::alphaEqual(const FormulaPtr& a, const FormulaPtr& b) {
  std::map<unsigned, unsigned> ab;
  std::map<unsigned, unsigned> ba;
  return alphaEqualRec(a, b, ab, ba);
}

FormulaPtr boolTermToFormula(const TermPtr& t, const Signature& sig) {
  PER_ASSERT(t->sort().get() == Term::boolSort().get());
  if (t->isApp()) {
    SymbolId f = t->symbol();
    switch (f) {
      case SYM_TRUE:
        return Formula::mkTruth(true);
      case SYM_FALSE:
        return Formula::mkTruth(false);
      case SYM_FOOL_NOT:
        return Formula::mkNot(boolTermToFormula(t->args()[0], sig));
      case SYM_FOOL_AND:
      case SYM_FOOL_OR:
        return Formula::mkJunction(f == SYM_FOOL_AND ? Connective::And : Connective::Or,
                                   {boolTermToFormula(t->args()[0], sig),
                                    boolTermToFormula(t->args()[1], sig)});
      case SYM_FOOL_IMP:
      case SYM_FOOL_IFF:
        return Formula::mkBinary(f == SYM_FOOL_IMP ? Connective::Implies : Connective::Iff,
                                 boolTermToFormula(t->args()[0], sig),
                                 boolTermToFormula(t->args()[1], sig));
      case SYM_FOOL_EQ:
        return Formula::mkAtom(Literal::mkEq(t->args()[0], t->args()[1], true));
      default:
        if (sig[f].kind == SymbolKind::Predicate) {
          return Formula::mkAtom(Literal::mkPred(sig, f, t->sortArgs(), t->args(), true));
        }
        break;
    }
  }
  return Formula::mkAtom(Literal::mkEq(t, Term::trueTerm(), true));
}

TermPtr formulaToBoolTerm(const FormulaPtr& f, const Signature& sig) {
  switch (f->kind()) {
    case Connective::True:
      return Term::trueTerm();
    case Connective::False:
      return Term::falseTerm();
    case Connective::Not:
      return Term::mkApp(sig, SYM_FOOL_NOT, {}, {formulaToBoolTerm(f->sub(0), sig)});
    case Connective::And:
    case Connective::Or: {
      SymbolId op = f->is(Connective::And) ? SYM_FOOL_AND : SYM_FOOL_OR;
      TermPtr acc = formulaToBoolTerm(f->sub(0), sig);
      for (size_t i = 1; i < f->subs().size(); ++i) {
        acc = Term::mkApp(sig, op, {}, {acc, formulaToBoolTerm(f->sub(i), sig)});
      }
      return acc;
    }
    case Connective::Implies:
    case Connective::Iff: {
      SymbolId op = f->is(Connective::Implies) ? SYM_FOOL_IMP : SYM_FOOL_IFF;
      return Term::mkApp(sig, op, {},
                         {formulaToBoolTerm(f->sub(0), sig), formulaToBoolTerm(f->sub(1), sig)});
    }
    case Connective::Atom: {
      const Literal& l = f->atom();
      TermPtr atom;
      if (l.isEquality()) {
        atom = Term::mkApp(sig, SYM_FOOL_EQ, {l.eqSort()}, {l.lhs(), l.rhs()});
      } else {
        atom = l.atomTerm(sig);
      }
      return l.positive() ? atom : Term::mkApp(sig, SYM_FOOL_NOT, {}, {atom});
    }
    default:
      PER_ASSERT_MSG(false, "a quantified formula cannot be embedded in a term");
      return nullptr;
  }
}

} // namespace peregrine
