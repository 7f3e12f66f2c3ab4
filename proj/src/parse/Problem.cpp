#include "parse/Problem.hpp"

#include <map>

namespace peregrine {

long Problem::conjectureIndex() const {
  for (size_t i = 0; i < formulas.size(); ++i) {
    if (formulas[i].role == FormulaRole::Conjecture ||
        formulas[i].role == FormulaRole::NegatedConjecture) {
      return static_cast<long>(i);
    }
  }
  return -1;
}

void negateConjecture(Problem& p) {
  for (auto& f : p.formulas) {
    if (f.role != FormulaRole::Conjecture) continue;
    f.role = FormulaRole::NegatedConjecture;
    if (f.formula->is(Connective::True)) {
      f.formula = Formula::mkTruth(false);
    } else if (f.formula->is(Connective::False)) {
      f.formula = Formula::mkTruth(true);
    } else {
      f.formula = Formula::mkNot(f.formula);
    }
    p.conjectureWasNegated = true;
    return;
  }
}

namespace {

/** Renders a sort for error messages; the full printer is not needed here. */
std::string sortName(const Signature& sig, const TermPtr& t) {
  if (!t) return "$tType";
  if (t->isVar()) return "A" + std::to_string(t->varId());
  if (t->isNum()) return t->number().str();
  std::string out = sig[t->symbol()].name;
  if (!t->sortArgs().empty() || !t->args().empty()) {
    out += "(";
    bool first = true;
    for (const auto& a : t->sortArgs()) {
      if (!first) out += ",";
      out += sortName(sig, a);
      first = false;
    }
    for (const auto& a : t->args()) {
      if (!first) out += ",";
      out += sortName(sig, a);
      first = false;
    }
    out += ")";
  }
  return out;
}

/** Checks one term's applications against the signature, tracking variable sorts. */
void checkTerm(const Signature& sig, const TermPtr& t,
               std::map<unsigned, TermPtr>& varSorts, const std::string& ctx) {
  if (t->isVar()) {
    TermPtr s = t->isSortVar() ? Term::tType() : t->sort();
    auto [it, fresh] = varSorts.emplace(t->varId(), s);
    if (!fresh && !Term::equal(it->second, s)) {
      throw SortError("variable X" + std::to_string(t->varId()) + " used at sorts " +
                      sortName(sig, it->second) + " and " + sortName(sig, s) + " in " + ctx);
    }
    return;
  }
  if (t->isNum()) return;
  if (t->tag() == Term::Tag::Let) {
    checkTerm(sig, t->letValue(), varSorts, ctx);
    unsigned v = t->letVar()->varId();
    if (!Term::equal(t->letVar()->sort(), t->letValue()->sort())) {
      throw SortError("let binds a value of the wrong sort in " + ctx);
    }
    auto saved = varSorts.find(v);
    TermPtr savedSort = saved == varSorts.end() ? nullptr : saved->second;
    varSorts[v] = t->letValue()->sort();
    checkTerm(sig, t->letBody(), varSorts, ctx);
    if (savedSort) varSorts[v] = savedSort;
    else varSorts.erase(v);
    return;
  }
  const SymbolDecl& sym = sig[t->symbol()];
  if (t->sortArgs().size() != sym.sortArity) {
    throw SortError("wrong sort arity for " + sym.name + " in " + ctx);
  }
  if (t->args().size() != sym.argSorts.size()) {
    throw SortError("wrong arity for " + sym.name + " in " + ctx);
  }
  for (const auto& s : t->sortArgs()) {
    if (!s->isSortTerm()) {
      throw SortError("non-sort sort argument to " + sym.name + " in " + ctx);
    }
    checkTerm(sig, s, varSorts, ctx);
  }
  for (size_t i = 0; i < t->args().size(); ++i) {
    const TermPtr& arg = t->args()[i];
    checkTerm(sig, arg, varSorts, ctx);
    TermPtr expected = Term::instantiatePattern(sym.argSorts[i], t->sortArgs());
    const TermPtr& actual = arg->sort();
    if (!Term::equal(expected, actual)) {
      throw SortError("argument " + std::to_string(i + 1) + " of " + sym.name + " has sort " +
                      sortName(sig, actual) + ", expected " + sortName(sig, expected) +
                      ", in " + ctx);
    }
  }
}

void checkLiteral(const Signature& sig, const Literal& lit,
                  std::map<unsigned, TermPtr>& varSorts, const std::string& ctx) {
  if (lit.isEquality()) {
    checkTerm(sig, lit.lhs(), varSorts, ctx);
    checkTerm(sig, lit.rhs(), varSorts, ctx);
    const TermPtr& ls = lit.lhs()->sort();
    const TermPtr& rs = lit.rhs()->sort();
    if (!Term::equal(ls, rs)) {
      throw SortError("equality between sorts " + sortName(sig, ls) + " and " +
                      sortName(sig, rs) + " in " + ctx);
    }
    if (!Term::equal(lit.eqSort(), ls)) {
      throw SortError("equality annotated with the wrong sort in " + ctx);
    }
  } else {
    checkTerm(sig, lit.atomTerm(sig), varSorts, ctx);
  }
}

/**
 * Walks the formula below the sort prefix. Sort quantifiers are only legal
 * while `prefix` is still true; term quantifiers extend varSorts. The map
 * is passed by value so sibling branches cannot leak bindings into each
 * other, keeping the consistency check per scope.
 */
void checkFormula(const Signature& sig, const FormulaPtr& f, bool prefix,
                  std::map<unsigned, TermPtr> varSorts, const std::string& ctx) {
  switch (f->kind()) {
    case Connective::True:
    case Connective::False:
      return;
    case Connective::Atom:
      checkLiteral(sig, f->atom(), varSorts, ctx);
      return;
    case Connective::Not:
      checkFormula(sig, f->sub(0), false, varSorts, ctx);
      return;
    case Connective::And:
    case Connective::Or:
      for (const auto& s : f->subs()) checkFormula(sig, s, false, varSorts, ctx);
      return;
    case Connective::Implies:
    case Connective::Iff:
      checkFormula(sig, f->sub(0), false, varSorts, ctx);
      checkFormula(sig, f->sub(1), false, varSorts, ctx);
      return;
    case Connective::SortForall:
      if (!prefix) {
        throw SortError("sort quantifier below other structure in " + ctx +
                        " (only an outermost sort prefix is supported)");
      }
      varSorts[f->boundVar()] = Term::tType();
      checkFormula(sig, f->body(), true, varSorts, ctx);
      return;
    case Connective::Forall:
    case Connective::Exists: {
      if (Term::equal(f->boundSort(), Term::tType())) {
        throw SortError("sort variable bound by a term quantifier in " + ctx);
      }
      if (!f->boundSort()->isVar()) {
        std::map<unsigned, TermPtr> inSort = varSorts;
        checkTerm(sig, f->boundSort(), inSort, ctx);
        if (!f->boundSort()->isSortTerm()) {
          throw SortError("quantifier binds a variable at a non-sort in " + ctx);
        }
      }
      varSorts[f->boundVar()] = f->boundSort();
      checkFormula(sig, f->body(), false, varSorts, ctx);
      return;
    }
  }
}

} // namespace

void validateProblem(const Problem& p) {
  size_t conjectures = 0;
  for (const auto& f : p.formulas) {
    if (f.role == FormulaRole::Conjecture || f.role == FormulaRole::NegatedConjecture) {
      ++conjectures;
    }
  }
  if (conjectures > 1) {
    throw SortError("more than one conjecture in the input");
  }
  for (const auto& f : p.formulas) {
    std::map<unsigned, TermPtr> varSorts;
    checkFormula(p.sig, f.formula, true, varSorts, "'" + f.name + "'");
    std::map<unsigned, TermPtr> free;
    f.formula->collectFreeVars(free);
    if (!free.empty()) {
      throw SortError("unbound variable X" + std::to_string(free.begin()->first) +
                      " in '" + f.name + "'");
    }
  }
}

} // namespace peregrine
