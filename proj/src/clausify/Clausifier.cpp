#include "clausify/Clausifier.hpp"

#include <algorithm>
#include <optional>

#include "arith/ArithLiteral.hpp"
#include "kernel/Kbo.hpp"

namespace peregrine {

namespace {

/** Copy of `s` with `var` (re)bound; Substitution::bind refuses rebinding. */
Substitution rebind(const Substitution& s, unsigned var, TermPtr t) {
  Substitution out;
  for (auto& [v, r] : s.bindings()) {
    if (v != var) {
      out.bind(v, r);
    }
  }
  out.bind(var, std::move(t));
  return out;
}

FormulaPtr mkNotF(const FormulaPtr& f) {
  if (f->is(Connective::True) || f->is(Connective::False)) {
    return Formula::mkTruth(f->is(Connective::False));
  }
  return Formula::mkNot(f);
}

/** Conjunction with truth folding and flattening of nested conjunctions. */
FormulaPtr mkAndF(std::vector<FormulaPtr> subs) {
  std::vector<FormulaPtr> flat;
  for (auto& s : subs) {
    if (s->is(Connective::False)) {
      return Formula::mkTruth(false);
    }
    if (s->is(Connective::True)) {
      continue;
    }
    if (s->is(Connective::And)) {
      flat.insert(flat.end(), s->subs().begin(), s->subs().end());
    } else {
      flat.push_back(std::move(s));
    }
  }
  if (flat.empty()) {
    return Formula::mkTruth(true);
  }
  return Formula::mkJunction(Connective::And, std::move(flat));
}

FormulaPtr mkOrF(std::vector<FormulaPtr> subs) {
  std::vector<FormulaPtr> flat;
  for (auto& s : subs) {
    if (s->is(Connective::True)) {
      return Formula::mkTruth(true);
    }
    if (s->is(Connective::False)) {
      continue;
    }
    if (s->is(Connective::Or)) {
      flat.insert(flat.end(), s->subs().begin(), s->subs().end());
    } else {
      flat.push_back(std::move(s));
    }
  }
  if (flat.empty()) {
    return Formula::mkTruth(false);
  }
  return Formula::mkJunction(Connective::Or, std::move(flat));
}

/** v = $true and v = w over $o survive elimination; instantiation at the
    saturation level grounds them. */
bool canonicalBoolEq(const Literal& lit) {
  const TermPtr& l = lit.lhs();
  const TermPtr& r = lit.rhs();
  return (l->isVar() && r->isVar())
      || (l->isVar() && r.get() == Term::trueTerm().get())
      || (r->isVar() && l.get() == Term::trueTerm().get());
}

bool cleanOfFool(const Literal& lit) {
  if (lit.hasFool()) {
    return false;
  }
  if (lit.isEquality() && lit.eqSort().get() == Term::boolSort().get()) {
    return canonicalBoolEq(lit);
  }
  return true;
}

bool cleanOfFool(const FormulaPtr& f) {
  if (f->is(Connective::Atom)) {
    return cleanOfFool(f->atom());
  }
  for (auto& s : f->subs()) {
    if (!cleanOfFool(s)) {
      return false;
    }
  }
  return true;
}

/**
 * Rewrites away let bindings, if-then-else and Boolean subterms inside
 * one formula. Each rewrite removes one FOOL construct, so the mutual
 * recursion through walk/atom/liftBool terminates. Definitions made for
 * if-then-else land in _defs; run() conjoins them onto the result.
 */
class FoolEliminator {
public:
  explicit FoolEliminator(Signature& sig) : _sig(sig) {}

  FormulaPtr run(const FormulaPtr& f) {
    FormulaPtr core = walk(f);
    if (_defs.empty()) {
      return core;
    }
    std::vector<FormulaPtr> all;
    all.push_back(std::move(core));
    for (auto& d : _defs) {
      all.push_back(d);
    }
    _defs.clear();
    return mkAndF(std::move(all));
  }

private:
  struct Offender {
    enum Kind { None, LetNode, IteTerm, BoolTerm } kind = None;
    std::vector<unsigned> path;
    TermPtr term;
  };

  Signature& _sig;
  std::vector<FormulaPtr> _defs;

  FormulaPtr walk(const FormulaPtr& f) {
    if (cleanOfFool(f)) {
      return f;
    }
    switch (f->kind()) {
      case Connective::Atom:
        return atom(f->atom());
      case Connective::True:
      case Connective::False:
        return f;
      case Connective::Not:
        return mkNotF(walk(f->sub(0)));
      case Connective::And:
      case Connective::Or: {
        std::vector<FormulaPtr> subs;
        for (auto& s : f->subs()) {
          subs.push_back(walk(s));
        }
        return f->is(Connective::And) ? mkAndF(std::move(subs)) : mkOrF(std::move(subs));
      }
      case Connective::Implies:
      case Connective::Iff:
        return Formula::mkBinary(f->kind(), walk(f->sub(0)), walk(f->sub(1)));
      case Connective::Forall:
      case Connective::Exists:
      case Connective::SortForall:
        return Formula::mkQuant(f->kind(), f->boundVar(), f->boundSort(), walk(f->body()));
    }
    return f;
  }

  /** Preorder search for the outermost FOOL construct in a term. */
  static bool scan(const TermPtr& t, std::vector<unsigned>& path, Offender& off) {
    if (t->tag() == Term::Tag::Let) {
      off = {Offender::LetNode, path, t};
      return true;
    }
    if (!t->isApp()) {
      return false;
    }
    if (t->symbol() == SYM_FOOL_ITE && t->sort().get() != Term::boolSort().get()) {
      off = {Offender::IteTerm, path, t};
      return true;
    }
    if (t->sort().get() == Term::boolSort().get() && t->symbol() != SYM_TRUE
        && t->symbol() != SYM_FALSE) {
      off = {Offender::BoolTerm, path, t};
      return true;
    }
    for (unsigned i = 0; i < t->args().size(); ++i) {
      path.push_back(i);
      if (scan(t->args()[i], path, off)) {
        return true;
      }
      path.pop_back();
    }
    return false;
  }

  Literal rebuildArg(const Literal& lit, size_t i, TermPtr arg) const {
    std::vector<TermPtr> args = lit.args();
    args[i] = std::move(arg);
    if (lit.isEquality()) {
      return Literal::mkEq(args[0], args[1], lit.positive());
    }
    return Literal::mkPred(_sig, lit.predicate(), lit.sortArgs(), std::move(args),
                           lit.positive());
  }

  static TermPtr inlineLet(const TermPtr& let) {
    Substitution s;
    s.bind(let->letVar()->varId(), let->letValue());
    return s.apply(let->letBody());
  }

  FormulaPtr atom(const Literal& lit) {
    if (lit.isEquality() && lit.eqSort().get() == Term::boolSort().get()
        && !canonicalBoolEq(lit)) {
      FormulaPtr lifted =
          Formula::mkBinary(Connective::Iff, liftBool(lit.lhs()), liftBool(lit.rhs()));
      return walk(lit.positive() ? lifted : mkNotF(lifted));
    }
    for (size_t i = 0; i < lit.args().size(); ++i) {
      Offender off;
      std::vector<unsigned> path;
      if (!scan(lit.args()[i], path, off)) {
        continue;
      }
      switch (off.kind) {
        case Offender::LetNode:
          return atom(rebuildArg(lit, i,
                                 Term::replaceAt(lit.args()[i], off.path, inlineLet(off.term))));
        case Offender::IteTerm:
          return atom(rebuildArg(lit, i,
                                 Term::replaceAt(lit.args()[i], off.path, defineIte(off.term))));
        case Offender::BoolTerm: {
          // A[t] with Boolean t becomes (t' & A[true]) | (~t' & A[false]).
          FormulaPtr phi = liftBool(off.term);
          Literal onTrue =
              rebuildArg(lit, i, Term::replaceAt(lit.args()[i], off.path, Term::trueTerm()));
          Literal onFalse =
              rebuildArg(lit, i, Term::replaceAt(lit.args()[i], off.path, Term::falseTerm()));
          return walk(mkOrF({mkAndF({phi, Formula::mkAtom(onTrue)}),
                             mkAndF({mkNotF(phi), Formula::mkAtom(onFalse)})}));
        }
        case Offender::None:
          break;
      }
    }
    return Formula::mkAtom(lit);
  }

  /**
   * Names an if-then-else occurrence: a fresh function over the free
   * variables of the expression, defined by two guarded equations which
   * join the eliminator's definition list.
   */
  TermPtr defineIte(const TermPtr& ite) {
    std::map<unsigned, TermPtr> vars;
    ite->collectVars(vars);
    std::vector<unsigned> sortVars;
    std::vector<TermPtr> termVars;
    for (auto& [id, v] : vars) {
      (void)id;
      if (v->isSortVar()) {
        sortVars.push_back(v->varId());
      } else {
        termVars.push_back(v);
      }
    }
    Substitution patRen;
    for (size_t j = 0; j < sortVars.size(); ++j) {
      patRen.bind(sortVars[j], Term::mkSortVar(static_cast<unsigned>(j)));
    }
    std::vector<TermPtr> argPats;
    for (auto& v : termVars) {
      argPats.push_back(patRen.apply(v->sort()));
    }
    SymbolId g = _sig.freshIntroduced("sG", SymbolKind::Function,
                                      static_cast<unsigned>(sortVars.size()),
                                      std::move(argPats), patRen.apply(ite->sort()));
    std::vector<TermPtr> sortArgs;
    for (unsigned id : sortVars) {
      sortArgs.push_back(Term::mkSortVar(id));
    }
    TermPtr gApp = Term::mkApp(_sig, g, std::move(sortArgs), termVars);
    FormulaPtr cond = liftBool(ite->args()[0]);
    FormulaPtr def = mkAndF(
        {Formula::mkBinary(Connective::Implies, cond,
                           Formula::mkAtom(Literal::mkEq(gApp, ite->args()[1], true))),
         Formula::mkBinary(Connective::Implies, mkNotF(cond),
                           Formula::mkAtom(Literal::mkEq(gApp, ite->args()[2], true)))});
    for (auto it = termVars.rbegin(); it != termVars.rend(); ++it) {
      def = Formula::mkQuant(Connective::Forall, (*it)->varId(), (*it)->sort(), def);
    }
    _defs.push_back(walk(def));
    return gApp;
  }

  /** Boolean-sorted term as the formula it denotes. */
  FormulaPtr liftBool(const TermPtr& t) {
    if (t->isVar()) {
      return Formula::mkAtom(Literal::mkEq(t, Term::trueTerm(), true));
    }
    if (t->tag() == Term::Tag::Let) {
      return liftBool(inlineLet(t));
    }
    PER_ASSERT(t->isApp());
    switch (t->symbol()) {
      case SYM_TRUE:
        return Formula::mkTruth(true);
      case SYM_FALSE:
        return Formula::mkTruth(false);
      case SYM_FOOL_NOT:
        return mkNotF(liftBool(t->args()[0]));
      case SYM_FOOL_AND:
        return mkAndF({liftBool(t->args()[0]), liftBool(t->args()[1])});
      case SYM_FOOL_OR:
        return mkOrF({liftBool(t->args()[0]), liftBool(t->args()[1])});
      case SYM_FOOL_IMP:
      case SYM_FOOL_IFF:
        return Formula::mkBinary(
            t->symbol() == SYM_FOOL_IMP ? Connective::Implies : Connective::Iff,
            liftBool(t->args()[0]), liftBool(t->args()[1]));
      case SYM_FOOL_ITE:
        return mkOrF({mkAndF({liftBool(t->args()[0]), liftBool(t->args()[1])}),
                      mkAndF({mkNotF(liftBool(t->args()[0])), liftBool(t->args()[2])})});
      case SYM_FOOL_EQ:
        if (t->sortArgs()[0].get() == Term::boolSort().get()) {
          return Formula::mkBinary(Connective::Iff, liftBool(t->args()[0]),
                                   liftBool(t->args()[1]));
        }
        // The sides may hold further FOOL constructs; the caller's walk
        // over the produced atom picks those up.
        return Formula::mkAtom(Literal::mkEq(t->args()[0], t->args()[1], true));
      default:
        if (_sig[t->symbol()].kind == SymbolKind::Predicate) {
          return Formula::mkAtom(
              Literal::mkPred(_sig, t->symbol(), t->sortArgs(), t->args(), true));
        }
        PER_ASSERT_MSG(false, "unexpected Boolean term head: " + _sig[t->symbol()].name);
        return Formula::mkTruth(false);
    }
  }
};

/** 1 + the largest variable id used anywhere in the formula. */
unsigned varCeiling(const FormulaPtr& f) {
  unsigned m = 0;
  if (f->is(Connective::Atom)) {
    std::map<unsigned, TermPtr> vars;
    f->atom().collectVars(vars);
    if (!vars.empty()) {
      m = vars.rbegin()->first + 1;
    }
    return m;
  }
  if (f->isQuantifier()) {
    m = f->boundVar() + 1;
  }
  for (auto& s : f->subs()) {
    m = std::max(m, varCeiling(s));
  }
  return m;
}

/**
 * Negation normal form with truth folding. Every binder is renamed to a
 * fresh id on the way down; an equivalence translates its sides twice
 * (once per polarity), and the renaming keeps the two copies of any
 * quantifier inside them distinct, so later stages never conflate
 * variables from different branches.
 */
class Nnf {
public:
  explicit Nnf(unsigned firstFresh) : _next(firstFresh) {}

  FormulaPtr run(const FormulaPtr& f, bool positive, const Substitution& ren) {
    switch (f->kind()) {
      case Connective::Atom: {
        Literal l = f->atom().apply(ren);
        return Formula::mkAtom(positive ? l : l.negated());
      }
      case Connective::True:
        return Formula::mkTruth(positive);
      case Connective::False:
        return Formula::mkTruth(!positive);
      case Connective::Not:
        return run(f->sub(0), !positive, ren);
      case Connective::And:
      case Connective::Or: {
        bool conj = f->is(Connective::And) == positive;
        std::vector<FormulaPtr> subs;
        for (auto& s : f->subs()) {
          subs.push_back(run(s, positive, ren));
        }
        return conj ? mkAndF(std::move(subs)) : mkOrF(std::move(subs));
      }
      case Connective::Implies:
        if (positive) {
          return mkOrF({run(f->sub(0), false, ren), run(f->sub(1), true, ren)});
        }
        return mkAndF({run(f->sub(0), true, ren), run(f->sub(1), false, ren)});
      case Connective::Iff: {
        // a <=> b is (~a | b) & (a | ~b); negated, (a | b) & (~a | ~b).
        FormulaPtr left = mkOrF({run(f->sub(0), !positive, ren), run(f->sub(1), true, ren)});
        FormulaPtr right = mkOrF({run(f->sub(0), positive, ren), run(f->sub(1), false, ren)});
        return mkAndF({std::move(left), std::move(right)});
      }
      case Connective::Forall:
      case Connective::Exists: {
        bool univ = f->is(Connective::Forall) == positive;
        unsigned fresh = _next++;
        const TermPtr& sort = f->boundSort();
        Substitution inner = rebind(ren, f->boundVar(), Term::mkVar(fresh, sort));
        FormulaPtr body = run(f->body(), positive, inner);
        if (body->is(Connective::True) || body->is(Connective::False)) {
          return body;
        }
        return Formula::mkQuant(univ ? Connective::Forall : Connective::Exists, fresh, sort,
                                std::move(body));
      }
      case Connective::SortForall:
        break;
    }
    PER_ASSERT_MSG(false, "sort quantifiers are stripped before NNF");
    return f;
  }

private:
  unsigned _next;
};

/**
 * Pushes one quantifier into an already-miniscoped body: distribute over
 * the homomorphic junction, split the other junction into the part that
 * uses the variable and the part that does not.
 */
FormulaPtr pushQuant(Connective q, unsigned var, const TermPtr& sort, const FormulaPtr& body) {
  std::map<unsigned, TermPtr> free;
  body->collectFreeVars(free);
  if (!free.count(var)) {
    return body;
  }
  Connective dist = q == Connective::Forall ? Connective::And : Connective::Or;
  Connective part = q == Connective::Forall ? Connective::Or : Connective::And;
  auto junction = [](Connective c, std::vector<FormulaPtr> subs) {
    return c == Connective::And ? mkAndF(std::move(subs)) : mkOrF(std::move(subs));
  };
  if (body->is(dist)) {
    std::vector<FormulaPtr> subs;
    for (auto& s : body->subs()) {
      subs.push_back(pushQuant(q, var, sort, s));
    }
    return junction(dist, std::move(subs));
  }
  if (body->is(part)) {
    std::vector<FormulaPtr> with;
    std::vector<FormulaPtr> without;
    for (auto& s : body->subs()) {
      std::map<unsigned, TermPtr> sub;
      s->collectFreeVars(sub);
      (sub.count(var) ? with : without).push_back(s);
    }
    if (!without.empty()) {
      without.push_back(pushQuant(q, var, sort, junction(part, std::move(with))));
      return junction(part, std::move(without));
    }
  }
  return Formula::mkQuant(q, var, sort, body);
}

FormulaPtr miniscope(const FormulaPtr& f) {
  switch (f->kind()) {
    case Connective::Forall:
    case Connective::Exists:
      return pushQuant(f->kind(), f->boundVar(), f->boundSort(), miniscope(f->body()));
    case Connective::And:
    case Connective::Or: {
      std::vector<FormulaPtr> subs;
      for (auto& s : f->subs()) {
        subs.push_back(miniscope(s));
      }
      return f->is(Connective::And) ? mkAndF(std::move(subs)) : mkOrF(std::move(subs));
    }
    default:
      return f;
  }
}

/**
 * Replaces existential variables by skolem applications over the
 * enclosing universals, dropping all quantifier nodes; clause variables
 * are implicitly universal. Skolems take the formula's sort-quantifier
 * prefix as sort parameters.
 */
class Skolemizer {
public:
  Skolemizer(Signature& sig, unsigned formulaIndex, std::vector<unsigned> prefixSortVars,
             std::vector<SkolemEntry>& table)
      : _sig(sig), _formula(formulaIndex), _sortVars(std::move(prefixSortVars)), _table(table) {}

  FormulaPtr run(const FormulaPtr& f) { return walk(f, {}, Substitution()); }

private:
  Signature& _sig;
  unsigned _formula;
  std::vector<unsigned> _sortVars;
  std::vector<SkolemEntry>& _table;

  FormulaPtr walk(const FormulaPtr& f, std::vector<TermPtr> univ, const Substitution& sub) {
    switch (f->kind()) {
      case Connective::Atom:
        return Formula::mkAtom(f->atom().apply(sub));
      case Connective::True:
      case Connective::False:
        return f;
      case Connective::And:
      case Connective::Or: {
        std::vector<FormulaPtr> subs;
        for (auto& s : f->subs()) {
          subs.push_back(walk(s, univ, sub));
        }
        return Formula::mkJunction(f->kind(), std::move(subs));
      }
      case Connective::Forall:
        univ.push_back(Term::mkVar(f->boundVar(), f->boundSort()));
        return walk(f->body(), std::move(univ), sub);
      case Connective::Exists: {
        Substitution patRen;
        for (size_t j = 0; j < _sortVars.size(); ++j) {
          patRen.bind(_sortVars[j], Term::mkSortVar(static_cast<unsigned>(j)));
        }
        std::vector<TermPtr> argPats;
        for (auto& u : univ) {
          argPats.push_back(patRen.apply(u->sort()));
        }
        SymbolId sk = _sig.freshSkolem(static_cast<unsigned>(_sortVars.size()),
                                       std::move(argPats), patRen.apply(f->boundSort()));
        std::vector<TermPtr> sortArgs;
        for (unsigned id : _sortVars) {
          sortArgs.push_back(Term::mkSortVar(id));
        }
        TermPtr skApp = Term::mkApp(_sig, sk, std::move(sortArgs), univ);
        _table.push_back({sk, _formula, f->boundVar(), f->boundSort()});
        return walk(f->body(), std::move(univ), rebind(sub, f->boundVar(), skApp));
      }
      default:
        PER_ASSERT_MSG(false, "unexpected connective during skolemization");
        return f;
    }
  }
};

struct ClauseDraft {
  std::vector<Literal> lits;
  /** Free-form note for the derivation record; empty for plain cnf. */
  std::string info;
};

/**
 * Or-over-And distribution on the quantifier-free tree. A disjunct
 * whose clause count exceeds the naming factor while siblings would
 * multiply it is replaced by a fresh predicate over its free variables;
 * the one-directional definition clauses ride along in _defs. Counts
 * are taken before nested naming, which can overestimate a child and
 * name a little eagerly; that only trades clause count for width.
 */
class Distributor {
public:
  Distributor(Signature& sig, size_t factor) : _sig(sig), _factor(factor) {}

  std::vector<ClauseDraft> run(const FormulaPtr& f) {
    std::vector<ClauseDraft> out;
    for (auto& lits : matrix(f)) {
      out.push_back({std::move(lits), ""});
    }
    for (auto& d : _defs) {
      out.push_back(std::move(d));
    }
    _defs.clear();
    return out;
  }

private:
  Signature& _sig;
  size_t _factor;
  std::vector<ClauseDraft> _defs;

  static size_t satMul(size_t a, size_t b) {
    constexpr size_t cap = size_t(1) << 40;
    if (a == 0 || b == 0) {
      return 0;
    }
    return a > cap / b ? cap : a * b;
  }

  static size_t count(const FormulaPtr& f) {
    switch (f->kind()) {
      case Connective::Atom:
      case Connective::False:
        return 1;
      case Connective::True:
        return 0;
      case Connective::And: {
        size_t n = 0;
        for (auto& s : f->subs()) {
          n += count(s);
        }
        return n;
      }
      case Connective::Or: {
        size_t n = 1;
        for (auto& s : f->subs()) {
          n = satMul(n, count(s));
        }
        return n;
      }
      default:
        PER_ASSERT_MSG(false, "unexpected connective during distribution");
        return 1;
    }
  }

  std::vector<std::vector<Literal>> matrix(const FormulaPtr& f) {
    switch (f->kind()) {
      case Connective::Atom:
        return {{f->atom()}};
      case Connective::True:
        return {};
      case Connective::False:
        return {{}};
      case Connective::And: {
        std::vector<std::vector<Literal>> out;
        for (auto& s : f->subs()) {
          for (auto& c : matrix(s)) {
            out.push_back(std::move(c));
          }
        }
        return out;
      }
      case Connective::Or: {
        std::vector<FormulaPtr> children(f->subs());
        std::vector<size_t> counts;
        for (auto& c : children) {
          counts.push_back(count(c));
        }
        for (size_t i = 0; i < children.size(); ++i) {
          size_t others = 1;
          for (size_t j = 0; j < children.size(); ++j) {
            if (j != i) {
              others = satMul(others, counts[j]);
            }
          }
          if (counts[i] > _factor && others > 1) {
            children[i] = name(children[i]);
            counts[i] = 1;
          }
        }
        std::vector<std::vector<Literal>> acc = {{}};
        for (auto& c : children) {
          std::vector<std::vector<Literal>> part = matrix(c);
          std::vector<std::vector<Literal>> next;
          for (auto& a : acc) {
            for (auto& d : part) {
              std::vector<Literal> merged = a;
              merged.insert(merged.end(), d.begin(), d.end());
              next.push_back(std::move(merged));
            }
          }
          acc = std::move(next);
        }
        return acc;
      }
      default:
        PER_ASSERT_MSG(false, "unexpected connective during distribution");
        return {};
    }
  }

  FormulaPtr name(const FormulaPtr& g) {
    std::map<unsigned, TermPtr> free;
    g->collectFreeVars(free);
    std::vector<unsigned> sortVars;
    std::vector<TermPtr> termVars;
    for (auto& [id, v] : free) {
      (void)id;
      if (v->isSortVar()) {
        sortVars.push_back(v->varId());
      } else {
        termVars.push_back(v);
      }
    }
    Substitution patRen;
    for (size_t j = 0; j < sortVars.size(); ++j) {
      patRen.bind(sortVars[j], Term::mkSortVar(static_cast<unsigned>(j)));
    }
    std::vector<TermPtr> argPats;
    for (auto& v : termVars) {
      argPats.push_back(patRen.apply(v->sort()));
    }
    SymbolId n = _sig.freshIntroduced("sP", SymbolKind::Predicate,
                                      static_cast<unsigned>(sortVars.size()),
                                      std::move(argPats), nullptr);
    std::vector<TermPtr> sortArgs;
    for (unsigned id : sortVars) {
      sortArgs.push_back(Term::mkSortVar(id));
    }
    Literal head = Literal::mkPred(_sig, n, std::move(sortArgs), std::move(termVars), true);
    for (auto& cls : matrix(g)) {
      std::vector<Literal> def;
      def.reserve(cls.size() + 1);
      def.push_back(head.negated());
      def.insert(def.end(), cls.begin(), cls.end());
      _defs.push_back({std::move(def), "definition of " + _sig[n].name});
    }
    return Formula::mkAtom(head);
  }
};

/**
 * Final literal pass: arithmetic atoms to their canonical polynomial
 * form, constant and reflexivity truths folded. Returns nullopt when
 * the clause is a tautology.
 */
std::optional<std::vector<Literal>> tidyClause(std::vector<Literal> lits, const Signature& sig,
                                               const Kbo& kbo) {
  std::vector<Literal> out;
  for (auto& lit : lits) {
    NormalizeOutcome o = normalizeLiteral(lit, sig, kbo);
    if (o.kind == NormalizeOutcome::True) {
      return std::nullopt;
    }
    if (o.kind == NormalizeOutcome::False) {
      continue;
    }
    if (o.lit.isReflexivity()) {
      if (o.lit.positive()) {
        return std::nullopt;
      }
      continue;
    }
    out.push_back(std::move(o.lit));
  }
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t j = i + 1; j < out.size(); ++j) {
      if (out[i].complementary(out[j])) {
        return std::nullopt;
      }
    }
  }
  return out;
}

} // namespace

FormulaPtr eliminateFool(const FormulaPtr& f, Signature& sig) {
  std::vector<unsigned> prefix;
  FormulaPtr body = f;
  while (body->is(Connective::SortForall)) {
    prefix.push_back(body->boundVar());
    body = body->body();
  }
  FoolEliminator fool(sig);
  body = fool.run(body);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    body = Formula::mkQuant(Connective::SortForall, *it, Term::tType(), body);
  }
  return body;
}

ClauseSet clausify(Problem& p, const ClausifyOptions& opts, ClauseRegistry& registry) {
  ClauseSet cs;
  Kbo kbo(p.sig);
  for (unsigned i = 0; i < p.formulas.size(); ++i) {
    const InputFormula& inf = p.formulas[i];
    PER_ASSERT_MSG(inf.role != FormulaRole::Conjecture,
                   "clausification expects a negated conjecture");
    std::vector<unsigned> sortVars;
    FormulaPtr body = inf.formula;
    while (body->is(Connective::SortForall)) {
      sortVars.push_back(body->boundVar());
      body = body->body();
    }
    FoolEliminator fool(p.sig);
    body = fool.run(body);
    unsigned ceiling = varCeiling(body);
    for (unsigned sv : sortVars) {
      ceiling = std::max(ceiling, sv + 1);
    }
    Nnf nnf(ceiling);
    body = nnf.run(body, true, Substitution());
    body = miniscope(body);
    Skolemizer skolemizer(p.sig, i, sortVars, cs.skolems);
    body = skolemizer.run(body);
    Distributor distributor(p.sig, opts.namingFactor);
    bool goal = inf.role == FormulaRole::NegatedConjecture;
    for (auto& draft : distributor.run(body)) {
      auto lits = tidyClause(std::move(draft.lits), p.sig, kbo);
      if (!lits) {
        continue;
      }
      Derivation d;
      d.rule = Rule::Cnf;
      d.parents = {i};
      d.info = std::move(draft.info);
      cs.clauses.push_back(registry.makeExplicit(std::move(*lits), std::move(d), 0, {}, goal));
    }
  }
  return cs;
}

namespace {

/** All resolvents of clause `c` upon its literal at `li` are tautologies. */
bool literalBlocked(const std::vector<ClausePtr>& all, const std::vector<bool>& alive,
                    size_t ci, size_t li) {
  const Clause& c = *all[ci];
  const Literal& l = c[li];
  unsigned shift = c.varBound();
  for (size_t cj = 0; cj < all.size(); ++cj) {
    if (!alive[cj]) {
      continue;
    }
    // Rename the partner apart. A renamed copy of the clause itself is a
    // legitimate partner; skipping it would be unsound.
    std::vector<Literal> partner = all[cj]->literals();
    if (shift > 0 && !all[cj]->ground()) {
      std::map<unsigned, TermPtr> vars;
      all[cj]->collectVars(vars);
      Substitution ren;
      for (auto& [id, v] : vars) {
        if (v->isSortVar()) {
          ren.bind(id, Term::mkSortVar(id + shift));
        }
      }
      for (auto& [id, v] : vars) {
        if (!v->isSortVar()) {
          ren.bind(id, Term::mkVar(id + shift, ren.apply(v->sort())));
        }
      }
      for (auto& m : partner) {
        m = m.apply(ren);
      }
    }
    for (size_t mj = 0; mj < partner.size(); ++mj) {
      const Literal& m = partner[mj];
      if (m.positive() == l.positive() || m.predicate() != l.predicate()) {
        continue;
      }
      for (auto& u : unifyAtoms(l, m)) {
        std::vector<Literal> resolvent;
        for (size_t k = 0; k < c.size(); ++k) {
          if (k != li) {
            resolvent.push_back(c[k].apply(u));
          }
        }
        for (size_t k = 0; k < partner.size(); ++k) {
          if (k != mj) {
            resolvent.push_back(partner[k].apply(u));
          }
        }
        bool tautology = false;
        for (size_t a = 0; a < resolvent.size() && !tautology; ++a) {
          for (size_t b = a + 1; b < resolvent.size(); ++b) {
            if (resolvent[a].complementary(resolvent[b])) {
              tautology = true;
              break;
            }
          }
        }
        if (!tautology) {
          return false;
        }
      }
    }
  }
  return true;
}

} // namespace

ClauseSet blockedClauseElimination(const ClauseSet& cs) {
  for (auto& c : cs.clauses) {
    for (auto& l : c->literals()) {
      if (l.isEquality() || l.isArithmetic()) {
        return cs;
      }
    }
  }
  std::vector<bool> alive(cs.clauses.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
      if (!alive[ci]) {
        continue;
      }
      for (size_t li = 0; li < cs.clauses[ci]->size(); ++li) {
        if (literalBlocked(cs.clauses, alive, ci, li)) {
          alive[ci] = false;
          changed = true;
          break;
        }
      }
    }
  }
  ClauseSet out;
  out.skolems = cs.skolems;
  for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
    if (alive[ci]) {
      out.clauses.push_back(cs.clauses[ci]);
    }
  }
  return out;
}

ClauseSet trimUnused(const ClauseSet& cs) {
  std::vector<bool> alive(cs.clauses.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<SymbolId, std::pair<bool, bool>> census;
    for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
      if (!alive[ci]) {
        continue;
      }
      for (auto& l : cs.clauses[ci]->literals()) {
        if (l.isEquality() || l.isArithmetic()) {
          continue;
        }
        auto& [pos, neg] = census[l.predicate()];
        (l.positive() ? pos : neg) = true;
      }
    }
    for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
      if (!alive[ci]) {
        continue;
      }
      for (auto& l : cs.clauses[ci]->literals()) {
        if (l.isEquality() || l.isArithmetic()) {
          continue;
        }
        auto& [pos, neg] = census[l.predicate()];
        if (pos != neg) {
          alive[ci] = false;
          changed = true;
          break;
        }
      }
    }
  }
  ClauseSet out;
  out.skolems = cs.skolems;
  for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
    if (alive[ci]) {
      out.clauses.push_back(cs.clauses[ci]);
    }
  }
  return out;
}

} // namespace peregrine
