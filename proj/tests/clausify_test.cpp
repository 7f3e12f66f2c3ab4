#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>

#include "arith/ArithLiteral.hpp"
#include "clausify/Clausifier.hpp"
#include "kernel/Kbo.hpp"
#include "parse/Printer.hpp"
#include "parse/TptpParser.hpp"
#include "support/FiniteEval.hpp"
#include "support/TestUtil.hpp"

using namespace peregrine;
using namespace peregrine::test;

namespace {

constexpr size_t kModelBudget = 60000;

void addFormula(Problem& p, FormulaPtr f, FormulaRole role = FormulaRole::Axiom) {
  p.formulas.push_back({"f" + std::to_string(p.formulas.size()), role, std::move(f), false});
}

FormulaPtr quant(Connective q, unsigned v, const TermPtr& sort, FormulaPtr body) {
  return Formula::mkQuant(q, v, sort, std::move(body));
}

/**
 * Whether the clause matches the literal list modulo variable renaming
 * and literal order. The expected literals run through the same
 * canonicalization the pipeline applies, so tests state clauses in
 * their natural input orientation.
 */
bool clauseMatches(const ClausePtr& c, std::vector<Literal> raw, const Signature& sig,
                   const Kbo& kbo) {
  for (auto& l : raw) {
    NormalizeOutcome o = normalizeLiteral(l, sig, kbo);
    REQUIRE(o.kind != NormalizeOutcome::True);
    REQUIRE(o.kind != NormalizeOutcome::False);
    l = o.lit;
  }
  std::vector<size_t> idx(raw.size());
  std::iota(idx.begin(), idx.end(), 0);
  do {
    std::vector<Literal> perm;
    for (size_t i : idx) {
      perm.push_back(raw[i]);
    }
    std::vector<Literal> canon = ClauseRegistry::normalizeLiterals(std::move(perm));
    if (canon.size() == c->size()) {
      bool same = true;
      for (size_t i = 0; i < canon.size(); ++i) {
        if (!canon[i].equals(c->literals()[i])) {
          same = false;
          break;
        }
      }
      if (same) {
        return true;
      }
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return false;
}

bool someClauseMatches(const ClauseSet& cs, std::vector<Literal> raw, const Signature& sig,
                       const Kbo& kbo) {
  for (auto& c : cs.clauses) {
    if (clauseMatches(c, raw, sig, kbo)) {
      return true;
    }
  }
  return false;
}

std::string describeRound(const Problem& p, const ClauseSet& cs) {
  std::string out = "formulas:\n";
  for (auto& inf : p.formulas) {
    out += "  " + printFormula(p.sig, inf.formula, Dialect::Human) + "\n";
  }
  out += "clauses:\n";
  for (auto& c : cs.clauses) {
    out += "  " + printClause(p.sig, *c, Dialect::Human) + "\n";
  }
  return out;
}

/** Counts of domain sizes where both sides of an equisatisfiability
    comparison stayed within the model budget. */
struct EquisatTally {
  std::array<int, 4> checked = {0, 0, 0, 0};
};

void checkEquisat(const Problem& p, const std::vector<FormulaPtr>& fs, const ClauseSet& cs,
                  EquisatTally& tally) {
  for (unsigned d = 1; d <= 3; ++d) {
    auto fSat = FiniteSearch::formulasSat(p.sig, fs, d, kModelBudget);
    if (!fSat) {
      continue;
    }
    auto cSat = FiniteSearch::clausesSat(p.sig, cs.clauses, d, kModelBudget);
    if (!cSat) {
      continue;
    }
    INFO("domain size ", d, "\n", describeRound(p, cs));
    CHECK(*fSat == *cSat);
    ++tally.checked[d];
  }
}

void checkSkolemTable(const ClauseSet& cs, const Signature& sig) {
  for (size_t k = 0; k < cs.skolems.size(); ++k) {
    CHECK(sig[cs.skolems[k].symbol].skolem);
    CHECK(sig[cs.skolems[k].symbol].name == "\xcf\x83" + std::to_string(k));
    for (size_t j = k + 1; j < cs.skolems.size(); ++j) {
      CHECK(cs.skolems[k].symbol != cs.skolems[j].symbol);
    }
  }
}

/**
 * Random closed formulas over a vocabulary the brute-force oracle can
 * enumerate: constants a and b, at most one unary or binary symbol
 * besides the unary predicate p, at most three bound variables.
 */
struct FoGen {
  Problem prob;
  SymbolId a, b, f, p, q;
  Rng& rng;
  bool useB, useF, useQ, useEq;

  explicit FoGen(Rng& r) : rng(r) {
    const TermPtr& i = Term::indSort();
    a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
    b = prob.sig.declare("b", SymbolKind::Function, 0, {}, i);
    f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
    p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
    q = prob.sig.declare("q", SymbolKind::Predicate, 0, {i, i}, nullptr);
    useB = rng.coin(0.4);
    int extra = rng.range(0, 2);
    useF = extra == 1;
    useQ = extra == 2;
    useEq = rng.coin(0.35);
  }

  TermPtr term(int depth, const std::vector<TermPtr>& scope) {
    if (useF && depth > 0 && rng.coin(0.45)) {
      return Term::mkApp(prob.sig, f, {}, {term(depth - 1, scope)});
    }
    if (!scope.empty() && rng.coin(0.55)) {
      return scope[static_cast<size_t>(rng.range(0, static_cast<int>(scope.size()) - 1))];
    }
    return Term::mkApp(prob.sig, useB && rng.coin(0.4) ? b : a, {}, {});
  }

  FormulaPtr atom(const std::vector<TermPtr>& scope) {
    bool pos = rng.coin(0.8);
    if (useEq && rng.coin(0.35)) {
      return Formula::mkAtom(Literal::mkEq(term(2, scope), term(2, scope), pos));
    }
    if (useQ && rng.coin(0.6)) {
      return Formula::mkAtom(
          Literal::mkPred(prob.sig, q, {}, {term(1, scope), term(1, scope)}, pos));
    }
    return Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {term(2, scope)}, pos));
  }

  FormulaPtr formula(int depth, std::vector<TermPtr>& scope) {
    if (depth <= 0) {
      return atom(scope);
    }
    switch (rng.range(0, 7)) {
      case 0:
        return Formula::mkNot(formula(depth - 1, scope));
      case 1:
      case 2: {
        Connective c = rng.coin() ? Connective::And : Connective::Or;
        std::vector<FormulaPtr> subs;
        int n = rng.range(2, 3);
        for (int i = 0; i < n; ++i) {
          subs.push_back(formula(depth - 1, scope));
        }
        return Formula::mkJunction(c, std::move(subs));
      }
      case 3:
        return Formula::mkBinary(Connective::Implies, formula(depth - 1, scope),
                                 formula(depth - 1, scope));
      case 4:
        return Formula::mkBinary(Connective::Iff, formula(depth - 1, scope),
                                 formula(depth - 1, scope));
      case 5:
      case 6: {
        if (scope.size() >= 3) {
          return atom(scope);
        }
        unsigned id = static_cast<unsigned>(scope.size());
        scope.push_back(Term::mkVar(id, Term::indSort()));
        FormulaPtr body = formula(depth - 1, scope);
        scope.pop_back();
        return quant(rng.coin() ? Connective::Forall : Connective::Exists, id, Term::indSort(),
                     std::move(body));
      }
      default:
        return atom(scope);
    }
  }
};

/**
 * Random formulas exercising if-then-else, let, Boolean arguments and
 * Boolean equalities, with occasional quantification over $o. The
 * finite evaluator understands these constructs natively, so the
 * before/after comparison needs no translation step.
 */
struct FoolGen {
  Problem prob;
  SymbolId a, f, h, p, r, bc;
  Rng& rng;
  unsigned nextLetVar = 40;
  std::vector<TermPtr> iScope, oScope;
  bool useF, useH, useR;

  explicit FoolGen(Rng& rnd) : rng(rnd) {
    const TermPtr& i = Term::indSort();
    const TermPtr& o = Term::boolSort();
    a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
    f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
    h = prob.sig.declare("h", SymbolKind::Function, 0, {o}, i);
    p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
    r = prob.sig.declare("r", SymbolKind::Predicate, 0, {i, o}, nullptr);
    bc = prob.sig.declare("bc", SymbolKind::Predicate, 0, {}, nullptr);
    int extra = rng.range(0, 2);
    useF = extra == 0;
    useH = extra == 1;
    useR = extra == 2;
  }

  TermPtr iTerm(int depth) {
    if (depth > 0) {
      switch (rng.range(0, 5)) {
        case 0:
          if (useF) {
            return Term::mkApp(prob.sig, f, {}, {iTerm(depth - 1)});
          }
          break;
        case 1:
          if (useH) {
            return Term::mkApp(prob.sig, h, {}, {oTerm(depth - 1)});
          }
          break;
        case 2:
          return Term::mkApp(prob.sig, SYM_FOOL_ITE, {Term::indSort()},
                             {oTerm(depth - 1), iTerm(depth - 1), iTerm(depth - 1)});
        case 3: {
          TermPtr v = Term::mkVar(nextLetVar++, Term::indSort());
          TermPtr value = iTerm(depth - 1);
          iScope.push_back(v);
          TermPtr body = iTerm(depth - 1);
          iScope.pop_back();
          return Term::mkLet(v, std::move(value), std::move(body));
        }
        default:
          break;
      }
    }
    if (!iScope.empty() && rng.coin(0.5)) {
      return iScope[static_cast<size_t>(rng.range(0, static_cast<int>(iScope.size()) - 1))];
    }
    return Term::mkApp(prob.sig, a, {}, {});
  }

  TermPtr oTerm(int depth) {
    if (depth > 0) {
      switch (rng.range(0, 6)) {
        case 0:
          return Term::mkApp(prob.sig, SYM_FOOL_NOT, {}, {oTerm(depth - 1)});
        case 1: {
          SymbolId c = std::array{SYM_FOOL_AND, SYM_FOOL_OR, SYM_FOOL_IMP,
                                  SYM_FOOL_IFF}[rng.range(0, 3)];
          return Term::mkApp(prob.sig, c, {}, {oTerm(depth - 1), oTerm(depth - 1)});
        }
        case 2:
          return Term::mkApp(prob.sig, SYM_FOOL_EQ, {Term::indSort()},
                             {iTerm(depth - 1), iTerm(depth - 1)});
        case 3:
          return Term::mkApp(prob.sig, SYM_FOOL_ITE, {Term::boolSort()},
                             {oTerm(depth - 1), oTerm(depth - 1), oTerm(depth - 1)});
        case 4:
          return Term::mkApp(prob.sig, p, {}, {iTerm(depth - 1)});
        default:
          if (useR) {
            return Term::mkApp(prob.sig, r, {}, {iTerm(depth - 1), oTerm(depth - 1)});
          }
          break;
      }
    }
    if (!oScope.empty() && rng.coin(0.4)) {
      return oScope[static_cast<size_t>(rng.range(0, static_cast<int>(oScope.size()) - 1))];
    }
    if (rng.coin(0.3)) {
      return Term::mkApp(prob.sig, bc, {}, {});
    }
    return rng.coin() ? Term::trueTerm() : Term::falseTerm();
  }

  FormulaPtr atom() {
    bool pos = rng.coin(0.75);
    switch (rng.range(0, 3)) {
      case 0:
        return Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {iTerm(2)}, pos));
      case 1:
        if (useR) {
          return Formula::mkAtom(Literal::mkPred(prob.sig, r, {}, {iTerm(1), oTerm(1)}, pos));
        }
        return Formula::mkAtom(Literal::mkEq(iTerm(1), iTerm(1), pos));
      case 2:
        return Formula::mkAtom(Literal::mkEq(iTerm(1), iTerm(1), pos));
      default:
        return Formula::mkAtom(Literal::mkEq(oTerm(1), oTerm(1), pos));
    }
  }

  FormulaPtr formula(int depth) {
    if (depth <= 0) {
      return atom();
    }
    switch (rng.range(0, 6)) {
      case 0:
        return Formula::mkNot(formula(depth - 1));
      case 1:
      case 2: {
        Connective c = rng.coin() ? Connective::And : Connective::Or;
        return Formula::mkJunction(c, {formula(depth - 1), formula(depth - 1)});
      }
      case 3:
        return Formula::mkBinary(rng.coin() ? Connective::Implies : Connective::Iff,
                                 formula(depth - 1), formula(depth - 1));
      case 4: {
        if (iScope.size() + oScope.size() >= 3) {
          return atom();
        }
        bool overBool = rng.coin(0.3);
        unsigned id = static_cast<unsigned>(iScope.size() + oScope.size());
        const TermPtr& sort = overBool ? Term::boolSort() : Term::indSort();
        (overBool ? oScope : iScope).push_back(Term::mkVar(id, sort));
        FormulaPtr body = formula(depth - 1);
        (overBool ? oScope : iScope).pop_back();
        return quant(rng.coin() ? Connective::Forall : Connective::Exists, id, sort,
                     std::move(body));
      }
      default:
        return atom();
    }
  }
};

bool boolEqAtomsCanonical(const FormulaPtr& f) {
  if (f->is(Connective::Atom)) {
    const Literal& l = f->atom();
    if (!l.isEquality() || l.eqSort().get() != Term::boolSort().get()) {
      return true;
    }
    const TermPtr& a = l.lhs();
    const TermPtr& b = l.rhs();
    return (a->isVar() && b->isVar()) || (a->isVar() && b.get() == Term::trueTerm().get()) ||
           (b->isVar() && a.get() == Term::trueTerm().get());
  }
  for (auto& s : f->subs()) {
    if (!boolEqAtomsCanonical(s)) {
      return false;
    }
  }
  return true;
}

const char* kSumTptp = R"(
tff(list_type, type, list: $tType > $tType).
tff(nil_type, type, nil: !>[A: $tType]: list(A)).
tff(cons_type, type, cons: !>[A: $tType]: ((A * list(A)) > list(A))).
tff(dt_list, datatype, [nil, cons]).
tff(sum_type, type, sum: list($real) > $real).
tff(concat_type, type, concat: !>[A: $tType]: ((list(A) * list(A)) > list(A))).
tff(sum_nil, axiom, sum(nil($real)) = 0.0).
tff(sum_cons, axiom, ![X: $real, XS: list($real)]:
    (sum(cons($real, X, XS)) = $sum(X, sum(XS)))).
tff(concat_nil, axiom, ![A: $tType]: ![XS: list(A)]: (concat(A, nil(A), XS) = XS)).
tff(concat_cons, axiom, ![A: $tType]: ![X: A, XS: list(A), YS: list(A)]:
    (concat(A, cons(A, X, XS), YS) = cons(A, X, concat(A, XS, YS)))).
tff(sum_concat, conjecture, ![XS: list($real), YS: list($real)]:
    ($sum(sum(XS), sum(YS)) = sum(concat($real, XS, YS)))).
)";

} // namespace

TEST_CASE("finite evaluator: hand-counted satisfiability on a tiny vocabulary") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);

  TermPtr x = Term::mkVar(0, i);
  FormulaPtr all = quant(Connective::Forall, 0, i,
                         Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true)));
  FormulaPtr someNot = quant(Connective::Exists, 0, i,
                             Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, false)));

  for (unsigned d = 1; d <= 3; ++d) {
    auto sat = FiniteSearch::formulasSat(prob.sig, {all}, d, kModelBudget);
    REQUIRE(sat.has_value());
    CHECK(*sat);
    auto unsat = FiniteSearch::formulasSat(prob.sig, {all, someNot}, d, kModelBudget);
    REQUIRE(unsat.has_value());
    CHECK(!*unsat);
  }

  // p over a two-element domain has 4 interpretations; a has 2 more.
  std::set<SymbolId> syms = {a, p};
  FiniteModel m(prob.sig, syms, 2);
  CHECK(m.countModels(1000) == 8);
  size_t seen = 1;
  while (m.advance()) {
    ++seen;
  }
  CHECK(seen == 8);

  CHECK(!FiniteSearch::formulasSat(prob.sig, {all}, 2, 3).has_value());
}

TEST_CASE("finite evaluator: clause truth is the universal closure") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  ClauseRegistry reg;

  TermPtr x = Term::mkVar(0, i);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  ClausePtr allP = reg.make({Literal::mkPred(prob.sig, p, {}, {x}, true)}, {});
  ClausePtr notA = reg.make({Literal::mkPred(prob.sig, p, {}, {ca}, false)}, {});
  ClausePtr excluded = reg.make({Literal::mkPred(prob.sig, p, {}, {x}, true),
                                 Literal::mkPred(prob.sig, p, {}, {x}, false)},
                                {});

  for (unsigned d = 1; d <= 3; ++d) {
    auto contra = FiniteSearch::clausesSat(prob.sig, {allP, notA}, d, kModelBudget);
    REQUIRE(contra.has_value());
    CHECK(!*contra);
    auto taut = FiniteSearch::clausesSat(prob.sig, {excluded}, d, kModelBudget);
    REQUIRE(taut.has_value());
    CHECK(*taut);
  }
}

TEST_CASE("finite evaluator: FOOL constructs evaluate natively") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId b = prob.sig.declare("b", SymbolKind::Function, 0, {}, i);
  SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  TermPtr cb = Term::mkApp(prob.sig, b, {}, {});

  // if-then-else picks the matching branch, so these are contradictions.
  TermPtr iteTrue = Term::mkApp(prob.sig, SYM_FOOL_ITE, {i}, {Term::trueTerm(), ca, cb});
  TermPtr iteFalse = Term::mkApp(prob.sig, SYM_FOOL_ITE, {i}, {Term::falseTerm(), ca, cb});
  FormulaPtr neTrue = Formula::mkAtom(Literal::mkEq(iteTrue, ca, false));
  FormulaPtr neFalse = Formula::mkAtom(Literal::mkEq(iteFalse, cb, false));

  // let binds the body occurrence, so f(a) is forced.
  TermPtr v = Term::mkVar(7, i);
  TermPtr let = Term::mkLet(v, ca, Term::mkApp(prob.sig, f, {}, {v}));
  FormulaPtr neLet = Formula::mkAtom(Literal::mkEq(let, Term::mkApp(prob.sig, f, {}, {ca}), false));

  for (unsigned d = 1; d <= 3; ++d) {
    for (auto& contradiction : {neTrue, neFalse, neLet}) {
      auto sat = FiniteSearch::formulasSat(prob.sig, {contradiction}, d, kModelBudget);
      REQUIRE(sat.has_value());
      CHECK(!*sat);
    }
  }
}

TEST_CASE("fool elimination: formulas without FOOL nodes come back untouched") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId q = prob.sig.declare("q", SymbolKind::Predicate, 0, {i, i}, nullptr);

  TermPtr x = Term::mkVar(0, i);
  TermPtr y = Term::mkVar(1, i);
  FormulaPtr f = quant(
      Connective::Forall, 0, i,
      Formula::mkBinary(Connective::Implies,
                        Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true)),
                        quant(Connective::Exists, 1, i,
                              Formula::mkAtom(Literal::mkPred(prob.sig, q, {}, {x, y}, true)))));
  CHECK(eliminateFool(f, prob.sig).get() == f.get());

  // Variable-only Boolean equalities are already in their final shape.
  TermPtr v = Term::mkVar(0, Term::boolSort());
  TermPtr w = Term::mkVar(1, Term::boolSort());
  FormulaPtr boolVars =
      quant(Connective::Forall, 0, Term::boolSort(),
            quant(Connective::Forall, 1, Term::boolSort(),
                  Formula::mkAtom(Literal::mkEq(v, w, true))));
  CHECK(eliminateFool(boolVars, prob.sig).get() == boolVars.get());
}

TEST_CASE("fool elimination: let bindings are inlined") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  SymbolId g = prob.sig.declare("g", SymbolKind::Function, 0, {i, i}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  TermPtr fa = Term::mkApp(prob.sig, f, {}, {ca});
  TermPtr v = Term::mkVar(9, i);

  FormulaPtr once = Formula::mkAtom(Literal::mkPred(
      prob.sig, p, {}, {Term::mkLet(v, ca, Term::mkApp(prob.sig, f, {}, {v}))}, true));
  FormulaPtr expectOnce = Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {fa}, true));
  CHECK(Formula::alphaEqual(eliminateFool(once, prob.sig), expectOnce));

  FormulaPtr twice = Formula::mkAtom(Literal::mkPred(
      prob.sig, p, {}, {Term::mkLet(v, fa, Term::mkApp(prob.sig, g, {}, {v, v}))}, true));
  FormulaPtr expectTwice = Formula::mkAtom(
      Literal::mkPred(prob.sig, p, {}, {Term::mkApp(prob.sig, g, {}, {fa, fa})}, true));
  CHECK(Formula::alphaEqual(eliminateFool(twice, prob.sig), expectTwice));
}

TEST_CASE("fool elimination: term if-then-else gets a guarded definition") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId b = prob.sig.declare("b", SymbolKind::Function, 0, {}, i);
  SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId bc = prob.sig.declare("bc", SymbolKind::Predicate, 0, {}, nullptr);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  TermPtr cb = Term::mkApp(prob.sig, b, {}, {});
  TermPtr cond = Term::mkApp(prob.sig, bc, {}, {});

  TermPtr ite = Term::mkApp(prob.sig, SYM_FOOL_ITE, {i}, {cond, ca, cb});
  FormulaPtr in = Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {ite}, true));
  FormulaPtr out = eliminateFool(in, prob.sig);

  CHECK(!out->hasFool());
  CHECK(boolEqAtomsCanonical(out));
  auto g0 = prob.sig.lookup("sG0");
  REQUIRE(g0.has_value());
  CHECK(prob.sig[*g0].introduced);
  CHECK(prob.sig[*g0].arity() == 0);

  addFormula(prob, in);
  Problem after;
  after.sig = prob.sig;
  addFormula(after, out);
  for (unsigned d = 1; d <= 3; ++d) {
    auto pre = FiniteSearch::formulasSat(prob.sig, {in}, d, kModelBudget);
    auto post = FiniteSearch::formulasSat(prob.sig, {out}, d, kModelBudget);
    REQUIRE(pre.has_value());
    REQUIRE(post.has_value());
    CHECK(*pre == *post);
  }

  // A variable below the branches widens the definition to a function.
  TermPtr x = Term::mkVar(0, i);
  TermPtr fx = Term::mkApp(prob.sig, f, {}, {x});
  TermPtr varIte = Term::mkApp(prob.sig, SYM_FOOL_ITE, {i}, {cond, fx, cb});
  FormulaPtr varIn = quant(Connective::Forall, 0, i,
                           Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {varIte}, true)));
  FormulaPtr varOut = eliminateFool(varIn, prob.sig);
  CHECK(!varOut->hasFool());
  auto g1 = prob.sig.lookup("sG1");
  REQUIRE(g1.has_value());
  CHECK(prob.sig[*g1].arity() == 1);
}

TEST_CASE("fool elimination: boolean arguments split on their value") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  const TermPtr& o = Term::boolSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId h = prob.sig.declare("h", SymbolKind::Function, 0, {o}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId bc = prob.sig.declare("bc", SymbolKind::Predicate, 0, {}, nullptr);
  TermPtr cond = Term::mkApp(prob.sig, bc, {}, {});
  (void)a;

  FormulaPtr in = Formula::mkAtom(
      Literal::mkPred(prob.sig, p, {}, {Term::mkApp(prob.sig, h, {}, {cond})}, true));
  FormulaPtr out = eliminateFool(in, prob.sig);

  CHECK(!out->hasFool());
  REQUIRE(out->is(Connective::Or));
  REQUIRE(out->subs().size() == 2);
  CHECK(out->sub(0)->is(Connective::And));
  CHECK(out->sub(1)->is(Connective::And));

  for (unsigned d = 1; d <= 3; ++d) {
    auto pre = FiniteSearch::formulasSat(prob.sig, {in}, d, kModelBudget);
    auto post = FiniteSearch::formulasSat(prob.sig, {out}, d, kModelBudget);
    REQUIRE(pre.has_value());
    REQUIRE(post.has_value());
    CHECK(*pre == *post);
  }
}

TEST_CASE("fool elimination: boolean equality atoms become equivalences") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId bc = prob.sig.declare("bc", SymbolKind::Predicate, 0, {}, nullptr);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  TermPtr pa = Term::mkApp(prob.sig, p, {}, {ca});
  TermPtr cond = Term::mkApp(prob.sig, bc, {}, {});

  FormulaPtr in = Formula::mkAtom(Literal::mkEq(pa, cond, true));
  FormulaPtr out = eliminateFool(in, prob.sig);
  CHECK(!out->hasFool());
  CHECK(boolEqAtomsCanonical(out));
  REQUIRE(out->is(Connective::Iff));
  CHECK(out->sub(0)->is(Connective::Atom));
  CHECK(out->sub(1)->is(Connective::Atom));

  for (unsigned d = 1; d <= 3; ++d) {
    auto pre = FiniteSearch::formulasSat(prob.sig, {in}, d, kModelBudget);
    auto post = FiniteSearch::formulasSat(prob.sig, {out}, d, kModelBudget);
    REQUIRE(pre.has_value());
    REQUIRE(post.has_value());
    CHECK(*pre == *post);
  }
}

TEST_CASE("clausify: an equivalence under a universal makes both directions") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId q = prob.sig.declare("q", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  addFormula(prob,
             quant(Connective::Forall, 0, i,
                   Formula::mkBinary(Connective::Iff,
                                     Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true)),
                                     Formula::mkAtom(Literal::mkPred(prob.sig, q, {}, {x}, true)))));

  ClauseRegistry reg;
  ClauseSet cs = clausify(prob, {}, reg);
  Kbo kbo(prob.sig);

  REQUIRE(cs.clauses.size() == 2);
  CHECK(someClauseMatches(cs,
                          {Literal::mkPred(prob.sig, p, {}, {x}, false),
                           Literal::mkPred(prob.sig, q, {}, {x}, true)},
                          prob.sig, kbo));
  CHECK(someClauseMatches(cs,
                          {Literal::mkPred(prob.sig, p, {}, {x}, true),
                           Literal::mkPred(prob.sig, q, {}, {x}, false)},
                          prob.sig, kbo));
  CHECK(cs.skolems.empty());
}

TEST_CASE("clausify: an existential becomes a skolem constant") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  addFormula(prob, quant(Connective::Exists, 0, i,
                         Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true))));

  ClauseRegistry reg;
  ClauseSet cs = clausify(prob, {}, reg);
  Kbo kbo(prob.sig);

  REQUIRE(cs.clauses.size() == 1);
  REQUIRE(cs.skolems.size() == 1);
  const SkolemEntry& sk = cs.skolems[0];
  CHECK(prob.sig[sk.symbol].name == "\xcf\x83\x30");
  CHECK(prob.sig[sk.symbol].skolem);
  CHECK(prob.sig[sk.symbol].arity() == 0);
  CHECK(sk.formulaIndex == 0);
  CHECK(Term::equal(sk.varSort, i));

  TermPtr skc = Term::mkApp(prob.sig, sk.symbol, {}, {});
  CHECK(clauseMatches(cs.clauses[0], {Literal::mkPred(prob.sig, p, {}, {skc}, true)}, prob.sig,
                      kbo));
  CHECK(cs.clauses[0]->derivation().rule == Rule::Cnf);
  CHECK(cs.clauses[0]->derivation().parents == std::vector<unsigned>{0});
}

TEST_CASE("clausify: miniscoping keeps skolems independent of idle universals") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId u = prob.sig.declare("u", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  TermPtr y = Term::mkVar(1, i);

  // The existential body never mentions x, so the skolem needs no argument.
  addFormula(prob,
             quant(Connective::Forall, 0, i,
                   quant(Connective::Exists, 1, i,
                         Formula::mkJunction(
                             Connective::Or,
                             {Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true)),
                              Formula::mkAtom(Literal::mkPred(prob.sig, u, {}, {y}, true))}))));

  ClauseRegistry reg;
  ClauseSet cs = clausify(prob, {}, reg);
  Kbo kbo(prob.sig);

  REQUIRE(cs.skolems.size() == 1);
  CHECK(prob.sig[cs.skolems[0].symbol].arity() == 0);
  REQUIRE(cs.clauses.size() == 1);
  TermPtr skc = Term::mkApp(prob.sig, cs.skolems[0].symbol, {}, {});
  CHECK(clauseMatches(cs.clauses[0],
                      {Literal::mkPred(prob.sig, p, {}, {x}, true),
                       Literal::mkPred(prob.sig, u, {}, {skc}, true)},
                      prob.sig, kbo));

  EquisatTally tally;
  checkEquisat(prob, {prob.formulas[0].formula}, cs, tally);
  CHECK(tally.checked[2] > 0);
}

TEST_CASE("clausify: wide distributions get a naming definition") {
  const TermPtr& i = Term::indSort();
  auto makeJunctions = [&](Problem& prob, int width) {
    SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
    SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
    SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
    SymbolId q = prob.sig.declare("q", SymbolKind::Predicate, 0, {i}, nullptr);
    auto tower = [&](int n) {
      TermPtr t = Term::mkApp(prob.sig, a, {}, {});
      for (int k = 0; k < n; ++k) {
        t = Term::mkApp(prob.sig, f, {}, {t});
      }
      return t;
    };
    std::vector<FormulaPtr> ls, rs;
    for (int k = 0; k < width; ++k) {
      ls.push_back(Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {tower(k)}, true)));
      rs.push_back(Formula::mkAtom(Literal::mkPred(prob.sig, q, {}, {tower(k)}, true)));
    }
    addFormula(prob, Formula::mkJunction(Connective::Or,
                                         {Formula::mkJunction(Connective::And, std::move(ls)),
                                          Formula::mkJunction(Connective::And, std::move(rs))}));
  };

  // Five conjuncts a side would make 25 clauses; naming one side caps it.
  Problem wide;
  makeJunctions(wide, 5);
  ClauseRegistry reg1;
  ClauseSet wideCs = clausify(wide, {}, reg1);
  CHECK(wideCs.clauses.size() == 10);
  REQUIRE(wide.sig.lookup("sP0").has_value());
  CHECK(!wide.sig.lookup("sP1").has_value());
  CHECK(wide.sig[*wide.sig.lookup("sP0")].introduced);
  int defs = 0;
  for (auto& c : wideCs.clauses) {
    if (c->derivation().info == "definition of sP0") {
      ++defs;
    }
    CHECK(c->derivation().rule == Rule::Cnf);
    CHECK(c->derivation().parents == std::vector<unsigned>{0});
  }
  CHECK(defs == 5);

  EquisatTally tally;
  checkEquisat(wide, {wide.formulas[0].formula}, wideCs, tally);
  CHECK(tally.checked[1] > 0);
  CHECK(tally.checked[2] > 0);

  // Four a side stays under the factor and distributes plainly.
  Problem narrow;
  makeJunctions(narrow, 4);
  ClauseRegistry reg2;
  ClauseSet narrowCs = clausify(narrow, {}, reg2);
  CHECK(narrowCs.clauses.size() == 16);
  CHECK(!narrow.sig.lookup("sP0").has_value());

  // A lone disjunct multiplies nothing, so width five alone is kept.
  Problem single;
  SymbolId a = single.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId f = single.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  SymbolId p = single.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId q = single.sig.declare("q", SymbolKind::Predicate, 0, {i}, nullptr);
  std::vector<FormulaPtr> ls;
  TermPtr t = Term::mkApp(single.sig, a, {}, {});
  for (int k = 0; k < 5; ++k) {
    ls.push_back(Formula::mkAtom(Literal::mkPred(single.sig, p, {}, {t}, true)));
    t = Term::mkApp(single.sig, f, {}, {t});
  }
  addFormula(single,
             Formula::mkJunction(Connective::Or,
                                 {Formula::mkJunction(Connective::And, std::move(ls)),
                                  Formula::mkAtom(Literal::mkPred(single.sig, q, {}, {t}, true))}));
  ClauseRegistry reg3;
  ClauseSet singleCs = clausify(single, {}, reg3);
  CHECK(singleCs.clauses.size() == 5);
  CHECK(!single.sig.lookup("sP0").has_value());
}

TEST_CASE("clausify: tautologies and trivial literals fold away") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  TermPtr fx = Term::mkApp(prob.sig, f, {}, {x});

  // p(x) | ~p(x) is a tautology and makes no clause at all.
  addFormula(prob, quant(Connective::Forall, 0, i,
                         Formula::mkJunction(
                             Connective::Or,
                             {Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true)),
                              Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, false))})));
  // f(x) = f(x) is reflexively true.
  addFormula(prob, quant(Connective::Forall, 0, i,
                         Formula::mkAtom(Literal::mkEq(fx, fx, true))));
  // A ground arithmetic truth evaluates away entirely.
  addFormula(prob, Formula::mkAtom(Literal::mkEq(
                       Term::mkNum(Rational(2), true),
                       Term::mkApp(prob.sig, SYM_ADD_I, {},
                                   {Term::mkNum(Rational(1), true), Term::mkNum(Rational(1), true)}),
                       true)));
  // The false reflexivity disappears from the clause, keeping p(x).
  addFormula(prob, quant(Connective::Forall, 0, i,
                         Formula::mkJunction(
                             Connective::Or,
                             {Formula::mkAtom(Literal::mkPred(prob.sig, p, {}, {x}, true)),
                              Formula::mkAtom(Literal::mkEq(fx, fx, false))})));

  ClauseRegistry reg;
  ClauseSet cs = clausify(prob, {}, reg);
  Kbo kbo(prob.sig);
  REQUIRE(cs.clauses.size() == 1);
  CHECK(clauseMatches(cs.clauses[0], {Literal::mkPred(prob.sig, p, {}, {x}, true)}, prob.sig,
                      kbo));
}

TEST_CASE("clausify: the list sum problem produces its five unit clauses") {
  Problem p = parseTptpString(kSumTptp);
  negateConjecture(p);
  ClauseRegistry reg;
  ClauseSet cs = clausify(p, {}, reg);
  Signature& sig = p.sig;
  Kbo kbo(sig);

  REQUIRE(cs.clauses.size() == 5);
  for (auto& c : cs.clauses) {
    REQUIRE(c->size() == 1);
    CHECK(c->derivation().rule == Rule::Cnf);
  }
  for (unsigned k = 0; k < 5; ++k) {
    CHECK(cs.clauses[k]->derivation().parents == std::vector<unsigned>{k});
    CHECK(cs.clauses[k]->goalLineage() == (k == 4));
  }

  const TermPtr& re = Term::realSort();
  SymbolId list = *sig.lookup("list");
  SymbolId nil = *sig.lookup("nil");
  SymbolId cons = *sig.lookup("cons");
  SymbolId sum = *sig.lookup("sum");
  SymbolId concat = *sig.lookup("concat");
  auto listOf = [&](const TermPtr& s) { return Term::mkApp(sig, list, {s}, {}); };
  auto sumOf = [&](TermPtr t) { return Term::mkApp(sig, sum, {}, {std::move(t)}); };
  auto plus = [&](TermPtr l, TermPtr r) {
    return Term::mkApp(sig, SYM_ADD_R, {}, {std::move(l), std::move(r)});
  };
  TermPtr listR = listOf(re);
  TermPtr nilR = Term::mkApp(sig, nil, {re}, {});

  CHECK(clauseMatches(cs.clauses[0], {Literal::mkEq(sumOf(nilR), Term::zero(false), true)}, sig,
                      kbo));

  TermPtr x = Term::mkVar(1, re);
  TermPtr xs = Term::mkVar(2, listR);
  TermPtr ys = Term::mkVar(3, listR);
  CHECK(clauseMatches(cs.clauses[1],
                      {Literal::mkEq(sumOf(Term::mkApp(sig, cons, {re}, {x, xs})),
                                     plus(x, sumOf(xs)), true)},
                      sig, kbo));

  TermPtr A = Term::mkSortVar(0);
  TermPtr listA = listOf(A);
  TermPtr xa = Term::mkVar(1, A);
  TermPtr xsa = Term::mkVar(2, listA);
  TermPtr ysa = Term::mkVar(3, listA);
  CHECK(clauseMatches(
      cs.clauses[2],
      {Literal::mkEq(Term::mkApp(sig, concat, {A}, {Term::mkApp(sig, nil, {A}, {}), ysa}), ysa,
                     true)},
      sig, kbo));
  CHECK(clauseMatches(
      cs.clauses[3],
      {Literal::mkEq(
          Term::mkApp(sig, concat, {A}, {Term::mkApp(sig, cons, {A}, {xa, xsa}), ysa}),
          Term::mkApp(sig, cons, {A}, {xa, Term::mkApp(sig, concat, {A}, {xsa, ysa})}), true)},
      sig, kbo));

  // The negated conjecture names the two lists by skolem constants.
  REQUIRE(cs.skolems.size() == 2);
  checkSkolemTable(cs, sig);
  for (auto& sk : cs.skolems) {
    CHECK(sk.formulaIndex == 4);
    CHECK(Term::equal(sk.varSort, listR));
    CHECK(sig[sk.symbol].arity() == 0);
  }
  TermPtr s0 = Term::mkApp(sig, cs.skolems[0].symbol, {}, {});
  TermPtr s1 = Term::mkApp(sig, cs.skolems[1].symbol, {}, {});
  bool direct = clauseMatches(
      cs.clauses[4],
      {Literal::mkEq(plus(sumOf(s0), sumOf(s1)), sumOf(Term::mkApp(sig, concat, {re}, {s0, s1})),
                     false)},
      sig, kbo);
  bool swapped = clauseMatches(
      cs.clauses[4],
      {Literal::mkEq(plus(sumOf(s1), sumOf(s0)), sumOf(Term::mkApp(sig, concat, {re}, {s1, s0})),
                     false)},
      sig, kbo);
  CHECK((direct || swapped));
}

TEST_CASE("blocked clause elimination: worked examples") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId q = prob.sig.declare("q", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  ClauseRegistry reg;

  // {p(x) | q(x), ~q(y)}: p(x) has no resolution partner at all, which
  // blocks it vacuously, and the removals cascade to the empty set.
  ClauseSet cascade;
  cascade.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {x}, true),
                                      Literal::mkPred(prob.sig, q, {}, {x}, true)},
                                     {}));
  cascade.clauses.push_back(reg.make({Literal::mkPred(prob.sig, q, {}, {x}, false)}, {}));
  CHECK(blockedClauseElimination(cascade).clauses.empty());

  // {p(a), ~p(a)}: the resolvent is the empty clause, not a tautology.
  ClauseSet ground;
  ground.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {ca}, true)}, {}));
  ground.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {ca}, false)}, {}));
  CHECK(blockedClauseElimination(ground).clauses.size() == 2);

  // Equality literals turn the pass off entirely.
  ClauseSet eq;
  eq.clauses.push_back(reg.make({Literal::mkEq(ca, ca, false)}, {}));
  eq.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {x}, true)}, {}));
  CHECK(blockedClauseElimination(eq).clauses.size() == 2);

  // So do arithmetic atoms.
  ClauseSet arith;
  arith.clauses.push_back(reg.make(
      {Literal::mkPred(prob.sig, SYM_LESS_I, {},
                       {Term::mkNum(Rational(0), true), Term::mkNum(Rational(1), true)}, true)},
      {}));
  CHECK(blockedClauseElimination(arith).clauses.size() == 1);

  ClauseSet empty;
  CHECK(blockedClauseElimination(empty).clauses.empty());
}

TEST_CASE("blocked clause elimination: renamed self copies count as partners") {
  // In {~p(x) | p(f(x))} the first literal resolves against a renamed
  // copy of the clause itself and the resolvent is not a tautology, so
  // nothing may be removed.
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  TermPtr fx = Term::mkApp(prob.sig, f, {}, {x});
  ClauseRegistry reg;

  ClauseSet cs;
  cs.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {x}, false),
                                 Literal::mkPred(prob.sig, p, {}, {fx}, true)},
                                {}));
  ClauseSet out = blockedClauseElimination(cs);
  CHECK(out.clauses.size() == 1);
}

TEST_CASE("trim unused: pure predicates cascade away") {
  Problem prob;
  const TermPtr& i = Term::indSort();
  SymbolId a = prob.sig.declare("a", SymbolKind::Function, 0, {}, i);
  SymbolId b = prob.sig.declare("b", SymbolKind::Function, 0, {}, i);
  SymbolId f = prob.sig.declare("f", SymbolKind::Function, 0, {i}, i);
  SymbolId p = prob.sig.declare("p", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId q = prob.sig.declare("q", SymbolKind::Predicate, 0, {i}, nullptr);
  SymbolId r = prob.sig.declare("r", SymbolKind::Predicate, 0, {i}, nullptr);
  TermPtr x = Term::mkVar(0, i);
  TermPtr ca = Term::mkApp(prob.sig, a, {}, {});
  TermPtr cb = Term::mkApp(prob.sig, b, {}, {});
  ClauseRegistry reg;

  // p occurs only positively; q occurs in both polarities and stays.
  ClauseSet cs;
  cs.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {ca}, true)}, {}));
  cs.clauses.push_back(reg.make({Literal::mkPred(prob.sig, q, {}, {cb}, true)}, {}));
  cs.clauses.push_back(reg.make({Literal::mkPred(prob.sig, q, {}, {x}, false)}, {}));
  ClauseSet out = trimUnused(cs);
  REQUIRE(out.clauses.size() == 2);
  for (auto& c : out.clauses) {
    CHECK(c->literals()[0].predicate() == q);
  }

  // Removing a clause can strand another predicate; the census repeats.
  ClauseSet chain;
  chain.clauses.push_back(reg.make({Literal::mkPred(prob.sig, p, {}, {ca}, true),
                                    Literal::mkPred(prob.sig, q, {}, {ca}, false)},
                                   {}));
  chain.clauses.push_back(reg.make({Literal::mkPred(prob.sig, q, {}, {cb}, true)}, {}));
  CHECK(trimUnused(chain).clauses.empty());

  // Both polarities of r in one clause protect it.
  TermPtr fx = Term::mkApp(prob.sig, f, {}, {x});
  ClauseSet loop;
  loop.clauses.push_back(reg.make({Literal::mkPred(prob.sig, r, {}, {x}, false),
                                   Literal::mkPred(prob.sig, r, {}, {fx}, true)},
                                  {}));
  CHECK(trimUnused(loop).clauses.size() == 1);
}

TEST_CASE("clause set equisatisfiability holds end to end on random formulas") {
  EquisatTally tally;
  int rounds = 0;
  for (uint64_t seed = 1; seed <= 120; ++seed) {
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 11);
    FoGen gen(rng);
    std::vector<FormulaPtr> inputs;
    int n = rng.range(1, 3);
    for (int k = 0; k < n; ++k) {
      std::vector<TermPtr> scope;
      FormulaPtr f = gen.formula(rng.range(2, 4), scope);
      inputs.push_back(f);
      addFormula(gen.prob, f);
    }

    ClauseRegistry reg;
    ClauseSet cs = clausify(gen.prob, {}, reg);
    checkSkolemTable(cs, gen.prob.sig);
    for (auto& c : cs.clauses) {
      CHECK(c->derivation().rule == Rule::Cnf);
      for (auto& l : c->literals()) {
        CHECK(!l.hasFool());
      }
    }
    cs = trimUnused(blockedClauseElimination(cs));
    checkEquisat(gen.prob, inputs, cs, tally);
    ++rounds;
  }
  CHECK(rounds == 120);
  CHECK(tally.checked[1] >= 100);
  CHECK(tally.checked[2] >= 60);
  CHECK(tally.checked[3] >= 15);
}

TEST_CASE("fool elimination preserves satisfiability on random formulas") {
  EquisatTally tally;
  int d2Eliminated = 0;
  for (uint64_t seed = 1; seed <= 80; ++seed) {
    Rng rng(seed * 0x2545f4914f6cdd1dULL + 5);
    FoolGen gen(rng);
    FormulaPtr input = gen.formula(rng.range(2, 3));
    FormulaPtr flat = eliminateFool(input, gen.prob.sig);
    CHECK(!flat->hasFool());
    CHECK(boolEqAtomsCanonical(flat));

    for (unsigned d = 1; d <= 2; ++d) {
      auto pre = FiniteSearch::formulasSat(gen.prob.sig, {input}, d, kModelBudget);
      auto post = FiniteSearch::formulasSat(gen.prob.sig, {flat}, d, kModelBudget);
      if (!pre || !post) {
        continue;
      }
      INFO("domain size ", d, "\n", printFormula(gen.prob.sig, input, Dialect::Human));
      CHECK(*pre == *post);
      if (d == 2) {
        ++d2Eliminated;
      }
    }

    addFormula(gen.prob, input);
    ClauseRegistry reg;
    ClauseSet cs = clausify(gen.prob, {}, reg);
    for (auto& c : cs.clauses) {
      for (auto& l : c->literals()) {
        CHECK(!l.hasFool());
      }
    }
    cs = trimUnused(blockedClauseElimination(cs));
    checkEquisat(gen.prob, {input}, cs, tally);
  }
  CHECK(d2Eliminated >= 40);
  CHECK(tally.checked[1] >= 60);
  CHECK(tally.checked[2] >= 30);
}

TEST_CASE("blocked clause elimination and trimming preserve satisfiability") {
  // Equality-free random sets, so the blocked clause pass actually runs.
  EquisatTally bceTally;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 101);
    FoGen gen(rng);
    gen.useEq = false;
    std::vector<FormulaPtr> inputs;
    int n = rng.range(1, 3);
    for (int k = 0; k < n; ++k) {
      std::vector<TermPtr> scope;
      FormulaPtr f = gen.formula(rng.range(2, 3), scope);
      inputs.push_back(f);
      addFormula(gen.prob, f);
    }
    ClauseRegistry reg;
    ClauseSet base = clausify(gen.prob, {}, reg);
    bool hasEq = false;
    for (auto& c : base.clauses) {
      for (auto& l : c->literals()) {
        hasEq = hasEq || l.isEquality();
      }
    }
    CHECK(!hasEq);
    ClauseSet trimmed = trimUnused(blockedClauseElimination(base));
    // Compare the clause sets directly, before against after.
    for (unsigned d = 1; d <= 3; ++d) {
      auto pre = FiniteSearch::clausesSat(gen.prob.sig, base.clauses, d, kModelBudget);
      auto post = FiniteSearch::clausesSat(gen.prob.sig, trimmed.clauses, d, kModelBudget);
      if (!pre || !post) {
        continue;
      }
      INFO("domain size ", d, "\n", describeRound(gen.prob, base));
      CHECK(*pre == *post);
      ++bceTally.checked[d];
    }
  }
  CHECK(bceTally.checked[2] >= 30);
}
