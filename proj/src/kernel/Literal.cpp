#include "kernel/Literal.hpp"

#include "kernel/Unify.hpp"

namespace peregrine {

Literal Literal::mkPred(const Signature& sig, SymbolId p, std::vector<TermPtr> sortArgs,
                        std::vector<TermPtr> args, bool positive) {
  const SymbolDecl& d = sig[p];
  PER_ASSERT_MSG(d.kind == SymbolKind::Predicate, d.name + " is not a predicate");
  PER_ASSERT(sortArgs.size() == d.sortArity && args.size() == d.arity());
  for (size_t i = 0; i < args.size(); ++i) {
    TermPtr expected = Term::instantiatePattern(d.argSorts[i], sortArgs);
    PER_ASSERT_MSG(Term::equal(args[i]->sort(), expected),
                   "ill-sorted argument of predicate " + d.name);
  }
  Literal l;
  l._positive = positive;
  l._eq = false;
  l._pred = p;
  l._sortArgs = std::move(sortArgs);
  l._args = std::move(args);
  l.finalize();
  return l;
}

Literal Literal::mkEq(TermPtr lhs, TermPtr rhs, bool positive) {
  PER_ASSERT(!lhs->isSortTerm() && !rhs->isSortTerm());
  PER_ASSERT_MSG(Term::equal(lhs->sort(), rhs->sort()), "equality across different sorts");
  Literal l;
  l._positive = positive;
  l._eq = true;
  l._sortArgs = {lhs->sort()};
  l._args = {std::move(lhs), std::move(rhs)};
  l.finalize();
  return l;
}

void Literal::finalize() {
  _ground = true;
  for (auto& s : _sortArgs) {
    _ground = _ground && s->ground();
  }
  for (auto& a : _args) {
    _ground = _ground && a->ground();
  }
  if (_eq) {
    _weight = 1 + _args[0]->weight() + _args[1]->weight();
    // Commutative combination keeps the hash orientation-insensitive.
    size_t hl = _args[0]->hash();
    size_t hr = _args[1]->hash();
    _hash = hashCombine(hashCombine(0xeacu, std::min(hl, hr)), std::max(hl, hr));
  } else {
    _weight = 1;
    size_t h = hashCombine(0xbad6eu, _pred);
    for (auto& s : _sortArgs) {
      _weight += s->weight();
      h = hashCombine(h, s->hash());
    }
    for (auto& a : _args) {
      _weight += a->weight();
      h = hashCombine(h, a->hash());
    }
    _hash = h;
  }
}

Literal Literal::apply(const Substitution& s) const {
  if (_ground || s.empty()) {
    return *this;
  }
  Literal l = *this;
  for (auto& x : l._sortArgs) {
    x = s.apply(x);
  }
  for (auto& x : l._args) {
    x = s.apply(x);
  }
  l.finalize();
  return l;
}

bool Literal::sameAtom(const Literal& o) const {
  if (_eq != o._eq || _hash != o._hash) {
    return false;
  }
  if (_eq) {
    return (Term::equal(_args[0], o._args[0]) && Term::equal(_args[1], o._args[1]))
        || (Term::equal(_args[0], o._args[1]) && Term::equal(_args[1], o._args[0]));
  }
  if (_pred != o._pred) {
    return false;
  }
  for (size_t i = 0; i < _sortArgs.size(); ++i) {
    if (!Term::equal(_sortArgs[i], o._sortArgs[i])) {
      return false;
    }
  }
  for (size_t i = 0; i < _args.size(); ++i) {
    if (!Term::equal(_args[i], o._args[i])) {
      return false;
    }
  }
  return true;
}

void Literal::collectVars(std::map<unsigned, TermPtr>& out) const {
  for (auto& s : _sortArgs) {
    s->collectVars(out);
  }
  for (auto& a : _args) {
    a->collectVars(out);
  }
}

bool Literal::hasFool() const {
  for (auto& a : _args) {
    if (a->hasFool()) {
      return true;
    }
  }
  return false;
}

TermPtr Literal::atomTerm(const Signature& sig) const {
  PER_ASSERT(!_eq);
  return Term::mkApp(sig, _pred, _sortArgs, _args);
}

bool Literal::isArithmetic() const {
  if (_eq) {
    const TermPtr& s = _sortArgs[0];
    return s.get() == Term::realSort().get() || s.get() == Term::intSort().get();
  }
  return Signature::isArithPredicate(_pred);
}

bool Literal::arithIsInt() const {
  PER_ASSERT(isArithmetic());
  if (_eq) {
    return _sortArgs[0].get() == Term::intSort().get();
  }
  return _pred == SYM_LESS_I || _pred == SYM_LEQ_I;
}

int Literal::cmp(const Literal& a, const Literal& b) {
  if (a._positive != b._positive) {
    return a._positive ? 1 : -1;
  }
  if (a._eq != b._eq) {
    return a._eq ? -1 : 1;
  }
  if (a._eq) {
    // Compare as unordered pairs so the order agrees with symmetric equality.
    const Term* amin = a._args[0].get();
    const Term* amax = a._args[1].get();
    if (Term::cmp(*amin, *amax) > 0) {
      std::swap(amin, amax);
    }
    const Term* bmin = b._args[0].get();
    const Term* bmax = b._args[1].get();
    if (Term::cmp(*bmin, *bmax) > 0) {
      std::swap(bmin, bmax);
    }
    int c = Term::cmp(*amin, *bmin);
    if (c != 0) {
      return c;
    }
    return Term::cmp(*amax, *bmax);
  }
  if (a._pred != b._pred) {
    return a._pred < b._pred ? -1 : 1;
  }
  for (size_t i = 0; i < a._sortArgs.size(); ++i) {
    int c = Term::cmp(*a._sortArgs[i], *b._sortArgs[i]);
    if (c != 0) {
      return c;
    }
  }
  for (size_t i = 0; i < a._args.size(); ++i) {
    int c = Term::cmp(*a._args[i], *b._args[i]);
    if (c != 0) {
      return c;
    }
  }
  return 0;
}

std::vector<Substitution> matchLiteral(const Literal& pattern, const Literal& target,
                                       const Substitution& seed, bool wantComplement) {
  std::vector<Substitution> out;
  bool targetPol = wantComplement ? !target.positive() : target.positive();
  if (pattern.positive() != targetPol || pattern.isEquality() != target.isEquality()) {
    return out;
  }
  if (!pattern.isEquality()) {
    if (pattern.predicate() != target.predicate()) {
      return out;
    }
    std::vector<std::pair<TermPtr, TermPtr>> pairs;
    for (size_t i = 0; i < pattern.sortArgs().size(); ++i) {
      pairs.emplace_back(pattern.sortArgs()[i], target.sortArgs()[i]);
    }
    for (size_t i = 0; i < pattern.args().size(); ++i) {
      pairs.emplace_back(pattern.args()[i], target.args()[i]);
    }
    if (auto s = matchTerms(pairs, seed)) {
      out.push_back(std::move(*s));
    }
    return out;
  }
  for (int flip = 0; flip < 2; ++flip) {
    const TermPtr& tl = flip ? target.rhs() : target.lhs();
    const TermPtr& tr = flip ? target.lhs() : target.rhs();
    if (auto s = matchTerms({{pattern.lhs(), tl}, {pattern.rhs(), tr}}, seed)) {
      out.push_back(std::move(*s));
    }
    if (Term::equal(target.lhs(), target.rhs())) {
      break;
    }
  }
  return out;
}

std::vector<Substitution> unifyAtoms(const Literal& a, const Literal& b) {
  std::vector<Substitution> out;
  if (a.isEquality() != b.isEquality()) {
    return out;
  }
  if (!a.isEquality()) {
    if (a.predicate() != b.predicate()) {
      return out;
    }
    std::vector<std::pair<TermPtr, TermPtr>> pairs;
    for (size_t i = 0; i < a.sortArgs().size(); ++i) {
      pairs.emplace_back(a.sortArgs()[i], b.sortArgs()[i]);
    }
    for (size_t i = 0; i < a.args().size(); ++i) {
      pairs.emplace_back(a.args()[i], b.args()[i]);
    }
    if (auto s = unify(pairs)) {
      out.push_back(std::move(*s));
    }
    return out;
  }
  for (int flip = 0; flip < 2; ++flip) {
    const TermPtr& bl = flip ? b.rhs() : b.lhs();
    const TermPtr& br = flip ? b.lhs() : b.rhs();
    if (auto s = unify({{a.lhs(), bl}, {a.rhs(), br}})) {
      out.push_back(std::move(*s));
    }
    if (Term::equal(b.lhs(), b.rhs())) {
      break;
    }
  }
  return out;
}

} // namespace peregrine
