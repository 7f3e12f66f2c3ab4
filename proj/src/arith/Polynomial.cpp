#include "arith/Polynomial.hpp"

#include <algorithm>

namespace peregrine {

Polynomial Polynomial::fromTerm(const TermPtr& t) {
  PER_ASSERT(t->sort().get() == Term::realSort().get()
          || t->sort().get() == Term::intSort().get());
  Polynomial p(t->sort().get() == Term::intSort().get());
  p.collect(t, Rational(1));
  return p;
}

Polynomial Polynomial::constant(Rational c, bool integer) {
  Polynomial p(integer);
  p._const = std::move(c);
  return p;
}

Polynomial Polynomial::atom(TermPtr t) {
  Polynomial p(t->sort().get() == Term::intSort().get());
  p.addEntry(t, Rational(1));
  return p;
}

void Polynomial::addEntry(const TermPtr& atom, const Rational& c) {
  if (c == 0) {
    return;
  }
  auto it = _entries.find(atom);
  if (it == _entries.end()) {
    _entries.emplace(atom, c);
    return;
  }
  it->second += c;
  if (it->second == 0) {
    _entries.erase(it);
  }
}

void Polynomial::collect(const TermPtr& t, const Rational& coeff) {
  if (t->isNum()) {
    _const += coeff * t->number();
    return;
  }
  if (t->isApp()) {
    SymbolId f = t->symbol();
    if (f == SYM_ADD_R || f == SYM_ADD_I) {
      collect(t->args()[0], coeff);
      collect(t->args()[1], coeff);
      return;
    }
    if (f == SYM_NEG_R || f == SYM_NEG_I) {
      collect(t->args()[0], -coeff);
      return;
    }
    if (f == SYM_MUL_R || f == SYM_MUL_I) {
      const TermPtr& a = t->args()[0];
      const TermPtr& b = t->args()[1];
      if (a->isNum()) {
        collect(b, coeff * a->number());
        return;
      }
      if (b->isNum()) {
        collect(a, coeff * b->number());
        return;
      }
      // Nonlinear product: treated as an atom of its own.
    }
  }
  addEntry(t, coeff);
}

Rational Polynomial::coeffOf(const TermPtr& atom) const {
  auto it = _entries.find(atom);
  return it == _entries.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::plus(const Polynomial& o) const {
  PER_ASSERT(_int == o._int);
  Polynomial r = *this;
  r._const += o._const;
  for (auto& [a, c] : o._entries) {
    r.addEntry(a, c);
  }
  return r;
}

Polynomial Polynomial::minus(const Polynomial& o) const {
  return plus(o.negated());
}

Polynomial Polynomial::scaled(const Rational& k) const {
  Polynomial r(_int);
  if (k == 0) {
    return r;
  }
  r._const = _const * k;
  for (auto& [a, c] : _entries) {
    r._entries.emplace(a, c * k);
  }
  return r;
}

bool Polynomial::isPlainAtom() const {
  return _entries.size() == 1 && _const == 0 && _entries.begin()->second == 1;
}

TermPtr Polynomial::render(const Signature& sig) const {
  if (_entries.empty()) {
    return Term::mkNum(_const, _int);
  }
  std::vector<std::pair<TermPtr, Rational>> parts(_entries.begin(), _entries.end());
  std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
    if (x.first->weight() != y.first->weight()) {
      return x.first->weight() > y.first->weight();
    }
    return Term::cmp(*x.first, *y.first) < 0;
  });
  SymbolId add = Signature::addFor(_int);
  SymbolId neg = Signature::negFor(_int);
  SymbolId mul = Signature::mulFor(_int);
  TermPtr acc;
  for (auto& [atom, c] : parts) {
    TermPtr piece;
    if (c == 1) {
      piece = atom;
    } else if (c == -1) {
      piece = Term::mkApp(sig, neg, {}, {atom});
    } else {
      piece = Term::mkApp(sig, mul, {}, {Term::mkNum(c, _int), atom});
    }
    acc = acc ? Term::mkApp(sig, add, {}, {acc, piece}) : piece;
  }
  if (_const != 0) {
    acc = Term::mkApp(sig, add, {}, {acc, Term::mkNum(_const, _int)});
  }
  return acc;
}

Polynomial Polynomial::substituteAtom(const TermPtr& atom, const Polynomial& repl) const {
  PER_ASSERT(_int == repl._int);
  Polynomial r(_int);
  r._const = _const;
  for (auto& [a, c] : _entries) {
    if (Term::equal(a, atom)) {
      r = r.plus(repl.scaled(c));
    } else {
      r.addEntry(a, c);
    }
  }
  return r;
}

Polynomial Polynomial::applySubst(const Substitution& s) const {
  Polynomial r(_int);
  r._const = _const;
  for (auto& [a, c] : _entries) {
    TermPtr na = s.apply(a);
    // The image may expose arithmetic structure (a variable mapped to a
    // sum, say); reflatten it into the result.
    r = r.plus(fromTerm(na).scaled(c));
  }
  return r;
}

TermPtr Polynomial::leadingAtom(const Kbo& kbo) const {
  PER_ASSERT(!_entries.empty());
  TermPtr best;
  for (auto& [a, c] : _entries) {
    (void)c;
    if (!best) {
      best = a;
      continue;
    }
    Order o = kbo.compare(a, best);
    if (o == Order::Greater) {
      best = a;
    } else if (o == Order::Incomparable && Term::cmp(*a, *best) > 0) {
      best = a;
    }
  }
  return best;
}

bool Polynomial::atomStrictlyMaximal(const Kbo& kbo, const TermPtr& atom) const {
  for (auto& [a, c] : _entries) {
    (void)c;
    if (Term::equal(a, atom)) {
      continue;
    }
    if (kbo.compare(atom, a) != Order::Greater) {
      return false;
    }
  }
  return true;
}

Polynomial Polynomial::scaledToIntegers() const {
  if (_entries.empty() && _const == 0) {
    return *this;
  }
  Integer lcm = 1;
  auto foldDen = [&](const Rational& q) {
    Integer d = denominator(q);
    lcm = boost::multiprecision::lcm(lcm, d);
  };
  foldDen(_const);
  for (auto& [a, c] : _entries) {
    (void)a;
    foldDen(c);
  }
  Integer gcd = 0;
  auto foldNum = [&](const Rational& q) {
    Integer n = numerator(q) * (lcm / denominator(q));
    gcd = boost::multiprecision::gcd(gcd, boost::multiprecision::abs(n));
  };
  foldNum(_const);
  for (auto& [a, c] : _entries) {
    (void)a;
    foldNum(c);
  }
  PER_ASSERT(gcd != 0);
  return scaled(Rational(lcm, gcd));
}

} // namespace peregrine
