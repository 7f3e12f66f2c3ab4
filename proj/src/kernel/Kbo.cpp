#include "kernel/Kbo.hpp"

namespace peregrine {

namespace {

void countVars(const TermPtr& t, int delta, std::map<unsigned, int>& counts) {
  if (t->ground()) {
    return;
  }
  if (t->isVar()) {
    counts[t->varId()] += delta;
    if (!t->isSortVar()) {
      countVars(t->sort(), delta, counts);
    }
    return;
  }
  for (auto& s : t->sortArgs()) {
    countVars(s, delta, counts);
  }
  for (auto& a : t->args()) {
    countVars(a, delta, counts);
  }
}

} // namespace

int Kbo::headCmp(const Term& a, const Term& b) const {
  bool an = a.isNum();
  bool bn = b.isNum();
  if (an && bn) {
    // Value order; int numerals below real ones on equal value so the
    // order stays total across the two numeral families.
    if (a.number() != b.number()) {
      return a.number() < b.number() ? -1 : 1;
    }
    bool ai = a.sort().get() == Term::intSort().get();
    bool bi = b.sort().get() == Term::intSort().get();
    if (ai == bi) {
      return 0;
    }
    return ai ? -1 : 1;
  }
  if (an != bn) {
    return an ? -1 : 1;
  }
  return _sig->precedenceCmp(a.symbol(), b.symbol());
}

Order Kbo::compare(const TermPtr& a, const TermPtr& b) const {
  if (Term::equal(a, b)) {
    return Order::Equal;
  }
  std::map<unsigned, int> counts;
  countVars(a, 1, counts);
  countVars(b, -1, counts);
  bool aExtra = false;
  bool bExtra = false;
  for (auto& [v, c] : counts) {
    (void)v;
    if (c > 0) {
      aExtra = true;
    }
    if (c < 0) {
      bExtra = true;
    }
  }
  auto clamp = [&](Order o) {
    if (o == Order::Greater && bExtra) {
      return Order::Incomparable;
    }
    if (o == Order::Less && aExtra) {
      return Order::Incomparable;
    }
    return o;
  };
  if (a->weight() != b->weight()) {
    return clamp(a->weight() > b->weight() ? Order::Greater : Order::Less);
  }
  if (a->isVar() || b->isVar()) {
    // Equal weight with a variable on one side: either two distinct
    // variables or a variable against a weight-1 non-variable; never
    // ordered under instance stability.
    return Order::Incomparable;
  }
  int hc = headCmp(*a, *b);
  if (hc != 0) {
    return clamp(hc > 0 ? Order::Greater : Order::Less);
  }
  // Same head: lexicographic over sort arguments then arguments.
  for (size_t i = 0; i < a->sortArgs().size(); ++i) {
    Order o = compare(a->sortArgs()[i], b->sortArgs()[i]);
    if (o == Order::Incomparable) {
      return Order::Incomparable;
    }
    if (o != Order::Equal) {
      return clamp(o);
    }
  }
  for (size_t i = 0; i < a->args().size(); ++i) {
    Order o = compare(a->args()[i], b->args()[i]);
    if (o == Order::Incomparable) {
      return Order::Incomparable;
    }
    if (o != Order::Equal) {
      return clamp(o);
    }
  }
  PER_ASSERT_MSG(false, "equal-looking terms slipped past the equality check");
  return Order::Equal;
}

Order Kbo::compareMultisets(std::vector<TermPtr> a, std::vector<TermPtr> b) const {
  // Cancel structurally equal elements pairwise.
  for (size_t i = 0; i < a.size();) {
    bool cancelled = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (Term::equal(a[i], b[j])) {
        a.erase(a.begin() + i);
        b.erase(b.begin() + j);
        cancelled = true;
        break;
      }
    }
    if (!cancelled) {
      ++i;
    }
  }
  if (a.empty() && b.empty()) {
    return Order::Equal;
  }
  if (a.empty()) {
    return Order::Less;
  }
  if (b.empty()) {
    return Order::Greater;
  }
  auto dominates = [&](const std::vector<TermPtr>& big, const std::vector<TermPtr>& small) {
    for (auto& s : small) {
      bool covered = false;
      for (auto& g : big) {
        if (compare(g, s) == Order::Greater) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        return false;
      }
    }
    return true;
  };
  if (dominates(a, b)) {
    return Order::Greater;
  }
  if (dominates(b, a)) {
    return Order::Less;
  }
  return Order::Incomparable;
}

} // namespace peregrine
