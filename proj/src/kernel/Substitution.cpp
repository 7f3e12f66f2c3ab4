#include "kernel/Substitution.hpp"

namespace peregrine {

TermPtr Substitution::apply(const TermPtr& t) const {
  if (_map.empty() || t->ground()) {
    return t;
  }
  if (t->isVar()) {
    if (const TermPtr* bound = lookup(t->varId())) {
      return *bound;
    }
    if (t->isSortVar()) {
      return t;
    }
    TermPtr newSort = apply(t->sort());
    if (newSort.get() == t->sort().get()) {
      return t;
    }
    return Term::mkVar(t->varId(), std::move(newSort));
  }
  auto applyAll = [&](const std::vector<TermPtr>& in, bool& changed) {
    std::vector<TermPtr> out;
    out.reserve(in.size());
    for (auto& x : in) {
      out.push_back(apply(x));
      changed = changed || out.back().get() != x.get();
    }
    return out;
  };
  bool changed = false;
  std::vector<TermPtr> sortArgs = applyAll(t->sortArgs(), changed);
  std::vector<TermPtr> args = applyAll(t->args(), changed);
  if (!changed) {
    return t;
  }
  // The cached sort of an App is built from its sort arguments, so
  // substituting into it yields exactly the sort of the rebuilt node.
  return Term::rebuild(t, apply(t->sort()), std::move(sortArgs), std::move(args));
}

Substitution Substitution::compose(const Substitution& s1, const Substitution& s2) {
  Substitution r;
  for (auto& [v, t] : s1._map) {
    r._map.emplace(v, s2.apply(t));
  }
  for (auto& [v, t] : s2._map) {
    r._map.emplace(v, t);
  }
  return r;
}

void Substitution::makeIdempotent() {
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& [v, t] : _map) {
      TermPtr nt = apply(t);
      if (nt.get() != t.get()) {
        t = std::move(nt);
        changed = true;
      }
    }
  }
}

} // namespace peregrine
