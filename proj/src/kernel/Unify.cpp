#include "kernel/Unify.hpp"

namespace peregrine {

namespace {

/** Triangular binding store used while solving; finalized to idempotent form. */
struct Solver {
  std::map<unsigned, TermPtr> bound;

  const TermPtr& deref(const TermPtr& t) const {
    const TermPtr* cur = &t;
    while ((*cur)->isVar()) {
      auto it = bound.find((*cur)->varId());
      if (it == bound.end()) {
        break;
      }
      cur = &it->second;
    }
    return *cur;
  }

  bool occurs(unsigned var, const TermPtr& t) const {
    const TermPtr& d = deref(t);
    if (d->isVar()) {
      return d->varId() == var || (!d->isSortVar() && occurs(var, d->sort()));
    }
    for (auto& s : d->sortArgs()) {
      if (occurs(var, s)) {
        return true;
      }
    }
    for (auto& a : d->args()) {
      if (occurs(var, a)) {
        return true;
      }
    }
    return false;
  }

  bool solve(std::vector<std::pair<TermPtr, TermPtr>> work) {
    while (!work.empty()) {
      auto [l, r] = work.back();
      work.pop_back();
      TermPtr a = deref(l);
      TermPtr b = deref(r);
      if (a->isVar() && b->isVar() && a->varId() == b->varId()) {
        continue;
      }
      if (a->isVar() || b->isVar()) {
        if (!a->isVar()) {
          std::swap(a, b);
        }
        if (occurs(a->varId(), b)) {
          return false;
        }
        if (a->isSortVar()) {
          if (!b->isSortTerm()) {
            return false;
          }
        } else {
          PER_ASSERT(!b->isSortTerm());
          work.emplace_back(a->sort(), b->sort());
        }
        bound.emplace(a->varId(), b);
        continue;
      }
      if (a->tag() != b->tag()) {
        return false;
      }
      if (a->isNum()) {
        if (a->number() != b->number() || !Term::equal(a->sort(), b->sort())) {
          return false;
        }
        continue;
      }
      PER_ASSERT_MSG(a->isApp() && b->isApp(), "unification over let nodes");
      if (a->symbol() != b->symbol()) {
        return false;
      }
      for (size_t i = 0; i < a->sortArgs().size(); ++i) {
        work.emplace_back(a->sortArgs()[i], b->sortArgs()[i]);
      }
      for (size_t i = 0; i < a->args().size(); ++i) {
        work.emplace_back(a->args()[i], b->args()[i]);
      }
    }
    return true;
  }

  Substitution finalize() const {
    Substitution s;
    for (auto& [v, t] : bound) {
      s.bind(v, t);
    }
    s.makeIdempotent();
    return s;
  }
};

} // namespace

std::optional<Substitution> unify(const std::vector<std::pair<TermPtr, TermPtr>>& pairs) {
  Solver solver;
  if (!solver.solve(pairs)) {
    return std::nullopt;
  }
  return solver.finalize();
}

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b) {
  return unify(std::vector<std::pair<TermPtr, TermPtr>>{{a, b}});
}

namespace {

bool matchInto(Substitution& s, const TermPtr& pattern, const TermPtr& target) {
  if (pattern->isVar()) {
    if (const TermPtr* prev = s.lookup(pattern->varId())) {
      return Term::equal(*prev, target);
    }
    if (pattern->isSortVar()) {
      if (!target->isSortTerm()) {
        return false;
      }
    } else {
      if (target->isSortTerm() || !matchInto(s, pattern->sort(), target->sort())) {
        return false;
      }
    }
    s.bind(pattern->varId(), target);
    return true;
  }
  if (pattern->tag() != target->tag()) {
    return false;
  }
  if (pattern->isNum()) {
    return pattern->number() == target->number() && Term::equal(pattern->sort(), target->sort());
  }
  PER_ASSERT_MSG(pattern->isApp(), "matching over let nodes");
  if (pattern->symbol() != target->symbol()) {
    return false;
  }
  for (size_t i = 0; i < pattern->sortArgs().size(); ++i) {
    if (!matchInto(s, pattern->sortArgs()[i], target->sortArgs()[i])) {
      return false;
    }
  }
  for (size_t i = 0; i < pattern->args().size(); ++i) {
    if (!matchInto(s, pattern->args()[i], target->args()[i])) {
      return false;
    }
  }
  return true;
}

} // namespace

std::optional<Substitution> matchTerms(const std::vector<std::pair<TermPtr, TermPtr>>& pairs,
                                       Substitution seed) {
  for (auto& [p, t] : pairs) {
    if (!matchInto(seed, p, t)) {
      return std::nullopt;
    }
  }
  return seed;
}

std::optional<Substitution> matchTerms(const TermPtr& pattern, const TermPtr& target) {
  return matchTerms({{pattern, target}}, Substitution());
}

long maxVarId(const TermPtr& t) {
  std::map<unsigned, TermPtr> vars;
  t->collectVars(vars);
  return vars.empty() ? -1 : static_cast<long>(vars.rbegin()->first);
}

Substitution shiftVars(const std::map<unsigned, TermPtr>& vars, unsigned offset) {
  // Sort variables first: term variable sorts may mention them and must
  // be shifted through the same renaming.
  Substitution s;
  for (auto& [id, v] : vars) {
    if (v->isSortVar()) {
      s.bind(id, Term::mkSortVar(id + offset));
    }
  }
  for (auto& [id, v] : vars) {
    if (!v->isSortVar()) {
      s.bind(id, Term::mkVar(id + offset, s.apply(v->sort())));
    }
  }
  return s;
}

} // namespace peregrine
