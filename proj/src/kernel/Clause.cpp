#include "kernel/Clause.hpp"

#include <algorithm>

namespace peregrine {

namespace {

void recordVarOrder(const TermPtr& t, std::vector<std::pair<unsigned, TermPtr>>& order,
                    std::map<unsigned, bool>& seen) {
  if (t->ground()) {
    return;
  }
  if (t->isVar()) {
    if (!seen.count(t->varId())) {
      seen[t->varId()] = true;
      order.emplace_back(t->varId(), t);
    }
    if (!t->isSortVar()) {
      recordVarOrder(t->sort(), order, seen);
    }
    return;
  }
  for (auto& s : t->sortArgs()) {
    recordVarOrder(s, order, seen);
  }
  for (auto& a : t->args()) {
    recordVarOrder(a, order, seen);
  }
}

} // namespace

std::vector<Literal> ClauseRegistry::normalizeLiterals(std::vector<Literal> lits) {
  // Merge exact duplicates (multiset semantics are the rules' business;
  // two copies of one literal are never load-bearing).
  std::vector<Literal> unique;
  for (auto& l : lits) {
    bool dup = false;
    for (auto& u : unique) {
      if (u.equals(l)) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      unique.push_back(std::move(l));
    }
  }

  // First-occurrence variable renumbering.
  std::vector<std::pair<unsigned, TermPtr>> order;
  std::map<unsigned, bool> seen;
  for (auto& l : unique) {
    for (auto& s : l.sortArgs()) {
      recordVarOrder(s, order, seen);
    }
    for (auto& a : l.args()) {
      recordVarOrder(a, order, seen);
    }
  }
  bool identity = true;
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i].first != i) {
      identity = false;
      break;
    }
  }
  if (identity) {
    return unique;
  }
  Substitution rename;
  // Sort variables before term variables: term variable sorts must be
  // rebuilt through the sort-variable part of the renaming.
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i].second->isSortVar()) {
      rename.bind(order[i].first, Term::mkSortVar(static_cast<unsigned>(i)));
    }
  }
  for (size_t i = 0; i < order.size(); ++i) {
    if (!order[i].second->isSortVar()) {
      rename.bind(order[i].first,
                  Term::mkVar(static_cast<unsigned>(i), rename.apply(order[i].second->sort())));
    }
  }
  for (auto& l : unique) {
    l = l.apply(rename);
  }
  return unique;
}

ClausePtr ClauseRegistry::make(std::vector<Literal> lits, Derivation deriv) {
  bool clauseParents = true;
  switch (deriv.rule) {
    case Rule::Input:
    case Rule::Cnf:
    case Rule::NegateConjecture:
    case Rule::TheoryAxiom:
      clauseParents = false;
      break;
    default:
      break;
  }
  unsigned age = 0;
  std::vector<int> assertions;
  bool lineage = false;
  if (clauseParents) {
    for (unsigned p : deriv.parents) {
      const ClausePtr& parent = (*this)[p];
      age = std::max(age, parent->age() + 1);
      lineage = lineage || parent->goalLineage();
      for (int a : parent->assertions()) {
        if (!std::count(assertions.begin(), assertions.end(), a)) {
          assertions.push_back(a);
        }
      }
    }
    std::sort(assertions.begin(), assertions.end());
  }
  return makeExplicit(std::move(lits), std::move(deriv), age, std::move(assertions), lineage);
}

ClausePtr ClauseRegistry::makeExplicit(std::vector<Literal> lits, Derivation deriv,
                                       unsigned age, std::vector<int> assertions,
                                       bool goalLineage) {
  struct Make : Clause {};
  auto c = std::make_shared<Make>();
  c->_lits = normalizeLiterals(std::move(lits));
  c->_id = static_cast<unsigned>(_all.size());
  c->_age = age;
  c->_deriv = std::move(deriv);
  c->_assertions = std::move(assertions);
  c->_goalLineage = goalLineage;
  c->_weight = 0;
  for (auto& l : c->_lits) {
    c->_weight += l.weight();
    c->_ground = c->_ground && l.ground();
  }
  _approxBytes += 64 + 48 * c->_lits.size() + 16 * c->_weight;
  _all.push_back(c);
  return c;
}

void Clause::collectVars(std::map<unsigned, TermPtr>& out) const {
  for (auto& l : _lits) {
    l.collectVars(out);
  }
}

unsigned Clause::varBound() const {
  std::map<unsigned, TermPtr> vars;
  collectVars(vars);
  return vars.empty() ? 0 : vars.rbegin()->first + 1;
}

std::string Clause::describe() const {
  return "#" + std::to_string(_id) + "[" + std::to_string(_lits.size()) + " lits, age "
      + std::to_string(_age) + ", w " + std::to_string(_weight) + "]";
}

} // namespace peregrine
