#include "sat/SatSolver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace peregrine {

void SatSolver::VarOrder::grow(int v) {
  if (static_cast<size_t>(v) >= pos.size()) {
    pos.resize(static_cast<size_t>(v) + 1, -1);
  }
}

void SatSolver::VarOrder::insert(int v) {
  grow(v);
  if (contains(v)) {
    return;
  }
  pos[static_cast<size_t>(v)] = static_cast<int>(heap.size());
  heap.push_back(v);
  siftUp(heap.size() - 1);
}

void SatSolver::VarOrder::update(int v) {
  if (contains(v)) {
    siftUp(static_cast<size_t>(pos[static_cast<size_t>(v)]));
  }
}

int SatSolver::VarOrder::popMax() {
  PER_ASSERT(!heap.empty());
  int top = heap.front();
  heap.front() = heap.back();
  pos[static_cast<size_t>(heap.front())] = 0;
  heap.pop_back();
  pos[static_cast<size_t>(top)] = -1;
  if (!heap.empty()) {
    siftDown(0);
  }
  return top;
}

void SatSolver::VarOrder::siftUp(size_t i) {
  int v = heap[i];
  while (i > 0) {
    size_t parent = (i - 1) / 2;
    if (!before(v, heap[parent])) {
      break;
    }
    heap[i] = heap[parent];
    pos[static_cast<size_t>(heap[i])] = static_cast<int>(i);
    i = parent;
  }
  heap[i] = v;
  pos[static_cast<size_t>(v)] = static_cast<int>(i);
}

void SatSolver::VarOrder::siftDown(size_t i) {
  int v = heap[i];
  while (2 * i + 1 < heap.size()) {
    size_t child = 2 * i + 1;
    if (child + 1 < heap.size() && before(heap[child + 1], heap[child])) {
      ++child;
    }
    if (!before(heap[child], v)) {
      break;
    }
    heap[i] = heap[child];
    pos[static_cast<size_t>(heap[i])] = static_cast<int>(i);
    i = child;
  }
  heap[i] = v;
  pos[static_cast<size_t>(v)] = static_cast<int>(i);
}

SatSolver::SatSolver(uint64_t seed) : _rng(seed) {
  _order.activity = &_activity;
}

void SatSolver::ensureVar(int v) {
  PER_ASSERT(v >= 0);
  while (static_cast<size_t>(v) >= _assign.size()) {
    _assign.push_back(LUndef);
    _reason.push_back(nullptr);
    _level.push_back(0);
    _phase.push_back(false);
    _seen.push_back(0);
    _activity.push_back(0);
    _watches.emplace_back();
    _watches.emplace_back();
    _order.insert(static_cast<int>(_assign.size()) - 1);
  }
}

void SatSolver::attach(Cls* c) {
  PER_ASSERT(c->lits.size() >= 2);
  _watches[negLit(c->lits[0])].push_back(Watcher{c, c->lits[1]});
  _watches[negLit(c->lits[1])].push_back(Watcher{c, c->lits[0]});
}

void SatSolver::addClause(const PropClause& clause) {
  cancelUntil(0);
  _input.push_back(clause);
  std::vector<Lit> ls;
  for (const PropLiteral& l : clause) {
    ensureVar(l.var);
    _maxInputVar = std::max(_maxInputVar, l.var);
    ls.push_back(encode(l));
  }
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  for (size_t i = 0; i + 1 < ls.size(); ++i) {
    if (ls[i + 1] == negLit(ls[i])) {
      return; // tautology
    }
  }
  std::vector<Lit> live;
  for (Lit l : ls) {
    LBool v = valueLit(l);
    if (v == LTrue && _level[static_cast<size_t>(litVar(l))] == 0) {
      return; // already satisfied at the root
    }
    if (v == LFalse && _level[static_cast<size_t>(litVar(l))] == 0) {
      continue; // permanently false
    }
    live.push_back(l);
  }
  if (live.empty()) {
    _rootConflict = true;
    return;
  }
  if (live.size() == 1) {
    if (valueLit(live[0]) == LUndef) {
      uncheckedEnqueue(live[0], nullptr);
      if (propagate() != nullptr) {
        _rootConflict = true;
      }
    }
    return;
  }
  auto c = std::make_unique<Cls>();
  c->lits = std::move(live);
  attach(c.get());
  _clauses.push_back(std::move(c));
}

void SatSolver::uncheckedEnqueue(Lit p, Cls* reason) {
  size_t v = static_cast<size_t>(litVar(p));
  PER_ASSERT(_assign[v] == LUndef);
  _assign[v] = litNegated(p) ? LFalse : LTrue;
  _reason[v] = reason;
  _level[v] = decisionLevel();
  _trail.push_back(p);
}

void SatSolver::cancelUntil(int level) {
  if (decisionLevel() <= level) {
    return;
  }
  size_t bound = static_cast<size_t>(_trailLim[static_cast<size_t>(level)]);
  for (size_t i = _trail.size(); i > bound; --i) {
    Lit p = _trail[i - 1];
    size_t v = static_cast<size_t>(litVar(p));
    _phase[v] = !litNegated(p);
    _assign[v] = LUndef;
    _reason[v] = nullptr;
    _order.insert(static_cast<int>(v));
  }
  _trail.resize(bound);
  _trailLim.resize(static_cast<size_t>(level));
  _qhead = _trail.size();
}

SatSolver::Cls* SatSolver::propagate() {
  while (_qhead < _trail.size()) {
    Lit p = _trail[_qhead++];
    std::vector<Watcher>& ws = _watches[p];
    size_t i = 0;
    size_t j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (w.clause->removed) {
        ++i;
        continue;
      }
      if (valueLit(w.blocker) == LTrue) {
        ws[j++] = w;
        ++i;
        continue;
      }
      Cls& c = *w.clause;
      Lit falseLit = negLit(p);
      if (c.lits[0] == falseLit) {
        std::swap(c.lits[0], c.lits[1]);
      }
      PER_ASSERT(c.lits[1] == falseLit);
      Lit first = c.lits[0];
      if (first != w.blocker && valueLit(first) == LTrue) {
        ws[j++] = Watcher{w.clause, first};
        ++i;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (valueLit(c.lits[k]) != LFalse) {
          std::swap(c.lits[1], c.lits[k]);
          _watches[negLit(c.lits[1])].push_back(Watcher{w.clause, first});
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i;
        continue;
      }
      // Unit under the current assignment, or conflicting.
      ws[j++] = Watcher{w.clause, first};
      ++i;
      if (valueLit(first) == LFalse) {
        while (i < ws.size()) {
          ws[j++] = ws[i++];
        }
        ws.resize(j);
        _qhead = _trail.size();
        return w.clause;
      }
      uncheckedEnqueue(first, w.clause);
    }
    ws.resize(j);
  }
  return nullptr;
}

void SatSolver::bumpVar(int v) {
  _activity[static_cast<size_t>(v)] += _varInc;
  if (_activity[static_cast<size_t>(v)] > 1e100) {
    for (double& a : _activity) {
      a *= 1e-100;
    }
    _varInc *= 1e-100;
  }
  _order.update(v);
}

void SatSolver::bumpClause(Cls& c) {
  c.activity += _clauseInc;
  if (c.activity > 1e20) {
    for (Cls* l : _learnts) {
      l->activity *= 1e-20;
    }
    _clauseInc *= 1e-20;
  }
}

void SatSolver::decayActivities() {
  _varInc /= 0.95;
  _clauseInc /= 0.999;
}

void SatSolver::analyze(Cls* conflict, std::vector<Lit>& learnt, int& backtrackLevel) {
  learnt.clear();
  learnt.push_back(LIT_UNDEF); // slot for the asserting literal
  int counter = 0;
  Lit p = LIT_UNDEF;
  size_t trailIdx = _trail.size();
  Cls* reason = conflict;
  std::vector<int> toClear;

  do {
    PER_ASSERT(reason != nullptr);
    if (reason->learnt) {
      bumpClause(*reason);
    }
    for (Lit q : reason->lits) {
      if (q == p) {
        continue;
      }
      size_t v = static_cast<size_t>(litVar(q));
      if (!_seen[v] && _level[v] > 0) {
        _seen[v] = 1;
        toClear.push_back(static_cast<int>(v));
        bumpVar(static_cast<int>(v));
        if (_level[v] >= decisionLevel()) {
          ++counter;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!_seen[static_cast<size_t>(litVar(_trail[trailIdx - 1]))]) {
      --trailIdx;
    }
    --trailIdx;
    p = _trail[trailIdx];
    _seen[static_cast<size_t>(litVar(p))] = 0;
    reason = _reason[static_cast<size_t>(litVar(p))];
    --counter;
  } while (counter > 0);
  learnt[0] = negLit(p);

  // Cheap minimization: drop a literal whose reason is entirely seen.
  size_t kept = 1;
  for (size_t i = 1; i < learnt.size(); ++i) {
    size_t v = static_cast<size_t>(litVar(learnt[i]));
    Cls* r = _reason[v];
    bool redundant = r != nullptr;
    if (r != nullptr) {
      for (Lit q : r->lits) {
        size_t qv = static_cast<size_t>(litVar(q));
        if (qv != v && !_seen[qv] && _level[qv] > 0) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant) {
      learnt[kept++] = learnt[i];
    }
  }
  learnt.resize(kept);

  backtrackLevel = 0;
  size_t maxIdx = 1;
  for (size_t i = 1; i < learnt.size(); ++i) {
    int lv = _level[static_cast<size_t>(litVar(learnt[i]))];
    if (lv > backtrackLevel) {
      backtrackLevel = lv;
      maxIdx = i;
    }
  }
  if (learnt.size() > 1) {
    std::swap(learnt[1], learnt[maxIdx]);
  }
  for (int v : toClear) {
    _seen[static_cast<size_t>(v)] = 0;
  }
}

std::vector<PropLiteral> SatSolver::analyzeFinal(Lit failed) {
  // `failed` is the assumption literal found false at placement time. The
  // walk explains its complement's assignment in terms of earlier
  // assumption decisions.
  std::vector<PropLiteral> core{decode(failed)};
  if (decisionLevel() == 0) {
    return core;
  }
  std::vector<int> toClear;
  size_t fv = static_cast<size_t>(litVar(failed));
  _seen[fv] = 1;
  toClear.push_back(static_cast<int>(fv));
  size_t bound = static_cast<size_t>(_trailLim[0]);
  for (size_t i = _trail.size(); i > bound; --i) {
    Lit p = _trail[i - 1];
    size_t v = static_cast<size_t>(litVar(p));
    if (!_seen[v]) {
      continue;
    }
    if (_reason[v] == nullptr) {
      // A decision inside the assumption prefix is an assumption literal.
      core.push_back(decode(p));
    } else {
      for (Lit q : _reason[v]->lits) {
        size_t qv = static_cast<size_t>(litVar(q));
        if (_level[qv] > 0 && !_seen[qv]) {
          _seen[qv] = 1;
          toClear.push_back(static_cast<int>(qv));
        }
      }
    }
  }
  for (int v : toClear) {
    _seen[static_cast<size_t>(v)] = 0;
  }
  std::sort(core.begin(), core.end());
  core.erase(std::unique(core.begin(), core.end()), core.end());
  return core;
}

void SatSolver::reduceDb() {
  std::sort(_learnts.begin(), _learnts.end(), [](const Cls* a, const Cls* b) {
    return a->activity < b->activity;
  });
  size_t target = _learnts.size() / 2;
  size_t kept = 0;
  for (size_t i = 0; i < _learnts.size(); ++i) {
    Cls* c = _learnts[i];
    size_t v = static_cast<size_t>(litVar(c->lits[0]));
    bool locked = _reason[v] == c && _assign[v] != LUndef;
    if (i < target && c->lits.size() > 2 && !locked) {
      c->removed = true;
    } else {
      _learnts[kept++] = c;
    }
  }
  _learnts.resize(kept);
  // Rebuild watches and free the removed clauses.
  for (std::vector<Watcher>& ws : _watches) {
    ws.clear();
  }
  std::vector<std::unique_ptr<Cls>> live;
  for (std::unique_ptr<Cls>& c : _clauses) {
    if (c->removed) {
      continue;
    }
    attach(c.get());
    live.push_back(std::move(c));
  }
  _clauses = std::move(live);
}

int SatSolver::pickBranchVar() {
  // A pinch of seeded randomness diversifies portfolio strategies while
  // staying reproducible.
  if (std::uniform_real_distribution<double>(0, 1)(_rng) < 0.02) {
    std::vector<int> unassigned;
    for (size_t v = 0; v < _assign.size(); ++v) {
      if (_assign[v] == LUndef) {
        unassigned.push_back(static_cast<int>(v));
      }
    }
    if (!unassigned.empty()) {
      size_t pick = std::uniform_int_distribution<size_t>(0, unassigned.size() - 1)(_rng);
      return unassigned[pick];
    }
  }
  while (!_order.empty()) {
    int v = _order.popMax();
    if (_assign[static_cast<size_t>(v)] == LUndef) {
      return v;
    }
  }
  return -1;
}

double SatSolver::luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) / 2;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

SatSolver::SearchStatus SatSolver::search(uint64_t conflictBudget,
                                          const std::vector<Lit>& assumptions,
                                          std::vector<PropLiteral>& coreOut) {
  uint64_t localConflicts = 0;
  std::vector<Lit> learnt;
  for (;;) {
    Cls* conflict = propagate();
    if (conflict != nullptr) {
      ++_conflicts;
      ++localConflicts;
      if (decisionLevel() == 0) {
        _rootConflict = true;
        coreOut.clear();
        return SearchStatus::Unsat;
      }
      int backtrackLevel = 0;
      analyze(conflict, learnt, backtrackLevel);
      cancelUntil(backtrackLevel);
      if (learnt.size() == 1) {
        uncheckedEnqueue(learnt[0], nullptr);
      } else {
        auto c = std::make_unique<Cls>();
        c->lits = learnt;
        c->learnt = true;
        attach(c.get());
        bumpClause(*c);
        _learnts.push_back(c.get());
        uncheckedEnqueue(learnt[0], c.get());
        _clauses.push_back(std::move(c));
      }
      decayActivities();
      continue;
    }
    if (localConflicts >= conflictBudget) {
      cancelUntil(0);
      return SearchStatus::Restart;
    }
    if (_learnts.size() > _reduceThreshold) {
      reduceDb();
      _reduceThreshold += 1000;
    }
    Lit next = LIT_UNDEF;
    while (decisionLevel() < static_cast<int>(assumptions.size())) {
      Lit a = assumptions[static_cast<size_t>(decisionLevel())];
      LBool v = valueLit(a);
      if (v == LTrue) {
        newDecisionLevel(); // hold the slot so indexing by level stays aligned
      } else if (v == LFalse) {
        coreOut = analyzeFinal(a);
        return SearchStatus::Unsat;
      } else {
        next = a;
        break;
      }
    }
    if (next == LIT_UNDEF) {
      int v = pickBranchVar();
      if (v < 0) {
        return SearchStatus::Sat;
      }
      next = mkLit(v, !_phase[static_cast<size_t>(v)]);
    }
    newDecisionLevel();
    uncheckedEnqueue(next, nullptr);
  }
}

SatSolver::Result SatSolver::solve(const std::vector<PropLiteral>& assumptions) {
  Result result;
  cancelUntil(0);
  if (_rootConflict) {
    result.verdict = Verdict::Unsat;
    return result;
  }
  std::vector<Lit> assume;
  for (const PropLiteral& l : assumptions) {
    ensureVar(l.var);
    assume.push_back(encode(l));
  }
  if (propagate() != nullptr) {
    _rootConflict = true;
    result.verdict = Verdict::Unsat;
    return result;
  }
  int restarts = 0;
  for (;;) {
    uint64_t budget = static_cast<uint64_t>(64.0 * luby(2.0, restarts));
    SearchStatus status = search(budget, assume, result.core);
    if (status == SearchStatus::Restart) {
      ++restarts;
      continue;
    }
    if (status == SearchStatus::Sat) {
      result.verdict = Verdict::Sat;
      result.model.values.resize(_assign.size());
      for (size_t v = 0; v < _assign.size(); ++v) {
        PER_ASSERT(_assign[v] != LUndef);
        result.model.values[v] = _assign[v] == LTrue;
      }
    } else {
      result.verdict = Verdict::Unsat;
    }
    cancelUntil(0);
    return result;
  }
}

void SatSolver::dumpDimacs(std::ostream& out) const {
  out << "p cnf " << (_maxInputVar + 1) << " " << _input.size() << "\n";
  for (const PropClause& c : _input) {
    for (const PropLiteral& l : c) {
      out << (l.positive ? l.var + 1 : -(l.var + 1)) << " ";
    }
    out << "0\n";
  }
}

} // namespace peregrine
