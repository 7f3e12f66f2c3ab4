#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include "kernel/Common.hpp"

namespace peregrine {

struct PropLiteral {
  int var = 0;
  bool positive = true;

  PropLiteral() = default;
  PropLiteral(int v, bool pos) : var(v), positive(pos) { PER_ASSERT(v >= 0); }
  PropLiteral negated() const { return PropLiteral(var, !positive); }

  friend bool operator==(const PropLiteral& a, const PropLiteral& b) {
    return a.var == b.var && a.positive == b.positive;
  }
  friend bool operator<(const PropLiteral& a, const PropLiteral& b) {
    return a.var != b.var ? a.var < b.var : a.positive < b.positive;
  }
};

using PropClause = std::vector<PropLiteral>;

struct SatModel {
  std::vector<bool> values;

  bool value(int var) const {
    PER_ASSERT(var >= 0 && static_cast<size_t>(var) < values.size());
    return values[static_cast<size_t>(var)];
  }
  bool satisfies(const PropLiteral& l) const { return value(l.var) == l.positive; }
  bool satisfies(const PropClause& c) const {
    for (const PropLiteral& l : c) {
      if (satisfies(l)) {
        return true;
      }
    }
    return false;
  }
};

/**
 * Incremental CDCL solver: two-watched-literal propagation, first-UIP
 * learning with cheap self-subsumption minimization, VSIDS decisions with
 * phase saving, Luby restarts, and activity-based learned clause
 * reduction. Deterministic for a fixed seed.
 *
 * Assumptions are placed as forced decisions; when one fails, the
 * returned core is a subset of the assumptions that is already
 * unsatisfiable together with the clause set.
 */
class SatSolver {
public:
  explicit SatSolver(uint64_t seed = 0);

  /** Clauses persist across solve calls. Tautologies are dropped. */
  void addClause(const PropClause& clause);

  enum class Verdict : uint8_t { Sat, Unsat };
  struct Result {
    Verdict verdict = Verdict::Unsat;
    SatModel model;                // meaningful when Sat
    std::vector<PropLiteral> core; // subset of the assumptions, when Unsat
    bool sat() const { return verdict == Verdict::Sat; }
  };
  Result solve(const std::vector<PropLiteral>& assumptions = {});

  int varCount() const { return static_cast<int>(_assign.size()); }
  uint64_t conflictCount() const { return _conflicts; }

  /** Writes the accumulated input clause set in DIMACS form. */
  void dumpDimacs(std::ostream& out) const;

private:
  using Lit = uint32_t; // var << 1 | negated
  static constexpr Lit LIT_UNDEF = ~0u;
  static Lit mkLit(int var, bool negated) {
    return (static_cast<Lit>(var) << 1) | (negated ? 1u : 0u);
  }
  static Lit negLit(Lit l) { return l ^ 1u; }
  static int litVar(Lit l) { return static_cast<int>(l >> 1); }
  static bool litNegated(Lit l) { return (l & 1u) != 0; }
  static Lit encode(const PropLiteral& l) { return mkLit(l.var, !l.positive); }
  static PropLiteral decode(Lit l) { return PropLiteral(litVar(l), !litNegated(l)); }

  enum LBool : int8_t { LFalse = -1, LUndef = 0, LTrue = 1 };

  struct Cls {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool removed = false;
  };

  struct Watcher {
    Cls* clause;
    Lit blocker;
  };

  /** Max-heap over variable activities with deterministic id tie-breaks. */
  struct VarOrder {
    std::vector<int> heap;
    std::vector<int> pos; // var -> heap index, or -1
    const std::vector<double>* activity = nullptr;

    bool before(int a, int b) const {
      double aa = (*activity)[static_cast<size_t>(a)];
      double ab = (*activity)[static_cast<size_t>(b)];
      return aa != ab ? aa > ab : a < b;
    }
    bool contains(int v) const {
      return static_cast<size_t>(v) < pos.size() && pos[static_cast<size_t>(v)] >= 0;
    }
    bool empty() const { return heap.empty(); }
    void grow(int v);
    void insert(int v);
    void update(int v);
    int popMax();

  private:
    void siftUp(size_t i);
    void siftDown(size_t i);
  };

  void ensureVar(int v);
  LBool valueLit(Lit l) const {
    LBool v = _assign[static_cast<size_t>(litVar(l))];
    return litNegated(l) ? static_cast<LBool>(-v) : v;
  }
  int decisionLevel() const { return static_cast<int>(_trailLim.size()); }
  void newDecisionLevel() { _trailLim.push_back(static_cast<int>(_trail.size())); }
  void uncheckedEnqueue(Lit p, Cls* reason);
  void cancelUntil(int level);
  Cls* propagate();
  void attach(Cls* c);
  void analyze(Cls* conflict, std::vector<Lit>& learnt, int& backtrackLevel);
  std::vector<PropLiteral> analyzeFinal(Lit failed);
  void bumpVar(int v);
  void bumpClause(Cls& c);
  void decayActivities();
  void reduceDb();
  int pickBranchVar();
  static double luby(double y, int x);

  enum class SearchStatus : uint8_t { Sat, Unsat, Restart };
  SearchStatus search(uint64_t conflictBudget, const std::vector<Lit>& assumptions,
                      std::vector<PropLiteral>& coreOut);

  std::vector<std::unique_ptr<Cls>> _clauses;
  std::vector<Cls*> _learnts;
  std::vector<std::vector<Watcher>> _watches; // indexed by Lit
  std::vector<LBool> _assign;
  std::vector<Cls*> _reason;
  std::vector<int> _level;
  std::vector<bool> _phase;
  std::vector<uint8_t> _seen;
  std::vector<double> _activity;
  VarOrder _order;
  std::vector<Lit> _trail;
  std::vector<int> _trailLim;
  size_t _qhead = 0;
  bool _rootConflict = false;
  double _varInc = 1.0;
  double _clauseInc = 1.0;
  uint64_t _conflicts = 0;
  uint64_t _reduceThreshold = 4000;
  std::mt19937_64 _rng;
  std::vector<PropClause> _input; // as added, for the DIMACS dump
  int _maxInputVar = -1;
};

} // namespace peregrine
