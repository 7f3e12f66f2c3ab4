#pragma once

#include "kernel/Clause.hpp"
#include "kernel/Unify.hpp"

namespace peregrine {

/**
 * One indexed term occurrence. `pos` addresses the occurrence inside the
 * clause: pos[0] is the argument index within the literal (for equalities,
 * 0 is the left side), the remainder is the path inside that argument.
 * For whole-side entries (demodulation left-hand sides) the path has just
 * the side element.
 */
struct TermEntry {
  TermPtr term;
  ClausePtr clause;
  unsigned lit = 0;
  std::vector<unsigned> pos;
};

bool sameEntry(const TermEntry& a, const TermEntry& b);

struct GenHit {
  const TermEntry* entry;
  Substitution subst; // matches entry->term onto the query
};

struct UnifHit {
  const TermEntry* entry;
  Substitution subst; // mgu of entry->term and the query
};

/**
 * Perfect discrimination tree over flattened terms, serving matching-based
 * retrieval: all indexed terms that generalize a query. Variable tokens are
 * checked for consistent bindings during traversal; a final full match per
 * hit also validates sorts and produces the substitution.
 *
 * Entries form a multiset; removing an entry that was never inserted is an
 * internal fault. Query variables are treated as constants.
 */
class DiscriminationTree {
public:
  void insert(TermEntry entry);
  void remove(const TermEntry& entry);

  std::vector<GenHit> retrieveGeneralizations(const TermPtr& query) const;

  size_t size() const { return _size; }
  bool empty() const { return _size == 0; }

private:
  struct NumKey {
    bool integer;
    Rational value;
    bool operator<(const NumKey& o) const {
      if (integer != o.integer) {
        return integer && !o.integer;
      }
      return value < o.value;
    }
  };

  struct Node {
    std::map<SymbolId, std::unique_ptr<Node>> funcs;
    std::map<NumKey, std::unique_ptr<Node>> nums;
    std::map<unsigned, std::unique_ptr<Node>> vars;
    std::vector<TermEntry> leaves;

    bool dead() const {
      return funcs.empty() && nums.empty() && vars.empty() && leaves.empty();
    }
  };

  static void flatten(const TermPtr& t, std::vector<TermPtr>& out);
  static bool removeRec(Node& node, const std::vector<TermPtr>& tokens, size_t i,
                        const TermEntry& entry);
  void descend(const Node& node, const std::vector<TermPtr>& query, size_t i,
               std::map<unsigned, TermPtr>& binding, std::vector<GenHit>& out) const;

  Node _root;
  size_t _size = 0;
};

/**
 * Top-symbol bucketed candidate index for unification-based retrieval
 * (superposition partners) and instance retrieval (backward
 * simplification). Buckets only prefilter; every candidate is confirmed
 * by a unify or match call, so retrieval has no false positives either.
 *
 * Unifiable retrieval computes mgus on the terms as stored: callers must
 * rename clauses apart before querying.
 */
class FlatTermIndex {
public:
  void insert(TermEntry entry);
  void remove(const TermEntry& entry);

  std::vector<UnifHit> retrieveUnifiable(const TermPtr& query) const;
  /** Hits are instances of the query; subst matches the query onto the hit. */
  std::vector<GenHit> retrieveInstances(const TermPtr& query) const;

  size_t size() const { return _size; }
  bool empty() const { return _size == 0; }

private:
  std::vector<TermEntry>& bucketFor(const TermPtr& t);

  std::map<SymbolId, std::vector<TermEntry>> _bySymbol;
  std::vector<TermEntry> _varTop;
  std::vector<TermEntry> _numTop;
  size_t _size = 0;
};

} // namespace peregrine
