#pragma once

#include "index/TermIndex.hpp"

namespace peregrine {

/**
 * Bucket key of a literal: its predicate symbol and polarity, with all
 * equalities (any sort) sharing one pseudo-predicate.
 */
struct LitKey {
  SymbolId pred = 0;
  bool positive = true;

  static constexpr SymbolId EqualityPseudo = static_cast<SymbolId>(-1);

  static LitKey of(const Literal& l) {
    return LitKey{l.isEquality() ? EqualityPseudo : l.predicate(), l.positive()};
  }

  bool operator<(const LitKey& o) const {
    return pred != o.pred ? pred < o.pred : positive < o.positive;
  }
  bool operator==(const LitKey& o) const {
    return pred == o.pred && positive == o.positive;
  }
};

struct LitEntry {
  ClausePtr clause;
  unsigned lit = 0;
};

/**
 * Literal occurrence buckets for generating inference partner lookup:
 * binary resolution retrieves the complementary bucket and unifies atoms
 * afterwards. Multiset semantics as in the term indexes.
 */
class LiteralIndex {
public:
  void insert(const ClausePtr& clause, unsigned lit);
  void remove(const ClausePtr& clause, unsigned lit);
  void insertClause(const ClausePtr& clause);
  void removeClause(const ClausePtr& clause);

  const std::vector<LitEntry>& withKey(const LitKey& key) const;
  /** Occurrences whose key complements the given literal's. */
  const std::vector<LitEntry>& complementary(const Literal& l) const;

  size_t size() const { return _size; }

private:
  std::map<LitKey, std::vector<LitEntry>> _buckets;
  size_t _size = 0;
};

/**
 * Clause candidate index for subsumption. Each clause is filed once under
 * its least frequent literal key (frequency measured across indexed
 * clauses at insertion time) and additionally under every key it contains.
 *
 * Forward query (who might subsume C): clauses filed under any key C
 * contains; complete because a subsumer's keys are a subset of C's.
 * Backward query (whom might D subsume): clauses containing D's least
 * frequent key; complete because a subsumee contains every key of D.
 */
class SubsumptionIndex {
public:
  void insert(const ClausePtr& clause);
  void remove(const ClausePtr& clause);

  std::vector<ClausePtr> forwardCandidates(const Clause& query) const;
  std::vector<ClausePtr> backwardCandidates(const Clause& query) const;

  size_t size() const { return _count; }

private:
  static std::vector<LitKey> keysOf(const Clause& c);

  std::map<LitKey, unsigned> _freq;
  std::map<LitKey, std::vector<ClausePtr>> _byLeast;
  std::map<LitKey, std::vector<ClausePtr>> _byAll;
  std::map<unsigned, LitKey> _chosen;
  size_t _count = 0;
};

} // namespace peregrine
