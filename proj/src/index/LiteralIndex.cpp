#include "index/LiteralIndex.hpp"

#include <algorithm>

namespace peregrine {

namespace {
const std::vector<LitEntry> kNoEntries;
}

void LiteralIndex::insert(const ClausePtr& clause, unsigned lit) {
  PER_ASSERT(lit < clause->size());
  _buckets[LitKey::of((*clause)[lit])].push_back(LitEntry{clause, lit});
  ++_size;
}

void LiteralIndex::remove(const ClausePtr& clause, unsigned lit) {
  auto bucketIt = _buckets.find(LitKey::of((*clause)[lit]));
  PER_ASSERT_MSG(bucketIt != _buckets.end(), "removing a literal that is not indexed");
  std::vector<LitEntry>& bucket = bucketIt->second;
  auto it = std::find_if(bucket.begin(), bucket.end(), [&](const LitEntry& e) {
    return e.clause.get() == clause.get() && e.lit == lit;
  });
  PER_ASSERT_MSG(it != bucket.end(), "removing a literal that is not indexed");
  bucket.erase(it);
  if (bucket.empty()) {
    _buckets.erase(bucketIt);
  }
  PER_ASSERT(_size > 0);
  --_size;
}

void LiteralIndex::insertClause(const ClausePtr& clause) {
  for (unsigned i = 0; i < clause->size(); ++i) {
    insert(clause, i);
  }
}

void LiteralIndex::removeClause(const ClausePtr& clause) {
  for (unsigned i = 0; i < clause->size(); ++i) {
    remove(clause, i);
  }
}

const std::vector<LitEntry>& LiteralIndex::withKey(const LitKey& key) const {
  auto it = _buckets.find(key);
  return it == _buckets.end() ? kNoEntries : it->second;
}

const std::vector<LitEntry>& LiteralIndex::complementary(const Literal& l) const {
  LitKey key = LitKey::of(l);
  key.positive = !key.positive;
  return withKey(key);
}

std::vector<LitKey> SubsumptionIndex::keysOf(const Clause& c) {
  std::vector<LitKey> keys;
  for (const Literal& l : c.literals()) {
    keys.push_back(LitKey::of(l));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

void SubsumptionIndex::insert(const ClausePtr& clause) {
  PER_ASSERT_MSG(!clause->empty(), "the empty clause is never indexed");
  std::vector<LitKey> keys = keysOf(*clause);
  LitKey least = keys.front();
  for (const LitKey& k : keys) {
    if (_freq[k] < _freq[least]) {
      least = k;
    }
    _byAll[k].push_back(clause);
    ++_freq[k];
  }
  _byLeast[least].push_back(clause);
  PER_ASSERT_MSG(_chosen.emplace(clause->id(), least).second,
                 "a clause may be indexed for subsumption only once");
  ++_count;
}

void SubsumptionIndex::remove(const ClausePtr& clause) {
  auto chosenIt = _chosen.find(clause->id());
  PER_ASSERT_MSG(chosenIt != _chosen.end(), "removing a clause that is not indexed");
  auto eraseFrom = [&](std::map<LitKey, std::vector<ClausePtr>>& table, const LitKey& k) {
    auto bucketIt = table.find(k);
    PER_ASSERT(bucketIt != table.end());
    std::vector<ClausePtr>& bucket = bucketIt->second;
    auto it = std::find_if(bucket.begin(), bucket.end(),
                           [&](const ClausePtr& c) { return c.get() == clause.get(); });
    PER_ASSERT(it != bucket.end());
    bucket.erase(it);
    if (bucket.empty()) {
      table.erase(bucketIt);
    }
  };
  for (const LitKey& k : keysOf(*clause)) {
    eraseFrom(_byAll, k);
    auto freqIt = _freq.find(k);
    PER_ASSERT(freqIt != _freq.end() && freqIt->second > 0);
    if (--freqIt->second == 0) {
      _freq.erase(freqIt);
    }
  }
  eraseFrom(_byLeast, chosenIt->second);
  _chosen.erase(chosenIt);
  PER_ASSERT(_count > 0);
  --_count;
}

std::vector<ClausePtr> SubsumptionIndex::forwardCandidates(const Clause& query) const {
  std::vector<ClausePtr> out;
  for (const LitKey& k : keysOf(query)) {
    auto it = _byLeast.find(k);
    if (it != _byLeast.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

std::vector<ClausePtr> SubsumptionIndex::backwardCandidates(const Clause& query) const {
  std::vector<LitKey> keys = keysOf(query);
  if (keys.empty()) {
    return {};
  }
  LitKey least = keys.front();
  unsigned bestFreq = 0;
  bool first = true;
  for (const LitKey& k : keys) {
    auto it = _freq.find(k);
    unsigned f = it == _freq.end() ? 0 : it->second;
    if (first || f < bestFreq) {
      least = k;
      bestFreq = f;
      first = false;
    }
  }
  auto it = _byAll.find(least);
  return it == _byAll.end() ? std::vector<ClausePtr>() : it->second;
}

} // namespace peregrine
