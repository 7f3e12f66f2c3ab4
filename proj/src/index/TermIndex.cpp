#include "index/TermIndex.hpp"

#include <algorithm>

namespace peregrine {

bool sameEntry(const TermEntry& a, const TermEntry& b) {
  return a.clause.get() == b.clause.get() && a.lit == b.lit && a.pos == b.pos &&
         Term::equal(a.term, b.term);
}

void DiscriminationTree::flatten(const TermPtr& t, std::vector<TermPtr>& out) {
  out.push_back(t);
  if (t->isApp()) {
    for (const TermPtr& s : t->sortArgs()) {
      flatten(s, out);
    }
    for (const TermPtr& a : t->args()) {
      flatten(a, out);
    }
  }
}

void DiscriminationTree::insert(TermEntry entry) {
  std::vector<TermPtr> tokens;
  flatten(entry.term, tokens);
  Node* node = &_root;
  for (const TermPtr& t : tokens) {
    std::unique_ptr<Node>* slot;
    if (t->isVar()) {
      slot = &node->vars[t->varId()];
    } else if (t->isNum()) {
      slot = &node->nums[NumKey{t->sort().get() == Term::intSort().get(), t->number()}];
    } else {
      slot = &node->funcs[t->symbol()];
    }
    if (!*slot) {
      *slot = std::make_unique<Node>();
    }
    node = slot->get();
  }
  node->leaves.push_back(std::move(entry));
  ++_size;
}

bool DiscriminationTree::removeRec(Node& node, const std::vector<TermPtr>& tokens, size_t i,
                                   const TermEntry& entry) {
  if (i == tokens.size()) {
    auto it = std::find_if(node.leaves.begin(), node.leaves.end(),
                           [&](const TermEntry& e) { return sameEntry(e, entry); });
    PER_ASSERT_MSG(it != node.leaves.end(), "removing a term entry that is not indexed");
    node.leaves.erase(it);
    return node.dead();
  }
  const TermPtr& t = tokens[i];
  auto step = [&](auto& childMap, const auto& key) {
    auto it = childMap.find(key);
    PER_ASSERT_MSG(it != childMap.end(), "removing a term entry that is not indexed");
    if (removeRec(*it->second, tokens, i + 1, entry)) {
      childMap.erase(it);
    }
  };
  if (t->isVar()) {
    step(node.vars, t->varId());
  } else if (t->isNum()) {
    step(node.nums, NumKey{t->sort().get() == Term::intSort().get(), t->number()});
  } else {
    step(node.funcs, t->symbol());
  }
  return node.dead();
}

void DiscriminationTree::remove(const TermEntry& entry) {
  std::vector<TermPtr> tokens;
  flatten(entry.term, tokens);
  removeRec(_root, tokens, 0, entry);
  PER_ASSERT(_size > 0);
  --_size;
}

void DiscriminationTree::descend(const Node& node, const std::vector<TermPtr>& query, size_t i,
                                 std::map<unsigned, TermPtr>& binding,
                                 std::vector<GenHit>& out) const {
  if (i == query.size()) {
    for (const TermEntry& e : node.leaves) {
      // The traversal checked structure and binding consistency; the final
      // match validates variable sorts and yields the substitution.
      if (auto m = matchTerms(e.term, query[0])) {
        out.push_back(GenHit{&e, std::move(*m)});
      }
    }
    return;
  }
  const TermPtr& t = query[i];
  if (t->isApp()) {
    auto it = node.funcs.find(t->symbol());
    if (it != node.funcs.end()) {
      descend(*it->second, query, i + 1, binding, out);
    }
  } else if (t->isNum()) {
    auto it = node.nums.find(NumKey{t->sort().get() == Term::intSort().get(), t->number()});
    if (it != node.nums.end()) {
      descend(*it->second, query, i + 1, binding, out);
    }
  }
  // An indexed variable absorbs the whole query subterm, whose token count
  // is its weight. Query variables are constants: only this case takes them.
  for (const auto& [v, child] : node.vars) {
    auto bound = binding.find(v);
    if (bound != binding.end()) {
      if (Term::equal(bound->second, t)) {
        descend(*child, query, i + t->weight(), binding, out);
      }
      continue;
    }
    binding.emplace(v, t);
    descend(*child, query, i + t->weight(), binding, out);
    binding.erase(v);
  }
}

std::vector<GenHit> DiscriminationTree::retrieveGeneralizations(const TermPtr& query) const {
  std::vector<GenHit> out;
  std::vector<TermPtr> tokens;
  flatten(query, tokens);
  std::map<unsigned, TermPtr> binding;
  descend(_root, tokens, 0, binding, out);
  return out;
}

std::vector<TermEntry>& FlatTermIndex::bucketFor(const TermPtr& t) {
  if (t->isVar()) {
    return _varTop;
  }
  if (t->isNum()) {
    return _numTop;
  }
  return _bySymbol[t->symbol()];
}

void FlatTermIndex::insert(TermEntry entry) {
  bucketFor(entry.term).push_back(std::move(entry));
  ++_size;
}

void FlatTermIndex::remove(const TermEntry& entry) {
  std::vector<TermEntry>& bucket = bucketFor(entry.term);
  auto it = std::find_if(bucket.begin(), bucket.end(),
                         [&](const TermEntry& e) { return sameEntry(e, entry); });
  PER_ASSERT_MSG(it != bucket.end(), "removing a term entry that is not indexed");
  bucket.erase(it);
  if (bucket.empty() && entry.term->isApp()) {
    _bySymbol.erase(entry.term->symbol());
  }
  PER_ASSERT(_size > 0);
  --_size;
}

std::vector<UnifHit> FlatTermIndex::retrieveUnifiable(const TermPtr& query) const {
  std::vector<UnifHit> out;
  auto tryBucket = [&](const std::vector<TermEntry>& bucket) {
    for (const TermEntry& e : bucket) {
      if (auto u = unify(e.term, query)) {
        out.push_back(UnifHit{&e, std::move(*u)});
      }
    }
  };
  if (query->isVar()) {
    for (const auto& [sym, bucket] : _bySymbol) {
      tryBucket(bucket);
    }
    tryBucket(_numTop);
  } else if (query->isNum()) {
    tryBucket(_numTop);
  } else {
    auto it = _bySymbol.find(query->symbol());
    if (it != _bySymbol.end()) {
      tryBucket(it->second);
    }
  }
  tryBucket(_varTop);
  return out;
}

std::vector<GenHit> FlatTermIndex::retrieveInstances(const TermPtr& query) const {
  std::vector<GenHit> out;
  auto tryBucket = [&](const std::vector<TermEntry>& bucket) {
    for (const TermEntry& e : bucket) {
      if (auto m = matchTerms(query, e.term)) {
        out.push_back(GenHit{&e, std::move(*m)});
      }
    }
  };
  if (query->isVar()) {
    for (const auto& [sym, bucket] : _bySymbol) {
      tryBucket(bucket);
    }
    tryBucket(_numTop);
    tryBucket(_varTop);
  } else if (query->isNum()) {
    tryBucket(_numTop);
  } else {
    auto it = _bySymbol.find(query->symbol());
    if (it != _bySymbol.end()) {
      tryBucket(it->second);
    }
  }
  return out;
}

} // namespace peregrine
