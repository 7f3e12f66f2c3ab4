#include "kernel/Term.hpp"

#include <boost/functional/hash.hpp>

namespace peregrine {

void Term::finalize() {
  _weight = 1;
  _ground = _tag != Tag::Var;
  size_t h = static_cast<size_t>(_tag) * 0x9e3779b9;
  switch (_tag) {
    case Tag::Var:
      h = hashCombine(h, _varId);
      h = hashCombine(h, _sortVar ? 1 : 0);
      break;
    case Tag::App:
      h = hashCombine(h, _sym);
      break;
    case Tag::Num:
      h = hashCombine(h, boost::hash<Rational>{}(_num));
      break;
    case Tag::Let:
      break;
  }
  for (auto& s : _sortArgs) {
    _weight += s->weight();
    _ground = _ground && s->ground();
    h = hashCombine(h, s->hash());
  }
  for (auto& a : _args) {
    _weight += a->weight();
    _ground = _ground && a->ground();
    h = hashCombine(h, a->hash());
  }
  _hash = h;
}

bool Term::equals(const Term& o) const {
  if (this == &o) {
    return true;
  }
  if (_tag != o._tag || _hash != o._hash || _weight != o._weight) {
    return false;
  }
  switch (_tag) {
    case Tag::Var:
      return _varId == o._varId && _sortVar == o._sortVar;
    case Tag::Num:
      return _num == o._num && equal(_sort, o._sort);
    case Tag::App:
      if (_sym != o._sym) {
        return false;
      }
      break;
    case Tag::Let:
      break;
  }
  if (_sortArgs.size() != o._sortArgs.size() || _args.size() != o._args.size()) {
    return false;
  }
  for (size_t i = 0; i < _sortArgs.size(); ++i) {
    if (!equal(_sortArgs[i], o._sortArgs[i])) {
      return false;
    }
  }
  for (size_t i = 0; i < _args.size(); ++i) {
    if (!equal(_args[i], o._args[i])) {
      return false;
    }
  }
  return true;
}

int Term::cmp(const Term& a, const Term& b) {
  if (&a == &b) {
    return 0;
  }
  if (a._tag != b._tag) {
    return a._tag < b._tag ? -1 : 1;
  }
  switch (a._tag) {
    case Tag::Var:
      if (a._sortVar != b._sortVar) {
        return a._sortVar ? -1 : 1;
      }
      if (a._varId != b._varId) {
        return a._varId < b._varId ? -1 : 1;
      }
      return 0;
    case Tag::Num: {
      bool ai = a._sort.get() == intSort().get();
      bool bi = b._sort.get() == intSort().get();
      if (ai != bi) {
        return ai ? -1 : 1;
      }
      if (a._num != b._num) {
        return a._num < b._num ? -1 : 1;
      }
      return 0;
    }
    case Tag::App:
      if (a._sym != b._sym) {
        return a._sym < b._sym ? -1 : 1;
      }
      break;
    case Tag::Let:
      break;
  }
  if (a._sortArgs.size() != b._sortArgs.size()) {
    return a._sortArgs.size() < b._sortArgs.size() ? -1 : 1;
  }
  if (a._args.size() != b._args.size()) {
    return a._args.size() < b._args.size() ? -1 : 1;
  }
  for (size_t i = 0; i < a._sortArgs.size(); ++i) {
    int c = cmp(*a._sortArgs[i], *b._sortArgs[i]);
    if (c != 0) {
      return c;
    }
  }
  for (size_t i = 0; i < a._args.size(); ++i) {
    int c = cmp(*a._args[i], *b._args[i]);
    if (c != 0) {
      return c;
    }
  }
  return 0;
}

namespace {
struct TermBuilder : Term {};

std::shared_ptr<TermBuilder> blank() {
  return std::make_shared<TermBuilder>();
}
} // namespace

TermPtr Term::mkVar(unsigned id, TermPtr sort) {
  PER_ASSERT(sort != nullptr);
  auto t = blank();
  t->_tag = Tag::Var;
  t->_varId = id;
  t->_sortVar = false;
  t->_sort = std::move(sort);
  t->finalize();
  return t;
}

TermPtr Term::mkSortVar(unsigned id) {
  auto t = blank();
  t->_tag = Tag::Var;
  t->_varId = id;
  t->_sortVar = true;
  t->_sort = tType();
  t->finalize();
  return t;
}

TermPtr Term::mkApp(const Signature& sig, SymbolId f,
                    std::vector<TermPtr> sortArgs, std::vector<TermPtr> args) {
  const SymbolDecl& d = sig[f];
  PER_ASSERT_MSG(sortArgs.size() == d.sortArity, "sort arity mismatch on " + d.name);
  PER_ASSERT_MSG(args.size() == d.arity() || d.kind == SymbolKind::SortCtor,
                 "arity mismatch on " + d.name);
  auto t = blank();
  t->_tag = Tag::App;
  t->_sym = f;
  if (d.kind == SymbolKind::SortCtor) {
    PER_ASSERT_MSG(args.empty(), "sort constructor applied to terms: " + d.name);
    for (auto& s : sortArgs) {
      PER_ASSERT_MSG(s->isSortTerm(), "non-sort argument to sort constructor " + d.name);
    }
    t->_sort = tType();
  } else {
    for (auto& s : sortArgs) {
      PER_ASSERT_MSG(s->isSortTerm(), "non-sort sort-argument to " + d.name);
    }
    for (size_t i = 0; i < args.size(); ++i) {
      TermPtr expected = instantiatePattern(d.argSorts[i], sortArgs);
      PER_ASSERT_MSG(equal(args[i]->sort(), expected),
                     "ill-sorted argument " + std::to_string(i) + " of " + d.name);
    }
    if (d.kind == SymbolKind::Predicate) {
      t->_sort = boolSort();
    } else {
      t->_sort = instantiatePattern(d.resultSort, sortArgs);
    }
  }
  t->_sortArgs = std::move(sortArgs);
  t->_args = std::move(args);
  t->finalize();
  return t;
}

TermPtr Term::mkNum(const Rational& value, bool integer) {
  PER_ASSERT(!integer || isIntegral(value));
  auto t = blank();
  t->_tag = Tag::Num;
  t->_num = value;
  t->_sort = integer ? intSort() : realSort();
  t->finalize();
  return t;
}

TermPtr Term::mkLet(TermPtr var, TermPtr value, TermPtr body) {
  PER_ASSERT(var->isVar() && !var->isSortVar());
  PER_ASSERT(equal(var->sort(), value->sort()));
  auto t = blank();
  t->_tag = Tag::Let;
  t->_sort = body->sort();
  t->_args = {std::move(var), std::move(value), std::move(body)};
  t->finalize();
  return t;
}

// The singletons cannot go through mkApp because no signature exists yet
// when they are first needed; their shapes are fixed by construction.
namespace singleton {
struct Build : Term {
  static TermPtr sortCtor(SymbolId sym, TermPtr theType) {
    auto t = std::make_shared<Build>();
    t->_tag = Tag::App;
    t->_sym = sym;
    t->_sort = std::move(theType);
    t->finalize();
    return t;
  }
  static TermPtr boolConst(SymbolId sym, TermPtr boolS) {
    auto t = std::make_shared<Build>();
    t->_tag = Tag::App;
    t->_sym = sym;
    t->_sort = std::move(boolS);
    t->finalize();
    return t;
  }
};
} // namespace singleton

const TermPtr& Term::tType() {
  static TermPtr t = singleton::Build::sortCtor(SYM_TTYPE, nullptr);
  return t;
}
const TermPtr& Term::realSort() {
  static TermPtr t = singleton::Build::sortCtor(SYM_REAL, tType());
  return t;
}
const TermPtr& Term::intSort() {
  static TermPtr t = singleton::Build::sortCtor(SYM_INT, tType());
  return t;
}
const TermPtr& Term::boolSort() {
  static TermPtr t = singleton::Build::sortCtor(SYM_BOOL, tType());
  return t;
}
const TermPtr& Term::indSort() {
  static TermPtr t = singleton::Build::sortCtor(SYM_IND, tType());
  return t;
}
const TermPtr& Term::trueTerm() {
  static TermPtr t = singleton::Build::boolConst(SYM_TRUE, boolSort());
  return t;
}
const TermPtr& Term::falseTerm() {
  static TermPtr t = singleton::Build::boolConst(SYM_FALSE, boolSort());
  return t;
}

TermPtr Term::instantiatePattern(const TermPtr& pattern, const std::vector<TermPtr>& sortArgs) {
  if (pattern->isVar()) {
    PER_ASSERT(pattern->isSortVar() && pattern->varId() < sortArgs.size());
    return sortArgs[pattern->varId()];
  }
  if (pattern->_sortArgs.empty()) {
    return pattern;
  }
  std::vector<TermPtr> inst;
  inst.reserve(pattern->_sortArgs.size());
  bool changed = false;
  for (auto& s : pattern->_sortArgs) {
    inst.push_back(instantiatePattern(s, sortArgs));
    changed = changed || inst.back().get() != s.get();
  }
  if (!changed) {
    return pattern;
  }
  auto t = blank();
  t->_tag = Tag::App;
  t->_sym = pattern->_sym;
  t->_sort = tType();
  t->_sortArgs = std::move(inst);
  t->finalize();
  return t;
}

TermPtr Term::rebuild(const TermPtr& like, TermPtr sort,
                      std::vector<TermPtr> sortArgs, std::vector<TermPtr> args) {
  PER_ASSERT(!like->isVar());
  PER_ASSERT(sortArgs.size() == like->_sortArgs.size());
  PER_ASSERT(args.size() == like->_args.size());
  auto t = blank();
  t->_tag = like->_tag;
  t->_sym = like->_sym;
  t->_num = like->_num;
  t->_sort = std::move(sort);
  t->_sortArgs = std::move(sortArgs);
  t->_args = std::move(args);
  t->finalize();
  return t;
}

void Term::collectVars(std::map<unsigned, TermPtr>& out) const {
  if (_ground) {
    return;
  }
  if (isVar()) {
    auto it = out.find(_varId);
    if (it == out.end()) {
      // Reconstruct a handle for this variable occurrence.
      out.emplace(_varId, _sortVar ? mkSortVar(_varId) : mkVar(_varId, _sort));
    }
    if (!_sortVar) {
      _sort->collectVars(out);
    }
    return;
  }
  if (_tag == Tag::Let) {
    _args[1]->collectVars(out);
    // The binder shadows its variable inside the body.
    std::map<unsigned, TermPtr> bodyVars;
    _args[2]->collectVars(bodyVars);
    bodyVars.erase(_args[0]->varId());
    out.insert(bodyVars.begin(), bodyVars.end());
    return;
  }
  for (auto& s : _sortArgs) {
    s->collectVars(out);
  }
  for (auto& a : _args) {
    a->collectVars(out);
  }
}

bool Term::containsVar(unsigned id) const {
  if (_ground) {
    return false;
  }
  if (isVar()) {
    return _varId == id || (!_sortVar && _sort->containsVar(id));
  }
  for (auto& s : _sortArgs) {
    if (s->containsVar(id)) {
      return true;
    }
  }
  for (auto& a : _args) {
    if (a->containsVar(id)) {
      return true;
    }
  }
  return false;
}

bool Term::containsSubterm(const TermPtr& t) const {
  if (equals(*t)) {
    return true;
  }
  for (auto& s : _sortArgs) {
    if (s->containsSubterm(t)) {
      return true;
    }
  }
  for (auto& a : _args) {
    if (a->containsSubterm(t)) {
      return true;
    }
  }
  return false;
}

bool Term::hasFool() const {
  if (_tag == Tag::Let) {
    return true;
  }
  if (isApp() && Signature::isFoolSymbol(_sym)) {
    return true;
  }
  for (auto& a : _args) {
    if (a->hasFool()) {
      return true;
    }
  }
  return false;
}

const TermPtr& Term::subtermAt(const std::vector<unsigned>& path) const {
  const Term* cur = this;
  const TermPtr* handle = nullptr;
  for (unsigned idx : path) {
    PER_ASSERT(idx < cur->_args.size());
    handle = &cur->_args[idx];
    cur = handle->get();
  }
  PER_ASSERT_MSG(handle != nullptr, "empty path has no handle");
  return *handle;
}

TermPtr Term::replaceAt(const TermPtr& root, const std::vector<unsigned>& path,
                        const TermPtr& replacement) {
  if (path.empty()) {
    PER_ASSERT(equal(root->sort(), replacement->sort()));
    return replacement;
  }
  unsigned idx = path.front();
  PER_ASSERT(idx < root->_args.size());
  std::vector<unsigned> rest(path.begin() + 1, path.end());
  std::vector<TermPtr> args = root->_args;
  args[idx] = replaceAt(args[idx], rest, replacement);
  auto t = blank();
  t->_tag = root->_tag;
  t->_sym = root->_sym;
  t->_num = root->_num;
  t->_varId = root->_varId;
  t->_sortVar = root->_sortVar;
  t->_sort = root->_sort;
  t->_sortArgs = root->_sortArgs;
  t->_args = std::move(args);
  t->finalize();
  return t;
}

TermPtr Term::replaceAll(const TermPtr& root, const TermPtr& from, const TermPtr& to) {
  if (root->equals(*from)) {
    return to;
  }
  if (root->_args.empty()) {
    return root;
  }
  std::vector<TermPtr> args;
  args.reserve(root->_args.size());
  bool changed = false;
  for (auto& a : root->_args) {
    args.push_back(replaceAll(a, from, to));
    changed = changed || args.back().get() != a.get();
  }
  if (!changed) {
    return root;
  }
  auto t = blank();
  t->_tag = root->_tag;
  t->_sym = root->_sym;
  t->_num = root->_num;
  t->_varId = root->_varId;
  t->_sortVar = root->_sortVar;
  t->_sort = root->_sort;
  t->_sortArgs = root->_sortArgs;
  t->_args = std::move(args);
  t->finalize();
  return t;
}

void Term::collectSubterms(const TermPtr& root,
                           std::vector<std::pair<TermPtr, std::vector<unsigned>>>& out) {
  struct Walker {
    std::vector<std::pair<TermPtr, std::vector<unsigned>>>& out;
    std::vector<unsigned> path;
    void walk(const TermPtr& t) {
      if (!t->isVar()) {
        out.emplace_back(t, path);
      }
      for (unsigned i = 0; i < t->args().size(); ++i) {
        path.push_back(i);
        walk(t->args()[i]);
        path.pop_back();
      }
    }
  };
  Walker w{out, {}};
  w.walk(root);
}

} // namespace peregrine
