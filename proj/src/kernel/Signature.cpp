#include "kernel/Signature.hpp"

#include "kernel/Term.hpp"

namespace peregrine {

namespace {

SymbolDecl makeDecl(std::string name, SymbolKind kind, unsigned sortArity,
                    std::vector<TermPtr> argSorts, TermPtr resultSort, bool interpreted) {
  SymbolDecl d;
  d.name = std::move(name);
  d.kind = kind;
  d.sortArity = sortArity;
  d.argSorts = std::move(argSorts);
  d.resultSort = std::move(resultSort);
  d.interpreted = interpreted;
  return d;
}

} // namespace

Signature::Signature() {
  const TermPtr& re = Term::realSort();
  const TermPtr& in = Term::intSort();
  const TermPtr& bo = Term::boolSort();
  TermPtr a = Term::mkSortVar(0);

  auto reg = [&](const char* name, SymbolKind kind, unsigned sortArity,
                 std::vector<TermPtr> argSorts, TermPtr resultSort) {
    add(makeDecl(name, kind, sortArity, std::move(argSorts), std::move(resultSort), true));
  };

  reg("$tType", SymbolKind::SortCtor, 0, {}, nullptr);
  reg("$real", SymbolKind::SortCtor, 0, {}, nullptr);
  reg("$int", SymbolKind::SortCtor, 0, {}, nullptr);
  reg("$o", SymbolKind::SortCtor, 0, {}, nullptr);
  reg("$i", SymbolKind::SortCtor, 0, {}, nullptr);
  reg("$true", SymbolKind::Function, 0, {}, bo);
  reg("$false", SymbolKind::Function, 0, {}, bo);
  reg("$sum", SymbolKind::Function, 0, {re, re}, re);
  reg("$sum_int", SymbolKind::Function, 0, {in, in}, in);
  reg("$uminus", SymbolKind::Function, 0, {re}, re);
  reg("$uminus_int", SymbolKind::Function, 0, {in}, in);
  reg("$product", SymbolKind::Function, 0, {re, re}, re);
  reg("$product_int", SymbolKind::Function, 0, {in, in}, in);
  reg("$less", SymbolKind::Predicate, 0, {re, re}, nullptr);
  reg("$less_int", SymbolKind::Predicate, 0, {in, in}, nullptr);
  reg("$lesseq", SymbolKind::Predicate, 0, {re, re}, nullptr);
  reg("$lesseq_int", SymbolKind::Predicate, 0, {in, in}, nullptr);
  reg("$$ite", SymbolKind::Function, 1, {bo, a, a}, a);
  reg("$$and", SymbolKind::Function, 0, {bo, bo}, bo);
  reg("$$or", SymbolKind::Function, 0, {bo, bo}, bo);
  reg("$$imp", SymbolKind::Function, 0, {bo, bo}, bo);
  reg("$$iff", SymbolKind::Function, 0, {bo, bo}, bo);
  reg("$$not", SymbolKind::Function, 0, {bo}, bo);
  reg("$$eq", SymbolKind::Function, 1, {a, a}, bo);

  PER_ASSERT(_decls.size() == SYM_N_BUILTINS);
}

SymbolId Signature::add(SymbolDecl d) {
  auto id = static_cast<SymbolId>(_decls.size());
  auto [it, fresh] = _byName.emplace(d.name, id);
  PER_ASSERT_MSG(fresh, "duplicate symbol " + d.name);
  (void)it;
  _decls.push_back(std::move(d));
  return id;
}

SymbolId Signature::declare(const std::string& name, SymbolKind kind, unsigned sortArity,
                            std::vector<TermPtr> argSorts, TermPtr resultSort) {
  return add(makeDecl(name, kind, sortArity, std::move(argSorts), std::move(resultSort), false));
}

SymbolId Signature::declareUntyped(const std::string& name, SymbolKind kind, unsigned arity) {
  std::vector<TermPtr> argSorts(arity, Term::indSort());
  TermPtr result = kind == SymbolKind::Function ? Term::indSort() : nullptr;
  return declare(name, kind, 0, std::move(argSorts), std::move(result));
}

std::optional<SymbolId> Signature::lookup(const std::string& name) const {
  auto it = _byName.find(name);
  if (it == _byName.end()) {
    return std::nullopt;
  }
  return it->second;
}

SymbolId Signature::freshSkolem(unsigned sortArity, std::vector<TermPtr> argSorts,
                                TermPtr resultSort) {
  std::string name = "\xcf\x83" + std::to_string(_skolemCounter++);
  SymbolDecl d = makeDecl(std::move(name), SymbolKind::Function, sortArity,
                          std::move(argSorts), std::move(resultSort), false);
  d.skolem = true;
  d.introduced = true;
  return add(std::move(d));
}

SymbolId Signature::freshIntroduced(const std::string& prefix, SymbolKind kind,
                                    unsigned sortArity, std::vector<TermPtr> argSorts,
                                    TermPtr resultSort) {
  std::string name;
  do {
    name = prefix + std::to_string(_introducedCounter++);
  } while (_byName.count(name));
  SymbolDecl d = makeDecl(std::move(name), kind, sortArity, std::move(argSorts),
                          std::move(resultSort), false);
  d.introduced = true;
  return add(std::move(d));
}

void Signature::addDatatype(SymbolId sortCtor, std::vector<SymbolId> ctors) {
  PER_ASSERT((*this)[sortCtor].kind == SymbolKind::SortCtor);
  PER_ASSERT(!ctors.empty());
  for (SymbolId c : ctors) {
    SymbolDecl& d = _decls[c];
    PER_ASSERT_MSG(d.kind == SymbolKind::Function || d.kind == SymbolKind::DatatypeCtor,
                   "constructor " + d.name + " is not a function");
    d.kind = SymbolKind::DatatypeCtor;
  }
  int idx = static_cast<int>(_datatypes.size());
  _decls[sortCtor].datatype = idx;
  _datatypes.push_back(Datatype{sortCtor, std::move(ctors)});
}

int Signature::precedenceCmp(SymbolId a, SymbolId b) const {
  if (a == b) {
    return 0;
  }
  unsigned ta = _decls[a].sortArity + _decls[a].arity();
  unsigned tb = _decls[b].sortArity + _decls[b].arity();
  if (ta != tb) {
    return ta < tb ? -1 : 1;
  }
  return a < b ? -1 : 1;
}

} // namespace peregrine
