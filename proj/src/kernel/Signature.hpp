#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kernel/Builtins.hpp"
#include "kernel/Common.hpp"

namespace peregrine {

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class SymbolKind : uint8_t {
  Function,
  Predicate,
  SortCtor,
  DatatypeCtor,
};

struct SymbolDecl {
  std::string name;
  SymbolKind kind;
  /** Number of sort parameters; their patterns use sort variables 0..sortArity-1. */
  unsigned sortArity = 0;
  /** Argument sort patterns over the sort parameters. Empty for sort constructors. */
  std::vector<TermPtr> argSorts;
  /** Result sort pattern; null for sort constructors and predicates. */
  TermPtr resultSort;
  bool interpreted = false;
  bool skolem = false;
  /** True for symbols invented during preprocessing (definitions, naming). */
  bool introduced = false;
  /** Index into Signature::datatypes() when this is a datatype sort ctor, else -1. */
  int datatype = -1;

  unsigned arity() const { return static_cast<unsigned>(argSorts.size()); }
};

struct Datatype {
  SymbolId sortCtor;
  std::vector<SymbolId> ctors;
};

/**
 * Symbol table shared by all terms of one problem. Sort constructors,
 * functions and predicates live in a single namespace; numerals are not
 * symbols. Copying a Signature gives an independent table, which is how
 * portfolio workers isolate their skolem counters from each other.
 */
class Signature {
public:
  Signature();

  SymbolId declare(const std::string& name, SymbolKind kind, unsigned sortArity,
                   std::vector<TermPtr> argSorts, TermPtr resultSort);

  /** Auto-declaration for untyped (fof) input: everything over $i. */
  SymbolId declareUntyped(const std::string& name, SymbolKind kind, unsigned arity);

  std::optional<SymbolId> lookup(const std::string& name) const;

  const SymbolDecl& operator[](SymbolId id) const {
    PER_ASSERT(id < _decls.size());
    return _decls[id];
  }
  SymbolDecl& mutableDecl(SymbolId id) {
    PER_ASSERT(id < _decls.size());
    return _decls[id];
  }

  unsigned size() const { return static_cast<unsigned>(_decls.size()); }

  /** Fresh skolem symbol; names run σ0, σ1, ... in introduction order. */
  SymbolId freshSkolem(unsigned sortArity, std::vector<TermPtr> argSorts, TermPtr resultSort);
  /** Fresh symbol for definitions introduced by naming or FOOL elimination. */
  SymbolId freshIntroduced(const std::string& prefix, SymbolKind kind, unsigned sortArity,
                           std::vector<TermPtr> argSorts, TermPtr resultSort);

  void addDatatype(SymbolId sortCtor, std::vector<SymbolId> ctors);
  const std::vector<Datatype>& datatypes() const { return _datatypes; }

  bool isArithSort(SymbolId s) const { return s == SYM_REAL || s == SYM_INT; }
  static bool isArithFunction(SymbolId f) {
    return f == SYM_ADD_R || f == SYM_ADD_I || f == SYM_NEG_R || f == SYM_NEG_I
        || f == SYM_MUL_R || f == SYM_MUL_I;
  }
  static bool isArithPredicate(SymbolId f) {
    return f == SYM_LESS_R || f == SYM_LESS_I || f == SYM_LEQ_R || f == SYM_LEQ_I;
  }
  static bool isFoolSymbol(SymbolId f) {
    return f >= SYM_FOOL_ITE && f <= SYM_FOOL_EQ;
  }

  static SymbolId addFor(bool integer) { return integer ? SYM_ADD_I : SYM_ADD_R; }
  static SymbolId negFor(bool integer) { return integer ? SYM_NEG_I : SYM_NEG_R; }
  static SymbolId mulFor(bool integer) { return integer ? SYM_MUL_I : SYM_MUL_R; }
  static SymbolId lessFor(bool integer) { return integer ? SYM_LESS_I : SYM_LESS_R; }
  static SymbolId leqFor(bool integer) { return integer ? SYM_LEQ_I : SYM_LEQ_R; }

  /**
   * Precedence for the term ordering: symbols of larger total arity are
   * greater; ties go to the later-declared symbol. Returns <0, 0 or >0.
   */
  int precedenceCmp(SymbolId a, SymbolId b) const;

  unsigned skolemCount() const { return _skolemCounter; }

private:
  SymbolId add(SymbolDecl d);

  std::vector<SymbolDecl> _decls;
  std::map<std::string, SymbolId> _byName;
  std::vector<Datatype> _datatypes;
  unsigned _skolemCounter = 0;
  unsigned _introducedCounter = 0;
};

} // namespace peregrine
