#pragma once

#include <map>
#include <memory>
#include <vector>

#include "kernel/Rational.hpp"
#include "kernel/Signature.hpp"

namespace peregrine {

/**
 * Immutable, shared term node. Sorts are terms too: a sort constructor
 * application like list($real) is an App whose cached sort is the tType
 * singleton. Every non-sort term caches its sort, computed once at
 * construction from the symbol declaration, so substitution and rewriting
 * never need the signature to stay well-sorted.
 *
 * Term and sort variables share one id space; a clause never uses the same
 * id for both kinds. Let nodes exist only between parsing and FOOL
 * elimination.
 */
class Term {
public:
  enum class Tag : uint8_t { Var, App, Num, Let };

  Tag tag() const { return _tag; }
  bool isVar() const { return _tag == Tag::Var; }
  bool isApp() const { return _tag == Tag::App; }
  bool isNum() const { return _tag == Tag::Num; }

  unsigned varId() const { PER_ASSERT(isVar()); return _varId; }
  bool isSortVar() const { return _tag == Tag::Var && _sortVar; }

  SymbolId symbol() const { PER_ASSERT(isApp()); return _sym; }
  const std::vector<TermPtr>& sortArgs() const { return _sortArgs; }
  const std::vector<TermPtr>& args() const { return _args; }

  const Rational& number() const { PER_ASSERT(isNum()); return _num; }

  const TermPtr& letVar() const { PER_ASSERT(_tag == Tag::Let); return _args[0]; }
  const TermPtr& letValue() const { PER_ASSERT(_tag == Tag::Let); return _args[1]; }
  const TermPtr& letBody() const { PER_ASSERT(_tag == Tag::Let); return _args[2]; }

  /** Null only on the tType singleton itself. */
  const TermPtr& sort() const { return _sort; }
  bool isSortTerm() const { return _sort.get() == tType().get(); }

  unsigned weight() const { return _weight; }
  size_t hash() const { return _hash; }
  bool ground() const { return _ground; }

  bool equals(const Term& o) const;
  static bool equal(const TermPtr& a, const TermPtr& b) {
    return a.get() == b.get() || a->equals(*b);
  }
  /** Deterministic structural total order; ignores nothing. */
  static int cmp(const Term& a, const Term& b);

  static TermPtr mkVar(unsigned id, TermPtr sort);
  static TermPtr mkSortVar(unsigned id);
  static TermPtr mkApp(const Signature& sig, SymbolId f,
                       std::vector<TermPtr> sortArgs, std::vector<TermPtr> args);
  static TermPtr mkNum(const Rational& value, bool integer);
  static TermPtr mkLet(TermPtr var, TermPtr value, TermPtr body);

  static const TermPtr& tType();
  static const TermPtr& realSort();
  static const TermPtr& intSort();
  static const TermPtr& boolSort();
  static const TermPtr& indSort();
  static const TermPtr& trueTerm();
  static const TermPtr& falseTerm();
  static TermPtr zero(bool integer) { return mkNum(Rational(0), integer); }

  /** Substitutes sort parameters 0..n-1 of a declaration pattern. */
  static TermPtr instantiatePattern(const TermPtr& pattern, const std::vector<TermPtr>& sortArgs);

  /**
   * Copy of `like` with new children and an explicitly supplied sort.
   * Used by substitution, which derives the new sort by substituting
   * into the cached one instead of consulting the signature.
   */
  static TermPtr rebuild(const TermPtr& like, TermPtr sort,
                         std::vector<TermPtr> sortArgs, std::vector<TermPtr> args);

  void collectVars(std::map<unsigned, TermPtr>& out) const;
  bool containsVar(unsigned id) const;
  bool containsSubterm(const TermPtr& t) const;
  /** True if any FOOL scaffolding (let nodes, $$-symbols) remains. */
  bool hasFool() const;

  /** Positions are argument index paths; sort arguments are never addressed. */
  const TermPtr& subtermAt(const std::vector<unsigned>& path) const;
  static TermPtr replaceAt(const TermPtr& root, const std::vector<unsigned>& path,
                           const TermPtr& replacement);
  static TermPtr replaceAll(const TermPtr& root, const TermPtr& from, const TermPtr& to);
  /**
   * All App/Num subterm occurrences in argument positions, preorder,
   * including the term itself.
   */
  static void collectSubterms(const TermPtr& root, std::vector<std::pair<TermPtr, std::vector<unsigned>>>& out);

protected:
  Term() = default;

  Tag _tag = Tag::App;
  bool _sortVar = false;
  bool _ground = false;
  unsigned _varId = 0;
  SymbolId _sym = 0;
  Rational _num;
  std::vector<TermPtr> _sortArgs;
  std::vector<TermPtr> _args;
  TermPtr _sort;
  unsigned _weight = 1;
  size_t _hash = 0;

  void finalize();
};

struct TermPtrLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return Term::cmp(*a, *b) < 0;
  }
};

} // namespace peregrine
