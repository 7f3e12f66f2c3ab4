#pragma once

#include "parse/Problem.hpp"

namespace peregrine {

struct TptpOptions {
  /** Extra directories tried when resolving include() paths. */
  std::vector<std::string> includeDirs;
};

/**
 * Parses fof, tff and cnf units. Typed units support rank-1 polymorphism
 * (!> prefixes in type declarations and formulas), linear arithmetic over
 * $int and $real with overload resolution by argument sort, Boolean
 * subterms ($ite, variable-binding $let, predicates in term positions),
 * and a datatype unit form listing the constructors of an algebraic sort:
 *
 *   tff(list_dt, datatype, [nil, cons]).
 *
 * The result is validated; the conjecture is left unnegated.
 */
Problem parseTptpFile(const std::string& path, const TptpOptions& opts = {});

/** Same grammar from an in-memory string; `name` appears in errors. */
Problem parseTptpString(const std::string& text, const std::string& name = "<input>",
                        const TptpOptions& opts = {});

} // namespace peregrine
