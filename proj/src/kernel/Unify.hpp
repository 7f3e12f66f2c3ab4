#pragma once

#include <optional>
#include <vector>

#include "kernel/Substitution.hpp"

namespace peregrine {

/**
 * Most general unifier of the pair list, or nullopt. Result is idempotent.
 * Binding a term variable also unifies the sorts involved, so unifiers of
 * well-sorted terms stay well-sorted.
 */
std::optional<Substitution> unify(const std::vector<std::pair<TermPtr, TermPtr>>& pairs);
std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b);

/**
 * Matching: finds sigma with sigma(pattern) == target, binding only
 * pattern variables. The target's variables act as constants. `seed`
 * carries bindings that must be respected (used for literal matching).
 */
std::optional<Substitution> matchTerms(const std::vector<std::pair<TermPtr, TermPtr>>& pairs,
                                       Substitution seed = Substitution());
std::optional<Substitution> matchTerms(const TermPtr& pattern, const TermPtr& target);

/** Largest variable id occurring in the term, or -1 if ground. */
long maxVarId(const TermPtr& t);

/** Renaming that shifts every variable id in `vars` up by `offset`. */
Substitution shiftVars(const std::map<unsigned, TermPtr>& vars, unsigned offset);

} // namespace peregrine
