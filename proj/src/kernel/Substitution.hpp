#pragma once

#include <map>

#include "kernel/Term.hpp"

namespace peregrine {

/**
 * Finite map from variable ids to terms. The unifier and matcher always
 * produce idempotent substitutions (no bound variable occurs in any
 * range term), so apply() is a single pass.
 */
class Substitution {
public:
  Substitution() = default;

  bool empty() const { return _map.empty(); }
  size_t size() const { return _map.size(); }

  void bind(unsigned var, TermPtr t) {
    auto [it, fresh] = _map.emplace(var, std::move(t));
    PER_ASSERT_MSG(fresh, "variable " + std::to_string(var) + " bound twice");
    (void)it;
  }

  const TermPtr* lookup(unsigned var) const {
    auto it = _map.find(var);
    return it == _map.end() ? nullptr : &it->second;
  }

  TermPtr apply(const TermPtr& t) const;

  /**
   * apply(compose(s1,s2), t) == apply(s2, apply(s1, t)). The result is
   * idempotent whenever s2's range avoids s1's domain, which holds for
   * every composition the prover builds (renamings and unifier chains).
   */
  static Substitution compose(const Substitution& s1, const Substitution& s2);

  const std::map<unsigned, TermPtr>& bindings() const { return _map; }

  /** Re-applies this substitution to its own range until idempotent. */
  void makeIdempotent();

private:
  std::map<unsigned, TermPtr> _map;
};

} // namespace peregrine
