#pragma once

#include "kernel/Term.hpp"

namespace peregrine {

enum class Order : uint8_t { Greater, Less, Equal, Incomparable };

inline Order flipOrder(Order o) {
  switch (o) {
    case Order::Greater: return Order::Less;
    case Order::Less: return Order::Greater;
    default: return o;
  }
}

/**
 * Knuth-Bendix ordering over polymorphic terms. All symbols and variables
 * weigh 1; sort arguments count like ordinary arguments. Precedence: total
 * arity first, later-declared symbols greater; numerals sit below every
 * symbol and compare among themselves by value, which keeps the order
 * total on ground terms.
 */
class Kbo {
public:
  explicit Kbo(const Signature& sig) : _sig(&sig) {}

  Order compare(const TermPtr& a, const TermPtr& b) const;

  /** Multiset extension; used for literal maximality. */
  Order compareMultisets(std::vector<TermPtr> a, std::vector<TermPtr> b) const;

  const Signature& signature() const { return *_sig; }

private:
  int headCmp(const Term& a, const Term& b) const;

  const Signature* _sig;
};

} // namespace peregrine
