#pragma once

#include <optional>
#include <variant>

#include "arith/Polynomial.hpp"
#include "kernel/Literal.hpp"

namespace peregrine {

/** Relations of the normal form 0 R p; polarity is already folded in. */
enum class ArithRel : uint8_t { Eq, Neq, Greater, Geq };

/**
 * Polynomial reading of an arithmetic literal: s R t becomes 0 R' (t-s)
 * with negative polarity absorbed into the relation (a negative < turns
 * into >=, and so on).
 */
struct ArithView {
  ArithRel rel;
  Polynomial poly;

  static std::optional<ArithView> of(const Literal& lit);
};

struct NormalizeOutcome {
  enum Kind { Unchanged, Changed, True, False } kind;
  Literal lit;
};

/**
 * Canonical form of a literal. Arithmetic literals are rewritten to
 * 0 = p, 0 != p, p < 0 or p <= 0 with coprime integer coefficients;
 * (dis)equations are additionally sign-normalized so the KBO-leading
 * atom's coefficient is positive. Inequalities only ever scale by
 * positive factors, which is why they keep their sign as given.
 * Ground constant literals evaluate to True/False. Arguments below
 * uninterpreted symbols are canonicalized recursively. Non-arithmetic
 * literals pass through untouched.
 */
NormalizeOutcome normalizeLiteral(const Literal& lit, const Signature& sig, const Kbo& kbo);

/** Canonical rendering of any term, recursing through uninterpreted symbols. */
TermPtr canonicalizeTerm(const TermPtr& t, const Signature& sig);

/** An oriented conditional rewrite extracted from a unit equation. */
struct IsolatedRule {
  TermPtr lhs;
  Polynomial rhs;
};

/**
 * Isolates the KBO-leading atom of a positive arithmetic equation:
 * 0 = c*a + q with a strictly maximal yields a -> -q/c. Over $int the
 * coefficient must be a unit. Returns nullopt when no atom is strictly
 * maximal or the literal has the wrong shape.
 */
std::optional<IsolatedRule> isolateLeading(const Literal& lit, const Kbo& kbo);

/** Positionally exact literal comparison (unlike Literal::equals). */
bool literalIdentical(const Literal& a, const Literal& b);

} // namespace peregrine
