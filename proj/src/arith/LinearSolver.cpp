#include "arith/LinearSolver.hpp"

#include <algorithm>
#include <set>

namespace peregrine {

namespace {

/** 0 >= constant + sum coeff*var, strict when `strict`. */
struct Row {
  bool strict = false;
  std::map<unsigned, Rational> coeffs;
  Rational constant;

  bool trivialCheck() const {
    // Only valid once no variables remain.
    return strict ? constant < 0 : constant <= 0;
  }
};

Row scaleRowToIntegers(const Row& r) {
  Integer lcm = 1;
  auto fold = [&](const Rational& q) { lcm = boost::multiprecision::lcm(lcm, denominator(q)); };
  fold(r.constant);
  for (auto& [v, c] : r.coeffs) {
    (void)v;
    fold(c);
  }
  Row out = r;
  Rational k(lcm, 1);
  out.constant *= k;
  for (auto& [v, c] : out.coeffs) {
    (void)v;
    c *= k;
  }
  return out;
}

struct Interval {
  bool hasLo = false, hasHi = false;
  bool loStrict = false, hiStrict = false;
  Rational lo, hi;

  void addLo(const Rational& v, bool strict) {
    if (!hasLo || v > lo || (v == lo && strict && !loStrict)) {
      hasLo = true;
      lo = v;
      loStrict = strict;
    }
  }
  void addHi(const Rational& v, bool strict) {
    if (!hasHi || v < hi || (v == hi && strict && !hiStrict)) {
      hasHi = true;
      hi = v;
      hiStrict = strict;
    }
  }
  bool nonEmpty() const {
    if (!hasLo || !hasHi) {
      return true;
    }
    if (lo < hi) {
      return true;
    }
    return lo == hi && !loStrict && !hiStrict;
  }
};

/** Least-absolute-value pick; midpoints for open interior bounds. */
Rational pickRational(const Interval& iv) {
  auto aboveLo = [&](const Rational& v) {
    return !iv.hasLo || v > iv.lo || (v == iv.lo && !iv.loStrict);
  };
  auto belowHi = [&](const Rational& v) {
    return !iv.hasHi || v < iv.hi || (v == iv.hi && !iv.hiStrict);
  };
  if (aboveLo(Rational(0)) && belowHi(Rational(0))) {
    return Rational(0);
  }
  if (iv.hasLo && iv.lo >= 0) {
    if (!iv.loStrict) {
      return iv.lo;
    }
    if (iv.hasHi) {
      return (iv.lo + iv.hi) / 2;
    }
    return iv.lo + 1;
  }
  PER_ASSERT(iv.hasHi && iv.hi <= 0);
  if (!iv.hiStrict) {
    return iv.hi;
  }
  if (iv.hasLo) {
    return (iv.lo + iv.hi) / 2;
  }
  return iv.hi - 1;
}

/** Smallest-magnitude integer in the interval, if any. */
std::optional<Integer> pickInteger(const Interval& iv) {
  std::optional<Integer> loZ, hiZ;
  if (iv.hasLo) {
    Integer l = rationalCeil(iv.lo);
    if (iv.loStrict && Rational(l) == iv.lo) {
      ++l;
    }
    loZ = l;
  }
  if (iv.hasHi) {
    Integer h = rationalFloor(iv.hi);
    if (iv.hiStrict && Rational(h) == iv.hi) {
      --h;
    }
    hiZ = h;
  }
  if (loZ && hiZ && *loZ > *hiZ) {
    return std::nullopt;
  }
  if ((!loZ || *loZ <= 0) && (!hiZ || *hiZ >= 0)) {
    return Integer(0);
  }
  if (loZ && *loZ > 0) {
    return *loZ;
  }
  return *hiZ;
}

struct FmSolver {
  bool integer;
  int budget = 400;

  std::optional<std::map<unsigned, Rational>> solve(std::vector<Row> rows) {
    if (integer) {
      for (auto& r : rows) {
        r = scaleRowToIntegers(r);
        if (r.strict) {
          // Over the integers 0 > p is 0 >= p+1.
          r.constant += 1;
          r.strict = false;
        }
      }
    }

    std::set<unsigned> varSet;
    for (auto& r : rows) {
      for (auto& [v, c] : r.coeffs) {
        (void)c;
        varSet.insert(v);
      }
    }
    std::vector<unsigned> vars(varSet.begin(), varSet.end());

    // Eliminate in ascending id order, remembering the rows each variable
    // appeared in for back-substitution.
    std::vector<std::pair<unsigned, std::vector<Row>>> levels;
    std::vector<Row> current = std::move(rows);
    for (unsigned v : vars) {
      std::vector<Row> with, without, uppers, lowers;
      for (auto& r : current) {
        auto it = r.coeffs.find(v);
        if (it == r.coeffs.end() || it->second == 0) {
          without.push_back(r);
        } else {
          with.push_back(r);
          (it->second > 0 ? uppers : lowers).push_back(r);
        }
      }
      for (auto& u : uppers) {
        for (auto& l : lowers) {
          Rational au = u.coeffs.at(v);
          Rational al = l.coeffs.at(v);
          Row combined;
          combined.strict = u.strict || l.strict;
          combined.constant = u.constant * (-al) + l.constant * au;
          for (auto& [w, c] : u.coeffs) {
            if (w != v) {
              combined.coeffs[w] += c * (-al);
            }
          }
          for (auto& [w, c] : l.coeffs) {
            if (w != v) {
              combined.coeffs[w] += c * au;
            }
          }
          std::erase_if(combined.coeffs, [](auto& kv) { return kv.second == 0; });
          without.push_back(std::move(combined));
        }
      }
      levels.emplace_back(v, std::move(with));
      current = std::move(without);
    }

    for (auto& r : current) {
      PER_ASSERT(r.coeffs.empty());
      if (!r.trivialCheck()) {
        return std::nullopt;
      }
    }

    // Back-substitution, last eliminated variable first.
    std::map<unsigned, Rational> model;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
      auto& [v, levelRows] = *it;
      Interval iv;
      for (auto& r : levelRows) {
        Rational a = r.coeffs.at(v);
        Rational rest = r.constant;
        for (auto& [w, c] : r.coeffs) {
          if (w != v) {
            rest += c * model.at(w);
          }
        }
        // 0 >= rest + a*v.
        Rational bound = -rest / a;
        if (a > 0) {
          iv.addHi(bound, r.strict);
        } else {
          iv.addLo(bound, r.strict);
        }
      }
      PER_ASSERT_MSG(iv.nonEmpty(), "feasible projection yielded an empty interval");
      if (!integer) {
        model.emplace(v, pickRational(iv));
        continue;
      }
      std::optional<Integer> z = pickInteger(iv);
      if (z) {
        model.emplace(v, Rational(*z));
        continue;
      }
      // Rational hole without an integer: branch around the fractional
      // region and restart.
      if (--budget <= 0) {
        return std::nullopt;
      }
      Rational split = pickRational(iv);
      Integer fl = rationalFloor(split);
      for (int side = 0; side < 2; ++side) {
        Row extra;
        if (side == 0) {
          // v <= floor(split): 0 >= v - floor(split)
          extra.coeffs[v] = 1;
          extra.constant = -Rational(fl);
        } else {
          // v >= floor(split)+1: 0 >= floor(split)+1 - v
          extra.coeffs[v] = -1;
          extra.constant = Rational(fl + 1);
        }
        std::vector<Row> again;
        for (auto& [w, lr] : levels) {
          (void)w;
          for (auto& r : lr) {
            again.push_back(r);
          }
        }
        again.push_back(extra);
        if (auto sub = solve(std::move(again))) {
          return sub;
        }
      }
      return std::nullopt;
    }
    return model;
  }
};

} // namespace

std::optional<std::map<unsigned, Rational>> solveLinear(
    const std::vector<LinearConstraint>& constraints, bool integer) {
  // Equations split into two inequalities; disequations case-split.
  std::vector<Row> base;
  std::vector<const LinearConstraint*> neqs;
  for (auto& c : constraints) {
    switch (c.rel) {
      case ArithRel::Geq:
      case ArithRel::Greater: {
        Row r;
        r.strict = c.rel == ArithRel::Greater;
        r.coeffs = c.coeffs;
        r.constant = c.constant;
        base.push_back(std::move(r));
        break;
      }
      case ArithRel::Eq: {
        Row a;
        a.coeffs = c.coeffs;
        a.constant = c.constant;
        Row b;
        b.constant = -c.constant;
        for (auto& [v, k] : c.coeffs) {
          b.coeffs[v] = -k;
        }
        base.push_back(std::move(a));
        base.push_back(std::move(b));
        break;
      }
      case ArithRel::Neq:
        neqs.push_back(&c);
        break;
    }
  }
  if (neqs.size() > 12) {
    return std::nullopt;
  }
  // Iterate over the sign choices for each disequation, depth-first with
  // the positive branch (0 > p) explored before the negative.
  size_t combos = size_t{1} << neqs.size();
  for (size_t mask = 0; mask < combos; ++mask) {
    std::vector<Row> rows = base;
    for (size_t i = 0; i < neqs.size(); ++i) {
      Row r;
      r.strict = true;
      bool positiveBranch = !((mask >> i) & 1);
      for (auto& [v, k] : neqs[i]->coeffs) {
        r.coeffs[v] = positiveBranch ? k : -k;
      }
      r.constant = positiveBranch ? neqs[i]->constant : -neqs[i]->constant;
      rows.push_back(std::move(r));
    }
    FmSolver solver{integer};
    if (auto m = solver.solve(std::move(rows))) {
      // Variables eliminated entirely by cancellation still need values.
      for (auto& c : constraints) {
        for (auto& [v, k] : c.coeffs) {
          (void)k;
          m->emplace(v, Rational(0));
        }
      }
      return m;
    }
  }
  return std::nullopt;
}

} // namespace peregrine
