#include <doctest.h>

#include <algorithm>

#include "index/LiteralIndex.hpp"
#include "support/TestUtil.hpp"

using namespace peregrine;
using namespace peregrine::test;

namespace {

TermEntry entry(const TermPtr& t, unsigned payload) {
  return TermEntry{t, nullptr, payload, {}};
}

/** Multiset of (term, payload) pairs in a canonical order, for comparisons. */
std::vector<std::pair<std::string, unsigned>> summarize(const std::vector<const TermEntry*>& es) {
  std::vector<std::pair<std::string, unsigned>> out;
  for (const TermEntry* e : es) {
    // The term pointer identity is not stable across copies; a structural
    // fingerprint is. Hash plus weight is collision-free enough here.
    out.emplace_back(std::to_string(e->term->hash()) + ":" + std::to_string(e->term->weight()),
                     e->lit);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <typename Hits>
std::vector<const TermEntry*> entriesOf(const Hits& hits) {
  std::vector<const TermEntry*> out;
  for (const auto& h : hits) {
    out.push_back(h.entry);
  }
  return out;
}

} // namespace

TEST_CASE("insert then remove leaves the index empty") {
  MonoWorld w;
  TermPtr t = Term::mkApp(w.sig, w.f, {}, {w.var(0)});
  DiscriminationTree dt;
  FlatTermIndex flat;
  dt.insert(entry(t, 7));
  flat.insert(entry(t, 7));
  dt.remove(entry(t, 7));
  flat.remove(entry(t, 7));
  CHECK(dt.empty());
  CHECK(flat.empty());
  TermPtr q = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.a, {}, {})});
  CHECK(dt.retrieveGeneralizations(q).empty());
  CHECK(flat.retrieveUnifiable(q).empty());
  CHECK(flat.retrieveInstances(q).empty());
}

TEST_CASE("equal terms with distinct payloads are both retrievable") {
  MonoWorld w;
  TermPtr t = Term::mkApp(w.sig, w.f, {}, {w.var(0)});
  TermPtr q = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.b, {}, {})});
  DiscriminationTree dt;
  dt.insert(entry(t, 1));
  dt.insert(entry(t, 2));
  auto hits = dt.retrieveGeneralizations(q);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].entry->lit + hits[1].entry->lit == 3);
  // Removing one copy keeps the other.
  dt.remove(entry(t, 1));
  hits = dt.retrieveGeneralizations(q);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].entry->lit == 2);
}

TEST_CASE("removing a non-member is an internal fault") {
  MonoWorld w;
  TermPtr t = Term::mkApp(w.sig, w.f, {}, {w.var(0)});
  TermPtr other = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.a, {}, {})});
  DiscriminationTree dt;
  FlatTermIndex flat;
  dt.insert(entry(t, 1));
  flat.insert(entry(t, 1));
  CHECK_THROWS_AS(dt.remove(entry(other, 1)), InternalError);
  CHECK_THROWS_AS(dt.remove(entry(t, 2)), InternalError);
  CHECK_THROWS_AS(flat.remove(entry(t, 2)), InternalError);
}

TEST_CASE("generalization retrieval distinguishes distinct constants") {
  MonoWorld w;
  TermPtr fa = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.a, {}, {})});
  TermPtr fb = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.b, {}, {})});
  DiscriminationTree dt;
  dt.insert(entry(fa, 0));
  CHECK(dt.retrieveGeneralizations(fb).empty());
  CHECK(dt.retrieveGeneralizations(fa).size() == 1);
}

TEST_CASE("polymorphic generalization retrieval binds sort and term variables") {
  PolyWorld w;
  // Indexed pattern: cons(A, y, append(z, x)) with sort variable A.
  TermPtr A = Term::mkSortVar(0);
  TermPtr y = Term::mkVar(1, A);
  TermPtr z = Term::mkVar(2, w.listOf(A));
  TermPtr x = Term::mkVar(3, w.listOf(A));
  TermPtr pattern = Term::mkApp(w.sig, w.cons, {A},
                                {y, Term::mkApp(w.sig, w.append, {A}, {z, x})});
  // Query: cons($real, s3, append(s4, s0)) over skolem constants.
  const TermPtr& real = Term::realSort();
  TermPtr listReal = w.listOf(real);
  SymbolId s0 = w.sig.freshSkolem(0, {}, listReal);
  SymbolId s3 = w.sig.freshSkolem(0, {}, real);
  SymbolId s4 = w.sig.freshSkolem(0, {}, listReal);
  TermPtr query = Term::mkApp(
      w.sig, w.cons, {real},
      {Term::mkApp(w.sig, s3, {}, {}),
       Term::mkApp(w.sig, w.append, {real},
                   {Term::mkApp(w.sig, s4, {}, {}), Term::mkApp(w.sig, s0, {}, {})})});

  DiscriminationTree dt;
  dt.insert(entry(pattern, 0));
  auto hits = dt.retrieveGeneralizations(query);
  REQUIRE(hits.size() == 1);
  CHECK(Term::equal(hits[0].subst.apply(pattern), query));
  CHECK(Term::equal(hits[0].subst.apply(A), real));

  // A query over a different element sort still matches, with A bound there.
  TermPtr queryInt = Term::mkApp(
      w.sig, w.cons, {Term::intSort()},
      {Term::mkVar(9, Term::intSort()),
       Term::mkApp(w.sig, w.append, {Term::intSort()},
                   {Term::mkVar(8, w.listOf(Term::intSort())),
                    Term::mkVar(7, w.listOf(Term::intSort()))})});
  auto hitsInt = dt.retrieveGeneralizations(queryInt);
  REQUIRE(hitsInt.size() == 1);
  CHECK(Term::equal(hitsInt[0].subst.apply(pattern), queryInt));
}

TEST_CASE("unifiable retrieval with variable query finds everything compatible") {
  MonoWorld w;
  FlatTermIndex flat;
  TermPtr fa = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.a, {}, {})});
  TermPtr gv = Term::mkApp(w.sig, w.g, {}, {w.var(0), w.var(1)});
  flat.insert(entry(fa, 1));
  flat.insert(entry(gv, 2));
  auto hits = flat.retrieveUnifiable(w.var(5));
  CHECK(hits.size() == 2);
  auto inst = flat.retrieveInstances(Term::mkApp(w.sig, w.g, {}, {w.var(5), w.var(5)}));
  // g(x, y) is not an instance of g(z, z).
  CHECK(inst.empty());
  auto inst2 = flat.retrieveInstances(Term::mkApp(w.sig, w.g, {}, {w.var(5), w.var(6)}));
  REQUIRE(inst2.size() == 1);
  CHECK(inst2[0].entry->lit == 2);
}

TEST_CASE("randomized workloads agree with brute-force retrieval") {
  MonoWorld w;
  Rng rng(404);
  DiscriminationTree dt;
  FlatTermIndex flat;
  std::vector<TermEntry> shadow;
  unsigned nextPayload = 0;
  int retrievals = 0;

  auto bruteGeneralizations = [&](const TermPtr& q) {
    std::vector<const TermEntry*> out;
    for (const TermEntry& e : shadow) {
      if (matchTerms(e.term, q)) {
        out.push_back(&e);
      }
    }
    return out;
  };
  auto bruteUnifiable = [&](const TermPtr& q) {
    std::vector<const TermEntry*> out;
    for (const TermEntry& e : shadow) {
      if (unify(e.term, q)) {
        out.push_back(&e);
      }
    }
    return out;
  };
  auto bruteInstances = [&](const TermPtr& q) {
    std::vector<const TermEntry*> out;
    for (const TermEntry& e : shadow) {
      if (matchTerms(q, e.term)) {
        out.push_back(&e);
      }
    }
    return out;
  };

  for (int op = 0; op < 1200; ++op) {
    int kind = rng.range(0, 9);
    if (kind < 4 || shadow.empty()) {
      // Insert either a fresh random term or a copy of an indexed one.
      TermPtr t = (!shadow.empty() && rng.coin(0.2))
          ? shadow[static_cast<size_t>(rng.range(0, static_cast<int>(shadow.size()) - 1))].term
          : w.randomTerm(rng, rng.range(0, 4), 3);
      TermEntry e = entry(t, nextPayload++);
      dt.insert(e);
      flat.insert(e);
      shadow.push_back(e);
    } else if (kind < 6) {
      size_t pick = static_cast<size_t>(rng.range(0, static_cast<int>(shadow.size()) - 1));
      TermEntry e = shadow[pick];
      dt.remove(e);
      flat.remove(e);
      shadow.erase(shadow.begin() + static_cast<long>(pick));
    } else {
      // Retrieval: query is random, or an instance of an indexed term,
      // or ground, to exercise hit and miss paths alike.
      TermPtr q;
      if (!shadow.empty() && rng.coin(0.4)) {
        size_t pick = static_cast<size_t>(rng.range(0, static_cast<int>(shadow.size()) - 1));
        Substitution s = w.randomGroundSubst(rng, 4, 2);
        q = s.apply(shadow[pick].term);
      } else if (rng.coin(0.3)) {
        q = w.randomGroundTerm(rng, 3);
      } else {
        q = w.randomTerm(rng, 3, 3);
      }
      ++retrievals;
      auto gen = dt.retrieveGeneralizations(q);
      CHECK(summarize(entriesOf(gen)) == summarize(bruteGeneralizations(q)));
      for (const GenHit& h : gen) {
        CHECK(Term::equal(h.subst.apply(h.entry->term), q));
      }
      auto uni = flat.retrieveUnifiable(q);
      CHECK(summarize(entriesOf(uni)) == summarize(bruteUnifiable(q)));
      for (const UnifHit& h : uni) {
        CHECK(Term::equal(h.subst.apply(h.entry->term), h.subst.apply(q)));
      }
      auto inst = flat.retrieveInstances(q);
      CHECK(summarize(entriesOf(inst)) == summarize(bruteInstances(q)));
      for (const GenHit& h : inst) {
        CHECK(Term::equal(h.subst.apply(q), h.entry->term));
      }
    }
    CHECK(dt.size() == shadow.size());
    CHECK(flat.size() == shadow.size());
  }
  // The workload must actually have exercised retrieval a few hundred times.
  CHECK(retrievals > 300);
  // Drain and confirm emptiness.
  for (const TermEntry& e : shadow) {
    dt.remove(e);
    flat.remove(e);
  }
  CHECK(dt.empty());
  CHECK(flat.empty());
}

TEST_CASE("duplicate-free streams per term and payload") {
  MonoWorld w;
  DiscriminationTree dt;
  // Same variable used twice forces the binding-consistency path.
  TermPtr t = Term::mkApp(w.sig, w.g, {}, {w.var(0), w.var(0)});
  dt.insert(entry(t, 3));
  TermPtr ga = Term::mkApp(w.sig, w.a, {}, {});
  TermPtr q = Term::mkApp(w.sig, w.g, {}, {ga, ga});
  auto hits = dt.retrieveGeneralizations(q);
  REQUIRE(hits.size() == 1);
  TermPtr qDiff = Term::mkApp(w.sig, w.g, {}, {ga, Term::mkApp(w.sig, w.b, {}, {})});
  CHECK(dt.retrieveGeneralizations(qDiff).empty());
}

TEST_CASE("literal index buckets by predicate and polarity") {
  MonoWorld w;
  ClauseRegistry reg;
  TermPtr av = Term::mkApp(w.sig, w.a, {}, {});
  Literal pa = Literal::mkPred(w.sig, w.p, {}, {av}, true);
  Literal npa = pa.negated();
  Literal qaa = Literal::mkPred(w.sig, w.q, {}, {av, av}, true);
  ClausePtr c1 = reg.make({pa, qaa}, Derivation{Rule::Input, {}, ""});
  ClausePtr c2 = reg.make({npa}, Derivation{Rule::Input, {}, ""});

  LiteralIndex idx;
  idx.insertClause(c1);
  idx.insertClause(c2);
  CHECK(idx.size() == 3);

  auto compl1 = idx.complementary((*c2)[0]);
  REQUIRE(compl1.size() == 1);
  CHECK(compl1[0].clause->id() == c1->id());

  idx.removeClause(c2);
  CHECK(idx.complementary((*c1)[0]).empty());
  CHECK_THROWS_AS(idx.removeClause(c2), InternalError);
}

TEST_CASE("subsumption candidate retrieval is complete") {
  MonoWorld w;
  ClauseRegistry reg;
  Rng rng(505);

  auto randomLiteral = [&](Rng& r) {
    bool pos = r.coin();
    if (r.coin(0.3)) {
      return Literal::mkEq(w.randomTerm(r, 2, 2), w.randomTerm(r, 2, 2), pos);
    }
    if (r.coin()) {
      return Literal::mkPred(w.sig, w.p, {}, {w.randomTerm(r, 2, 2)}, pos);
    }
    return Literal::mkPred(w.sig, w.q, {}, {w.randomTerm(r, 2, 2), w.randomTerm(r, 2, 2)}, pos);
  };

  SubsumptionIndex idx;
  std::vector<ClausePtr> indexed;
  for (int round = 0; round < 400; ++round) {
    if (indexed.empty() || rng.coin(0.55)) {
      std::vector<Literal> lits;
      int n = rng.range(1, 4);
      for (int i = 0; i < n; ++i) {
        lits.push_back(randomLiteral(rng));
      }
      ClausePtr c = reg.make(std::move(lits), Derivation{Rule::Input, {}, ""});
      if (c->empty()) {
        continue;
      }
      idx.insert(c);
      indexed.push_back(c);
    } else if (rng.coin(0.35)) {
      size_t pick = static_cast<size_t>(rng.range(0, static_cast<int>(indexed.size()) - 1));
      idx.remove(indexed[pick]);
      indexed.erase(indexed.begin() + static_cast<long>(pick));
    } else {
      std::vector<Literal> lits;
      int n = rng.range(1, 4);
      for (int i = 0; i < n; ++i) {
        lits.push_back(randomLiteral(rng));
      }
      ClausePtr query = reg.make(std::move(lits), Derivation{Rule::Input, {}, ""});
      if (query->empty()) {
        continue;
      }

      auto keySet = [](const Clause& c) {
        std::vector<LitKey> ks;
        for (const Literal& l : c.literals()) {
          ks.push_back(LitKey::of(l));
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        return ks;
      };
      std::vector<LitKey> qKeys = keySet(*query);

      auto fwd = idx.forwardCandidates(*query);
      auto bwd = idx.backwardCandidates(*query);
      for (const ClausePtr& d : indexed) {
        std::vector<LitKey> dKeys = keySet(*d);
        bool dInQ = std::includes(qKeys.begin(), qKeys.end(), dKeys.begin(), dKeys.end());
        bool qInD = std::includes(dKeys.begin(), dKeys.end(), qKeys.begin(), qKeys.end());
        if (dInQ) {
          CHECK(std::find_if(fwd.begin(), fwd.end(), [&](const ClausePtr& c) {
                  return c.get() == d.get();
                }) != fwd.end());
        }
        if (qInD) {
          CHECK(std::find_if(bwd.begin(), bwd.end(), [&](const ClausePtr& c) {
                  return c.get() == d.get();
                }) != bwd.end());
        }
      }
      // Streams are duplicate-free.
      auto noDupes = [](std::vector<ClausePtr> cs) {
        std::sort(cs.begin(), cs.end(),
                  [](const ClausePtr& a, const ClausePtr& b) { return a.get() < b.get(); });
        return std::adjacent_find(cs.begin(), cs.end(), [](const ClausePtr& a, const ClausePtr& b) {
                 return a.get() == b.get();
               }) == cs.end();
      };
      CHECK(noDupes(fwd));
      CHECK(noDupes(bwd));
    }
  }
  for (const ClausePtr& c : indexed) {
    idx.remove(c);
  }
  CHECK(idx.size() == 0);
  CHECK(idx.forwardCandidates(*indexed.front()).empty());
}

TEST_CASE("flat index instance query never returns removed payloads") {
  MonoWorld w;
  FlatTermIndex flat;
  TermPtr fa = Term::mkApp(w.sig, w.f, {}, {Term::mkApp(w.sig, w.a, {}, {})});
  flat.insert(entry(fa, 1));
  flat.insert(entry(fa, 2));
  flat.remove(entry(fa, 1));
  auto hits = flat.retrieveInstances(Term::mkApp(w.sig, w.f, {}, {w.var(0)}));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].entry->lit == 2);
}
