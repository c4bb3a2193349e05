#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "dlinterp/errors.hpp"
#include "dlinterp/families.hpp"
#include "dlinterp/reasoner.hpp"
#include "oracles.hpp"

using namespace dlinterp;

namespace {

Name N(const char* s) { return intern_name(s); }

// Brute force over all subsets of the closure, applying the saturation rules
// directly to concept terms.
std::set<Bitset> brute_candidates(const ClosureIndex& cx, const Ontology& o) {
  std::set<Bitset> out;
  const std::size_t n = cx.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Bitset t(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) t.set(i);
    auto holds = [&](Concept c) {
      if (c.kind() == Kind::Not) return !t.test(*cx.find(c.child()));
      return t.test(*cx.find(c));
    };
    bool ok = t.test(0);
    for (std::size_t i = 0; i < n && ok; ++i) {
      Concept c = cx.entry(i).term;
      if (c.kind() != Kind::And) continue;
      bool all = true;
      for (Concept k : c.children()) all = all && holds(k);
      ok = all == t.test(i);
    }
    for (const auto& ci : o.cis())
      if (ok && holds(ci.lhs) && !holds(ci.rhs)) ok = false;
    if (ok) out.insert(t);
  }
  return out;
}

std::set<Bitset> as_set(const std::vector<Bitset>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(CandidateTypes, TrivialClosure) {
  ClosureIndex cx = ClosureIndex::build(Ontology(), atom("A"), atom("A"));
  EXPECT_EQ(candidate_types(cx, Ontology()).size(), 2u);
}

TEST(CandidateTypes, BottomAxiomRemovesAtom) {
  Ontology o = parse_ontology("(implies A bot)", Dialect::ALCH);
  ClosureIndex cx = ClosureIndex::build(o, atom("A"), atom("B"));
  for (const auto& t : candidate_types(cx, o)) EXPECT_FALSE(t.test(*cx.find(atom("A"))));
}

TEST(CandidateTypes, WorkedExampleMatchesBruteForce) {
  Instance in = alch_k(1);
  ClosureIndex cx = ClosureIndex::build(in.ontology, in.c0, in.d0);
  ASSERT_LE(cx.size(), 16u);
  EXPECT_EQ(as_set(candidate_types(cx, in.ontology)), brute_candidates(cx, in.ontology));
}

TEST(CandidateTypes, RandomMatchBruteForce) {
  std::mt19937 rng(21);
  auto v = oracle::vocab({"A", "B"}, {"r"});
  int checked = 0;
  while (checked < 60) {
    Concept c = oracle::random_concept(rng, v, 2, 2);
    Concept lhs = oracle::random_concept(rng, v, 1, 2);
    Concept rhs = oracle::random_concept(rng, v, 1, 2);
    Ontology o(Dialect::ALCQ, {{lhs, rhs}}, {});
    ClosureIndex cx = ClosureIndex::build(o, c, top());
    if (cx.size() > 14) continue;
    ++checked;
    EXPECT_EQ(as_set(candidate_types(cx, o)), brute_candidates(cx, o));
  }
}

TEST(RealizableTypes, UnsatisfiableExistentialEliminated) {
  Ontology o = parse_ontology("(implies B (not A))", Dialect::ALCH);
  Concept e = parse_concept("(some r (and A B))");
  ClosureIndex cx = ClosureIndex::build(o, e, top());
  for (const auto& t : realizable_types(cx, o)) EXPECT_FALSE(t.test(*cx.find(e)));
}

TEST(RealizableTypes, CountingContradiction) {
  Ontology o(Dialect::ALCQ, {}, {});
  Concept c = parse_concept("(and (atleast 2 r A) (not (atleast 1 r A)))");
  ClosureIndex cx = ClosureIndex::build(o, c, top());
  for (const auto& t : realizable_types(cx, o)) EXPECT_FALSE(ClosureIndex::holds(t, cx.lit(c)));
}

TEST(RealizableTypes, OrderIndependent) {
  std::mt19937 rng(33);
  for (Dialect dl : {Dialect::ALCH, Dialect::ALCQ}) {
    auto v = oracle::vocab({"A", "B"}, {"r", "s"});
    for (int k = 0; k < 25; ++k) {
      std::uint32_t max_n = dl == Dialect::ALCQ ? 2 : 1;
      Concept c = oracle::random_concept(rng, v, 2, max_n);
      Concept lhs = oracle::random_concept(rng, v, 1, max_n);
      Concept rhs = oracle::random_concept(rng, v, 1, max_n);
      std::vector<RoleInclusion> ris;
      if (dl == Dialect::ALCH) ris.push_back({N("r"), N("s")});
      Ontology o(dl, {{lhs, rhs}}, ris);
      ClosureIndex cx = ClosureIndex::build(o, c, top());
      if (cx.size() > 16) continue;
      auto base = as_set(realizable_types(cx, o));
      std::size_t n = candidate_types(cx, o).size();
      for (int p = 0; p < 5; ++p) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        EXPECT_EQ(as_set(realizable_types(cx, o, &order)), base);
      }
    }
  }
}

TEST(Witnessing, Examples) {
  Ontology o(Dialect::ALCQ, {}, {});
  Concept two = parse_concept("(atleast 2 r A)");
  ClosureIndex cx = ClosureIndex::build(o, two, top());
  std::uint32_t ia = *cx.find(atom("A")), i2 = *cx.find(two);
  Bitset t(cx.size()), ta(cx.size()), none(cx.size());
  t.set(0);
  t.set(i2);
  ta.set(0);
  ta.set(ia);
  none.set(0);
  // No thresholds: the all-zero function.
  auto w0 = find_witnessing_function(cx, none, N("r"), {ta}, cx.m_star());
  ASSERT_TRUE(w0);
  EXPECT_TRUE(w0->values.empty());
  // (≥2 r.A) with one A-type in the support.
  auto w = find_witnessing_function(cx, t, N("r"), {ta}, 2);
  ASSERT_TRUE(w);
  EXPECT_NE(w->value(ta), 0u);
  EXPECT_TRUE(w->value(ta) >= 2);
  EXPECT_TRUE(is_witnessing_function(cx, *w));
  // Without an A-type there is none.
  EXPECT_FALSE(find_witnessing_function(cx, t, N("r"), {none}, 2));

  Concept clash = parse_concept("(and (atleast 2 r A) (not (atleast 1 r A)))");
  ClosureIndex cc = ClosureIndex::build(o, clash, top());
  Bitset tc(cc.size());
  tc.set(0);
  tc.set(*cc.find(two));
  Bitset tca(cc.size());
  tca.set(0);
  tca.set(*cc.find(atom("A")));
  EXPECT_FALSE(find_witnessing_function(cc, tc, N("r"), {tca, tc}, 2));
}

TEST(Witnessing, FromModel) {
  Ontology o(Dialect::ALCQ, {}, {});
  ClosureIndex cx = ClosureIndex::build(o, parse_concept("(atleast 2 r A)"), top());
  auto m = parse_model("(model (domain d a b c) (atom A a) (atom A b) (atom A c) (edge r d a) (edge r d b) (edge r d c))");
  auto w = witness_from_model(m, 0, N("r"), cx, 2);
  ASSERT_EQ(w.values.size(), 1u);
  EXPECT_EQ(w.values[0].second, kInfinity);
  EXPECT_TRUE(is_witnessing_function(cx, w));
  auto w0 = witness_from_model(m, 1, N("r"), cx, 2);
  EXPECT_TRUE(w0.values.empty());

  std::mt19937 rng(4);
  auto v = oracle::vocab({"A"}, {"r"});
  for (int k = 0; k < 50; ++k) {
    FiniteInterpretation rm;
    std::size_t n = 1 + rng() % 5;
    for (std::size_t d = 0; d < n; ++d) rm.add_element();
    for (Element d = 0; d < n; ++d) {
      if (rng() % 2) rm.set_atom(N("A"), d);
      for (Element e = 0; e < n; ++e)
        if (rng() % 2) rm.add_edge(N("r"), d, e);
    }
    Concept c = oracle::random_concept(rng, v, 2, 3);
    ClosureIndex rc = ClosureIndex::build(o, c, top());
    for (Element d = 0; d < n; ++d)
      EXPECT_TRUE(is_witnessing_function(rc, witness_from_model(rm, d, N("r"), rc, rc.m_star())));
  }
}

TEST(Sat, Examples) {
  Reasoner empty(Ontology{});
  EXPECT_FALSE(empty.sat(conj({atom("A"), neg(atom("A"))})));
  EXPECT_TRUE(empty.sat(atom("A")));
  Reasoner q(Ontology(Dialect::ALCQ, {}, {}));
  EXPECT_FALSE(q.sat(parse_concept("(and (atleast 2 r top) (not (atleast 1 r top)))")));
  EXPECT_TRUE(q.sat(parse_concept("(and (atleast 2 r A) (atmost 1 r B) (atleast 1 r B))")));
  EXPECT_FALSE(q.sat(parse_concept("(and (atleast 3 r top) (atmost 1 r A) (atmost 1 r (not A)))")));
  EXPECT_THROW(empty.sat(parse_concept("(atleast 2 r top)")), DialectError);
}

TEST(Sat, WorkedExampleEntailment) {
  for (bool literal : {false, true}) {
    Instance in = alch_k(1, literal);
    Reasoner rs(in.ontology);
    EXPECT_TRUE(rs.entails(in.c0, in.d0));
  }
}

TEST(Sat, CyclicTBox) {
  Ontology o = parse_ontology("(implies A (some r A))", Dialect::ALCH);
  Reasoner rs(o);
  EXPECT_TRUE(rs.sat(atom("A")));
  Ontology o2 = parse_ontology("(implies A (some r A)) (implies top (all r (not A)))", Dialect::ALCH);
  Reasoner r2(o2);
  EXPECT_FALSE(r2.sat(atom("A")));
  EXPECT_TRUE(r2.sat(neg(atom("A"))));
}

TEST(Sat, AgreesWithTypeEliminationAndModels) {
  std::mt19937 rng(77);
  for (Dialect dl : {Dialect::ALCH, Dialect::ALCQ}) {
    auto v = oracle::vocab({"A", "B"}, {"r", "s"});
    int done = 0;
    while (done < 120) {
      std::uint32_t max_n = dl == Dialect::ALCQ ? 3 : 1;
      Concept c = oracle::random_concept(rng, v, 3, max_n);
      std::vector<Inclusion> cis;
      if (rng() % 2)
        cis.push_back({oracle::random_concept(rng, v, 1, max_n), oracle::random_concept(rng, v, 1, max_n)});
      std::vector<RoleInclusion> ris;
      if (dl == Dialect::ALCH && rng() % 2) ris.push_back({N("r"), N("s")});
      Ontology o(dl, cis, ris);
      ClosureIndex cx(std::vector<Concept>{c});
      if (cx.size() > 18) continue;
      ++done;
      Reasoner rs(o);
      bool s = rs.sat(c);
      EXPECT_EQ(s, sat_by_types(o, c)) << print_concept(c);
      auto m = rs.model(c);
      ASSERT_EQ(m.has_value(), s);
      if (m) {
        EXPECT_TRUE(is_model(m->first, o)) << print_concept(c);
        EXPECT_TRUE(satisfies(m->first, m->second, c)) << print_concept(c);
      }
    }
  }
}

TEST(Sat, TinyModelOracle) {
  std::mt19937 rng(99);
  auto v = oracle::vocab({"A", "B"}, {"r"});
  for (int k = 0; k < 150; ++k) {
    Dialect dl = k % 2 ? Dialect::ALCQ : Dialect::ALCH;
    Concept c = oracle::random_concept(rng, v, 2, dl == Dialect::ALCQ ? 2 : 1);
    Ontology o(dl, {}, {});
    Reasoner rs(o);
    bool s = rs.sat(c);
    bool small = oracle::small_model_exists(o, c, v, 3);
    if (small) {
      EXPECT_TRUE(s) << print_concept(c);
    }
    if (!s) {
      EXPECT_FALSE(small) << print_concept(c);
    }
  }
}

TEST(Sat, TowerFamilyEntailments) {
  std::mt19937 rng(5);
  auto v = oracle::vocab({"A"}, {"s", "sp"});
  Instance t = alch_tower();
  Reasoner rs(t.ontology);
  Name s = N("s"), sp = N("sp");
  for (int k = 0; k < 50; ++k) {
    Concept f = oracle::random_concept(rng, v, 3);
    EXPECT_TRUE(rs.entails(t.c0, implies(all(s, f), some(sp, f))));
  }
  Instance q = alcq_tower();
  Reasoner rq(q.ontology);
  auto vq = oracle::vocab({"A"}, {"r", "s", "sp"});
  for (int k = 0; k < 50; ++k) {
    Concept f = oracle::random_concept(rng, vq, 3);
    EXPECT_TRUE(rq.entails(q.c0, implies(some(N("r"), f), all(N("r"), f))));
  }
  // Without the inclusion the entailment fails.
  Reasoner bare(Ontology(Dialect::ALCH, {}, {{N("r"), s}}));
  EXPECT_FALSE(bare.entails(t.c0, implies(all(s, atom("A")), some(sp, atom("A")))));
}

TEST(Entails, ReflexiveTransitive) {
  std::mt19937 rng(13);
  auto v = oracle::vocab({"A", "B"}, {"r"});
  Reasoner rs(Ontology{});
  int chains = 0;
  for (int k = 0; k < 300; ++k) {
    Concept a = oracle::random_concept(rng, v, 2);
    Concept b = oracle::random_concept(rng, v, 2);
    Concept c = oracle::random_concept(rng, v, 2);
    EXPECT_TRUE(rs.entails(a, a));
    if (rs.entails(a, b) && rs.entails(b, c)) {
      ++chains;
      EXPECT_TRUE(rs.entails(a, c));
    }
  }
  EXPECT_GT(chains, 0);
}
