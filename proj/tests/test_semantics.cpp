#include <gtest/gtest.h>

#include <random>

#include "dlinterp/errors.hpp"
#include "dlinterp/semantics.hpp"
#include "oracles.hpp"

using namespace dlinterp;

namespace {

Name N(const char* s) { return intern_name(s); }

FiniteInterpretation random_model(std::mt19937& rng, const oracle::Vocab& v, std::size_t n) {
  FiniteInterpretation m;
  for (std::size_t d = 0; d < n; ++d) m.add_element();
  for (Name a : v.atoms)
    for (Element d = 0; d < n; ++d)
      if (rng() % 2) m.set_atom(a, d);
  for (Name r : v.roles)
    for (Element d = 0; d < n; ++d)
      for (Element e = 0; e < n; ++e)
        if (rng() % 3 == 0) m.add_edge(r, d, e);
  return m;
}

}  // namespace

TEST(Eval, Basics) {
  FiniteInterpretation m = parse_model("(model (domain d) (atom A d))");
  EXPECT_TRUE(eval_concept(m, atom("A")).test(0));
  EXPECT_TRUE(eval_concept(m, bot()).none());

  FiniteInterpretation two = parse_model("(model (domain d e f) (atom A e) (atom A f) (edge r d e) (edge r d f))");
  Bitset ext = eval_concept(two, parse_concept("(atleast 2 r A)"));
  EXPECT_TRUE(ext.test(0));
  EXPECT_FALSE(ext.test(1));
  EXPECT_EQ(ext.count(), 1u);
  EXPECT_FALSE(eval_concept(two, parse_concept("(atleast 3 r A)")).test(0));
}

TEST(ModelFormat, ParseErrorsAndRoundTrip) {
  EXPECT_THROW(parse_model("(model (atom A d))"), ParseError);
  EXPECT_THROW(parse_model("(model (domain d) (atom A x))"), ParseError);
  EXPECT_THROW(parse_model("(model (domain))"), ParseError);
  FiniteInterpretation m = parse_model("(model (domain a b) (atom A a) (edge r a b) (edge r b b))");
  FiniteInterpretation again = parse_model(print_model(m));
  EXPECT_EQ(print_model(again), print_model(m));
}

TEST(IsModel, Cases) {
  FiniteInterpretation m = parse_model("(model (domain d e) (edge r d e))");
  EXPECT_TRUE(is_model(m, Ontology()));
  Ontology o = parse_ontology("(role-implies r s)", Dialect::ALCH);
  EXPECT_FALSE(is_model(m, o));
  m.add_edge(N("s"), 0, 1);
  EXPECT_TRUE(is_model(m, o));
  Ontology ci = parse_ontology("(implies A B)", Dialect::ALCH);
  FiniteInterpretation a = parse_model("(model (domain d) (atom A d))");
  EXPECT_FALSE(is_model(a, ci));
}

TEST(Bisim, EmptySignatureIsTotal) {
  std::mt19937 rng(1);
  auto v = oracle::vocab({"A"}, {"r"});
  auto i = random_model(rng, v, 3);
  auto j = random_model(rng, v, 4);
  auto z = max_sigma_bisimulation(i, j, Signature());
  EXPECT_EQ(z.count(), 12u);
}

TEST(Bisim, ReflexivePointVersusCycle) {
  auto i = parse_model("(model (domain d) (edge r d d))");
  auto j = parse_model("(model (domain a b) (edge r a b) (edge r b a))");
  auto z = max_sigma_bisimulation(i, j, parse_signature("r"));
  EXPECT_EQ(z.count(), 2u);
  EXPECT_TRUE(is_sigma_bisimulation(i, j, parse_signature("r"), z));
}

TEST(Bisim, AtomCondition) {
  auto i = parse_model("(model (domain d) (atom A d))");
  auto j = parse_model("(model (domain e))");
  EXPECT_FALSE(max_sigma_bisimulation(i, j, parse_signature("A")).contains(0, 0));
  EXPECT_TRUE(max_sigma_bisimulation(i, j, parse_signature("B")).contains(0, 0));
}

TEST(Bisim, MaximalAndSigmaMonotone) {
  std::mt19937 rng(5);
  auto v = oracle::vocab({"A", "B"}, {"r", "s"});
  Signature small = parse_signature("A r");
  Signature big = parse_signature("A B r s");
  for (int k = 0; k < 60; ++k) {
    auto i = random_model(rng, v, 1 + rng() % 3);
    auto j = random_model(rng, v, 1 + rng() % 3);
    for (const Signature* sig : {&small, &big}) {
      auto z = max_sigma_bisimulation(i, j, *sig);
      ASSERT_TRUE(is_sigma_bisimulation(i, j, *sig, z));
      // Adding any excluded pair breaks some condition.
      for (Element d = 0; d < i.size(); ++d)
        for (Element e = 0; e < j.size(); ++e) {
          if (z.contains(d, e)) continue;
          auto bigger = z;
          bigger.insert(d, e);
          EXPECT_FALSE(is_sigma_bisimulation(i, j, *sig, bigger));
        }
    }
    auto zs = max_sigma_bisimulation(i, j, small);
    auto zb = max_sigma_bisimulation(i, j, big);
    for (auto [d, e] : zb.pairs()) EXPECT_TRUE(zs.contains(d, e));
  }
}

TEST(Bisim, InvarianceOfSigmaConcepts) {
  std::mt19937 rng(9);
  auto v = oracle::vocab({"A", "B"}, {"r", "s"});
  auto vs = oracle::vocab({"A"}, {"r"});
  Signature sigma = parse_signature("A r");
  for (int k = 0; k < 100; ++k) {
    auto i = random_model(rng, v, 1 + rng() % 4);
    auto j = random_model(rng, v, 1 + rng() % 4);
    auto z = max_sigma_bisimulation(i, j, sigma);
    Concept c = oracle::random_concept(rng, vs, 3);
    Bitset ci = eval_concept(i, c), cj = eval_concept(j, c);
    for (auto [d, e] : z.pairs()) EXPECT_EQ(ci.test(d), cj.test(e));
  }
}

TEST(JointWitness, NoInterpolantForEmptySignature) {
  Ontology o = parse_ontology("(implies A B)", Dialect::ALCH);
  auto i1 = parse_model("(model (domain d) (atom A d) (atom B d))");
  auto i2 = parse_model("(model (domain e))");
  EXPECT_TRUE(check_joint_consistency_witness(o, atom("A"), neg(atom("B")), Signature(), i1, 0, i2, 0));
  // Atom condition fails once B is in the signature.
  EXPECT_FALSE(check_joint_consistency_witness(o, atom("A"), neg(atom("B")), parse_signature("B"), i1, 0, i2, 0));
  // Not a model.
  auto bad = parse_model("(model (domain d) (atom A d))");
  EXPECT_FALSE(check_joint_consistency_witness(o, atom("A"), neg(atom("B")), Signature(), bad, 0, i2, 0));
}

TEST(TypeOf, Basics) {
  auto m = parse_model("(model (domain d) (atom A d))");
  ClosureIndex cx = ClosureIndex::build(Ontology(), atom("A"), atom("A"));
  Bitset t = type_of(m, 0, cx);
  EXPECT_TRUE(t.test(0));
  EXPECT_TRUE(t.test(1));
  ClosureIndex cr = ClosureIndex::build(Ontology(), parse_concept("(some r C)"), top());
  EXPECT_FALSE(type_of(m, 0, cr).test(*cr.find(parse_concept("(some r C)"))));
}
