#include <gtest/gtest.h>

#include <random>

#include "dlinterp/errors.hpp"
#include "dlinterp/families.hpp"
#include "dlinterp/interpolate.hpp"
#include "instances.hpp"

using namespace dlinterp;

namespace {

using Verdict = InterpolationResult::Verdict;

InterpolationProblem problem(const Instance& in) { return {in.ontology, in.c0, in.d0, in.sigma}; }

}  // namespace

TEST(Interpolate, WorkedExampleFamilies) {
  for (int k = 1; k <= 3; ++k) {
    InterpolationProblem p = problem(alch_k(k));
    EXPECT_TRUE(interpolant_exists(p)) << k;
    InterpolationResult r = compute_interpolant(p);
    ASSERT_EQ(r.verdict, Verdict::Interpolant) << k;
    EXPECT_EQ(r.verification, InterpolationResult::Verification::Passed);
    EXPECT_TRUE(verify_interpolant(p.ontology, p.c0, p.d0, p.sigma, *r.interpolant));
    EXPECT_EQ(r.stats.interpolant_dag_size, dag_size(*r.interpolant));
    EXPECT_GT(r.stats.types, 0u);
    EXPECT_GT(r.stats.eliminated, 0u);
    EXPECT_TRUE(verify_interpolant(p.ontology, p.c0, p.d0, p.sigma, alch_k_reference(k)));
  }
  InterpolationProblem p = problem(alch_k(2));
  Concept one = some(intern_name("s1p"), atom("A1"));
  EXPECT_FALSE(verify_interpolant(p.ontology, p.c0, p.d0, p.sigma, one));
  // The k=1 reference is equivalent to its single disjunct.
  InterpolationProblem p1 = problem(alch_k(1));
  Reasoner rs(p1.ontology);
  Concept e1 = *compute_interpolant(p1).interpolant;
  EXPECT_TRUE(rs.entails(e1, some(intern_name("s1p"), atom("A1"))));
  EXPECT_TRUE(rs.entails(some(intern_name("s1p"), atom("A1")), p1.d0));
}

TEST(Interpolate, LiteralChainHasNoInterpolant) {
  InterpolationProblem p = problem(alch_k(1, true));
  InterpolationResult r = compute_interpolant(p);
  ASSERT_EQ(r.verdict, Verdict::None);
  ASSERT_TRUE(r.witness && r.witness->model);
  EXPECT_TRUE(check_joint_consistency_witness(p.ontology, p.c0, neg(p.d0), p.sigma, *r.witness->model, r.witness->e1,
                                              *r.witness->model, r.witness->e2));
}

TEST(Interpolate, CountingIsNotExpressible) {
  Concept c = parse_concept("(atleast 2 r top)");
  InterpolationProblem p{Ontology(Dialect::ALCQ, {}, {}), c, c, parse_signature("r")};
  EXPECT_FALSE(interpolant_exists(p));
  InterpolationResult r = compute_interpolant(p);
  ASSERT_EQ(r.verdict, Verdict::None);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(r.witness->model.has_value());
  EXPECT_FALSE(r.witness->partitions.empty());
}

TEST(Interpolate, SignatureTooSmall) {
  InterpolationProblem p{parse_ontology("(implies A B)", Dialect::ALCH), atom("A"), atom("B"), Signature()};
  EXPECT_FALSE(interpolant_exists(p));
  InterpolationResult r = compute_interpolant(p);
  ASSERT_EQ(r.verdict, Verdict::None);
  ASSERT_TRUE(r.witness && r.witness->model);
  EXPECT_TRUE(check_joint_consistency_witness(p.ontology, p.c0, neg(p.d0), p.sigma, *r.witness->model, r.witness->e1,
                                              *r.witness->model, r.witness->e2));
}

TEST(Interpolate, TrivialCases) {
  InterpolationProblem same{Ontology(), atom("A"), atom("A"), parse_signature("A")};
  EXPECT_TRUE(interpolant_exists(same));
  InterpolationResult r = compute_interpolant(same);
  ASSERT_EQ(r.verdict, Verdict::Interpolant);
  Reasoner rs(same.ontology);
  EXPECT_TRUE(rs.entails(*r.interpolant, atom("A")) && rs.entails(atom("A"), *r.interpolant));

  Concept c = parse_concept("(and (some r A) (all s (not B)))");
  InterpolationProblem id{Ontology(), c, c, parse_signature("r s A B")};
  EXPECT_EQ(compute_interpolant(id).verdict, Verdict::Interpolant);

  EXPECT_TRUE(verify_interpolant(Ontology(), atom("A"), top(), Signature(), top()));
  EXPECT_FALSE(verify_interpolant(Ontology(), atom("A"), top(), Signature(), atom("A")));
}

TEST(Interpolate, NotEntailed) {
  InterpolationProblem p{Ontology(), atom("A"), atom("B"), parse_signature("A B")};
  InterpolationResult r = compute_interpolant(p);
  ASSERT_EQ(r.verdict, Verdict::NotEntailed);
  ASSERT_TRUE(r.countermodel.has_value());
  EXPECT_TRUE(satisfies(r.countermodel->first, r.countermodel->second, conj({atom("A"), neg(atom("B"))})));
  EXPECT_FALSE(interpolant_exists(p));
}

TEST(Interpolate, CountingRejectedInAlchMode) {
  InterpolationProblem p{Ontology(), parse_concept("(atleast 2 r top)"), top(), parse_signature("r")};
  EXPECT_THROW(compute_interpolant(p), DialectError);
}

TEST(Interpolate, CorpusDecisionAgreesWithConstruction) {
  std::mt19937 rng(1234);
  int found = 0, none = 0;
  for (Dialect dl : {Dialect::ALCH, Dialect::ALCQ}) {
    int done = 0;
    while (done < 40) {
      auto in = oracle::random_instance(rng, dl, 12);
      if (dl == Dialect::ALCH && (!is_alc(in.c0) || !is_alc(in.d0))) continue;
      // Make the inclusion hold so that existence is the open question.
      InterpolationProblem p{in.o, in.c0, disj({in.d0, in.c0}), in.sigma};
      bool exists = false;
      InterpolationResult r;
      try {
        exists = interpolant_exists(p);
        r = compute_interpolant(p);
      } catch (const BudgetExceeded&) {
        continue;
      }
      ++done;
      EXPECT_NE(r.verdict, Verdict::NotEntailed);
      EXPECT_EQ(exists, r.verdict == Verdict::Interpolant);
      if (r.verdict == Verdict::Interpolant) {
        ++found;
        EXPECT_TRUE(verify_interpolant(p.ontology, p.c0, p.d0, p.sigma, *r.interpolant));
      } else {
        ++none;
        ASSERT_TRUE(r.witness.has_value());
        EXPECT_EQ(r.witness->model.has_value(), dl == Dialect::ALCH);
      }
    }
  }
  EXPECT_GT(found, 0);
  EXPECT_GT(none, 0);
}

TEST(Interpolate, Deterministic) {
  InterpolationProblem p = problem(alch_k(2));
  std::string first = print_concept(*compute_interpolant(p).interpolant, PrintMode::Dag);
  for (std::uint64_t seed : {0, 1, 7}) {
    InterpolationOptions opt;
    opt.seed = seed;
    EXPECT_EQ(print_concept(*compute_interpolant(p, opt).interpolant, PrintMode::Dag), first);
  }
}
