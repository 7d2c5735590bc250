#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tfg/feature_structure.hpp"
#include "tfg/grammar.hpp"
#include "tfg/store.hpp"

using tfg::canonical;
using tfg::FeatureStructure;
using tfg::isomorphic;
using tfg::parse_term;

namespace {

class Toy : public ::testing::Test {
protected:
  std::shared_ptr<const tfg::Signature> sig = fixture::signature();
  FeatureStructure term(const char* text) { return parse_term(text, *sig); }
  std::string canon(const char* text) { return canonical(*sig, term(text)); }
};

}  // namespace

TEST_F(Toy, MgsatSleep) {
  auto fs = tfg::mgsat(*sig, sig->type("sleep"));
  ASSERT_EQ(fs.graph.size(), 2u);
  EXPECT_EQ(sig->name(fs.root_type()), "sleep");
  auto subj = fs.graph.arc(fs.root, sig->feature("subj"));
  ASSERT_TRUE(subj);
  EXPECT_EQ(sig->name(fs.graph.type(*subj)), "sem");
  EXPECT_FALSE(tfg::check_well_typed(*sig, fs.graph));
}

TEST_F(Toy, MgsatFeatureless) {
  auto fs = tfg::mgsat(*sig, sig->type("third-sing"));
  EXPECT_EQ(fs.graph.size(), 1u);
  EXPECT_TRUE(fs.graph.node(fs.root).arcs.empty());
}

TEST_F(Toy, MgsatCutsRecursion) {
  auto fs = tfg::mgsat(*sig, sig->type("ne_list"));
  auto hd = fs.graph.arc(fs.root, sig->feature("hd"));
  auto tl = fs.graph.arc(fs.root, sig->feature("tl"));
  ASSERT_TRUE(hd && tl);
  EXPECT_EQ(sig->name(fs.graph.type(*hd)), "top");
  EXPECT_EQ(sig->name(fs.graph.type(*tl)), "list");
  EXPECT_TRUE(fs.graph.node(*tl).arcs.empty());
}

TEST_F(Toy, MgsatSignWellTyped) {
  auto fs = tfg::mgsat(*sig, sig->type("sign"));
  EXPECT_EQ(fs.graph.node(fs.root).arcs.size(), 4u);
  EXPECT_FALSE(tfg::check_well_typed(*sig, fs.graph));
}

TEST_F(Toy, UnifyAgreement) {
  auto a = term("cat:np & agr:third-sing");
  auto b = term("cat:np & agr:agr");
  auto r = tfg::unify(*sig, a, b);
  ASSERT_TRUE(r.ok());
  auto expected = oracle::unify(*sig, a, b);
  ASSERT_TRUE(expected);
  EXPECT_TRUE(isomorphic(*sig, *r.result, *expected));
  EXPECT_EQ(canonical(*sig, *r.result), canon("sign & cat:np & agr:third-sing"));
}

TEST_F(Toy, UnifyClashPath) {
  auto r = tfg::unify(*sig, term("cat:np"), term("cat:v"));
  ASSERT_FALSE(r.ok());
  ASSERT_TRUE(r.clash);
  ASSERT_EQ(r.clash->path.size(), 1u);
  EXPECT_EQ(sig->name(r.clash->path[0]), "cat");
  EXPECT_EQ(sig->name(r.clash->left), "np");
  EXPECT_EQ(sig->name(r.clash->right), "v");
}

TEST_F(Toy, UnifyMapsCoverInputs) {
  auto a = term("sign & agr:#1 & sem:(sleep & subj:mary_lf)");
  auto b = term("phon:<mary>");
  auto r = tfg::unify(*sig, a, b);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.left_map.size(), a.graph.size());
  EXPECT_EQ(r.right_map.size(), b.graph.size());
  EXPECT_EQ(r.left_map[a.root], r.result->root);
  EXPECT_EQ(r.right_map[b.root], r.result->root);
}

TEST_F(Toy, UnifyPreservesReentrancy) {
  auto a = term("<#1, #1>");
  auto b = term("<mary, top>");
  auto r = tfg::unify(*sig, a, b);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(canonical(*sig, *r.result), canon("<#1 & mary, #1>"));
  EXPECT_FALSE(tfg::unify(*sig, a, term("<mary, sleeps>")).ok());
}

TEST_F(Toy, SubsumesExamples) {
  auto g = term("agr:agr");
  auto s = term("agr:third-sing");
  EXPECT_TRUE(tfg::subsumes(*sig, g, s));
  EXPECT_FALSE(tfg::subsumes(*sig, s, g));
  auto shared = term("ne_list & hd:#1 & tl:#1");
  auto distinct = term("ne_list & hd:list & tl:list");
  EXPECT_FALSE(tfg::subsumes(*sig, shared, distinct));
  EXPECT_TRUE(tfg::subsumes(*sig, distinct, shared));
  EXPECT_EQ(oracle::subsumes_by_enumeration(*sig, shared, distinct), false);
  EXPECT_EQ(oracle::subsumes_by_enumeration(*sig, distinct, shared), true);
  EXPECT_EQ(oracle::subsumes_by_enumeration(*sig, g, s), true);
}

TEST_F(Toy, SubsumesMissingFeatureReadAsRestriction) {
  EXPECT_TRUE(tfg::subsumes(*sig, term("sign & agr:agr"), term("sign")));
  EXPECT_FALSE(tfg::subsumes(*sig, term("sign & agr:third-sing"), term("sign")));
  EXPECT_TRUE(tfg::subsumes(*sig, term("sign"), term("sign & agr:third-sing")));
}

TEST_F(Toy, CanonicalElidesUninformativeArcs) {
  EXPECT_EQ(canonical(*sig, tfg::mgsat(*sig, sig->type("sign"))), canon("sign"));
  EXPECT_EQ(canon("sign & phon:<mary, sleeps>"), "sign & phon:<mary, sleeps>");
}

namespace {

struct RandomPairs : ::testing::Test {
  std::shared_ptr<const tfg::Signature> sig = fixture::signature("lattice.sig");
  std::mt19937 rng{20261014};

  FeatureStructure random() { return oracle::random_structure(*sig, rng, 6); }
};

}  // namespace

TEST_F(RandomPairs, UnificationAgreesWithOracle) {
  int successes = 0;
  for (int i = 0; i < 400; ++i) {
    auto a = random(), b = random();
    auto before_a = canonical(*sig, a), before_b = canonical(*sig, b);
    auto r = tfg::unify(*sig, a, b);
    auto o = oracle::unify(*sig, a, b);
    ASSERT_EQ(r.ok(), o.has_value()) << before_a << " | " << before_b;
    EXPECT_EQ(canonical(*sig, a), before_a);
    EXPECT_EQ(canonical(*sig, b), before_b);
    if (!r.ok()) continue;
    ++successes;
    EXPECT_TRUE(isomorphic(*sig, *r.result, *o)) << canonical(*sig, *r.result) << " vs " << canonical(*sig, *o);
    EXPECT_FALSE(tfg::check_well_typed(*sig, r.result->graph));
    EXPECT_TRUE(tfg::subsumes(*sig, a, *r.result));
    EXPECT_TRUE(tfg::subsumes(*sig, b, *r.result));
    auto flipped = tfg::unify(*sig, b, a);
    ASSERT_TRUE(flipped.ok());
    EXPECT_TRUE(isomorphic(*sig, *r.result, *flipped.result));
  }
  EXPECT_GT(successes, 40);
}

TEST_F(RandomPairs, SubsumptionAgreesWithPathOracle) {
  int positives = 0;
  for (int i = 0; i < 400; ++i) {
    auto a = random(), b = random();
    EXPECT_EQ(tfg::subsumes(*sig, a, b), oracle::subsumes(*sig, a, b)) << canonical(*sig, a) << " | " << canonical(*sig, b);
    EXPECT_TRUE(tfg::subsumes(*sig, a, a));
    auto r = tfg::unify(*sig, a, b);
    if (!r.ok()) continue;
    EXPECT_TRUE(oracle::subsumes(*sig, a, *r.result));
    bool g = tfg::subsumes(*sig, *r.result, a);
    EXPECT_EQ(g, oracle::subsumes(*sig, *r.result, a));
    if (g) {
      ++positives;
      auto back = tfg::unify(*sig, *r.result, a);
      ASSERT_TRUE(back.ok());
      EXPECT_TRUE(isomorphic(*sig, *back.result, a));
    }
  }
  EXPECT_GT(positives, 10);
}

TEST_F(RandomPairs, Associativity) {
  for (int i = 0; i < 200; ++i) {
    auto a = random(), b = random(), c = random();
    auto ab = tfg::unify(*sig, a, b);
    auto bc = tfg::unify(*sig, b, c);
    std::optional<FeatureStructure> left, right;
    if (ab.ok()) left = tfg::unify(*sig, *ab.result, c).result;
    if (bc.ok()) right = tfg::unify(*sig, a, *bc.result).result;
    ASSERT_EQ(left.has_value(), right.has_value());
    if (left) {
      EXPECT_TRUE(isomorphic(*sig, *left, *right));
    }
  }
}

TEST_F(RandomPairs, MgsatIsNeutral) {
  for (int i = 0; i < 200; ++i) {
    auto x = random();
    auto m = tfg::mgsat(*sig, x.root_type());
    EXPECT_FALSE(tfg::check_well_typed(*sig, m.graph));
    auto r = tfg::unify(*sig, x, m);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(isomorphic(*sig, *r.result, x)) << canonical(*sig, x) << " vs " << canonical(*sig, *r.result);
  }
}

TEST(Store, UndoRestoresState) {
  auto sig = fixture::signature();
  tfg::Store store(*sig);
  auto a = parse_term("sign & agr:#1 & phon:<#1>", *sig);
  auto b = parse_term("sign & agr:third-sing", *sig);
  auto ba = store.import(a.graph);
  auto bb = store.import(b.graph);
  std::vector<tfg::NodeId> roots{ba + a.root}, out;
  auto before = canonical(*sig, {store.extract(roots, out), 0});
  auto mark = store.mark();
  ASSERT_TRUE(store.unify(ba + a.root, bb + b.root));
  auto after = store.extract(roots, out);
  EXPECT_EQ(canonical(*sig, {after, out[0]}), "sign & phon:<(#1 & third-sing)> & agr:#1");
  store.undo(mark);
  EXPECT_EQ(canonical(*sig, {store.extract(roots, out), out[0]}), before);
}

TEST(Store, EnsureArcNarrowsToIntroducer) {
  auto sig = fixture::signature();
  tfg::Store store(*sig);
  auto n = store.add(tfg::Signature::top);
  auto v = store.ensure_arc(n, sig->feature("subj"));
  ASSERT_TRUE(v);
  EXPECT_EQ(sig->name(store.type(n)), "sleep");
  EXPECT_EQ(sig->name(store.type(*v)), "sem");
  auto atom = store.add(sig->type("mary"));
  EXPECT_FALSE(store.ensure_arc(atom, sig->feature("subj")));
}
