#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "shadiv/errors.hpp"
#include "shadiv/gl2_group.hpp"

using namespace shadiv;
using namespace shadiv::gl2;

namespace {

std::set<Mat2> as_set(const MatrixGroup& g) { return {g.elements().begin(), g.elements().end()}; }

// All subgroups of GL_2(F_p) generated by at most `k` elements, as element sets.
std::set<std::set<Mat2>> subgroups_by_generators(std::uint32_t p, int k) {
  const oracle::Arith A{p};
  const auto all = A.all();
  std::set<std::set<Mat2>> out{{A.id()}};
  std::set<std::set<Mat2>> frontier = out;
  for (int round = 0; round < k; ++round) {
    std::set<std::set<Mat2>> next;
    for (const auto& h : frontier) {
      std::set<Mat2> done(h.begin(), h.end());  // <H, x m> = <H, x> for m in H
      const std::vector<Mat2> hv(h.begin(), h.end());
      for (const auto& x : all) {
        if (done.count(x)) continue;
        for (const auto& m : hv) done.insert(A.mul(x, m));
        std::vector<Mat2> gens(hv);
        gens.push_back(x);
        auto s = A.closure(gens);
        if (!out.count(s)) next.insert(s);
      }
    }
    out.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::set<Mat2> conj_set(const oracle::Arith& A, const std::set<Mat2>& h, const Mat2& x, const Mat2& xi) {
  std::set<Mat2> out;
  for (const auto& m : h) out.insert(A.mul(A.mul(x, m), xi));
  return out;
}

std::size_t oracle_class_count(std::uint32_t p, const std::set<std::set<Mat2>>& subgroups) {
  const oracle::Arith A{p};
  const auto all = A.all();
  std::set<std::set<Mat2>> seen;
  std::size_t classes = 0;
  for (const auto& h : subgroups) {
    if (seen.count(h)) continue;
    ++classes;
    for (const auto& x : all) {
      Mat2 xi{};
      for (const auto& y : all)
        if (A.mul(x, y) == A.id()) xi = y;
      seen.insert(conj_set(A, h, x, xi));
    }
  }
  return classes;
}

}  // namespace

TEST(GenerateGroup, ReferenceCases) {
  EXPECT_EQ(generate_group(3, {{1, 1, 0, 1}}).order(), 3u);
  const auto g2 = generate_group(2, {{0, 1, 1, 0}, {1, 1, 0, 1}});
  EXPECT_EQ(g2.order(), 6u);
  EXPECT_EQ(generate_group(3, {{1, 1, 0, 1}, {1, 0, 1, 1}, {2, 0, 0, 1}}).order(), 48u);
}

TEST(GenerateGroup, Errors) {
  EXPECT_THROW(generate_group(5, {{1, 2, 2, 4}}), SingularGenerator);
  EXPECT_THROW(generate_group(5, {{1, 1, 0, 1}, {1, 0, 1, 1}}, 50), CapExceeded);
  EXPECT_THROW(generate_group(6, {{1, 0, 0, 1}}), NotPrime);
}

TEST(GenerateGroup, ClosedWithWitnessWords) {
  const auto g = generate_group(5, {{2, 0, 0, 1}, {1, 1, 0, 1}});
  EXPECT_EQ(g.order(), 20u);
  EXPECT_TRUE(g.contains({1, 0, 0, 1}));
  for (std::size_t i = 0; i < g.order(); ++i) {
    EXPECT_EQ(g.evaluate(g.witness_word(i)), g.element(i));
    for (std::size_t j = 0; j < g.order(); ++j) {
      EXPECT_EQ(g.element(g.product_index(i, j)), g.arith().mul(g.element(i), g.element(j)));
    }
  }
  EXPECT_EQ(480u % g.order(), 0u);
}

TEST(StandardGroups, Orders) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    gf::PrimeField f(p);
    const std::size_t q = p;
    EXPECT_EQ(full_gl2(f).order(), (q * q - 1) * (q * q - q));
    EXPECT_EQ(special_linear(f).order(), (q * q - 1) * q);
    EXPECT_EQ(standard_borel(f).order(), (q - 1) * (q - 1) * q);
    EXPECT_EQ(split_normalizer(f).order(), 2 * (q - 1) * (q - 1));
    EXPECT_EQ(nonsplit_torus(f).order(), q * q - 1);
    EXPECT_EQ(nonsplit_normalizer(f).order(), 2 * (q * q - 1));
    EXPECT_EQ(scalar_subgroup(f).order(), q - 1);
    EXPECT_EQ(oracle::stable_line_count(p, nonsplit_torus(f).elements()), 0u);
  }
}

TEST(Classify, ReferenceCases) {
  gf::PrimeField f(5);
  const auto borel = classify_subgroup(standard_borel(f));
  EXPECT_TRUE(borel.in_borel);
  EXPECT_FALSE(borel.contains_sl2);
  const auto gl = classify_subgroup(full_gl2(f));
  EXPECT_TRUE(gl.contains_sl2);
  EXPECT_TRUE(gl.p_divides_order);
  const auto torus = classify_subgroup(split_torus(f));
  EXPECT_TRUE(torus.in_borel);
  EXPECT_TRUE(torus.in_split_normalizer);
  EXPECT_TRUE(classify_subgroup(nonsplit_normalizer(f)).in_nonsplit_normalizer);
}

TEST(Classify, ExceptionalImagesAtFive) {
  // PGL_2(F_5) ~ S_5 contains A_4 and S_4; both orders are prime to 5.
  std::set<ExceptionalImage> seen;
  for (const auto& g : enumerate_subgroups_up_to_conjugacy(5, Exhaustive{})) {
    const auto flags = classify_subgroup(g);
    if (!flags.exceptional_pgl_image) continue;
    seen.insert(*flags.exceptional_pgl_image);
    EXPECT_NE(g.order() % 5, 0u);
    const std::size_t proj = g.order() / center_intersection(g).order();
    EXPECT_EQ(proj, *flags.exceptional_pgl_image == ExceptionalImage::A4 ? 12u : 24u);
  }
  EXPECT_EQ(seen, (std::set<ExceptionalImage>{ExceptionalImage::A4, ExceptionalImage::S4}));
  EXPECT_FALSE(classify_subgroup(special_linear(gf::PrimeField(7))).exceptional_pgl_image.has_value());
}

TEST(Classify, StableLinesMatchOracle) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto reps = enumerate_subgroups_up_to_conjugacy(p, Exhaustive{});
    for (const auto& g : reps) {
      const bool oracle_borel = oracle::stable_line_count(p, g.elements()) > 0;
      EXPECT_EQ(classify_subgroup(g).in_borel, oracle_borel) << g.describe();
      EXPECT_EQ(common_stable_line(g).has_value(), oracle_borel);
    }
  }
}

TEST(Classify, SomeFlagAlwaysHolds) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (const auto& g : enumerate_subgroups_up_to_conjugacy(p, Exhaustive{})) {
      const auto flags = classify_subgroup(g);
      EXPECT_TRUE(flags.any()) << g.describe();
      if (flags.exceptional_pgl_image) EXPECT_GT(center_intersection(g).order(), 1u) << g.describe();
    }
  }
}

TEST(S3Copy, ReferenceCases) {
  gf::PrimeField f(5);
  EXPECT_TRUE(is_in_s3_copy(generate_group(5, {})));
  EXPECT_FALSE(is_in_s3_copy(generate_group(5, {{4, 0, 0, 4}})));
  EXPECT_TRUE(is_in_s3_copy(full_gl2(gf::PrimeField(2))));
}

TEST(S3Copy, AgreesWithBruteForceOnSmallSubgroups) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto copies = oracle::all_s3_subgroups(p);
    ASSERT_FALSE(copies.empty());
    const oracle::Arith A{p};
    const auto all = A.all();
    // every subgroup of order <= 6 is generated by two elements of order <= 6
    std::vector<Mat2> small;
    for (const auto& x : all)
      if (A.order(x) <= 6) small.push_back(x);
    std::set<std::set<Mat2>> seen;
    for (std::size_t i = 0; i < small.size(); ++i) {
      for (std::size_t j = i; j < small.size(); ++j) {
        const auto s = A.closure({small[i], small[j]}, 6);
        if (s.size() > 6 || !seen.insert(s).second) continue;
        const std::vector<Mat2> elems(s.begin(), s.end());
        const auto g = subgroup_from_elements(gf::PrimeField(p), elems);
        EXPECT_EQ(is_in_s3_copy(g), oracle::in_some_s3(copies, elems)) << "p=" << p << " " << g.describe();
      }
    }
  }
}

TEST(Subgroups, CenterAndSylow) {
  gf::PrimeField f3(3), f5(5);
  EXPECT_EQ(center_intersection(full_gl2(f3)).order(), 2u);
  EXPECT_EQ(center_intersection(special_linear(f5)).order(), 2u);
  EXPECT_EQ(center_intersection(standard_unipotent(f5)).order(), 1u);
  EXPECT_EQ(p_sylow(full_gl2(f3)).order(), 3u);
  EXPECT_EQ(p_sylow(full_gl2(f5)).order(), 5u);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    gf::PrimeField f(p);
    EXPECT_TRUE(normalizer_in(full_gl2(f), standard_unipotent(f)).same_elements(standard_borel(f)));
  }
  const auto sl = special_linear(f5);
  EXPECT_TRUE(normalizer_in(full_gl2(f5), sl).same_elements(full_gl2(f5)));
}

TEST(Subgroups, Conjugator) {
  gf::PrimeField f(5);
  const Gl2 a(f);
  const auto b = standard_borel(f);
  const Mat2 x = a.make(1, 2, 3, 2);
  const auto c = conjugate(b, x);
  const auto y = find_conjugator(b, c);
  ASSERT_TRUE(y.has_value());
  EXPECT_TRUE(conjugate(b, *y).same_elements(c));
  EXPECT_FALSE(find_conjugator(b, split_normalizer(f)).has_value());
}

TEST(Enumerate, GL2F2HasFourClasses) {
  const auto reps = enumerate_subgroups_up_to_conjugacy(2, Exhaustive{});
  std::multiset<std::size_t> orders;
  for (const auto& g : reps) orders.insert(g.order());
  EXPECT_EQ(orders, (std::multiset<std::size_t>{1, 2, 3, 6}));
}

TEST(Enumerate, ClassCountMatchesOracleAtThree) {
  const auto subs = subgroups_by_generators(3, 3);
  const auto reps = enumerate_subgroups_up_to_conjugacy(3, Exhaustive{});
  EXPECT_EQ(reps.size(), oracle_class_count(3, subs));
  // every rep is a genuine subgroup from the oracle list
  for (const auto& g : reps) EXPECT_TRUE(subs.count(as_set(g))) << g.describe();
}

TEST(Enumerate, ClassCountMatchesOracleAtFive) {
  const auto subs = subgroups_by_generators(5, 3);
  const auto reps = enumerate_subgroups_up_to_conjugacy(5, Exhaustive{});
  EXPECT_EQ(reps.size(), oracle_class_count(5, subs));
  for (const auto& g : reps) EXPECT_TRUE(subs.count(as_set(g))) << g.describe();
}

TEST(Enumerate, RepsPairwiseNonConjugateAtFive) {
  const auto reps = enumerate_subgroups_up_to_conjugacy(5, Exhaustive{});
  const oracle::Arith A{5};
  const auto all = A.all();
  std::map<std::size_t, std::vector<std::size_t>> by_order;
  for (std::size_t i = 0; i < reps.size(); ++i) by_order[reps[i].order()].push_back(i);
  for (const auto& [n, idx] : by_order) {
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        EXPECT_FALSE(find_conjugator(reps[idx[a]], reps[idx[b]]).has_value());
  }
  // every cyclic subgroup is conjugate to some representative
  for (const auto& x : all) {
    const auto c = generate_group(5, {x});
    bool found = false;
    for (std::size_t i : by_order[c.order()]) found = found || find_conjugator(c, reps[i]).has_value();
    EXPECT_TRUE(found) << c.describe();
  }
}

TEST(Enumerate, ErrorsAndDeterminism) {
  EXPECT_THROW(enumerate_subgroups_up_to_conjugacy(7, Exhaustive{}), ExhaustiveTooLarge);
  EXPECT_THROW(enumerate_subgroups_up_to_conjugacy(17, Sampled{10, 1}), SampledTooLarge);
  const auto a = enumerate_subgroups_up_to_conjugacy(7, Sampled{50, 42});
  const auto b = enumerate_subgroups_up_to_conjugacy(7, Sampled{50, 42});
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i].same_elements(b[i]));
}

TEST(ParseGenerators, Formats) {
  Gl2 a(5);
  const auto gens = parse_generators(a, "0,4,1,0; 1,1,0,1");
  ASSERT_EQ(gens.size(), 2u);
  EXPECT_EQ(gens[0], (Mat2{0, 4, 1, 0}));
  EXPECT_EQ(parse_generators(a, "-1,0,0,1")[0], (Mat2{4, 0, 0, 1}));
  EXPECT_THROW(parse_generators(a, "1,2,3"), ParseError);
  EXPECT_THROW(parse_generators(a, "1,2,x,4"), ParseError);
}

TEST(NonsplitModel, Canonical) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    gf::PrimeField f(p);
    const auto m = canonical_nonsplit(f);
    // x^2 - t x + n has no root
    for (std::uint32_t x = 0; x < p; ++x) {
      EXPECT_NE((static_cast<std::uint64_t>(x) * x + p * p - static_cast<std::uint64_t>(m.t) * x % p + m.n) % p, 0u);
    }
    const Gl2 a(f);
    const Mat2 c = a.mul(a.mul(m.frobenius, m.companion), a.inv(m.frobenius));
    EXPECT_EQ(c, a.pow(m.companion, p));  // Frobenius acts as the p-th power
  }
}
