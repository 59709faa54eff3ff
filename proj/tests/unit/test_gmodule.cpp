#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "shadiv/errors.hpp"
#include "shadiv/gl2_group.hpp"
#include "shadiv/gmodule.hpp"

using namespace shadiv;
using namespace shadiv::gmod;
using gf::FpMatrix;
using gl2::Mat2;

namespace {

FpMatrix block_diag(const FpMatrix& a, const FpMatrix& b) {
  FpMatrix m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

// S_3 inside the nonsplit normalizer: a determinant-one element of order 3 in the nonsplit torus
// and the Frobenius. Needs p = 2 mod 3.
gl2::MatrixGroup nonsplit_s3(const gf::PrimeField& f) {
  const gl2::Gl2 a(f);
  const auto m = gl2::canonical_nonsplit(f);
  const auto torus = gl2::nonsplit_torus(f);
  for (const auto& x : torus.elements()) {
    if (a.element_order(x) == 3 && a.det(x) == 1) return gl2::generate_group(f, {x, m.frobenius});
  }
  throw std::logic_error("no element of order 3");
}

std::uint32_t trace(const FpMatrix& m) {
  std::uint32_t t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t = m.field().add(t, m(i, i));
  return t;
}

}  // namespace

TEST(Modules, StandardAndEndAreHomomorphisms) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto g = gl2::full_gl2(gf::PrimeField(p));
    const auto v = standard_module(g);
    const auto e = end_module(g);
    EXPECT_TRUE(v.is_homomorphism());
    EXPECT_TRUE(e.is_homomorphism());
    EXPECT_EQ(e.dim(), 4u);
    const gf::PrimeField& f = g.field();
    for (std::size_t i = 0; i < g.order(); ++i) {
      const Mat2& s = g.element(i);
      EXPECT_EQ(v.action(i), g.arith().to_matrix(s));
      // tr(ad s) = tr(s) tr(s^-1)
      EXPECT_EQ(trace(e.action(i)), f.mul(g.arith().trace(s), g.arith().trace(g.arith().inv(s))));
    }
  }
}

TEST(Modules, EndBasisOrdering) {
  // ad(s) E_12 for s = diag(a, 1) is a E_12, and E_12 is the second basis vector.
  const auto g = gl2::generate_group(5, {{2, 0, 0, 1}});
  const auto e = end_module(g);
  const auto& m = e.action_of({2, 0, 0, 1});
  EXPECT_EQ(m(1, 1), 2u);
  EXPECT_EQ(m(2, 2), 3u);  // 2^-1 mod 5
  EXPECT_EQ(m(0, 0), 1u);
  EXPECT_EQ(m(3, 3), 1u);
}

TEST(Modules, ScalarsActTriviallyOnEnd) {
  const auto g = gl2::scalar_subgroup(gf::PrimeField(7));
  const auto e = end_module(g);
  for (std::size_t i = 0; i < g.order(); ++i) EXPECT_EQ(e.action(i), FpMatrix::identity(g.field(), 4));
  EXPECT_EQ(e.fixed_space().size(), 4u);
}

TEST(Modules, BadActionsRejected) {
  const auto g = gl2::generate_group(3, {{1, 1, 0, 1}});
  EXPECT_THROW(GModule(g, 2, {}), DimensionMismatch);
  const auto other = gl2::generate_group(5, {{1, 1, 0, 1}});
  EXPECT_THROW(has_common_irreducible_factor(standard_module(g), standard_module(other)), GroupMismatch);
}

TEST(Factors, ReferenceCases) {
  const auto triv = gl2::generate_group(5, {});
  const auto f1 = composition_factors(standard_module(triv));
  ASSERT_EQ(f1.size(), 2u);
  EXPECT_EQ(f1[0].dim(), 1u);
  const auto gl = gl2::full_gl2(gf::PrimeField(5));
  EXPECT_TRUE(is_irreducible(standard_module(gl)));
  const auto borel = gl2::standard_borel(gf::PrimeField(5));
  const auto fb = composition_factors(standard_module(borel));
  ASSERT_EQ(fb.size(), 2u);
  const auto lc = line_characters(borel);
  ASSERT_TRUE(lc.has_value());
  EXPECT_TRUE(same_factor_multiset(fb, {lc->first, lc->second}));
  EXPECT_THROW(composition_factors(tensor(end_module(gl), standard_module(gl))), DimTooLarge);
}

TEST(Factors, JordanHolderOrderIndependent) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (const auto& g : gl2::enumerate_subgroups_up_to_conjugacy(p, gl2::Exhaustive{})) {
      for (const auto& m : {standard_module(g), end_module(g)}) {
        const auto a = composition_factors(m, LineOrder::Forward);
        const auto b = composition_factors(m, LineOrder::Reverse);
        EXPECT_TRUE(same_factor_multiset(a, b)) << g.describe();
        std::size_t dim = 0;
        for (const auto& x : a) {
          dim += x.dim();
          EXPECT_TRUE(is_irreducible(x));
        }
        EXPECT_EQ(dim, m.dim());
      }
    }
  }
}

TEST(Factors, IrreducibleVMeansNoStableLine) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (const auto& g : gl2::enumerate_subgroups_up_to_conjugacy(p, gl2::Exhaustive{})) {
      EXPECT_EQ(is_irreducible(standard_module(g)), oracle::stable_line_count(p, g.elements()) == 0);
    }
  }
}

TEST(Isomorphism, Basics) {
  const auto g = gl2::standard_borel(gf::PrimeField(5));
  const auto v = standard_module(g);
  EXPECT_TRUE(modules_isomorphic(v, v));
  const auto lc = line_characters(g);
  ASSERT_TRUE(lc.has_value());
  EXPECT_FALSE(modules_isomorphic(lc->first, lc->second));
  EXPECT_TRUE(modules_isomorphic(dual(dual(v)), v));
  EXPECT_TRUE(modules_isomorphic(tensor(standard_module(g), dual(standard_module(g))), end_module(g)));
  // chi^(p-1) is trivial
  EXPECT_TRUE(modules_isomorphic(character_power(determinant_character(g), 4), trivial_module(g)));
}

TEST(Isomorphism, RandomConjugateModule) {
  std::mt19937_64 rng(3);
  const auto g = gl2::full_gl2(gf::PrimeField(3));
  const auto e = end_module(g);
  // conjugate every generator action by a random invertible matrix
  const gf::PrimeField& f = g.field();
  for (int t = 0; t < 5; ++t) {
    FpMatrix q(f, 4, 4);
    do {
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) q(i, j) = static_cast<std::uint32_t>(rng() % 3);
    } while (gf::determinant(q).value == 0);
    std::vector<FpMatrix> acts;
    for (const auto& a : e.generator_actions()) acts.push_back(gf::mat_mul(gf::mat_mul(q, a), gf::inverse(q)));
    const GModule e2(g, 4, acts);
    const auto t_iso = find_isomorphism(e, e2);
    ASSERT_TRUE(t_iso.has_value());
    for (std::size_t i = 0; i < g.order(); ++i) {
      EXPECT_EQ(gf::mat_mul(*t_iso, e.action(i)), gf::mat_mul(e2.action(i), *t_iso));
    }
  }
}

TEST(CommonFactor, ReferenceCases) {
  const gf::PrimeField f5(5);
  const auto s3 = nonsplit_s3(f5);
  EXPECT_EQ(s3.order(), 6u);
  EXPECT_TRUE(has_common_irreducible_factor(standard_module(s3), end_module(s3)));
  const auto gl = gl2::full_gl2(f5);
  EXPECT_FALSE(has_common_irreducible_factor(standard_module(gl), end_module(gl)));
  const auto triv = gl2::generate_group(5, {});
  EXPECT_TRUE(has_common_irreducible_factor(standard_module(triv), end_module(triv)));
}

TEST(Adjoint, SplittingIntertwines) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const gf::PrimeField f(p);
    for (const auto& [n, kind] : {std::pair{gl2::split_normalizer(f), TorusKind::Split},
                                  std::pair{gl2::nonsplit_normalizer(f), TorusKind::Nonsplit}}) {
      const auto s = a0_a1_modules(n, kind);
      EXPECT_EQ(s.kind, kind);
      EXPECT_TRUE(s.a0.is_homomorphism());
      EXPECT_TRUE(s.a1.is_homomorphism());
      EXPECT_NE(gf::determinant(s.phi).value, 0u);
      const auto e = end_module(n);
      for (std::size_t i = 0; i < n.order(); ++i) {
        EXPECT_EQ(gf::mat_mul(s.phi, block_diag(s.a0.action(i), s.a1.action(i))), gf::mat_mul(e.action(i), s.phi))
            << "p=" << p;
      }
      EXPECT_TRUE(modules_isomorphic(direct_sum(s.a0, s.a1), e));
      // torus elements act trivially on A0
      const auto torus = kind == TorusKind::Split ? gl2::split_torus(f) : gl2::nonsplit_torus(f);
      for (const auto& t : torus.elements()) EXPECT_EQ(s.a0.action_of(t), FpMatrix::identity(f, 2));
    }
  }
}

TEST(Adjoint, NotInNormalizer) {
  EXPECT_THROW(a0_a1_modules(gl2::full_gl2(gf::PrimeField(5))), NotInNormalizer);
}

TEST(Adjoint, VIsA1ForNonsplitOverF2AndS3OverF5) {
  const auto n2 = gl2::nonsplit_normalizer(gf::PrimeField(2));
  EXPECT_TRUE(modules_isomorphic(standard_module(n2), a0_a1_modules(n2, TorusKind::Nonsplit).a1));
  const auto s3 = nonsplit_s3(gf::PrimeField(5));
  EXPECT_TRUE(modules_isomorphic(standard_module(s3), a0_a1_modules(s3, TorusKind::Nonsplit).a1));
}

TEST(Characters, BorelLemmaForEnd) {
  for (std::uint32_t p : {3u, 5u}) {
    for (const auto& g : gl2::enumerate_subgroups_up_to_conjugacy(p, gl2::Exhaustive{})) {
      const auto lc = line_characters(g);
      if (!lc) continue;
      const auto& [c1, c2] = *lc;
      const auto r = tensor(c1, dual(c2));
      const auto expected = std::vector<GModule>{r, trivial_module(g), trivial_module(g), dual(r)};
      EXPECT_TRUE(same_factor_multiset(composition_factors(end_module(g)), expected)) << g.describe();
    }
  }
}

TEST(Characters, DeterminantIsSignOnS3Copies) {
  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    std::vector<gl2::MatrixGroup> copies{gl2::generate_group(p, {{0, p - 1, 1, p - 1}, {0, 1, 1, 0}})};
    if (p % 3 == 2) copies.push_back(nonsplit_s3(gf::PrimeField(p)));
    for (const auto& g : copies) {
      ASSERT_EQ(g.order(), 6u);
      const auto det = determinant_character(g);
      for (std::size_t i = 0; i < g.order(); ++i) {
        const bool odd = g.arith().element_order(g.element(i)) == 2;
        EXPECT_EQ(det.action(i)(0, 0), odd ? p - 1 : 1u) << "p=" << p;
      }
    }
  }
}
