#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "shadiv/certify.hpp"
#include "shadiv/errors.hpp"

using namespace shadiv;
using namespace shadiv::cert;
using ec::CurveQ;

namespace {

const CurveQ k121c1(1, 1, 0, -2, -7);
const CurveQ k121c2(1, 1, 0, -3632, 82757);
const CurveQ k37a(0, 0, 1, -1, 0);

bool has_citation(const Certificate& c, const std::string& tag) {
  return std::find(c.citations.begin(), c.citations.end(), tag) != c.citations.end();
}

CurveQ random_curve(std::mt19937_64& rng) {
  while (true) {
    try {
      return CurveQ(rng() % 2, static_cast<int>(rng() % 5) - 2, rng() % 2, static_cast<int>(rng() % 201) - 100,
                    static_cast<int>(rng() % 201) - 100);
    } catch (const SingularCurve&) {
    }
  }
}

}  // namespace

TEST(Certify, PrimeTwoUnsupported) {
  const auto c = certify_q(k37a, 2);
  EXPECT_EQ(c.verdict, Verdict::UnsupportedPrime);
  EXPECT_THROW(certify_q(k37a, 9), BadPrime);
}

TEST(Certify, LargePrimesCertifiedByCitation) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const auto c = certify_q(random_curve(rng), 13);
    EXPECT_EQ(c.verdict, Verdict::CertifiedPaper);
    EXPECT_TRUE(has_citation(c, tag::kRationalEll1));
  }
}

TEST(Certify, Curve121AtEleven) {
  for (const auto& curve : {k121c1, k121c2}) {
    const auto c = certify_q(curve, 11);
    EXPECT_EQ(c.verdict, Verdict::CertifiedPaper);
    EXPECT_TRUE(has_citation(c, tag::kRationalEll1));
    bool residual = false;
    for (const auto& e : c.evidence) {
      if (e.kind == kind::kResidualForm && e.form == std::make_pair(7u, 4u)) residual = true;
    }
    EXPECT_TRUE(residual);
  }
}

TEST(Certify, ConductorThirtySevenAtFive) {
  const auto c = certify_q(k37a, 5);
  EXPECT_EQ(c.verdict, Verdict::CertifiedLocal);
  std::set<std::pair<std::uint32_t, std::uint32_t>> excluded;
  for (const auto& e : c.evidence) {
    if (e.kind != kind::kExclusion) continue;
    excluded.insert(*e.form);
    // witness re-checked against a brute-force count
    EXPECT_EQ(*e.a_ell, oracle::naive_trace(k37a.coefficients(), *e.ell));
  }
  EXPECT_EQ(excluded, (std::set<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {3, 2}}));
  std::string why;
  EXPECT_TRUE(revalidate(c, &why)) << why;
  EXPECT_TRUE(has_citation(c, tag::kLocalGlobal));
}

TEST(Certify, FastPaths) {
  // y^2 = x^3 + 1 is supersingular at 5
  const auto ss = certify_q(CurveQ(0, 0, 0, 0, 1), 5);
  EXPECT_EQ(ss.verdict, Verdict::CertifiedPaper);
  EXPECT_TRUE(has_citation(ss, tag::kRationalEll3));
  // full rational 2-torsion at 7, good ordinary reduction there
  const CurveQ leg(0, -4, 0, 3, 0);
  ASSERT_EQ(ec::reduction_type(leg, 7).kind, ec::ReductionInfo::Kind::Good);
  const auto l = certify_q(leg, 7);
  if (!*ec::reduction_type(leg, 7).supersingular) {
    EXPECT_EQ(l.verdict, Verdict::CertifiedPaper);
    EXPECT_TRUE(has_citation(l, tag::kLegendre));
  }
}

TEST(Certify, PrimeThreeHasNoFastPath) {
  const auto c = certify_q(CurveQ(0, 0, 0, 0, 1), 3);
  EXPECT_FALSE(has_citation(c, tag::kRationalEll3));
  EXPECT_NE(c.verdict, Verdict::CertifiedPaper);
}

TEST(Certify, InconclusiveSaysSo) {
  // a curve with a rational 3-isogeny character pair 1 + eps_3: y^2 + y = x^3 has a point of order 3
  const auto c = certify_q(CurveQ(0, 0, 1, 0, 0), 3);
  EXPECT_EQ(c.verdict, Verdict::Inconclusive);
  EXPECT_NE(to_text(c).find("not"), std::string::npos);
  EXPECT_TRUE(revalidate(c));
}

TEST(Certify, JsonRoundTripAndDeterminism) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 60; ++i) {
    const auto curve = random_curve(rng);
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
      const auto c = certify_q(curve, p);
      const auto j = to_json(c);
      EXPECT_EQ(certificate_from_json(j), c);
      EXPECT_EQ(certificate_from_json(nlohmann::json::parse(j.dump())), c);
      EXPECT_EQ(to_json(certify_q(curve, p)).dump(), j.dump());
      if (c.verdict == Verdict::CertifiedLocal) {
        std::string why;
        EXPECT_TRUE(revalidate(c, &why)) << why;
      }
    }
  }
  EXPECT_THROW(certificate_from_json(nlohmann::json::parse("{\"p\": 5}")), ParseError);
}

TEST(Certify, JsonFieldNames) {
  const auto j = to_json(certify_q(k37a, 5));
  for (const char* k : {"curve", "p", "verdict", "evidence", "citations"}) EXPECT_TRUE(j.contains(k)) << k;
  for (const char* k : {"a1", "a2", "a3", "a4", "a6"}) EXPECT_TRUE(j["curve"].contains(k));
  EXPECT_EQ(j["verdict"], "CERTIFIED_LOCAL");
  EXPECT_TRUE(j["evidence"][0].contains("kind"));
  EXPECT_TRUE(j["evidence"][0].contains("detail"));
}

TEST(Certify, TamperedCertificateFailsRevalidation) {
  auto c = certify_q(k37a, 5);
  for (auto& e : c.evidence) {
    if (e.kind == kind::kExclusion) *e.a_ell += 1;
  }
  EXPECT_FALSE(revalidate(c));
  auto d = certify_q(k37a, 5);
  d.evidence.erase(std::remove_if(d.evidence.begin(), d.evidence.end(),
                                  [](const Evidence& e) { return e.form == std::make_pair(3u, 2u); }),
                   d.evidence.end());
  EXPECT_FALSE(revalidate(d));
}

TEST(Bounds, KnownTable) {
  const std::vector<std::uint32_t> pi{7, 13, 13, 17, 19};
  for (unsigned d = 1; d <= 5; ++d) {
    const auto r = threshold_degree(d);
    ASSERT_TRUE(r.pi_known.has_value());
    EXPECT_EQ(*r.pi_known, pi[d - 1]);
    EXPECT_EQ(r.pi_source, "known");
  }
  EXPECT_EQ(threshold_degree(1).first_certified_prime, 13);
  EXPECT_EQ(threshold_degree(2).first_certified_prime, 37);
  EXPECT_TRUE(threshold_degree(2).generic_exact);
  EXPECT_TRUE(threshold_degree(1).merel_degenerate);
  EXPECT_EQ(threshold_degree(2).merel, 4096);
  EXPECT_EQ(threshold_degree(1).parent, 65 * 2 * 64);
}

TEST(Bounds, BeyondKnown) {
  for (unsigned d = 6; d <= 12; ++d) {
    const auto r = threshold_degree(d);
    EXPECT_FALSE(r.pi_known.has_value());
    EXPECT_EQ(r.pi_source, "oesterle");
    EXPECT_EQ(r.pi_bound, r.oesterle_ceil);
    // first prime exceeds both bounds and nothing in between is prime
    const BigInt m = std::max(r.generic_floor, r.pi_bound);
    EXPECT_GT(r.first_certified_prime, m);
    EXPECT_TRUE(is_prime(r.first_certified_prime));
    for (BigInt x = m + 1; x < r.first_certified_prime; ++x) EXPECT_FALSE(is_prime(x));
    const auto par = threshold_degree(d, true);
    EXPECT_EQ(par.pi_source, "parent");
    EXPECT_GE(par.first_certified_prime, r.first_certified_prime);
  }
  EXPECT_THROW(threshold_degree(0), InvalidDegree);
  EXPECT_THROW(threshold_degree(kMaxDegree + 1), InvalidDegree);
  EXPECT_NO_THROW(threshold_degree(kMaxDegree));
}

TEST(Twists, ScanSemantics) {
  const auto one = twist_scan(k37a, 5, {BigInt(1)});
  ASSERT_EQ(one.entries.size(), 1u);
  EXPECT_EQ(one.entries[0].certificate, certify_q(k37a, 5));
  const auto thirteen = twist_scan(k121c1, 13, {1, -1, 2, -3, 5});
  EXPECT_EQ(thirteen.summary.certified_paper, 5u);
  EXPECT_THROW(twist_scan(k37a, 2, {BigInt(1)}), BadPrime);
  EXPECT_THROW(twist_scan(k37a, 5, {BigInt(4)}), NotSquarefree);
}

TEST(Twists, Curve121AtEleven) {
  const std::vector<BigInt> ds{1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 11, -11};
  const auto scan = twist_scan(k121c1, 11, ds);
  EXPECT_EQ(scan.summary.total, ds.size());
  EXPECT_EQ(scan.summary.not_certified, 0u);
  EXPECT_LE(scan.summary.not_locally_excluded, 2u);
}
