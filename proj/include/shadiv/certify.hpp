#pragma once

/**
 * @file certify.hpp
 * @brief Divisibility certificates for elliptic curves over Q, quadratic
 *        twist scans, and the degree-d threshold calculator.
 *
 * Verdicts:
 *   CERTIFIED_LOCAL    every hypothesis was checked by computation here.
 *   CERTIFIED_PAPER    the verdict rests on a published theorem whose proof
 *                      is not re-run here.
 *   INCONCLUSIVE       no sufficient criterion applied. This says nothing
 *                      about non-divisibility.
 *   UNSUPPORTED_PRIME  p = 2.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shadiv/arith.hpp"
#include "shadiv/elliptic.hpp"

namespace shadiv::cert {

enum class Verdict { CertifiedLocal, CertifiedPaper, Inconclusive, UnsupportedPrime };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

namespace kind {
inline constexpr const char* kExclusion = "exclusion";
inline constexpr const char* kResidualForm = "residual_form";
inline constexpr const char* kReductionType = "reduction_type";
inline constexpr const char* kTwoTorsion = "two_torsion";
inline constexpr const char* kNote = "note";
}  // namespace kind

namespace tag {
inline constexpr const char* kRationalEll1 = "rationalEll(1)";
inline constexpr const char* kRationalEll2 = "rationalEll(2)";
inline constexpr const char* kRationalEll3 = "rationalEll(3)";
inline constexpr const char* kLegendre = "legendre";
inline constexpr const char* kLocalGlobal = "localglobaldivforellipticcurves";
}  // namespace tag

struct Evidence {
  std::string kind;
  std::optional<std::uint32_t> ell;
  std::optional<std::int64_t> a_ell;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> form;
  std::string detail;

  bool operator==(const Evidence&) const = default;
};

struct Certificate {
  ec::CurveQ curve;
  std::uint32_t p = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Evidence> evidence;
  std::vector<std::string> citations;

  bool operator==(const Certificate&) const = default;
};

/// Residual power-pair forms (a, b) that must be excluded at p in {3, 5, 7}.
std::vector<std::pair<std::uint32_t, std::uint32_t>> bad_forms(std::uint32_t p);

/// Throws BadPrime for composite p.
Certificate certify_q(const ec::CurveQ& c, std::uint32_t p, std::uint32_t aux_bound = 1000);

/// Recomputes every evidence item; for CERTIFIED_LOCAL also checks that each required form has a witness.
bool revalidate(const Certificate& cert, std::string* why = nullptr);

nlohmann::json to_json(const Certificate& cert);
/// Throws ParseError on schema violations.
Certificate certificate_from_json(const nlohmann::json& j);
std::string to_text(const Certificate& cert);

struct TwistEntry {
  BigInt d;
  Certificate certificate;
};

struct TwistSummary {
  std::size_t total = 0;
  std::size_t certified_local = 0;
  std::size_t certified_paper = 0;
  std::size_t inconclusive = 0;
  std::size_t not_certified = 0;         // INCONCLUSIVE or UNSUPPORTED_PRIME
  std::size_t not_locally_excluded = 0;  // verdict other than CERTIFIED_LOCAL
};

struct TwistScan {
  std::uint32_t p = 0;
  std::vector<TwistEntry> entries;  // input order
  TwistSummary summary;
};

/// certify_q on each twist; D = 1 is the curve itself. Throws BadPrime for even p, NotSquarefree.
TwistScan twist_scan(const ec::CurveQ& c, std::uint32_t p, const std::vector<BigInt>& d_set,
                     std::uint32_t aux_bound = 1000);

struct BoundReport {
  unsigned d = 0;
  BigInt merel;                   // d^(3 d^2)
  bool merel_degenerate = false;  // d = 1: the bound only applies for d > 1
  BigInt parent;                  // 65 (3^d - 1) (2d)^6
  BigInt oesterle_ceil;           // ceil((1 + 3^(d/2))^2)
  std::optional<std::uint32_t> pi_known;
  BigInt pi_bound;
  std::string pi_source;  // "known", "oesterle", "parent"
  // (2^d + 2^(d/2))^2 = 4^d + 2^d + sqrt(2^(3d+2))
  BigInt generic_floor;
  bool generic_exact = false;
  double generic_approx = 0;
  BigInt first_certified_prime;
};

inline constexpr unsigned kMaxDegree = 64;

/// Throws InvalidDegree unless 1 <= d <= kMaxDegree.
BoundReport threshold_degree(unsigned d, bool use_parent_bound = false);
nlohmann::json to_json(const BoundReport& r);
std::string to_text(const BoundReport& r);

}  // namespace shadiv::cert
