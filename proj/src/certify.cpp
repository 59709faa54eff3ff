#include "shadiv/certify.hpp"

#include <cmath>
#include <sstream>

#include "shadiv/errors.hpp"

namespace shadiv::cert {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedLocal: return "CERTIFIED_LOCAL";
    case Verdict::CertifiedPaper: return "CERTIFIED_PAPER";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::UnsupportedPrime: return "UNSUPPORTED_PRIME";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::CertifiedLocal, Verdict::CertifiedPaper, Verdict::Inconclusive, Verdict::UnsupportedPrime}) {
    if (to_string(v) == s) return v;
  }
  throw ParseError("unknown verdict '" + s + "'");
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> bad_forms(std::uint32_t p) {
  switch (p) {
    case 3: return {{0, 1}};
    case 5: return {{0, 1}, {3, 2}};
    case 7: return {{0, 1}};
    default: return {};
  }
}

namespace {

std::string form_name(std::pair<std::uint32_t, std::uint32_t> f) {
  return "(" + std::to_string(f.first) + "," + std::to_string(f.second) + ")";
}

Evidence congruence_evidence(std::uint32_t p, std::pair<std::uint32_t, std::uint32_t> form,
                             const ec::CongruenceResult& r, std::uint32_t aux_bound) {
  Evidence e;
  e.form = form;
  if (r.excluded) {
    e.kind = kind::kExclusion;
    e.ell = r.ell;
    e.a_ell = r.a_ell;
    e.detail = "a_" + std::to_string(r.ell) + " = " + std::to_string(r.a_ell) + " is not " +
               std::to_string(r.ell) + "^" + std::to_string(form.first) + " + " + std::to_string(r.ell) + "^" +
               std::to_string(form.second) + " mod " + std::to_string(p);
  } else {
    e.kind = kind::kResidualForm;
    e.detail = "form " + form_name(form) + " not excluded by good primes up to " + std::to_string(aux_bound) + " (" +
               std::to_string(r.primes_checked) + " checked)";
  }
  return e;
}

Evidence inconclusive_note() {
  return {kind::kNote, std::nullopt, std::nullopt, std::nullopt,
          "the criteria applied here are sufficient but not necessary; INCONCLUSIVE does not assert that "
          "Sha fails to be p-divisible"};
}

}  // namespace

Certificate certify_q(const ec::CurveQ& c, std::uint32_t p, std::uint32_t aux_bound) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw BadPrime(std::to_string(p) + " is not prime");
  Certificate cert{c, p, Verdict::Inconclusive, {}, {}};

  if (p == 2) {
    cert.verdict = Verdict::UnsupportedPrime;
    cert.evidence.push_back({kind::kNote, std::nullopt, std::nullopt, std::nullopt,
                             "p = 2 is outside the scope of this certifier"});
    return cert;
  }

  if (p > 7) {
    cert.verdict = Verdict::CertifiedPaper;
    cert.citations.push_back(tag::kRationalEll1);
    if (p == 11) {
      bool all_excluded = true;
      for (auto form : {std::pair<std::uint32_t, std::uint32_t>{7, 4}, std::pair<std::uint32_t, std::uint32_t>{0, 1}}) {
        const auto r = ec::power_congruence_test(c, p, form.first, form.second, aux_bound);
        cert.evidence.push_back(congruence_evidence(p, form, r, aux_bound));
        all_excluded = all_excluded && r.excluded;
      }
      if (all_excluded) {
        cert.verdict = Verdict::CertifiedLocal;
        cert.citations.push_back(tag::kLocalGlobal);
      }
    }
    return cert;
  }

  if (p == 5 || p == 7) {
    const ec::ReductionInfo red = ec::reduction_type(c, p);
    const bool supersingular = red.kind == ec::ReductionInfo::Kind::Good && red.supersingular.value_or(false);
    const bool nonsplit = red.kind == ec::ReductionInfo::Kind::Multiplicative && !red.split;
    if (supersingular || nonsplit) {
      Evidence e{kind::kReductionType, p, std::nullopt, std::nullopt, red.to_string()};
      if (supersingular) e.a_ell = ec::trace_frobenius(c, p);
      cert.evidence.push_back(std::move(e));
      cert.verdict = Verdict::CertifiedPaper;
      cert.citations.push_back(tag::kRationalEll3);
      return cert;
    }
    if (ec::rational_two_torsion_count(c) == 4) {
      cert.evidence.push_back({kind::kTwoTorsion, std::nullopt, std::nullopt, std::nullopt,
                               "full rational 2-torsion (4 points)"});
      cert.verdict = Verdict::CertifiedPaper;
      cert.citations.push_back(tag::kLegendre);
      return cert;
    }
  }

  bool all_excluded = true;
  for (auto form : bad_forms(p)) {
    const auto r = ec::power_congruence_test(c, p, form.first, form.second, aux_bound);
    cert.evidence.push_back(congruence_evidence(p, form, r, aux_bound));
    all_excluded = all_excluded && r.excluded;
  }
  if (all_excluded) {
    cert.verdict = Verdict::CertifiedLocal;
    cert.citations = {tag::kRationalEll2, tag::kLocalGlobal};
  } else {
    cert.verdict = Verdict::Inconclusive;
    cert.citations = {tag::kRationalEll2};
    cert.evidence.push_back(inconclusive_note());
  }
  return cert;
}

bool revalidate(const Certificate& cert, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const ec::CurveQ& c = cert.curve;
  for (const auto& e : cert.evidence) {
    if (e.kind == kind::kExclusion) {
      if (!e.ell || !e.a_ell || !e.form) return fail("exclusion item missing fields");
      const std::uint32_t ell = *e.ell;
      if (ell == cert.p || !is_prime(static_cast<std::uint64_t>(ell)) || !ec::has_good_reduction(c, ell)) {
        return fail("witness " + std::to_string(ell) + " is not a good auxiliary prime");
      }
      const std::int64_t t = ec::trace_frobenius(c, ell);
      if (t != *e.a_ell) return fail("a_" + std::to_string(ell) + " recomputed as " + std::to_string(t));
      const auto p = static_cast<std::int64_t>(cert.p);
      const auto lhs = static_cast<std::uint32_t>(((t % p) + p) % p);
      if (lhs == ec::power_pair_residue(ell, e.form->first, e.form->second, cert.p)) {
        return fail("witness " + std::to_string(ell) + " satisfies the congruence");
      }
    } else if (e.kind == kind::kReductionType) {
      if (!e.ell) return fail("reduction item missing ell");
      if (ec::reduction_type(c, *e.ell).to_string() != e.detail) return fail("reduction type differs");
      if (e.a_ell && *e.a_ell != ec::trace_frobenius(c, *e.ell)) return fail("a_p differs");
    } else if (e.kind == kind::kTwoTorsion) {
      if (ec::rational_two_torsion_count(c) != 4) return fail("2-torsion is not full");
    } else if (e.kind == kind::kResidualForm) {
      if (!e.form) return fail("residual form missing");
    }
  }
  if (cert.verdict == Verdict::CertifiedLocal) {
    auto required = bad_forms(cert.p);
    if (cert.p == 11) required = {{7, 4}, {0, 1}};
    if (required.empty()) return fail("CERTIFIED_LOCAL at a prime without local criteria");
    for (auto form : required) {
      bool found = false;
      for (const auto& e : cert.evidence) found = found || (e.kind == kind::kExclusion && e.form == form);
      if (!found) return fail("no exclusion witness for form " + form_name(form));
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json big_to_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
    return x.convert_to<std::int64_t>();
  }
  return x.str();
}

BigInt big_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) {
      throw ParseError("bad integer '" + s + "'");
    }
    return BigInt(s);
  }
  throw ParseError("expected an integer");
}

}  // namespace

json to_json(const Certificate& cert) {
  json curve = json::object();
  const char* names[] = {"a1", "a2", "a3", "a4", "a6"};
  for (int i = 0; i < 5; ++i) curve[names[i]] = big_to_json(cert.curve.coefficients()[i]);
  json evidence = json::array();
  for (const auto& e : cert.evidence) {
    json item = {{"kind", e.kind}, {"detail", e.detail}};
    if (e.ell) item["ell"] = *e.ell;
    if (e.a_ell) item["a_ell"] = *e.a_ell;
    if (e.form) item["form"] = {e.form->first, e.form->second};
    evidence.push_back(std::move(item));
  }
  return {{"curve", curve},
          {"p", cert.p},
          {"verdict", to_string(cert.verdict)},
          {"evidence", evidence},
          {"citations", cert.citations}};
}

Certificate certificate_from_json(const json& j) {
  try {
    const json& cj = j.at("curve");
    std::array<BigInt, 5> a;
    const char* names[] = {"a1", "a2", "a3", "a4", "a6"};
    for (int i = 0; i < 5; ++i) a[i] = big_from_json(cj.at(names[i]));
    Certificate cert{ec::CurveQ(a), j.at("p").get<std::uint32_t>(), verdict_from_string(j.at("verdict").get<std::string>()),
                     {}, j.at("citations").get<std::vector<std::string>>()};
    for (const auto& item : j.at("evidence")) {
      Evidence e;
      e.kind = item.at("kind").get<std::string>();
      e.detail = item.at("detail").get<std::string>();
      if (item.contains("ell")) e.ell = item["ell"].get<std::uint32_t>();
      if (item.contains("a_ell")) e.a_ell = item["a_ell"].get<std::int64_t>();
      if (item.contains("form")) e.form = std::make_pair(item["form"].at(0).get<std::uint32_t>(), item["form"].at(1).get<std::uint32_t>());
      cert.evidence.push_back(std::move(e));
    }
    return cert;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("certificate JSON: ") + ex.what());
  }
}

std::string to_text(const Certificate& cert) {
  std::ostringstream os;
  os << "curve " << cert.curve.to_string() << "  p = " << cert.p << "\nverdict: " << to_string(cert.verdict) << '\n';
  for (const auto& e : cert.evidence) {
    os << "  [" << e.kind << "]";
    if (e.form) os << " form " << form_name(*e.form);
    if (e.ell) os << " ell=" << *e.ell;
    if (e.a_ell) os << " a_ell=" << *e.a_ell;
    os << "  " << e.detail << '\n';
  }
  os << "citations:";
  for (const auto& c : cert.citations) os << ' ' << c;
  if (cert.citations.empty()) os << " none";
  os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Twists

TwistScan twist_scan(const ec::CurveQ& c, std::uint32_t p, const std::vector<BigInt>& d_set, std::uint32_t aux_bound) {
  if (p == 2 || !is_prime(static_cast<std::uint64_t>(p))) throw BadPrime("twist_scan needs an odd prime");
  TwistScan scan;
  scan.p = p;
  for (const auto& d : d_set) {
    const ec::CurveQ twisted = d == 1 ? c : ec::quadratic_twist(c, d);
    scan.entries.push_back({d, certify_q(twisted, p, aux_bound)});
    const Verdict v = scan.entries.back().certificate.verdict;
    auto& s = scan.summary;
    ++s.total;
    if (v == Verdict::CertifiedLocal) ++s.certified_local;
    if (v == Verdict::CertifiedPaper) ++s.certified_paper;
    if (v == Verdict::Inconclusive) ++s.inconclusive;
    if (v == Verdict::Inconclusive || v == Verdict::UnsupportedPrime) ++s.not_certified;
    if (v != Verdict::CertifiedLocal) ++s.not_locally_excluded;
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Bounds

namespace {

BigInt ipow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

BigInt ceil_sqrt(const BigInt& n) {
  const BigInt s = isqrt(n);
  return s * s == n ? s : s + 1;
}

std::optional<std::uint32_t> known_pi(unsigned d) {
  switch (d) {
    case 1: return 7;
    case 2: return 13;
    case 3: return 13;
    case 4: return 17;
    case 5: return 19;
    default: return std::nullopt;
  }
}

}  // namespace

BoundReport threshold_degree(unsigned d, bool use_parent_bound) {
  if (d < 1 || d > kMaxDegree) {
    throw InvalidDegree("degree must lie in [1, " + std::to_string(kMaxDegree) + "], got " + std::to_string(d));
  }
  BoundReport r;
  r.d = d;
  r.merel = ipow(BigInt(d), 3 * d * d);
  r.merel_degenerate = d == 1;
  r.parent = 65 * (ipow(3, d) - 1) * ipow(BigInt(2 * d), 6);
  const BigInt three_d = ipow(3, d);
  r.oesterle_ceil = 1 + three_d + ceil_sqrt(4 * three_d);
  r.pi_known = known_pi(d);
  if (r.pi_known) {
    r.pi_bound = *r.pi_known;
    r.pi_source = "known";
  } else if (use_parent_bound) {
    r.pi_bound = r.parent;
    r.pi_source = "parent";
  } else {
    r.pi_bound = r.oesterle_ceil;
    r.pi_source = "oesterle";
  }
  const BigInt cross_sq = ipow(2, 3 * d + 2);
  const BigInt cross = isqrt(cross_sq);
  r.generic_exact = cross * cross == cross_sq;
  r.generic_floor = ipow(4, d) + ipow(2, d) + cross;
  r.generic_approx = std::pow(std::pow(2.0, d) + std::pow(2.0, d / 2.0), 2.0);
  r.first_certified_prime = next_prime_above(std::max(r.generic_floor, r.pi_bound));
  return r;
}

json to_json(const BoundReport& r) {
  return {{"d", r.d},
          {"merel", big_to_json(r.merel)},
          {"merel_valid_for_d_gt_1_only", r.merel_degenerate},
          {"parent", big_to_json(r.parent)},
          {"oesterle_ceil", big_to_json(r.oesterle_ceil)},
          {"pi_known", r.pi_known ? json(*r.pi_known) : json(nullptr)},
          {"pi_bound", big_to_json(r.pi_bound)},
          {"pi_source", r.pi_source},
          {"generic_threshold_floor", big_to_json(r.generic_floor)},
          {"generic_threshold_exact", r.generic_exact},
          {"generic_threshold_approx", r.generic_approx},
          {"first_certified_prime", big_to_json(r.first_certified_prime)}};
}

std::string to_text(const BoundReport& r) {
  std::ostringstream os;
  os << "degree d = " << r.d << '\n';
  os << "  merel bound d^(3d^2)          = " << (r.merel.str().size() > 60 ? r.merel.str().substr(0, 57) + "..." : r.merel.str())
     << (r.merel_degenerate ? "  (only meaningful for d > 1)" : "") << '\n';
  os << "  parent bound 65(3^d-1)(2d)^6  = " << r.parent << '\n';
  os << "  oesterle bound, ceiling       = " << r.oesterle_ceil << (r.pi_known ? "" : "  (unpublished)") << '\n';
  os << "  pi(d)                         = " << (r.pi_known ? std::to_string(*r.pi_known) : "unknown") << '\n';
  os << "  pi bound used                 = " << r.pi_bound << "  (" << r.pi_source << ")\n";
  os << "  (2^d + 2^(d/2))^2             ~ " << r.generic_approx << (r.generic_exact ? " (exact " : " (floor ")
     << r.generic_floor << ")\n";
  os << "  first_certified_prime         = " << r.first_certified_prime << '\n';
  return os.str();
}

}  // namespace shadiv::cert
