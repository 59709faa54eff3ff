#include "cli.hpp"

#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shadiv/certify.hpp"
#include "shadiv/cohomology.hpp"
#include "shadiv/errors.hpp"
#include "shadiv/gl2_group.hpp"
#include "shadiv/gmodule.hpp"
#include "shadiv/selmer_ring.hpp"

namespace shadiv::cli {

namespace {

using nlohmann::json;

struct CliConfig {
  std::string curve;
  std::uint32_t prime = 0;
  std::uint32_t aux_bound = 1000;
  unsigned degree = 1;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string output = "text";
  bool exhaustive = false;
  bool parent = false;
  std::string generators;
  std::string twists = "1,-1,2,-2,3,-3,5,-5,6,-6,7,-7,10,-10,11,-11";
};

void require_prime(std::uint32_t p) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw BadPrime(std::to_string(p) + " is not prime");
}

std::vector<BigInt> parse_twists(const std::string& text) {
  std::vector<BigInt> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty twist entry");
    item = item.substr(b, e - b + 1);
    const std::size_t start = item[0] == '-' ? 1 : 0;
    if (start == item.size() || item.find_first_not_of("0123456789", start) != std::string::npos) {
      throw ParseError("bad twist '" + item + "'");
    }
    BigInt d(item);
    if (!is_squarefree(d)) throw NotSquarefree(item + " is not a nonzero squarefree integer");
    out.push_back(std::move(d));
  }
  if (out.empty()) throw ParseError("no twists given");
  return out;
}

int verdict_code(cert::Verdict v) {
  switch (v) {
    case cert::Verdict::CertifiedLocal:
    case cert::Verdict::CertifiedPaper: return kOk;
    case cert::Verdict::Inconclusive: return kInconclusive;
    case cert::Verdict::UnsupportedPrime: return kUnsupportedPrime;
  }
  return kInputError;
}

int cmd_certify(const CliConfig& cfg, std::ostream& out) {
  require_prime(cfg.prime);
  const ec::CurveQ c = ec::CurveQ::parse(cfg.curve);
  const cert::Certificate cert = cert::certify_q(c, cfg.prime, cfg.aux_bound);
  if (cfg.output == "json") {
    out << cert::to_json(cert).dump(2) << '\n';
  } else {
    out << cert::to_text(cert);
  }
  return verdict_code(cert.verdict);
}

json diagnostics_json(const coh::GroupDiagnostics& d) {
  const auto& f = d.flags;
  return {{"group", d.group},
          {"order", d.order},
          {"flags",
           {{"p_divides_order", f.p_divides_order},
            {"in_borel", f.in_borel},
            {"contains_sl2", f.contains_sl2},
            {"in_split_normalizer", f.in_split_normalizer},
            {"in_nonsplit_normalizer", f.in_nonsplit_normalizer},
            {"exceptional_pgl_image",
             f.exceptional_pgl_image ? json(gl2::to_string(*f.exceptional_pgl_image)) : json(nullptr)}}},
          {"factors_V", d.factors_v},
          {"factors_EndV", d.factors_end},
          {"common_factor", d.common_factor},
          {"h1_V", d.h1_v},
          {"h1_EndV", d.h1_end},
          {"in_s3_copy", d.in_s3_copy},
          {"V_reducible", d.v_reducible},
          {"characters_ok", d.characters_ok},
          {"side1", d.side1},
          {"side2", d.side2}};
}

int cmd_group(const CliConfig& cfg, std::ostream& out) {
  require_prime(cfg.prime);
  const gf::PrimeField field(cfg.prime);
  const gl2::Gl2 arith(field);
  const auto gens = gl2::parse_generators(arith, cfg.generators);
  const gl2::MatrixGroup g = gl2::generate_group(field, gens);
  const coh::GroupDiagnostics d = coh::diagnose(g);
  if (cfg.output == "json") {
    out << diagnostics_json(d).dump(2) << '\n';
  } else {
    out << d.to_string() << '\n';
  }
  return kOk;
}

int cmd_verify_groupcrit(const CliConfig& cfg, std::ostream& out) {
  require_prime(cfg.prime);
  if (cfg.exhaustive == (cfg.samples > 0)) {
    throw ParseError("give exactly one of --exhaustive or --samples N");
  }
  gl2::EnumerationMode mode = gl2::Exhaustive{};
  if (!cfg.exhaustive) mode = gl2::Sampled{cfg.samples, cfg.seed};
  const auto groups = gl2::enumerate_subgroups_up_to_conjugacy(cfg.prime, mode);
  const coh::EquivalenceReport r = coh::groupcrit_equivalence_report(cfg.prime, groups);
  if (cfg.output == "json") {
    json all = json::array();
    for (const auto& d : r.groups) all.push_back(diagnostics_json(d));
    out << json{{"p", r.p}, {"groups_checked", r.groups.size()}, {"violators", r.violators}, {"groups", all}}.dump(2)
        << '\n';
  } else {
    for (std::size_t i = 0; i < r.groups.size(); ++i) out << "#" << i << ' ' << r.groups[i].to_string() << '\n';
    out << "p = " << r.p << ": " << r.groups.size() << " groups checked, " << r.violators.size() << " violators\n";
  }
  return r.ok() ? kOk : kViolation;
}

int cmd_bounds(const CliConfig& cfg, std::ostream& out) {
  const cert::BoundReport r = cert::threshold_degree(cfg.degree, cfg.parent);
  if (cfg.output == "json") {
    out << cert::to_json(r).dump(2) << '\n';
  } else {
    out << cert::to_text(r);
  }
  return kOk;
}

int cmd_twist_scan(const CliConfig& cfg, std::ostream& out) {
  require_prime(cfg.prime);
  const ec::CurveQ c = ec::CurveQ::parse(cfg.curve);
  const auto scan = cert::twist_scan(c, cfg.prime, parse_twists(cfg.twists), cfg.aux_bound);
  const auto& s = scan.summary;
  if (cfg.output == "json") {
    json entries = json::array();
    for (const auto& e : scan.entries) entries.push_back({{"D", e.d.str()}, {"certificate", cert::to_json(e.certificate)}});
    out << json{{"p", scan.p},
                {"entries", entries},
                {"summary",
                 {{"total", s.total},
                  {"certified_local", s.certified_local},
                  {"certified_paper", s.certified_paper},
                  {"inconclusive", s.inconclusive},
                  {"not_certified", s.not_certified},
                  {"not_locally_excluded", s.not_locally_excluded}}}}
               .dump(2)
        << '\n';
  } else {
    for (const auto& e : scan.entries) {
      out << "D = " << e.d << ": " << cert::to_string(e.certificate.verdict);
      for (const auto& c2 : e.certificate.citations) out << ' ' << c2;
      out << '\n';
    }
    out << "total " << s.total << ", certified_local " << s.certified_local << ", certified_paper "
        << s.certified_paper << ", inconclusive " << s.inconclusive << ", not certified " << s.not_certified
        << ", not locally excluded " << s.not_locally_excluded << '\n';
  }
  return kOk;
}

int cmd_selmer_check(const CliConfig& cfg, std::ostream& out) {
  const selmer::OneUnitReport r = selmer::one_unit_report(2);
  const ec::CurveQ demo = selmer::selmer_demo_curve();
  const bool ok = r.cases_checked == 81 && r.cube_failures == 0 && r.quotient == 27;
  if (cfg.output == "json") {
    out << json{{"cases_checked", r.cases_checked},
                {"cube_failures", r.cube_failures},
                {"one_units", r.units},
                {"cubes", r.cubes},
                {"quotient_order", r.quotient},
                {"exponent", r.exponent},
                {"abelian", r.abelian},
                {"demo_curve", demo.to_string()},
                {"demo_note", "good reduction over Spec(Z[1/30])"},
                {"ok", ok}}
               .dump(2)
        << '\n';
  } else {
    out << "cube killing: " << (r.cases_checked - r.cube_failures) << "/" << r.cases_checked << " residues a with (1+(z-1)a)^3 = 1 mod 9\n"
        << "|U1| = " << r.units << ", |U1^3| = " << r.cubes << ", |U1/U1^3| = " << r.quotient
        << ", exponent " << r.exponent << (r.abelian ? ", abelian" : ", non-abelian") << '\n'
        << "demo curve " << demo.to_string() << " (y^2 = x^3 - 1555200), good reduction over Spec(Z[1/30])\n"
        << (ok ? "OK" : "FAILED") << '\n';
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"shadiv: mod-p image criteria and divisibility certificates for elliptic curves over Q"};
  app.require_subcommand(1);
  CliConfig cfg;
  const auto outputs = CLI::IsMember({"json", "text"});

  auto* certify = app.add_subcommand("certify", "certify p-divisibility for a curve over Q");
  certify->add_option("--curve", cfg.curve, "a1,a2,a3,a4,a6")->required();
  certify->add_option("-p,--p,--prime", cfg.prime, "prime p")->required();
  certify->add_option("--aux-bound", cfg.aux_bound, "largest auxiliary prime")->capture_default_str();
  certify->add_option("--output", cfg.output)->check(outputs)->capture_default_str();

  auto* group = app.add_subcommand("group", "classify a subgroup of GL2(F_p) and evaluate both criterion sides");
  group->add_option("-p,--p,--prime", cfg.prime, "prime p")->required();
  group->add_option("--generators", cfg.generators, "m11,m12,m21,m22;...")->required();
  group->add_option("--output", cfg.output)->check(outputs)->capture_default_str();

  auto* verify = app.add_subcommand("verify-groupcrit", "check the criterion equivalence over many subgroups");
  verify->add_option("-p,--p,--prime", cfg.prime, "prime p")->required();
  verify->add_flag("--exhaustive", cfg.exhaustive, "all subgroups up to conjugacy (p <= 5)");
  verify->add_option("--samples", cfg.samples, "number of sampled subgroups");
  verify->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  verify->add_option("--output", cfg.output)->check(outputs)->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "torsion bounds and the degree-d threshold");
  bounds->add_option("--degree", cfg.degree, "degree d")->required();
  bounds->add_flag("--parent", cfg.parent, "use the Parent bound for d > 5");
  bounds->add_option("--output", cfg.output)->check(outputs)->capture_default_str();

  auto* twists = app.add_subcommand("twist-scan", "certify every quadratic twist in a list");
  twists->add_option("--curve", cfg.curve, "a1,a2,a3,a4,a6")->required();
  twists->add_option("-p,--p,--prime", cfg.prime, "odd prime p")->required();
  twists->add_option("--twists", cfg.twists, "comma-separated squarefree D")->capture_default_str();
  twists->add_option("--aux-bound", cfg.aux_bound, "largest auxiliary prime")->capture_default_str();
  twists->add_option("--output", cfg.output)->check(outputs)->capture_default_str();

  auto* selmer_cmd = app.add_subcommand("selmer-check", "1-unit cube check in Z[zeta_3]/9");
  selmer_cmd->add_option("--output", cfg.output)->check(outputs)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (certify->parsed()) return cmd_certify(cfg, out);
    if (group->parsed()) return cmd_group(cfg, out);
    if (verify->parsed()) return cmd_verify_groupcrit(cfg, out);
    if (bounds->parsed()) return cmd_bounds(cfg, out);
    if (twists->parsed()) return cmd_twist_scan(cfg, out);
    if (selmer_cmd->parsed()) return cmd_selmer_check(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace shadiv::cli
