#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "shadiv/certify.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "shadiv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = shadiv::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, CertifyExitCodes) {
  EXPECT_EQ(run({"certify", "--curve", "1,1,0,-2,-7", "--prime", "13"}).code, 0);
  EXPECT_EQ(run({"certify", "--curve", "1,1,0,-2,-7", "--prime", "2"}).code, 3);
  EXPECT_EQ(run({"certify", "--curve", "0,0,0,0,0", "--prime", "5"}).code, 4);
  EXPECT_EQ(run({"certify", "--curve", "0,0,1,-1", "--prime", "5"}).code, 4);
  EXPECT_EQ(run({"certify", "--curve", "0,0,1,-1,0", "--prime", "9"}).code, 4);
  EXPECT_EQ(run({"certify", "--curve", "0,0,1,0,0", "--prime", "3"}).code, 2);
  EXPECT_EQ(run({"certify", "--curve", "0,0,1,-1,0", "-p", "5"}).code, 0);
  EXPECT_EQ(run({"certify", "--prime", "5"}).code, 4);
  EXPECT_EQ(run({}).code, 4);
}

TEST(Cli, CertifyJsonRoundTrips) {
  const auto r = run({"certify", "--curve", "0,0,1,-1,0", "--prime", "5", "--output", "json"});
  ASSERT_EQ(r.code, 0);
  const auto cert = shadiv::cert::certificate_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(cert, shadiv::cert::certify_q(shadiv::ec::CurveQ(0, 0, 1, -1, 0), 5));
  // text output names the citation tags
  const auto t = run({"certify", "--curve", "0,0,1,-1,0", "--prime", "5"});
  EXPECT_NE(t.out.find("localglobaldivforellipticcurves"), std::string::npos);
}

TEST(Cli, VerifyGroupcrit) {
  EXPECT_EQ(run({"verify-groupcrit", "--p", "3", "--exhaustive"}).code, 0);
  EXPECT_EQ(run({"verify-groupcrit", "--p", "7", "--samples", "40", "--seed", "42"}).code, 0);
  EXPECT_EQ(run({"verify-groupcrit", "--p", "7", "--exhaustive"}).code, 4);
  EXPECT_EQ(run({"verify-groupcrit", "--p", "5"}).code, 4);
  EXPECT_EQ(run({"verify-groupcrit", "--p", "6", "--exhaustive"}).code, 4);
}

TEST(Cli, Bounds) {
  const auto r = run({"bounds", "--degree", "1", "--output", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["first_certified_prime"], 13);
  EXPECT_EQ(run({"bounds", "--degree", "0"}).code, 4);
  EXPECT_NE(run({"bounds", "--degree", "2"}).out.find("37"), std::string::npos);
}

TEST(Cli, Group) {
  const auto r = run({"group", "--p", "5", "--generators", "0,4,1,0;1,1,0,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("side1"), std::string::npos);
  EXPECT_NE(r.out.find("factors"), std::string::npos);
  EXPECT_EQ(run({"group", "--p", "5", "--generators", "1,2,2,4"}).code, 4);
  EXPECT_EQ(run({"group", "--p", "5", "--generators", "1,2"}).code, 4);
  const auto j = run({"group", "--p", "3", "--generators", "1,1,0,1", "--output", "json"});
  EXPECT_EQ(nlohmann::json::parse(j.out)["h1_V"], 1);
}

TEST(Cli, TwistScanAndSelmer) {
  const auto r = run({"twist-scan", "--curve", "1,1,0,-2,-7", "--prime", "13", "--twists", "1,-1,2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certified_paper 3"), std::string::npos);
  EXPECT_EQ(run({"twist-scan", "--curve", "1,1,0,-2,-7", "--prime", "13", "--twists", "4"}).code, 4);
  EXPECT_EQ(run({"twist-scan", "--curve", "1,1,0,-2,-7", "--prime", "2"}).code, 4);
  const auto s = run({"selmer-check"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("27"), std::string::npos);
}
