#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "wehrl/io.hpp"

using namespace wehrl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wehrl_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, StateRoundTripIsExact) {
  const Params P(2, 3);
  const auto X = random_state(P, 77);
  const auto path = scratch("state.json").string();
  write_state_file(path, X);
  std::ostringstream warn;
  const auto Y = read_state_file(path, &warn);
  EXPECT_EQ(Y.params(), P);
  EXPECT_EQ(Y.coeffs(), X.coeffs());
  EXPECT_TRUE(warn.str().empty());
}

TEST(Io, StateJsonShape) {
  const auto j = state_to_json(basis_state(Params(1, 2), 1));
  EXPECT_EQ(j.dump(), R"({"N":1,"M":2,"coeffs":[[0.0,0.0],[1.0,0.0],[0.0,0.0]]})");
}

TEST(Io, NormalisationWarning) {
  json j = {{"N", 1}, {"M", 1}, {"coeffs", {{3.0, 0.0}, {0.0, 4.0}}}};
  std::ostringstream warn;
  const auto X = state_from_json(j, &warn);
  EXPECT_NE(warn.str().find("normalising"), std::string::npos);
  EXPECT_NEAR(X[1].imag(), 0.8, 1e-15);
  // Within 1e-6 of unit norm: silent
  json k = {{"N", 1}, {"M", 1}, {"coeffs", {{1.0 + 1e-8, 0.0}, {0.0, 0.0}}}};
  std::ostringstream quiet;
  state_from_json(k, &quiet);
  EXPECT_TRUE(quiet.str().empty());
  EXPECT_NO_THROW(state_from_json(k, nullptr));
}

TEST(Io, RejectsMalformedStates) {
  const std::vector<json> bad{
      json::array(),
      {{"M", 1}, {"coeffs", {{1.0, 0.0}, {0.0, 0.0}}}},
      {{"N", 0}, {"M", 1}, {"coeffs", json::array()}},
      {{"N", 1}, {"M", 1}, {"coeffs", {{1.0, 0.0}}}},
      {{"N", 1}, {"M", 1}, {"coeffs", {{1.0, 0.0}, {0.0}}}},
      {{"N", 1}, {"M", 1}, {"coeffs", {{1.0, 0.0}, {"x", 0.0}}}},
      {{"N", 1}, {"M", 1}, {"coeffs", {{0.0, 0.0}, {0.0, 0.0}}}},
      {{"N", "one"}, {"M", 1}, {"coeffs", {{1.0, 0.0}, {0.0, 0.0}}}},
  };
  for (const auto& j : bad) EXPECT_THROW(state_from_json(j, nullptr), FormatError) << j.dump();
}

TEST(Io, FileErrors) {
  EXPECT_THROW(read_state_file("/nonexistent/dir/state.json", nullptr), IoError);
  EXPECT_THROW(write_text_file("/nonexistent/dir/out.json", "x"), IoError);
  const auto path = scratch("garbage.json").string();
  write_text_file(path, "{ not json");
  EXPECT_THROW(read_state_file(path, nullptr), FormatError);
  EXPECT_EQ(read_text_file(path), "{ not json");
}

TEST(Io, ResultSerialisation) {
  const Params P(1, 2);
  const auto h = to_json(hessian_coefficients(P, pow_phi(2)));
  EXPECT_EQ(h["by_degree"].size(), 2u);
  EXPECT_EQ(h["by_degree"]["1"].get<double>(), 0.0);
  EXPECT_NEAR(h["by_degree"]["2"].get<double>(), -4.0 / 15.0, 1e-15);
  EXPECT_EQ(h["phi"], "pow:2");

  const auto d = to_json(husimi_sup(basis_state(P, 1)));
  for (const char* k : {"T", "D_euclid", "dist_geodesic", "argmax_v", "n_starts_used", "converged"})
    EXPECT_TRUE(d.contains(k)) << k;
  EXPECT_EQ(d["argmax_v"].size(), 2u);

  const auto e = to_json(Estimate{0.5, 1e-3});
  EXPECT_EQ(e.dump(), R"({"value":0.5,"error":0.001})");
}

TEST(Io, ScanReportFormats) {
  const Params P(1, 2);
  ScanOptions o;
  o.n_samples = 4;
  o.n_starts = 4;
  o.seed = 3;
  const auto r = stability_scan(P, pow_phi(2), Sampler{}, o);
  const auto j = to_json(r);
  EXPECT_EQ(j["records"].size(), 4u);
  EXPECT_EQ(j["aggregate"]["samples"], 4u);
  EXPECT_EQ(j["aggregate"]["count"], r.count);
  EXPECT_EQ(j["sampler"], "uniform");
  EXPECT_EQ(dump(j), dump(to_json(stability_scan(P, pow_phi(2), Sampler{}, o))));

  const auto csv = scan_report_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "seed_index,t,deficit,deficit_stderr,T,D_euclid,dist_geodesic,ratio,error");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(dump(json{{"a", 1}}), "{\n  \"a\": 1\n}\n");
}
