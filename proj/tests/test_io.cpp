#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "spartan/errors.hpp"
#include "spartan/io.hpp"

using namespace spartan;
using nlohmann::json;

TEST(Format, NineSignificantDigits) {
  EXPECT_EQ(io::format_number(0.0), "0.00000000e+00");
  EXPECT_EQ(io::format_number(-1.0 / 3.0), "-3.33333333e-01");
  EXPECT_EQ(io::format_number(12345.6789012), "1.23456789e+04");
  EXPECT_EQ(io::format_number(std::nan("")), "nan");
  EXPECT_EQ(io::format_number(-INFINITY), "-inf");
}

TEST(Params, RoundTrip) {
  ModelParams p = params_from_xc(2.5, -1.25, 0.5, Band::finite(3.0));
  EXPECT_EQ(io::params_from_json(io::params_to_json(p)), p);
  p.kc = Band::infinite();
  const json j = io::params_to_json(p);
  EXPECT_EQ(j.at("kc"), "inf");
  EXPECT_EQ(io::params_from_json(json::parse(j.dump())), p);
}

TEST(Params, KeysAndDefaults) {
  const ModelParams p = io::params_from_json(json::parse(R"({"eta1": 2})"));
  EXPECT_EQ(p.eta0, 1.0);
  EXPECT_EQ(p.xi, 1.0);
  EXPECT_TRUE(p.kc.is_infinite());
  EXPECT_THROW(io::params_from_json(json::parse(R"({"eta1": 2, "ETA0": 1})")), InvalidArgument);
  EXPECT_THROW(io::params_from_json(json::parse(R"({"eta0": 1})")), InvalidArgument);
  EXPECT_THROW(io::params_from_json(json::parse(R"({"eta1": 1, "kc": "big"})")), InvalidArgument);
  EXPECT_THROW(io::params_from_json(json::parse(R"({"eta1": 1, "xi": -1})")), InvalidArgument);
  EXPECT_THROW(io::params_from_json(json::parse(R"([1, 2])")), InvalidArgument);
}

TEST(Profile, CsvLayout) {
  CovarianceProfile p;
  p.lags = {0.0, 0.5};
  p.values = {0.25, 0.125};
  p.method = Method::closed_form_asymptotic;
  std::ostringstream os;
  io::write_profile_csv(os, p);
  EXPECT_EQ(os.str(),
            "r,value,method\n"
            "0.00000000e+00,2.50000000e-01,closed_form_asymptotic\n"
            "5.00000000e-01,1.25000000e-01,closed_form_asymptotic\n");
  const json j = io::profile_to_json(p);
  EXPECT_EQ(j.at("rows").size(), 2u);
  EXPECT_EQ(j.at("method"), "closed_form_asymptotic");
}

TEST(Realization, CsvAndBinaryRoundTrip) {
  FieldRealization f;
  f.grid = GridSpec{-1.0, 0.25, 3};
  f.values = {1.5, -2.0, 1e-300};
  f.seed = 0xDEADBEEFCAFEULL;
  f.n_modes = 4096;
  std::ostringstream csv;
  io::write_realization_csv(csv, f);
  EXPECT_EQ(csv.str(),
            "s,value\n-1.00000000e+00,1.50000000e+00\n-7.50000000e-01,-2.00000000e+00\n"
            "-5.00000000e-01,1.00000000e-300\n");

  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  io::write_realization_binary(bin, f);
  const std::string bytes = bin.str();
  ASSERT_EQ(bytes.size(), 4u + 4 + 8 + 8 + 8 + 8 + 8 + 3 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "FGCR");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1);
  const FieldRealization g = io::read_realization_binary(bin);
  EXPECT_EQ(g.grid, f.grid);
  EXPECT_EQ(g.values, f.values);
  EXPECT_EQ(g.seed, f.seed);
  EXPECT_EQ(g.n_modes, f.n_modes);
}

TEST(Realization, BinaryRejectsGarbage) {
  std::istringstream bad("NOPE");
  EXPECT_THROW(io::read_realization_binary(bad), InvalidArgument);
  std::istringstream truncated(std::string("FGCR\x01\x00\x00\x00", 8));
  EXPECT_THROW(io::read_realization_binary(truncated), InvalidArgument);
}

TEST(Reports, JsonShapes) {
  SmoothnessReport r;
  r.dimension = Dim::three;
  r.max_ms_order = 0;
  r.moment_values[0] = 0.5;
  r.divergence_exponents[1] = 1;
  const json j = io::smoothness_to_json(r);
  EXPECT_EQ(j.at("max_ms_order"), 0);
  EXPECT_EQ(j.at("xc"), "inf");
  EXPECT_EQ(j.at("divergence_exponents").at("1"), 1);
  r.max_ms_order.reset();
  EXPECT_EQ(io::smoothness_to_json(r).at("max_ms_order"), "unbounded");

  EmpiricalStats s;
  s.lags = {0.0, 1.0};
  s.acf = {1.0, NAN};
  s.std_errors.acf = {0.0, NAN};
  const json sj = io::stats_to_json(s);
  EXPECT_TRUE(sj.at("acf").at(1).is_null());

  const json pj = io::permissibility_to_json(
      check_permissibility(params_from_xc(1, -3, 1, Band::finite(0.5))));
  EXPECT_EQ(pj.at("permissible"), true);
  EXPECT_EQ(pj.at("regime"), "band_restricted");
  EXPECT_NEAR(pj.at("max_allowed_xc").get<double>(), 0.618034, 1e-6);
  EXPECT_EQ(io::constants_to_json(derive_constants(2.0)).at("beta2"), 1.0);
}
