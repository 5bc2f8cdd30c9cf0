#include "qcqkd/cli.hpp"

#include <gtest/gtest.h>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qcqkd;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qcqkd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

using Row = std::map<std::string, std::string>;

std::vector<Row> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header.push_back(cell);
  }
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::string cell;
    Row row;
    for (const auto& col : header) {
      std::getline(r, cell, ',');
      row[col] = cell;
    }
    rows.push_back(row);
  }
  return rows;
}

double num(const Row& r, const std::string& col) { return std::stod(r.at(col)); }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcqkd_test_" + name);
}

}  // namespace

TEST(Cli, SuccessProbabilityRows) {
  const auto r = invoke({"success-prob", "--alpha", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "alpha,scheme,m,n,T,pd");
  bool saw_bsqc = false, saw_ssqc = false;
  for (const auto& row : parse_csv(r.out)) {
    if (row.at("scheme") == "bsqc" && row.at("n") == "0") {
      EXPECT_NEAR(num(row, "pd"), 0.532623, 1e-6);
      saw_bsqc = true;
    }
    if (row.at("scheme") == "ssqc" && row.at("n") == "0") {
      EXPECT_NEAR(num(row, "pd"), 0.689655, 1e-6);
      saw_ssqc = true;
    }
  }
  EXPECT_TRUE(saw_bsqc && saw_ssqc);

  const auto unit = invoke({"success-prob", "--t", "1", "--scheme", "bsqc", "--m", "1", "--n", "1"});
  ASSERT_EQ(unit.code, 0) << unit.err;
  for (const auto& row : parse_csv(unit.out)) EXPECT_NEAR(num(row, "pd"), 1.0, 1e-9);
}

TEST(Cli, SuccessProbabilityAlphaGrid) {
  const auto r = invoke({"success-prob", "--scheme", "ssqc", "--n", "1",
                         "--alpha-min", "0", "--alpha-max", "1", "--alpha-step", "0.25"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.front().at("alpha"), "0");
  EXPECT_EQ(rows.back().at("alpha"), "1");
}

TEST(Cli, EntanglementRows) {
  const auto zero = invoke({"entanglement", "--alpha", "0"});
  ASSERT_EQ(zero.code, 0) << zero.err;
  for (const auto& row : parse_csv(zero.out)) EXPECT_NEAR(num(row, "e_n"), 0.0, 1e-9);

  const double alpha = 0.5 / std::sqrt(0.75);
  const auto r = invoke({"entanglement", "--alpha", fmt::format("{:.17g}", alpha),
                         "--scheme", "bsqc", "--m", "0", "--n", "0", "--t", "0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(num(rows[0], "e_n"), std::log2(1.45 / 0.55), 1e-8);
  EXPECT_NEAR(num(rows[0], "e_n_tmsv"), std::log2(3.0), 1e-8);
}

TEST(Cli, KeyRateRows) {
  const auto r = invoke({"keyrate", "--d-max", "100", "--d-step", "25"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    if (row.at("distance_km") == "0") {
      EXPECT_EQ(row.at("plob"), "inf");
      if (row.at("scheme") == "original") EXPECT_GT(num(row, "key_rate"), 0.0);
      continue;
    }
    EXPECT_LE(num(row, "key_rate"), num(row, "plob"));
  }
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args = {"keyrate", "--t", "optimal", "--d-max", "60",
                                         "--d-step", "20"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
  const std::vector<std::string> verify = {"verify", "--alpha", "1", "--seed", "9"};
  EXPECT_EQ(invoke(verify).out, invoke(verify).out);
}

TEST(Cli, JsonOutput) {
  const auto r = invoke({"success-prob", "--alpha", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["metadata"]["command"], "success-prob");
  EXPECT_EQ(doc["metadata"]["alpha"], "1");
  EXPECT_EQ(doc["columns"].size(), 6u);
  EXPECT_EQ(doc["data"]["pd"].size(), doc["data"]["alpha"].size());
  EXPECT_TRUE(doc["data"]["pd"][0].is_number());
}

TEST(Cli, ConfigFileAndOverride) {
  const auto cfg = temp_path("config.ini");
  {
    std::ofstream f(cfg);
    f << "alpha=3\nt=0.95\nscheme=bsqc\nm=0\nn=0\n";
  }
  const auto from_file = invoke({"success-prob", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  auto rows = parse_csv(from_file.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(num(rows[0], "pd"), 0.532623, 1e-6);

  const auto overridden = invoke({"success-prob", "--config", cfg.string(), "--alpha", "1"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  rows = parse_csv(overridden.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("alpha"), "1");
  std::filesystem::remove(cfg);
}

TEST(Cli, OutputFile) {
  const auto path = temp_path("out.csv");
  const auto r = invoke({"success-prob", "--alpha", "2", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(parse_csv(ss.str()).size(), 6u);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"keyrate", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"keyrate", "--alpha", "1", "--variance", "3"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"keyrate", "--scheme", "nope"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"keyrate", "--format", "xml"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"success-prob", "--t", "optimal"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"success-prob", "--t", "1.5"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"success-prob", "--scheme", "bsqc", "--m", "1", "--n", "2"}).code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"keyrate", "--beta", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"max-distance", "--floor", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"keyrate", "--d-step", "0"}).code, cli::kExitUsage);
}

TEST(Cli, VerifyExitCodes) {
  const auto ok = invoke({"verify", "--samples", "2"});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  for (const auto& row : parse_csv(ok.out)) EXPECT_EQ(row.at("status"), "pass");

  const auto small = invoke({"verify", "--cutoff", "20", "--alpha", "3"});
  EXPECT_EQ(small.code, cli::kExitNumerical);
  EXPECT_NE(small.err.find("cutoff too small"), std::string::npos);

  const auto strict = invoke({"verify", "--alpha", "1", "--tolerance", "1e-30"});
  EXPECT_EQ(strict.code, cli::kExitVerifyFailed);
}

TEST(Cli, VerifyFlippedSign) {
  const auto r = invoke({"verify", "--alpha", "1", "--flip-bs-sign", "--samples", "0"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  bool saw = false;
  for (const auto& row : parse_csv(r.out)) {
    if (row.at("quantity").rfind("sign_flip", 0) == 0) {
      saw = true;
      EXPECT_LT(num(row, "max_abs_deviation"), 1e-12);
    }
  }
  EXPECT_TRUE(saw);
}

TEST(Cli, ExcessNoiseAndDistanceCommands) {
  const auto eps = invoke({"excess-noise", "--scheme", "bsqc", "--m", "0", "--n", "0",
                           "--d-min", "100", "--d-max", "100"});
  ASSERT_EQ(eps.code, 0) << eps.err;
  const auto eps_rows = parse_csv(eps.out);
  ASSERT_EQ(eps_rows.size(), 1u);
  EXPECT_GT(num(eps_rows[0], "eps_max"), 0.0);

  const auto dist = invoke({"max-distance", "--scheme", "original"});
  ASSERT_EQ(dist.code, 0) << dist.err;
  const auto rows = parse_csv(dist.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(num(rows[0], "max_distance_km"), 50.0);
}
