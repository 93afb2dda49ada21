#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fracdelay/commands.hpp"
#include "fracdelay/dataset.hpp"
#include "fracdelay/errors.hpp"
#include "fracdelay/run_config.hpp"

using namespace fracdelay;

namespace {

EmittedDataset sample_dataset() {
  EmittedDataset ds;
  ds.name = "demo";
  ds.columns = {"x", "n", "flag", "label", "gap"};
  ds.metadata["alpha"] = 0.5;
  ds.add_row({0.1, std::int64_t{3}, true, std::string("a,b"), std::monostate{}});
  ds.add_row({-1e-300, std::int64_t{-7}, false, std::string("say \"hi\""), 2.5});
  return ds;
}

}  // namespace

TEST_SUITE("cli_and_io") {

TEST_CASE("doubles keep 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("csv layout") {
  std::ostringstream os;
  write_csv(os, sample_dataset());
  const std::string text = os.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.rfind("x,n,flag,label,gap\n", 0) == 0);
  CHECK(text.find("0.10000000000000001,3,true,\"a,b\",\n") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("json round trip") {
  const auto ds = sample_dataset();
  const auto back = dataset_from_json(to_json(ds));
  CHECK(back == ds);
  std::ostringstream os;
  write_json(os, ds);
  CHECK(dataset_from_json(nlohmann::json::parse(os.str())) == ds);
  CHECK(to_json(ds)["schema_version"] == 1);
}

TEST_CASE("row width is enforced") {
  EmittedDataset ds;
  ds.columns = {"a", "b"};
  CHECK_THROWS(ds.add_row({1.0}));
}

TEST_CASE("config parsing") {
  CHECK(parse_complex("0.5,-0.25") == std::complex<double>(0.5, -0.25));
  CHECK(parse_complex(" -1.5 ") == std::complex<double>(-1.5, 0.0));
  CHECK_THROWS_AS(parse_complex("1,x"), DomainError);
  CHECK(parse_range("-1,2") == std::pair{-1.0, 2.0});
  CHECK_THROWS_AS(parse_range("3,1"), DomainError);
  CHECK_THROWS_AS(parse_range("3"), DomainError);
}

TEST_CASE("config JSON rejects unknown keys and round trips") {
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"alpha", 0.5}, {"alpah", 0.4}}), DomainError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"alpha", "half"}}), DomainError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"alpha", 1.5}}), DomainError);
  RunConfig cfg;
  cfg.command = Command::Sweep;
  cfg.map = "henon";
  cfg.alpha = 0.8;
  cfg.b = 0.3;
  cfg.range = std::pair{-0.2, 0.4};
  cfg.a = {0.1, 0.2};
  const auto back = run_config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(back.range == cfg.range);
  CHECK(back.a == cfg.a);
}

TEST_CASE("validation names the field") {
  RunConfig cfg;
  cfg.tau = 0;
  try {
    cfg.validate();
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("tau") != std::string::npos);
  }
  cfg = RunConfig{};
  cfg.command = Command::Sweep;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = RunConfig{};
  cfg.command = Command::Figure;
  cfg.figure = 9;
  CHECK_THROWS_AS(run(cfg), DomainError);
}

TEST_CASE("classify command") {
  RunConfig cfg;
  cfg.command = Command::Classify;
  cfg.alpha = 1.0;
  cfg.a = {0.3, 0.3};
  const auto out = run(cfg);
  REQUIRE(out.size() == 1);
  REQUIRE(out[0].rows.size() == 1);
  CHECK(std::get<std::string>(out[0].rows[0][6]) == "stable");
  CHECK(out[0].metadata["config"]["command"] == "classify");
  CHECK(out[0].metadata.contains("library_version"));
}

TEST_CASE("simulate and curve commands") {
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.a = 0.5;
  cfg.steps = 50;
  const auto sim = run(cfg);
  CHECK(sim[0].rows.size() == 51);
  CHECK(sim[0].columns == std::vector<std::string>{"t", "re", "im"});

  cfg.map = "logistic";
  cfg.param = 0.5;
  cfg.x0 = 0.01;
  const auto nl = run(cfg);
  CHECK(nl[0].columns == std::vector<std::string>{"t", "x"});

  cfg = RunConfig{};
  cfg.command = Command::Curve;
  cfg.b = -1.2;
  const auto curve = run(cfg);
  CHECK(curve[0].rows.size() > 1024);
  CHECK(curve[0].metadata["self_intersections"].size() == 3);
}

TEST_CASE("figure 1 emits one dataset per branch plus the alpha* marker") {
  RunConfig cfg;
  cfg.command = Command::Figure;
  cfg.figure = 1;
  cfg.grid = 40;
  const auto sets = run(cfg);
  REQUIRE(sets.size() == 6);
  CHECK(sets.back().name == "fig1_alpha_star");
  const double a_star = std::get<double>(sets.back().rows[0][0]);
  CHECK(a_star == doctest::Approx(0.486).epsilon(0.01));
}

TEST_CASE("several datasets go to a directory or behind name lines") {
  RunConfig cfg;
  cfg.command = Command::Figure;
  cfg.figure = 3;
  cfg.grid = 20;
  const auto sets = run(cfg);
  std::ostringstream os;
  write_datasets(sets, cfg, os);
  CHECK(os.str().rfind("# fig3_g1\n", 0) == 0);

  const auto dir = std::filesystem::temp_directory_path() / "fracdelay_io_test";
  std::filesystem::remove_all(dir);
  cfg.out = dir.string();
  write_datasets(sets, cfg, os);
  for (const auto& ds : sets) CHECK(std::filesystem::exists(dir / (ds.name + ".csv")));
  std::filesystem::remove_all(dir);
}

TEST_CASE("runs are reproducible") {
  RunConfig cfg;
  cfg.command = Command::Verify;
  cfg.map = "cubic";
  cfg.grid = 5;
  cfg.steps = 300;
  cfg.threads = 1;
  const auto a = run(cfg);
  cfg.threads = 4;
  const auto b = run(cfg);
  CHECK(to_json(a[0]) == to_json(b[0]));
}

}
