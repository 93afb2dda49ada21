#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "fracdelay/commands.hpp"
#include "fracdelay/errors.hpp"

using namespace fracdelay;

namespace {

constexpr int kValidationExit = 2;
constexpr int kComputationExit = 3;

struct RawOptions {
  std::optional<double> alpha, b, param, x0;
  std::optional<std::string> a, range, a_range, map, out, format, config;
  std::optional<int> tau, figure;
  std::optional<std::size_t> steps, grid;
  std::optional<unsigned> threads;
};

void add_options(CLI::App* sub, RawOptions& o) {
  sub->add_option("--alpha", o.alpha, "fractional order in (0, 1]");
  sub->add_option("--a", o.a, "coefficient a as re,im");
  sub->add_option("--b", o.b, "delay coefficient b");
  sub->add_option("--tau", o.tau, "delay tau >= 1");
  sub->add_option("--steps", o.steps, "simulation steps");
  sub->add_option("--grid", o.grid, "resolution (command specific)");
  sub->add_option("--map", o.map, "linear, logistic, cubic, henon, lozi");
  sub->add_option("--param", o.param, "map parameter");
  sub->add_option("--range", o.range, "lo,hi");
  sub->add_option("--a-range", o.a_range, "lo,hi for a in verify");
  sub->add_option("--x0", o.x0, "constant initial history");
  sub->add_option("--out", o.out, "output file, or directory for several datasets");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", o.threads, "worker threads (0: FRACDELAY_THREADS or hardware)");
  sub->add_option("--config", o.config, "JSON config file; flags override it");
}

RunConfig build_config(Command command, const RawOptions& o) {
  RunConfig cfg;
  if (o.config) {
    std::ifstream f(*o.config);
    if (!f) throw DomainError("config: cannot read '" + *o.config + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("config: ") + e.what());
    }
    j["command"] = std::string(to_string(command));
    cfg = run_config_from_json(j);
  }
  cfg.command = command;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.a) cfg.a = parse_complex(*o.a);
  if (o.b) cfg.b = *o.b;
  if (o.tau) cfg.tau = *o.tau;
  if (o.steps) cfg.steps = *o.steps;
  if (o.grid) cfg.grid = *o.grid;
  if (o.map) cfg.map = *o.map;
  if (o.param) cfg.param = *o.param;
  if (o.range) cfg.range = parse_range(*o.range);
  if (o.a_range) cfg.a_range = parse_range(*o.a_range);
  if (o.x0) cfg.x0 = *o.x0;
  if (o.figure) cfg.figure = *o.figure;
  if (o.out) cfg.out = *o.out;
  if (o.format) cfg.format = *o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability of fractional difference equations with delay"};
  app.set_version_flag("--version", FRACDELAY_VERSION);
  app.require_subcommand(1);

  std::map<Command, RawOptions> raw;
  std::map<CLI::App*, Command> subs;
  const std::pair<Command, const char*> commands[] = {
      {Command::Simulate, "simulate a linear or nonlinear trajectory"},
      {Command::Curve, "sample the stability boundary curve"},
      {Command::Classify, "classify a coefficient a"},
      {Command::Atlas, "bifurcation branches in the (alpha, b) plane"},
      {Command::Regions, "stability region curves in the (b, a) plane"},
      {Command::Sweep, "predict and verify a nonlinear parameter sweep"},
      {Command::Verify, "simulated verdict grid against prediction"},
      {Command::Figure, "regenerate the datasets of a figure"},
  };
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(std::string(to_string(cmd)), help);
    add_options(sub, raw[cmd]);
    if (cmd == Command::Figure) sub->add_option("number", raw[cmd].figure, "figure 1..6")->required();
    subs[sub] = cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationExit;
  }

  const auto* chosen = app.get_subcommands().front();
  const Command cmd = subs.at(const_cast<CLI::App*>(chosen));
  try {
    const auto cfg = build_config(cmd, raw[cmd]);
    write_datasets(run(cfg), cfg, std::cout);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kComputationExit;
  }
  return 0;
}
