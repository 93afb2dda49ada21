#include "fracdelay/run_config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <set>

#include "fracdelay/errors.hpp"
#include "fracdelay/map_model.hpp"

namespace fracdelay {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::Simulate, "simulate"},
    {Command::Curve, "curve"},
    {Command::Classify, "classify"},
    {Command::Atlas, "atlas"},
    {Command::Regions, "regions"},
    {Command::Sweep, "sweep"},
    {Command::Verify, "verify"},
    {Command::Figure, "figure"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DomainError(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return v;
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw DomainError(std::string(field) + " must be finite");
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [k, name] : kCommands)
    if (k == c) return name;
  return "?";
}

Command parse_command(std::string_view name) {
  for (const auto& [k, n] : kCommands)
    if (n == name) return k;
  throw DomainError("unknown command '" + std::string(name) + "'");
}

std::complex<double> parse_complex(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {parse_double(text, "a"), 0.0};
  return {parse_double(text.substr(0, comma), "a"), parse_double(text.substr(comma + 1), "a")};
}

std::pair<double, double> parse_range(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw DomainError("range: expected 'lo,hi', got '" + std::string(text) + "'");
  const double lo = parse_double(text.substr(0, comma), "range");
  const double hi = parse_double(text.substr(comma + 1), "range");
  if (!(lo <= hi)) throw DomainError("range: lo must not exceed hi");
  return {lo, hi};
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  require_finite(a.real(), "a");
  require_finite(a.imag(), "a");
  require_finite(b, "b");
  require_finite(param, "param");
  require_finite(x0, "x0");
  if (tau < 1) throw DomainError("tau must be >= 1");
  if (steps < 1) throw DomainError("steps must be >= 1");
  if (map != "linear") parse_map_kind(map);
  for (const auto* r : {&range, &a_range}) {
    if (*r && !(std::isfinite((*r)->first) && std::isfinite((*r)->second) && (*r)->first <= (*r)->second)) {
      throw DomainError("range must be finite with lo <= hi");
    }
  }
  switch (command) {
    case Command::Curve:
      if (grid != 0 && grid < 256) throw DomainError("grid (curve base resolution) must be >= 256");
      break;
    case Command::Atlas:
      if (tau > 2) throw DomainError("tau must be 1 or 2 for atlas");
      if (grid == 1) throw DomainError("grid (atlas alpha points) must be >= 2");
      break;
    case Command::Sweep:
      if (map == "linear") throw DomainError("map: sweep needs a nonlinear map");
      break;
    case Command::Verify:
      if (map == "henon" || map == "lozi") throw DomainError("map: verify scans linear, logistic or cubic");
      break;
    case Command::Figure:
      if (figure < 1 || figure > 6) throw DomainError("figure must be 1..6");
      break;
    default:
      break;
  }
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = std::string(to_string(cfg.command));
  j["alpha"] = cfg.alpha;
  j["a"] = {cfg.a.real(), cfg.a.imag()};
  j["b"] = cfg.b;
  j["tau"] = cfg.tau;
  j["steps"] = cfg.steps;
  j["grid"] = cfg.grid;
  j["map"] = cfg.map;
  j["param"] = cfg.param;
  j["range"] = cfg.range ? nlohmann::json{cfg.range->first, cfg.range->second} : nlohmann::json(nullptr);
  j["a_range"] = cfg.a_range ? nlohmann::json{cfg.a_range->first, cfg.a_range->second} : nlohmann::json(nullptr);
  j["x0"] = cfg.x0;
  j["figure"] = cfg.figure;
  j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  static const std::set<std::string> known{"command", "alpha", "a",  "b",      "tau",    "steps",  "grid",   "map",
                                           "param",   "range", "a_range", "x0", "figure", "format", "out", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw DomainError("config: unknown key '" + key + "'");
  }
  RunConfig cfg;
  auto pair_of = [](const nlohmann::json& v, const char* field) -> std::optional<std::pair<double, double>> {
    if (v.is_null()) return std::nullopt;
    if (!v.is_array() || v.size() != 2) throw DomainError(std::string(field) + ": expected [lo, hi]");
    return std::pair{v[0].get<double>(), v[1].get<double>()};
  };
  try {
    if (j.contains("command")) cfg.command = parse_command(j["command"].get<std::string>());
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("a")) {
      const auto& v = j["a"];
      if (v.is_number()) cfg.a = v.get<double>();
      else if (v.is_string()) cfg.a = parse_complex(v.get<std::string>());
      else if (v.is_array() && v.size() == 2) cfg.a = {v[0].get<double>(), v[1].get<double>()};
      else throw DomainError("a: expected a number, \"re,im\" or [re, im]");
    }
    if (j.contains("b")) cfg.b = j["b"].get<double>();
    if (j.contains("tau")) cfg.tau = j["tau"].get<int>();
    if (j.contains("steps")) cfg.steps = j["steps"].get<std::size_t>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::size_t>();
    if (j.contains("map")) cfg.map = j["map"].get<std::string>();
    if (j.contains("param")) cfg.param = j["param"].get<double>();
    if (j.contains("range")) cfg.range = pair_of(j["range"], "range");
    if (j.contains("a_range")) cfg.a_range = pair_of(j["a_range"], "a_range");
    if (j.contains("x0")) cfg.x0 = j["x0"].get<double>();
    if (j.contains("figure")) cfg.figure = j["figure"].get<int>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
    if (j.contains("format")) {
      const auto f = j["format"].get<std::string>();
      if (f == "csv") cfg.format = OutputFormat::Csv;
      else if (f == "json") cfg.format = OutputFormat::Json;
      else throw DomainError("format: expected csv or json");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace fracdelay
