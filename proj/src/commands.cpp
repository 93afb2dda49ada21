#include "fracdelay/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>

#include "fracdelay/bifurcation_atlas.hpp"
#include "fracdelay/boundary_geometry.hpp"
#include "fracdelay/errors.hpp"
#include "fracdelay/nonlinear_maps.hpp"
#include "fracdelay/trajectory_engine.hpp"

#ifndef FRACDELAY_VERSION
#define FRACDELAY_VERSION "dev"
#endif

namespace fracdelay {

namespace {

using nlohmann::json;

EmittedDataset make_dataset(const RunConfig& cfg, std::string name, std::vector<std::string> columns) {
  EmittedDataset ds;
  ds.name = std::move(name);
  ds.columns = std::move(columns);
  ds.metadata["config"] = to_json(cfg);
  ds.metadata["library_version"] = FRACDELAY_VERSION;
  return ds;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

json verdict_json(const TrajectoryVerdict& v) {
  json j;
  j["outcome"] = std::string(to_string(v.outcome));
  j["steps_run"] = v.steps_run;
  j["final_deviation"] = std::isfinite(v.final_deviation) ? json(v.final_deviation) : json(format_double(v.final_deviation));
  if (v.limit_estimate) j["limit_estimate"] = {v.limit_estimate->real(), v.limit_estimate->imag()};
  return j;
}

// ---------------------------------------------------------------------------

EmittedDataset cmd_simulate(const RunConfig& cfg) {
  if (cfg.map == "linear") {
    auto ds = make_dataset(cfg, "simulate", {"t", "re", "im"});
    const auto sys = LinearDelaySystem::with_constant_history(cfg.alpha, cfg.a, cfg.b, cfg.tau, cfg.x0);
    const auto traj = simulate_linear(sys, cfg.steps);
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      ds.add_row({static_cast<std::int64_t>(t), traj.states[t].real(), traj.states[t].imag()});
    }
    DetectOptions opts;
    opts.target = cplx(0.0);
    ds.metadata["diverged"] = traj.diverged;
    ds.metadata["verdict"] = verdict_json(detect_verdict(std::span<const cplx>(traj.states), opts));
    return ds;
  }
  auto ds = make_dataset(cfg, "simulate", {"t", "x"});
  const auto kind = parse_map_kind(cfg.map);
  const auto map = MapModel::from_parameter(kind, cfg.param, cfg.b);
  const auto sys = NonlinearDelaySystem::with_constant_history(map, cfg.b, cfg.tau, cfg.alpha, cfg.x0);
  const auto traj = simulate_nonlinear(sys, cfg.steps);
  for (std::size_t t = 0; t < traj.states.size(); ++t) ds.add_row({static_cast<std::int64_t>(t), traj.states[t]});
  DetectOptions opts;
  opts.tol = kind == MapKind::Henon || kind == MapKind::Lozi ? 1e-5 : 1e-4;
  ds.metadata["diverged"] = traj.diverged;
  ds.metadata["verdict"] = verdict_json(detect_verdict(std::span<const double>(traj.states), opts));
  return ds;
}

EmittedDataset curve_dataset(const RunConfig& cfg, std::string name, double alpha, double b, int tau, std::size_t base) {
  auto ds = make_dataset(cfg, std::move(name), {"t", "re", "im", "d_re", "d_im"});
  const auto curve = sample_curve(alpha, b, tau, base);
  for (const auto& s : curve.samples) ds.add_row({s.t, s.point.real(), s.point.imag(), s.tangent.real(), s.tangent.imag()});
  json cusps = json::array();
  for (double t : find_cusps(curve)) cusps.push_back(t);
  json crossings = json::array();
  for (const auto& x : find_self_intersections(curve)) {
    crossings.push_back({{"t1", x.t1}, {"t2", x.t2}, {"re", x.point.real()}, {"im", x.point.imag()}, {"polished", x.polished}});
  }
  ds.metadata["alpha"] = alpha;
  ds.metadata["b"] = b;
  ds.metadata["tau"] = tau;
  ds.metadata["cusps"] = cusps;
  ds.metadata["self_intersections"] = crossings;
  return ds;
}

EmittedDataset cmd_classify(const RunConfig& cfg) {
  auto ds = make_dataset(cfg, "classify",
                         {"alpha", "b", "tau", "a_re", "a_im", "winding", "classification", "distance", "multiply_covered"});
  const auto v = classify_point(cfg.alpha, cfg.b, cfg.tau, cfg.a);
  ds.add_row({cfg.alpha, cfg.b, static_cast<std::int64_t>(cfg.tau), cfg.a.real(), cfg.a.imag(),
              static_cast<std::int64_t>(v.winding), std::string(to_string(v.classification)), v.distance_to_curve,
              v.multiply_covered});
  return ds;
}

json census_json(int tau) {
  json table = json::array();
  for (const auto& name : region_names(tau)) {
    const auto r = region_census(tau, name);
    table.push_back({{"region", r.name},
                     {"stable", r.expected_stable},
                     {"unstable", r.expected_unstable ? json(*r.expected_unstable) : json(nullptr)}});
  }
  return table;
}

std::vector<EmittedDataset> atlas_datasets(const RunConfig& cfg, int tau, bool split, const std::string& prefix) {
  const auto atlas = build_atlas(tau, cfg.grid ? cfg.grid : 400, cfg.threads);
  json star{{"alpha", atlas.star.alpha}, {"b", atlas.star.b}};
  json diag = json::array();
  for (const auto& d : atlas.diagnostics) {
    diag.push_back({{"alpha_before", d.alpha_before}, {"alpha_after", d.alpha_after}, {"roots_before", d.roots_before},
                    {"roots_after", d.roots_after}});
  }
  auto annotate = [&](EmittedDataset& ds) {
    ds.metadata["tau"] = tau;
    ds.metadata["alpha_star"] = star;
    ds.metadata["topology_changes"] = diag;
    ds.metadata["region_census"] = census_json(tau);
  };

  std::vector<EmittedDataset> out;
  if (!split) {
    auto ds = make_dataset(cfg, prefix + "atlas", {"label", "alpha", "b", "provenance"});
    for (const auto& br : atlas.branches) {
      for (std::size_t i = 0; i < br.alpha_grid.size(); ++i) {
        ds.add_row({"g" + std::to_string(br.label), br.alpha_grid[i], opt_cell(br.b_values[i]), std::string(to_string(br.provenance))});
      }
    }
    annotate(ds);
    out.push_back(std::move(ds));
    return out;
  }
  for (const auto& br : atlas.branches) {
    auto ds = make_dataset(cfg, prefix + "g" + std::to_string(br.label), {"alpha", "b"});
    for (std::size_t i = 0; i < br.alpha_grid.size(); ++i) ds.add_row({br.alpha_grid[i], opt_cell(br.b_values[i])});
    ds.metadata["label"] = "g" + std::to_string(br.label);
    ds.metadata["provenance"] = to_string(br.provenance);
    annotate(ds);
    out.push_back(std::move(ds));
  }
  auto marker = make_dataset(cfg, prefix + "alpha_star", {"alpha", "b"});
  marker.add_row({atlas.star.alpha, atlas.star.b});
  annotate(marker);
  out.push_back(std::move(marker));
  return out;
}

EmittedDataset regions_dataset(const RunConfig& cfg, const std::string& name, double alpha, int tau) {
  auto ds = make_dataset(cfg, name, {"curve", "t", "b", "a"});
  const auto curves = region_curves(alpha, tau);
  const auto [lo, hi] = cfg.range.value_or(std::pair{-1.5, 1.5});
  const std::size_t n = cfg.grid ? cfg.grid : 201;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    ds.add_row({"a1", std::monostate{}, b, curves.line_a1(b)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double b = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    ds.add_row({"a2", std::monostate{}, b, curves.line_a2(b)});
  }
  for (const auto& [t, b, a] : curves.sample_parametric(4 * n)) {
    if (b >= lo && b <= hi) ds.add_row({"para", t, b, a});
  }
  ds.metadata["alpha"] = alpha;
  ds.metadata["tau"] = tau;
  if (const auto iv = stable_interval(alpha, tau, cfg.b)) {
    ds.metadata["stable_interval"] = {{"b", cfg.b}, {"a_min", iv->first}, {"a_max", iv->second}};
  } else {
    ds.metadata["stable_interval"] = {{"b", cfg.b}, {"a_min", nullptr}, {"a_max", nullptr}};
  }
  return ds;
}

std::pair<double, double> default_sweep_range(MapKind kind) {
  switch (kind) {
    case MapKind::Henon: return {-0.3, 0.4};
    case MapKind::Lozi: return {-1.0, 0.8};
    default: return {-1.0, 2.0};
  }
}

EmittedDataset sweep_dataset(const RunConfig& cfg, const std::string& name, MapKind kind, double alpha, int tau, double b) {
  auto ds = make_dataset(cfg, name, {"param", "x_star", "a_lin", "predicted", "simulated", "agree", "excluded"});
  const auto [lo, hi] = cfg.range.value_or(default_sweep_range(kind));
  SweepOptions opts;
  opts.steps = cfg.steps;
  opts.threads = cfg.threads;
  const auto res = predict_and_verify(kind, alpha, tau, b, lo, hi, cfg.grid ? cfg.grid : 71, opts);
  for (const auto& r : res.rows) {
    ds.add_row({r.param, r.x_star, opt_cell(r.a_lin), r.predicted, std::string(to_string(r.simulated)), r.agree, r.excluded});
  }
  ds.metadata["map"] = to_string(kind);
  ds.metadata["alpha"] = alpha;
  ds.metadata["tau"] = tau;
  ds.metadata["b"] = b;
  ds.metadata["stable_interval"] =
      res.interval ? json{{"a_min", res.interval->first}, {"a_max", res.interval->second}} : json(nullptr);
  ds.metadata["scored"] = res.scored();
  ds.metadata["agreed"] = res.agreed();
  return ds;
}

EmittedDataset verify_dataset(const RunConfig& cfg, const std::string& name, ScanModel model, double alpha, int tau) {
  auto ds = make_dataset(cfg, name, {"b", "a", "predicted", "simulated", "agree"});
  const auto [blo, bhi] = cfg.range.value_or(std::pair{-1.5, 1.5});
  const auto [alo, ahi] = cfg.a_range.value_or(std::pair{-3.0, 2.0});
  const std::size_t n = cfg.grid ? cfg.grid : 21;
  GridScanRequest req;
  req.plane = ScanPlane::BA;
  req.model = model;
  req.x = {blo, bhi, n};
  req.y = {alo, ahi, n};
  req.alpha = alpha;
  req.tau = tau;
  req.steps = cfg.steps;
  const auto scan = grid_scan(req, cfg.threads);
  std::size_t scored = 0, agreed = 0;
  for (std::size_t ix = 0; ix < n; ++ix) {
    const double b = req.x.at(ix);
    const auto curve = sample_curve(alpha, b, tau);
    for (std::size_t iy = 0; iy < n; ++iy) {
      const double a = req.y.at(iy);
      const bool predicted = classify_point(curve, cplx(a, 0.0)).classification == Classification::Stable;
      const auto outcome = scan.at(ix, iy).outcome;
      const bool simulated_stable = model == ScanModel::Linear
                                        ? outcome == Outcome::ConvergedToFixedPoint || outcome == Outcome::Bounded
                                        : outcome == Outcome::ConvergedToFixedPoint;
      ++scored;
      agreed += predicted == simulated_stable;
      ds.add_row({b, a, predicted, std::string(to_string(outcome)), predicted == simulated_stable});
    }
  }
  ds.metadata["model"] = to_string(model);
  ds.metadata["alpha"] = alpha;
  ds.metadata["tau"] = tau;
  ds.metadata["cells"] = scored;
  ds.metadata["agreed"] = agreed;
  return ds;
}

ScanModel scan_model(const std::string& map) {
  if (map == "linear") return ScanModel::Linear;
  if (map == "logistic") return ScanModel::Logistic;
  if (map == "cubic") return ScanModel::Cubic;
  throw DomainError("map: verify scans linear, logistic or cubic");
}

struct Probe {
  const char* region;
  double alpha;
  double b;
};

constexpr Probe kProbes1[] = {{"A", 0.5, 1.1},   {"B", 0.5, 0.82},  {"C", 0.5, 0.0}, {"D1", 0.2, -0.98},
                              {"D2", 0.8, -1.1}, {"E", 0.5, -1.2}, {"F", 0.5, -1.4}};
constexpr Probe kProbes2[] = {{"A", 0.5, 1.1},    {"B", 0.1, 0.8},    {"C", 0.5, 0.7},  {"D", 0.5, 0.48},
                              {"E", 0.5, 0.0},    {"F1", 0.1, -0.49}, {"F2", 0.5, -0.55}, {"G", 0.5, -0.68},
                              {"H", 0.5, -0.9},   {"I", 0.5, -1.2}};

std::vector<EmittedDataset> curve_figure(const RunConfig& cfg, int tau, const std::string& prefix) {
  std::vector<EmittedDataset> out;
  auto summary = make_dataset(cfg, prefix + "census",
                              {"region", "alpha", "b", "stable", "unstable", "grid_stable", "grid_unstable",
                               "expected_stable", "expected_unstable"});
  auto emit = [&](const Probe& p) {
    auto ds = curve_dataset(cfg, prefix + p.region, p.alpha, p.b, tau, cfg.grid ? cfg.grid : 1024);
    const auto faces = face_census(sample_curve(p.alpha, p.b, tau, 4096));
    const auto grid = winding_census(sample_curve(p.alpha, p.b, tau, 65536), 400);
    json comps = json::array();
    for (const auto& f : faces.faces) comps.push_back({{"winding", f.winding}, {"area", f.area}});
    ds.metadata["region"] = p.region;
    ds.metadata["faces"] = comps;
    const auto expected = region_census(tau, p.region);
    auto count = [](int v) { return Cell(static_cast<std::int64_t>(v)); };
    summary.add_row({p.region, p.alpha, p.b, count(faces.stable()), count(faces.unstable()), count(grid.stable()),
                     count(grid.unstable()), count(expected.expected_stable),
                     expected.expected_unstable ? count(*expected.expected_unstable) : Cell(std::monostate{})});
    out.push_back(std::move(ds));
  };
  if (tau == 1)
    for (const auto& p : kProbes1) emit(p);
  else
    for (const auto& p : kProbes2) emit(p);
  out.push_back(std::move(summary));
  return out;
}

}  // namespace

std::vector<EmittedDataset> reproduce_figure(int figure, const RunConfig& cfg) {
  switch (figure) {
    case 1: return atlas_datasets(cfg, 1, true, "fig1_");
    case 2: return curve_figure(cfg, 1, "fig2_");
    case 3: return atlas_datasets(cfg, 2, true, "fig3_");
    case 4: return curve_figure(cfg, 2, "fig4_");
    case 5: {
      std::vector<EmittedDataset> out;
      out.push_back(regions_dataset(cfg, "fig5_regions", 0.5, 1));
      out.push_back(verify_dataset(cfg, "fig5_logistic_scan", ScanModel::Logistic, 0.5, 1));
      return out;
    }
    case 6: {
      RunConfig c = cfg;
      std::vector<EmittedDataset> out;
      out.push_back(sweep_dataset(c, "fig6_henon", MapKind::Henon, 0.8, 1, 0.3));
      out.push_back(sweep_dataset(c, "fig6_lozi", MapKind::Lozi, 0.8, 1, 0.3));
      return out;
    }
    default: throw DomainError("figure must be 1..6");
  }
}

std::vector<EmittedDataset> run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case Command::Simulate: return {cmd_simulate(cfg)};
    case Command::Curve: return {curve_dataset(cfg, "curve", cfg.alpha, cfg.b, cfg.tau, cfg.grid ? cfg.grid : 1024)};
    case Command::Classify: return {cmd_classify(cfg)};
    case Command::Atlas: return atlas_datasets(cfg, cfg.tau, false, "");
    case Command::Regions: return {regions_dataset(cfg, "regions", cfg.alpha, cfg.tau)};
    case Command::Sweep: return {sweep_dataset(cfg, "sweep", parse_map_kind(cfg.map), cfg.alpha, cfg.tau, cfg.b)};
    case Command::Verify: return {verify_dataset(cfg, "verify", scan_model(cfg.map), cfg.alpha, cfg.tau)};
    case Command::Figure: return reproduce_figure(cfg.figure, cfg);
  }
  throw DomainError("unknown command");
}

void write_datasets(const std::vector<EmittedDataset>& sets, const RunConfig& cfg, std::ostream& console) {
  const bool csv = cfg.format == OutputFormat::Csv;
  auto write = [&](std::ostream& os, const EmittedDataset& ds) {
    if (csv) write_csv(os, ds);
    else write_json(os, ds);
  };
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ComputationError("cannot open '" + p.string() + "' for writing");
    return f;
  };

  if (sets.size() == 1) {
    if (cfg.out.empty()) {
      write(console, sets.front());
    } else {
      auto f = open(cfg.out);
      write(f, sets.front());
    }
    return;
  }
  if (cfg.out.empty()) {
    for (const auto& ds : sets) {
      console << "# " << ds.name << '\n';
      write(console, ds);
    }
    return;
  }
  std::filesystem::create_directories(cfg.out);
  for (const auto& ds : sets) {
    auto f = open(std::filesystem::path(cfg.out) / (ds.name + (csv ? ".csv" : ".json")));
    write(f, ds);
  }
}

}  // namespace fracdelay
