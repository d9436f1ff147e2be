#include "mzkit/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mzkit/approx.hpp"
#include "mzkit/certifier.hpp"
#include "mzkit/circle_family.hpp"
#include "mzkit/error.hpp"
#include "mzkit/io.hpp"

#ifndef MZKIT_VERSION
#define MZKIT_VERSION "0.0.0"
#endif

namespace mzkit::cli {

namespace {

using io::json;

const std::vector<double> kDefaultRGrid = {kTwoPi, 2 * kTwoPi, 4 * kTwoPi, 8 * kTwoPi};

struct Emitter {
  std::ostream& out;

  void emit(const std::optional<std::string>& path, const std::string& text) const {
    if (path && !path->empty())
      io::write_text(*path, text);
    else
      out << text;
  }
};

json header(const std::string& command, json config, const std::map<std::string, std::string>& inputs) {
  json hashes = json::object();
  for (const auto& [role, path] : inputs) hashes[role] = {{"path", path}, {"sha256", io::sha256_hex(io::read_text(path))}};
  config["command"] = command;
  return {{"tool", {{"name", "mzkit"}, {"version", version()}}}, {"config", std::move(config)}, {"inputs", hashes}};
}

TriangularFamily make_family(const std::string& kind, const std::vector<int>& n_list, double rotation,
                             std::optional<std::uint64_t> seed, double epsilon, const std::vector<double>& angles,
                             const std::string& name) {
  TriangularFamily family;
  if (kind == "roots") {
    family = generate_roots_of_unity(n_list, [](int n) { return static_cast<std::size_t>(n) + 1; }, rotation, "roots");
  } else if (kind == "doubled") {
    family = generate_roots_of_unity(n_list, [](int n) { return 2 * (static_cast<std::size_t>(n) + 1); }, rotation,
                                     "doubled");
  } else if (kind == "excess" || kind == "excess-drop") {
    family = generate_excess_family(n_list, kind == "excess-drop");
    if (rotation != 0.0) family = rotate(family, rotation);
  } else if (kind == "perturbed") {
    if (!seed) throw InvalidArgument("--seed is required for --kind perturbed");
    const auto doubled = generate_roots_of_unity(
        n_list, [](int n) { return 2 * (static_cast<std::size_t>(n) + 1); }, rotation, "perturbed");
    family = perturb_angular(doubled, epsilon, *seed);
  } else if (kind == "custom") {
    if (angles.empty()) throw InvalidArgument("--angles is required for --kind custom");
    family.name = "custom";
    std::vector<double> sorted;
    for (double a : angles) sorted.push_back(wrap_angle(a + rotation));
    std::sort(sorted.begin(), sorted.end());
    for (int n : n_list) family.generations.push_back(Generation{n, sorted});
    family.validate(true);
  } else {
    throw InvalidArgument("unknown family kind '" + kind + "'");
  }
  if (!name.empty()) family.name = name;
  return family;
}

json inspect_json(const TriangularFamily& family, const std::vector<double>& R_grid, int tail_start) {
  json gens = json::array();
  bool separated = true;
  for (const auto& g : family.generations) {
    json row = {{"n", g.n}, {"m", g.m()}, {"arc_count_sup", io::number(arc_count_sup(g))}};
    if (g.m() >= 2) {
      row["min_chordal_gap"] = io::number(min_chordal_gap(g));
    } else {
      row["min_chordal_gap"] = nullptr;
      separated = false;
    }
    gens.push_back(row);
  }
  json out = {{"family", family.name}, {"generations", gens}};
  out["separation"] = separated ? io::number(separation_constant(family)) : json(nullptr);
  out["density"] = io::to_json(lower_density(family, R_grid, tail_start));
  return out;
}

// Ratios of the ones polynomial on the excess family minus the point 1.
json counterexample_json(const std::vector<int>& n_list, int oversampling) {
  const auto drop = generate_excess_family(n_list, true);
  const auto full = generate_excess_family(n_list, false);
  json rows = json::array();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const Generation& g = drop.generations[i];
    const Polynomial ones = ones_polynomial(g.n);
    const double inf_ratio = lp_norm(ones, kInf, oversampling).value / discrete_norm(ones, g, kInf);
    rows.push_back({{"n", g.n},
                    {"m", g.m()},
                    {"p2_ratio", io::number(mz_ratio(ones, g, 2.0, oversampling))},
                    {"p2_expected", io::number(kTwoPi * (g.n + 1))},
                    {"p1_ratio", io::number(mz_ratio(ones, g, 1.0, oversampling))},
                    {"pinf_ratio", io::number(inf_ratio)},
                    {"kappa_drop", io::number(frame_bounds_p2(g).kappa)},
                    {"kappa_full", io::number(frame_bounds_p2(full.generations[i]).kappa)}});
  }
  CertifyOptions opts;
  opts.random_budget = 0;
  opts.oversampling = oversampling;
  const auto drop_report = certify(drop, 2.0, opts);
  const auto full_report = certify(full, 2.0, opts);
  return {{"rows", rows},
          {"excess_drop", {{"verdict", io::verdict_label(drop_report)}, {"reasons", drop_report.reasons},
                           {"witness", drop_report.refuting_witness ? json(drop_report.refuting_witness->label) : json(nullptr)}}},
          {"excess_full", {{"verdict", io::verdict_label(full_report)}, {"reasons", full_report.reasons}}}};
}

std::vector<ConvergenceRow> fit_rows(const std::vector<Sample>& samples, const std::vector<int>& degrees,
                                     const std::optional<TriangularFamily>& family, int max_iter) {
  std::vector<ConvergenceRow> rows;
  for (int n : degrees) {
    std::vector<Sample> nodes;
    if (family) {
      const Generation* g = family->find(2 * n);
      if (!g) throw InvalidArgument("family lacks generation 2n=" + std::to_string(2 * n));
      for (double t : g->angles) {
        const auto it = std::find_if(samples.begin(), samples.end(), [&](const Sample& s) {
          const double d = std::abs(wrap_angle(s.angle) - t);
          return std::min(d, kTwoPi - d) <= 1e-9;
        });
        if (it == samples.end())
          throw InvalidArgument("samples have no value at family angle " + io::format_double(t) + " (n=" +
                                std::to_string(g->n) + ")");
        nodes.push_back(*it);
      }
    } else {
      nodes = samples;
    }
    const FitResult fit = chebyshev_fit(nodes, n, max_iter);
    double grid = 0.0;
    for (const auto& s : samples) grid = std::max(grid, std::abs(fit.trig(s.angle) - s.value));
    grid = std::max(grid, fit.discrete_error);
    rows.push_back({n, fit.discrete_error, grid, fit.iterations});
  }
  return rows;
}

}  // namespace

const char* version() { return MZKIT_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mzkit: sampling families on the unit circle and Marcinkiewicz-Zygmund certification", "mzkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MZKIT_VERSION);

  // generate
  auto* gen = app.add_subcommand("generate", "write a family JSON file");
  std::string kind;
  std::vector<int> n_list;
  std::optional<std::uint64_t> seed;
  double epsilon = 0.05;
  double rotation = 0.0;
  std::vector<double> angles;
  std::string name;
  std::optional<std::string> out_path;
  gen->add_option("--kind", kind, "roots | doubled | excess | excess-drop | perturbed | custom")
      ->required()
      ->check(CLI::IsMember({"roots", "doubled", "excess", "excess-drop", "perturbed", "custom"}));
  gen->add_option("--n-list", n_list, "comma-separated generation indices")->delimiter(',')->required();
  gen->add_option("--seed", seed, "RNG seed (required for perturbed)");
  gen->add_option("--epsilon", epsilon, "perturbation size for perturbed")->capture_default_str();
  gen->add_option("--rotation", rotation, "rotation in radians")->capture_default_str();
  gen->add_option("--angles", angles, "angles for custom")->delimiter(',');
  gen->add_option("--name", name, "family name");
  gen->add_option("--out", out_path, "output path (default stdout)");

  // inspect
  auto* ins = app.add_subcommand("inspect", "separation, arc counts and lower density");
  std::string family_path;
  std::vector<double> R_grid;
  std::optional<int> tail_start;
  ins->add_option("--family", family_path, "family JSON")->required()->check(CLI::ExistingFile);
  ins->add_option("--R-grid", R_grid, "comma-separated window scales")->delimiter(',');
  ins->add_option("--tail-start", tail_start, "first generation of the tail minimum");
  ins->add_option("--out", out_path, "report path (default stdout)");

  // certify
  auto* cer = app.add_subcommand("certify", "certify or refute the M-Z property");
  std::string p_text = "2";
  double kappa_max = Thresholds{}.kappa_max;
  double density_margin = Thresholds{}.density_margin;
  int budget = 32;
  int oversampling = kDefaultOversampling;
  std::optional<std::string> csv_path;
  cer->add_option("--family", family_path, "family JSON")->required()->check(CLI::ExistingFile);
  cer->add_option("--p", p_text, "1 | 2 | inf")->capture_default_str()->check(CLI::IsMember({"1", "2", "inf"}));
  cer->add_option("--kappa-max", kappa_max, "largest acceptable frame condition number")->capture_default_str();
  cer->add_option("--density-margin", density_margin, "margin around 1/(2pi)")->capture_default_str();
  cer->add_option("--R-grid", R_grid, "comma-separated window scales")->delimiter(',');
  cer->add_option("--tail-start", tail_start, "first generation of the tail minimum");
  cer->add_option("--seed", seed, "RNG seed for random witnesses (required unless --budget 0)");
  cer->add_option("--budget", budget, "random witness polynomials per generation")->capture_default_str();
  cer->add_option("--oversampling", oversampling, "quadrature oversampling")->capture_default_str();
  cer->add_option("--csv", csv_path, "per-generation CSV export");
  cer->add_option("--out", out_path, "report path (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "discrete minimax trigonometric fits");
  std::string samples_path;
  std::optional<std::string> fit_family;
  int max_iter = kDefaultLawsonIterations;
  fit->add_option("--samples", samples_path, "CSV rows angle,re,im")->required()->check(CLI::ExistingFile);
  fit->add_option("--n-list", n_list, "comma-separated degrees")->delimiter(',')->required();
  fit->add_option("--family", fit_family, "fit on generation 2n of this family; grid error over all samples");
  fit->add_option("--max-iter", max_iter, "Lawson iteration cap")->capture_default_str();
  fit->add_option("--out", out_path, "CSV path (default stdout)");

  // demo
  auto* demo = app.add_subcommand("demo", "excess family counterexample table");
  std::vector<int> demo_n = {8, 16, 32, 64};
  demo->add_option("--n-list", demo_n, "comma-separated generation indices")->capture_default_str()->delimiter(',');
  demo->add_option("--oversampling", oversampling, "quadrature oversampling")->capture_default_str();
  demo->add_option("--out", out_path, "report path (default stdout)");

  std::vector<std::string> argv_store;
  argv_store.push_back("mzkit");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  const Emitter emitter{out};
  try {
    if (gen->parsed()) {
      const auto family = make_family(kind, n_list, rotation, seed, epsilon, angles, name);
      family.validate(true);
      emitter.emit(out_path, io::dump(io::to_json(family)));
      return kOk;
    }

    if (ins->parsed()) {
      const auto family = io::read_family(family_path);
      const auto grid = R_grid.empty() ? kDefaultRGrid : R_grid;
      const int tail = tail_start.value_or(family.generations.empty() ? 1 : family.generations.front().n);
      json config = {{"R_grid", grid}, {"tail_start", tail}};
      json report = header("inspect", config, {{"family", family_path}});
      report.update(inspect_json(family, grid, tail));
      emitter.emit(out_path, io::dump(report));
      return kOk;
    }

    if (cer->parsed()) {
      if (budget > 0 && !seed) throw InvalidArgument("--seed is required when --budget > 0");
      const auto family = io::read_family(family_path);
      CertifyOptions opts;
      opts.thresholds = {kappa_max, density_margin};
      opts.R_grid = R_grid.empty() ? kDefaultRGrid : R_grid;
      opts.tail_start = tail_start;
      opts.random_budget = budget;
      opts.seed = seed.value_or(0);
      opts.oversampling = oversampling;
      const double p = io::parse_p(p_text);
      const auto result = certify(family, p, opts);

      json config = {{"p", io::p_to_json(p)},
                     {"kappa_max", kappa_max},
                     {"density_margin", density_margin},
                     {"R_grid", opts.R_grid},
                     {"tail_start", tail_start ? json(*tail_start) : json(nullptr)},
                     {"seed", seed ? json(*seed) : json(nullptr)},
                     {"budget", budget},
                     {"oversampling", oversampling}};
      json report = header("certify", config, {{"family", family_path}});
      report.update(io::to_json(result));
      emitter.emit(out_path, io::dump(report));
      if (csv_path) io::write_text(*csv_path, io::report_csv(result));
      switch (result.verdict) {
        case Verdict::certified: return kOk;
        case Verdict::refuted: return kRefuted;
        case Verdict::inconclusive: return kInconclusive;
      }
      return kInconclusive;
    }

    if (fit->parsed()) {
      std::ifstream in(samples_path);
      if (!in) throw Error("cannot open '" + samples_path + "'");
      std::vector<Sample> samples;
      try {
        samples = io::parse_samples_csv(in);
      } catch (const ParseError& e) {
        throw ParseError(samples_path + ":" + e.location(), std::string(e.what()).substr(e.location().size() + 2));
      }
      std::optional<TriangularFamily> family;
      if (fit_family) family = io::read_family(*fit_family);
      emitter.emit(out_path, io::fit_csv(fit_rows(samples, n_list, family, max_iter)));
      return kOk;
    }

    if (demo->parsed()) {
      json config = {{"n_list", demo_n}, {"oversampling", oversampling}};
      json report = header("demo", config, {});
      report.update(counterexample_json(demo_n, oversampling));
      emitter.emit(out_path, io::dump(report));
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace mzkit::cli
