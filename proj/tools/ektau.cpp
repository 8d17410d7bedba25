// ektau: residual suites, field dumps and rigidity tests for surfaces in E(k, tau).

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ektau/config.hpp"
#include "ektau/report.hpp"

using namespace ektau;

namespace {

struct Common {
  std::string config;
  std::string out;
  unsigned long long seed = 0;
  bool seed_set = false;
  std::vector<std::string> overrides;
};

RunConfig load(const Common& c) {
  RunConfig cfg = load_config(c.config);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.seed_set) cfg.seed = c.seed;
  for (const std::string& o : c.overrides) apply_tolerance_override(cfg.tolerances, o);
  validate(cfg);
  return cfg;
}

std::string join(const std::string& dir, const std::string& file) { return dir + "/" + file; }

int cmd_verify(const RunConfig& cfg) {
  std::vector<SuiteRun> runs;
  std::vector<std::string> failures;
  const SuiteOptions base = suite_options(cfg);
  for (const SpaceParams& sp : cfg.spaces) {
    for (const SurfaceSpec& spec : cfg.surfaces) {
      SuiteRun run;
      run.space = sp;
      run.surface = spec.name;
      try {
        const ParametrizedSurface s = build_surface(spec, sp);
        run.convexity = convexity_report(s, cfg.grids.convexity);
        SuiteOptions opt = base;
        opt.expect_two_horizontal =
            spec.family == "coordinate-sphere" && run.convexity.convex && !sp.degenerate();
        run.result = run_suite(s, opt);
      } catch (const Error& e) {
        run.result.surface = spec.name;
        run.result.pass = false;
        run.result.notes.push_back(std::string("not evaluated: ") + e.what());
        failures.push_back("E(" + fmt(sp.k) + ", " + fmt(sp.tau) + ") " + spec.name + ": " + e.what());
      }
      for (const ResidualSummary& s : run.result.summary)
        if (s.gating && !s.pass)
          failures.push_back("E(" + fmt(sp.k) + ", " + fmt(sp.tau) + ") " + spec.name + ": " + s.id +
                             " max_rel " + fmt(s.max_rel) + " > " + fmt(s.tolerance));
      runs.push_back(std::move(run));
    }
  }
  write_file(join(cfg.out_dir, "verify_residuals.csv"), residuals_csv(runs));
  write_file(join(cfg.out_dir, "verify_summary.csv"), summary_csv(runs));
  const std::string text = summary_text(runs);
  write_file(join(cfg.out_dir, "verify_summary.txt"), text);
  std::cout << text;
  const std::size_t shown = std::min<std::size_t>(failures.size(), 25);
  for (std::size_t i = 0; i < shown; ++i) std::cerr << "failed: " << failures[i] << '\n';
  if (failures.size() > shown) std::cerr << "... and " << failures.size() - shown << " more\n";
  return failures.empty() ? 0 : 1;
}

int cmd_analyze(const RunConfig& cfg, std::string surface, int space, int grid) {
  if (cfg.surfaces.empty()) throw ConfigError("no surfaces configured");
  if (surface.empty()) surface = cfg.surfaces.front().name;
  if (space < 0 || space >= static_cast<int>(cfg.spaces.size())) throw ConfigError("--space out of range");
  const SurfaceSpec& spec = find_surface(cfg, surface);
  const ParametrizedSurface s = build_surface(spec, cfg.spaces[space]);
  const std::string path = join(cfg.out_dir, "analyze_" + surface + ".csv");
  write_file(path, analyze_csv(s, grid > 0 ? grid : cfg.grids.analyze));
  std::cout << "wrote " << path << '\n';
  return 0;
}

int cmd_rigidity(const RunConfig& cfg, std::string reference, int space) {
  const RigidityConfig& rc = cfg.rigidity;
  if (reference.empty()) reference = rc.reference;
  if (reference.empty()) throw ConfigError("rigidity: no reference surface");
  if (space < 0) space = rc.space;
  if (space >= static_cast<int>(cfg.spaces.size())) throw ConfigError("--space out of range");
  if (rc.families.empty()) throw ConfigError("rigidity: no families");
  const SpaceParams sp = cfg.spaces[space];
  const SurfaceSpec& spec = find_surface(cfg, reference);
  const ParametrizedSurface ref = build_surface(spec, sp);
  const CongruenceOptions opt = congruence_options(cfg);

  std::vector<FamilyRun> runs;
  bool all = true;
  for (const FamilyConfig& fc : rc.families) {
    const Family fam = build_family(fc, ref, spec);
    FamilyRun run{fam.name, fam.note, congruence_test(ref, fam.members, rc.points, opt)};
    for (const CongruenceVerdict& v : run.verdicts) {
      std::cout << v.member << ": " << to_string(v.verdict);
      if (v.verdict == Verdict::Congruent) {
        std::cout << "  alpha discrepancy " << fmt(v.alpha_discrepancy) << "  coverage "
                  << fmt(v.coverage) << "  witness " << (v.witness.found ? v.witness.description : "none");
      } else {
        std::cout << " at " << v.failed_stage << " (" << v.message << ")";
        all = false;
      }
      std::cout << '\n';
    }
    runs.push_back(std::move(run));
  }
  const std::string path = join(cfg.out_dir, "rigidity.json");
  write_file(path, rigidity_json(reference, sp, rc.points, runs));
  std::cout << "wrote " << path << '\n';
  return all ? 0 : 1;
}

int cmd_examples(const RunConfig& cfg) {
  std::vector<ExampleEntry> entries;
  for (const SpaceParams& sp : cfg.spaces)
    for (const SurfaceSpec& spec : cfg.surfaces) {
      ExampleEntry e{sp, spec, false, "", {}};
      try {
        e.convexity = convexity_report(build_surface(spec, sp), cfg.grids.convexity);
        e.built = true;
      } catch (const Error& err) {
        e.error = err.what();
      }
      entries.push_back(std::move(e));
    }
  write_file(join(cfg.out_dir, "examples.json"), examples_json(entries));
  std::cout << examples_text(entries);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ektau: surfaces in the homogeneous spaces E(k, tau)"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", c.out, "output directory (overrides the config)");
  app.add_option_function<unsigned long long>(
      "--seed", [&](const unsigned long long& s) { c.seed = s; c.seed_set = true; }, "random seed");
  app.add_option("--tolerance-tier", c.overrides, "tier override NAME=VALUE (repeatable)");

  auto* verify = app.add_subcommand("verify", "run the residual suites");
  std::string surface, reference;
  int space = 0, rig_space = -1, grid = 0;
  auto* analyze_cmd = app.add_subcommand("analyze", "dump pointwise fields as CSV");
  analyze_cmd->add_option("--surface", surface, "surface name (default: first)");
  analyze_cmd->add_option("--space", space, "index into spaces");
  analyze_cmd->add_option("--grid", grid, "samples per parameter direction");
  auto* rigidity = app.add_subcommand("rigidity", "congruence test of families against a reference");
  rigidity->add_option("--reference", reference, "reference surface name");
  rigidity->add_option("--space", rig_space, "index into spaces");
  auto* examples = app.add_subcommand("examples", "list example families with convexity reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const RunConfig cfg = load(c);
    if (verify->parsed()) return cmd_verify(cfg);
    if (analyze_cmd->parsed()) return cmd_analyze(cfg, surface, space, grid);
    if (rigidity->parsed()) return cmd_rigidity(cfg, reference, rig_space);
    if (examples->parsed()) return cmd_examples(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
