#pragma once

#include <map>
#include <string>
#include <vector>

#include "ektau/equations.hpp"
#include "ektau/families.hpp"
#include "ektau/reconstruct.hpp"

namespace ektau {

struct Grids {
  int samples = defaults::kResidualSamples;  // random residual samples per surface
  int horizontal = defaults::kHorizontalGrid;
  int metric = defaults::kMetricGrid;
  int vertical_points = 6;
  int analyze = 24;
  int convexity = 24;
};

struct NetConfig {
  double step = defaults::kTrajectoryStep;
  double min_cos = defaults::kTrajectoryCos;
  int net_v = defaults::kNetV;
  int net_jv = defaults::kNetJv;
  double v_length = defaults::kNetVLength;
  double jv_length = defaults::kNetJvLength;
};

struct FamilyConfig {
  std::string name;
  std::string kind;  // vertical-translation | fiber-rotation | composed | perturbed
  double c = 0.0;
  double beta = 0.0;
  std::string mode = "radial";  // perturbed: radial | vertical
  double amplitude = 0.0;
  std::vector<double> t;
};

struct RigidityConfig {
  std::string reference;
  int space = 0;  // index into spaces
  std::vector<Vec2> points;
  std::vector<FamilyConfig> families;
};

struct RunConfig {
  std::vector<SpaceParams> spaces;
  std::vector<SurfaceSpec> surfaces;
  Tolerances tolerances;
  Grids grids;
  NetConfig net;
  std::string out_dir = "out";
  unsigned long long seed = defaults::kSeed;
  RigidityConfig rigidity;
};

/// Parses YAML text. Unknown keys, missing required keys, wrong types and non-positive
/// tolerances all throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// NAME=VALUE with NAME one of closed_form, jet_vs_fd, layered, ode, lemma2.
void apply_tolerance_override(Tolerances& tol, const std::string& assignment);
void validate(const RunConfig& cfg);

const SurfaceSpec& find_surface(const RunConfig& cfg, const std::string& name);

SuiteOptions suite_options(const RunConfig& cfg);
CongruenceOptions congruence_options(const RunConfig& cfg);

/// Builds the member surfaces of a configured family around `reference`.
Family build_family(const FamilyConfig& fc, const ParametrizedSurface& reference,
                    const SurfaceSpec& reference_spec);

}  // namespace ektau
