#pragma once

#include <string>
#include <vector>

#include "ektau/config.hpp"

namespace ektau {

/// Fixed-precision decimal text ("nan" and "inf" spelled out), identical across runs.
std::string fmt(double x);

struct SuiteRun {
  SpaceParams space;
  std::string surface;
  ConvexityReport convexity;
  SuiteResult result;
};

std::string residuals_csv(const std::vector<SuiteRun>& runs);
std::string summary_csv(const std::vector<SuiteRun>& runs);
std::string summary_text(const std::vector<SuiteRun>& runs);

/// Header: u,v,x,y,z,E,F,G,H,K_e,K,g,theta,phi,grad_theta_norm,lambda1,lambda2,horizontal_flag
std::string analyze_csv(const ParametrizedSurface& s, int n);

struct FamilyRun {
  std::string family;
  std::string note;
  std::vector<CongruenceVerdict> verdicts;
};

std::string rigidity_json(const std::string& reference, const SpaceParams& space,
                          const std::vector<Vec2>& points, const std::vector<FamilyRun>& runs);

struct ExampleEntry {
  SpaceParams space;
  SurfaceSpec spec;
  bool built = false;
  std::string error;
  ConvexityReport convexity;
};

std::string examples_json(const std::vector<ExampleEntry>& entries);
std::string examples_text(const std::vector<ExampleEntry>& entries);

void write_file(const std::string& path, const std::string& content);

}  // namespace ektau
