#pragma once

// Every numeric default used by the library and the CLI lives here.

namespace ektau::defaults {

// Tolerance tiers.
inline constexpr double kTolClosedForm = 1e-8;  // closed-form and jet identities
inline constexpr double kTolJetVsFd = 1e-5;     // jet quantity vs one finite-difference layer
inline constexpr double kTolLayered = 1e-3;     // two stacked numerical layers
inline constexpr double kOdeTol = 1e-4;         // phi equations against d phi by finite differences
inline constexpr double kLemma2Tol = 1e-4;      // Jacobian of (<V1, xi x N>, <V2, xi x N>)

// Space-form detection: |k - 4 tau^2| below this counts as degenerate.
inline constexpr double kDegenerateEps = 1e-12;

// Finite differences.
inline constexpr double kJetOracleStep = 1e-4;  // validating 2-jets
inline constexpr double kFieldStep = 1e-3;      // Richardson base step, parameter units
inline constexpr double kMetricFdStep = 1e-4;   // Christoffel oracle

// Frame thresholds.
inline constexpr double kHorizontalEps = 1e-6;     // |xi - gN| below this: horizontal point
inline constexpr double kFrameCheckCos = 1e-3;     // frame-based checks need |cos theta| above this
inline constexpr double kVerticalSin = 1e-3;       // cot(theta) checks need |sin theta| above this
inline constexpr double kGradThetaEps = 1e-8;      // |grad theta| below this: v undefined
inline constexpr double kSampleExclusion = 2e-2;   // random samples need |cos theta|, |sin theta| above this

// Root finding and continuation.
inline constexpr double kNewtonTol = 1e-13;
inline constexpr int kNewtonMaxIter = 50;
inline constexpr double kHorizontalPointTol = 1e-10;
inline constexpr int kHorizontalGrid = 40;
inline constexpr double kLocusTol = 1e-8;
inline constexpr double kLocusStep = 0.05;
inline constexpr double kLocusMinStep = 1e-7;
inline constexpr int kLocusMaxNodes = 4000;

// Integrators.
inline constexpr double kGeodesicStep = 1e-3;
inline constexpr double kTrajectoryStep = 1e-3;
inline constexpr double kTrajectoryCos = 5e-2;  // trajectories stop this close to horizontal points

// Congruence pipeline.
inline constexpr int kNetV = 8;
inline constexpr int kNetJv = 8;
inline constexpr double kNetVLength = 1.0;
inline constexpr double kNetJvLength = 0.5;  // each way
inline constexpr int kMetricGrid = 12;
inline constexpr double kAlphaTol = 1e-5;
inline constexpr double kMetricAgreeTol = 1e-8;
inline constexpr double kCurvatureAgreeTol = 1e-6;
inline constexpr double kThetaAgreeTol = 1e-4;
inline constexpr double kPhiAgreeTol = 1e-6;
inline constexpr double kPropagationTol = 1e-5;
inline constexpr double kWitnessTol = 1e-8;

// Sampling.
inline constexpr int kResidualSamples = 100;
inline constexpr unsigned long long kSeed = 20100101ULL;

}  // namespace ektau::defaults
