#pragma once

// Every numeric default used by the command-line suites. docs/cli.md mirrors
// this table; --tol, --points and --seed override the marked entries.

#include <cstddef>
#include <cstdint>

namespace nlg::cli::defaults {

// validate-algebroid
inline constexpr double kAxiomTol = 1e-9;            // --tol
inline constexpr std::size_t kAxiomPoints = 100;     // --points
inline constexpr std::uint64_t kSeed = 20240601;     // --seed
inline constexpr std::size_t kFormSamples = 10;      // random forms for d_A d_A
inline constexpr double kMutationFloor = 1e-3;       // mutated models must exceed this

// check-flat
inline constexpr double kFlatTol = 1e-8;             // --tol
inline constexpr std::size_t kFlatPoints = 50;       // --points
inline constexpr std::size_t kFlatFields = 20;       // seeded fields per built-in model
inline constexpr double kClosedFormTol = 1e-9;       // closed-form flat fields
inline constexpr double kIdentityTol = 1e-10;        // curvature operator identities
inline constexpr std::size_t kIdentityPoints = 100;
inline constexpr std::size_t kIdentityForms = 10;
inline constexpr std::size_t kSourceDim = 2;

// gauge-flow
inline constexpr std::size_t kFlowSteps = 100;
inline constexpr double kFlowTime = 1.0;
inline constexpr double kFlowFlatTol = 1e-7;
inline constexpr double kGroupFlowTol = 1e-8;
inline constexpr std::size_t kFlowPoints = 12;
inline constexpr double kFlowAmplitude = 0.4;
inline constexpr double kAdjointTol = 1e-9;          // F' = Ad F under finite rotations
inline constexpr std::size_t kAdjointGrid = 33;      // per source axis
inline constexpr std::size_t kAdjointFields = 10;

// covariance
inline constexpr double kCovTimes[] = {0.2, 0.1, 0.05};
inline constexpr std::size_t kCovSteps = 40;
inline constexpr std::size_t kCovPoints = 12;
inline constexpr double kCovAmplitude = 0.3;
inline constexpr double kRatioLo = 3.5;
inline constexpr double kRatioHi = 4.5;
inline constexpr double kExactFloor = 1e-12;  // residuals below this count as exact invariance

// weinstein
inline constexpr std::size_t kWeinsteinPaths = 5;
inline constexpr std::size_t kWeinsteinHomotopies = 10;
inline constexpr std::size_t kWeinsteinIntervals = 256;
inline constexpr std::size_t kWeinsteinSteps = 40;
inline constexpr double kDriftTol = 1e-6;
inline constexpr double kConsistencyTol = 1e-8;
inline constexpr double kOrthogonalityTol = 1e-9;
inline constexpr double kSeparationMin = 0.5;
inline constexpr double kAPathTol = 1e-6;          // flatness of an A-path
inline constexpr double kAPathFlowTol = 1e-5;      // after a homotopy flow (stencil floor at N = 256)
inline constexpr double kOrderLo = 3.5;
inline constexpr double kOrderHi = 4.5;
inline constexpr double kAbelianTol = 1e-12;

// psm
inline constexpr double kTwoRouteTol = 1e-12;        // --tol
inline constexpr std::size_t kPsmPoints = 100;       // --points
inline constexpr double kOnShellTol = 1e-10;
inline constexpr double kOnShellFlowTol = 1e-7;
inline constexpr double kJacobiatorTol = 1e-9;

// finite-groupoid
inline constexpr std::size_t kRandomBundles = 20;
inline constexpr std::size_t kCoverPieces = 3;

}  // namespace nlg::cli::defaults
