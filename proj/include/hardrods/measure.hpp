#pragma once

#include <cstdint>
#include <vector>

#include "hardrods/types.hpp"

namespace hardrods {

/// Axis-aligned box in phase space: N position intervals and N velocity
/// intervals.
struct PhaseBox {
    std::vector<std::pair<double, double>> position_intervals;
    std::vector<std::pair<double, double>> velocity_intervals;

    double volume() const;
};

/// Monte Carlo comparison of the measure of a target set before and after
/// transport by the flow.
struct InvarianceReport {
    double t = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double bounding_volume = 0.0;
    std::uint64_t count_before = 0;
    std::uint64_t count_after = 0;
    std::uint64_t rejected_bad = 0;  // Bad/degenerate draws, redrawn
    double volume_before = 0.0;
    double stderr_before = 0.0;
    double volume_after = 0.0;
    double stderr_after = 0.0;
    double z_score = 0.0;
};

/// Canonical ensemble parameters: velocities ~ exp(-beta |V|^2), positions
/// uniform on a box intersected with the ordered rod component.
struct EnsembleParams {
    double beta = 1.0;
    std::vector<std::pair<double, double>> position_box;
};

/// |det| of the piecewise-affine flow branch diag(g,g) * (I + t*shear),
/// computed numerically by LU factorization. Unity for every branch.
double jacobian_unit_check(const SortPermutation& g, double t);

/// Estimate the Liouville mass of box before and after transport by time t.
/// Samples are drawn uniformly from a bounding box of the preimage (position
/// intervals inflated by |t| * max velocity magnitude), each Good sample is
/// evolved by the exact flow, and landings in the target are counted.
/// Deterministic in (seed); sample k depends only on (seed, k).
InvarianceReport estimate_pushforward_volume(const RodGeometry& geom,
                                             const PhaseBox& box, double t,
                                             std::uint64_t n_samples,
                                             std::uint64_t seed);

/// Draw n canonical-ensemble states: positions uniform on the box
/// intersected with the ordered component (rejection sampling), velocities
/// i.i.d. Gaussian with variance 1/(2 beta) per component.
std::vector<PhaseState> sample_canonical(const EnsembleParams& params,
                                         const RodGeometry& geom,
                                         std::uint64_t n, std::uint64_t seed);

}  // namespace hardrods
