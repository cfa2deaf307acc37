#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hardrods/types.hpp"

namespace hardrods {

// Tolerances fixed project-wide.
inline constexpr double kGapTolerance = 1e-9;         // ordering / overlap checks
inline constexpr double kTimeCoincidenceRel = 1e-9;   // schedule-time equality

/// True when |t1 - t2| <= 1e-9 * max(1, |t1|, |t2|).
bool times_coincide(double t1, double t2);

/// Subtract the per-index offsets 2r*i: maps the ordered rod component
/// (gaps >= 2r) onto the fundamental table (gaps >= 0). Velocities pass
/// through unchanged. Throws OrderViolation if a gap is below 2r beyond
/// tolerance.
PhaseState to_fundamental(const RodGeometry& geom, const PhaseState& state);

/// Inverse of to_fundamental: add the offsets back.
PhaseState from_fundamental(const RodGeometry& geom, const PhaseState& state);

/// Stable sort with its permutation. For distinct entries the permutation is
/// the unique Weyl element carrying y into the closed fundamental chamber;
/// ties are broken by original index.
std::pair<std::vector<double>, SortPermutation> sort_with_permutation(
    const std::vector<double>& y);

/// Sorting permutation of y realizing the pre-collisional (left-limit)
/// ordering: entries equal within a data-scaled tolerance are ordered by
/// descending velocity. Used for velocity evaluation at exact event times.
SortPermutation left_limit_permutation(const std::vector<double>& y,
                                       const std::vector<double>& v);

/// Exact positions at time t: X(t) = from_fundamental(sorted(Y0 + t V0)).
/// Continuous in t; at schedule times this realizes the removable-
/// discontinuity repair. With strict=true the datum is classified first and
/// BadDatumError is thrown on a bad one.
std::vector<double> evaluate_position(const RodGeometry& geom,
                                      const PhaseState& z0, double t,
                                      bool strict = false);

/// Exact velocities at time t: the sorting permutation of Y0 + t V0 applied
/// to V0. At an event time returns the left limit (pre-collisional order).
std::vector<double> evaluate_velocity(const RodGeometry& geom,
                                      const PhaseState& z0, double t,
                                      bool strict = false);

/// Both halves of the flow map at time t, in rod coordinates.
PhaseState evaluate_state(const RodGeometry& geom, const PhaseState& z0,
                          double t, bool strict = false);

/// All finite meeting times of the free-flight lines in fundamental
/// coordinates, over pairs i<j with distinct velocities, sorted ascending
/// (negative times included). Throws DegenerateLine on a pair with equal
/// positions and equal velocities.
CollisionSchedule collision_schedule(const RodGeometry& geom,
                                     const PhaseState& z0);

/// Good iff no instant exists at which three or more fundamental coordinates
/// of the free-flight line coincide pairwise. Bad returns the witness time
/// and the coincident index sets.
DatumClass classify_datum(const RodGeometry& geom, const PhaseState& z0);

/// Relabel a state from an arbitrary component of the hard-rod table into
/// the ordered component, returning the relabelled state and the sorting
/// permutation. Throws OverlapViolation if two rods overlap beyond tolerance.
std::pair<PhaseState, SortPermutation> canonicalize(const RodGeometry& geom,
                                                    const PhaseState& state);

/// Total momentum (sum of entries) and kinetic energy (sum of squares).
std::pair<double, double> conserved_quantities(const std::vector<double>& v);

/// Seeded random Good datum in the ordered component: ascending positions
/// with gaps >= 2r and uniform velocities, redrawn until classification
/// passes. Deterministic in (geom, seed).
PhaseState random_good_datum(const RodGeometry& geom, std::uint64_t seed,
                             double position_span = 10.0,
                             double velocity_span = 2.0);

}  // namespace hardrods
