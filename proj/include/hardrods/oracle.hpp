#pragma once

#include <optional>
#include <vector>

#include "hardrods/types.hpp"

namespace hardrods {

/// One contact between adjacent rods i and i+1 (0-based i).
struct CollisionEvent {
    double time;
    int pair;  // left index of the colliding adjacent pair
};

/// Full record of an event-driven run.
struct EventLog {
    std::vector<CollisionEvent> events;
    PhaseState final_state;
    double horizon = 0.0;
};

/// Earliest upcoming contact among approaching adjacent pairs, or nullopt
/// when every pair is separating.
std::optional<CollisionEvent> next_collision(const RodGeometry& geom,
                                             const PhaseState& state);

/// Event-driven reference simulator: free flight between contacts, velocity
/// swap (equal-mass elastic exchange) at each contact. Simultaneous events
/// on disjoint pairs are processed in one step; coincident events sharing an
/// index throw TripleCollision. Negative horizons run by time reversal.
EventLog simulate_to(const RodGeometry& geom, const PhaseState& z0,
                     double t_final);

}  // namespace hardrods
