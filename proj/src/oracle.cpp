#include "hardrods/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hardrods/dynamics.hpp"

namespace hardrods {

namespace {

void validate_gaps(const RodGeometry& geom, const PhaseState& state) {
    const double d = geom.diameter();
    const double tol = kGapTolerance * std::max(1.0, d);
    for (int i = 1; i < geom.n(); ++i)
        if (state.positions[i] - state.positions[i - 1] < d - tol)
            throw OrderViolation("oracle: gap below rod diameter at index " +
                                 std::to_string(i));
}

}  // namespace

std::optional<CollisionEvent> next_collision(const RodGeometry& geom,
                                             const PhaseState& state) {
    const double d = geom.diameter();
    std::optional<CollisionEvent> best;
    for (int i = 0; i + 1 < geom.n(); ++i) {
        double rel = state.velocities[i] - state.velocities[i + 1];
        if (rel <= 0.0) continue;  // not approaching
        double dt = std::max(0.0, (state.positions[i + 1] - state.positions[i] - d) / rel);
        if (!best || dt < best->time) best = CollisionEvent{dt, i};
    }
    return best;
}

EventLog simulate_to(const RodGeometry& geom, const PhaseState& z0,
                     double t_final) {
    if (t_final < 0.0) {
        PhaseState rev = z0;
        for (double& v : rev.velocities) v = -v;
        EventLog log = simulate_to(geom, rev, -t_final);
        for (double& v : log.final_state.velocities) v = -v;
        for (auto& e : log.events) e.time = -e.time;
        std::reverse(log.events.begin(), log.events.end());
        log.horizon = t_final;
        return log;
    }

    validate_gaps(geom, z0);
    const int n = geom.n();
    const double d = geom.diameter();

    EventLog log;
    log.horizon = t_final;
    PhaseState state = z0;
    double t = 0.0;

    bool have_prev_batch = false;
    double prev_batch_time = 0.0;
    std::vector<char> prev_batch_rods(n, 0);

    const long max_steps = static_cast<long>(n) * n + 16;
    for (long step = 0; step < max_steps; ++step) {
        // Recompute candidate times from absolute positions each step.
        double dt_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < n; ++i) {
            double rel = state.velocities[i] - state.velocities[i + 1];
            if (rel <= 0.0) continue;
            double dt = std::max(0.0, (state.positions[i + 1] - state.positions[i] - d) / rel);
            dt_min = std::min(dt_min, dt);
        }
        // Events at exactly t_final are not processed: the reported velocity
        // is the left limit, matching the billiard velocity convention.
        if (!std::isfinite(dt_min) || t + dt_min >= t_final) break;

        double t_event = t + dt_min;
        double time_tol = kTimeCoincidenceRel * std::max(1.0, std::fabs(t_event));

        // Batch of pairs colliding at this instant.
        std::vector<int> batch;
        for (int i = 0; i + 1 < n; ++i) {
            double rel = state.velocities[i] - state.velocities[i + 1];
            if (rel <= 0.0) continue;
            double dt = std::max(0.0, (state.positions[i + 1] - state.positions[i] - d) / rel);
            if (dt <= dt_min + time_tol) batch.push_back(i);
        }
        // Adjacent pairs p and p+1 share rod p+1.
        for (size_t k = 1; k < batch.size(); ++k)
            if (batch[k] == batch[k - 1] + 1)
                throw TripleCollision("oracle: coincident collisions share rod " +
                                      std::to_string(batch[k]) + " at t=" +
                                      std::to_string(t_event));
        // Chained zero-time collisions across batches at one instant are a
        // multi-rod contact as well.
        if (have_prev_batch && times_coincide(t_event, prev_batch_time)) {
            for (int p : batch)
                if (prev_batch_rods[p] || prev_batch_rods[p + 1])
                    throw TripleCollision(
                        "oracle: chained coincident collision at t=" +
                        std::to_string(t_event));
        } else {
            std::fill(prev_batch_rods.begin(), prev_batch_rods.end(), 0);
            prev_batch_time = t_event;
            have_prev_batch = true;
        }

        for (int i = 0; i < n; ++i) state.positions[i] += dt_min * state.velocities[i];
        for (int p : batch) {
            std::swap(state.velocities[p], state.velocities[p + 1]);
            prev_batch_rods[p] = prev_batch_rods[p + 1] = 1;
            log.events.push_back({t_event, p});
        }
        t = t_event;
    }

    for (int i = 0; i < n; ++i)
        state.positions[i] += (t_final - t) * state.velocities[i];
    log.final_state = std::move(state);
    return log;
}

}  // namespace hardrods
