#include "hardrods/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hardrods/rng.hpp"

namespace hardrods {

namespace {

void check_size(const RodGeometry& geom, const PhaseState& state) {
    if (static_cast<int>(state.positions.size()) != geom.n() ||
        static_cast<int>(state.velocities.size()) != geom.n())
        throw std::invalid_argument("state size does not match geometry");
}

}  // namespace

bool times_coincide(double t1, double t2) {
    double scale = std::max({1.0, std::fabs(t1), std::fabs(t2)});
    return std::fabs(t1 - t2) <= kTimeCoincidenceRel * scale;
}

PhaseState to_fundamental(const RodGeometry& geom, const PhaseState& state) {
    check_size(geom, state);
    const double d = geom.diameter();
    const double tol = kGapTolerance * std::max(1.0, d);
    PhaseState out = state;
    for (int i = 0; i < geom.n(); ++i) {
        if (i > 0 && state.positions[i] - state.positions[i - 1] < d - tol)
            throw OrderViolation("to_fundamental: gap below rod diameter at index " +
                                 std::to_string(i));
        out.positions[i] -= geom.offset(i);
    }
    return out;
}

PhaseState from_fundamental(const RodGeometry& geom, const PhaseState& state) {
    check_size(geom, state);
    PhaseState out = state;
    for (int i = 0; i < geom.n(); ++i) out.positions[i] += geom.offset(i);
    return out;
}

std::pair<std::vector<double>, SortPermutation> sort_with_permutation(
    const std::vector<double>& y) {
    SortPermutation g;
    g.perm.resize(y.size());
    std::iota(g.perm.begin(), g.perm.end(), 0);
    std::stable_sort(g.perm.begin(), g.perm.end(),
                     [&](int a, int b) { return y[a] < y[b]; });
    return {g.apply(y), g};
}

SortPermutation left_limit_permutation(const std::vector<double>& y,
                                       const std::vector<double>& v) {
    auto [sorted, g] = sort_with_permutation(y);
    const int n = static_cast<int>(y.size());
    // Group entries that are equal up to roundoff of the free-flight
    // arithmetic, then order each group by descending velocity. Just before
    // a collision the faster rod sits to the left, so this reproduces the
    // left-limit ordering at the exact event time.
    int k = 0;
    while (k < n) {
        int m = k + 1;
        while (m < n) {
            double a = sorted[m - 1], b = sorted[m];
            double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
            if (std::fabs(b - a) > 64.0 * std::numeric_limits<double>::epsilon() * scale)
                break;
            ++m;
        }
        if (m - k > 1) {
            std::stable_sort(g.perm.begin() + k, g.perm.begin() + m,
                             [&](int a, int b) { return v[a] > v[b]; });
        }
        k = m;
    }
    return g;
}

std::vector<double> evaluate_position(const RodGeometry& geom,
                                      const PhaseState& z0, double t,
                                      bool strict) {
    PhaseState fund = to_fundamental(geom, z0);
    if (strict) {
        DatumClass cls = classify_datum(geom, z0);
        if (!cls.good)
            throw BadDatumError("evaluate_position: bad datum, witness time " +
                                std::to_string(cls.witness_time));
    }
    const int n = geom.n();
    std::vector<double> line(n);
    for (int i = 0; i < n; ++i) line[i] = fund.positions[i] + t * fund.velocities[i];
    auto [sorted, g] = sort_with_permutation(line);
    for (int i = 0; i < n; ++i) sorted[i] += geom.offset(i);
    return sorted;
}

std::vector<double> evaluate_velocity(const RodGeometry& geom,
                                      const PhaseState& z0, double t,
                                      bool strict) {
    PhaseState fund = to_fundamental(geom, z0);
    if (strict) {
        DatumClass cls = classify_datum(geom, z0);
        if (!cls.good)
            throw BadDatumError("evaluate_velocity: bad datum, witness time " +
                                std::to_string(cls.witness_time));
    }
    const int n = geom.n();
    std::vector<double> line(n);
    for (int i = 0; i < n; ++i) line[i] = fund.positions[i] + t * fund.velocities[i];
    SortPermutation g = left_limit_permutation(line, fund.velocities);
    return g.apply(fund.velocities);
}

PhaseState evaluate_state(const RodGeometry& geom, const PhaseState& z0,
                          double t, bool strict) {
    PhaseState out;
    out.positions = evaluate_position(geom, z0, t, strict);
    out.velocities = evaluate_velocity(geom, z0, t, false);
    return out;
}

CollisionSchedule collision_schedule(const RodGeometry& geom,
                                     const PhaseState& z0) {
    PhaseState fund = to_fundamental(geom, z0);
    const int n = geom.n();
    CollisionSchedule sched;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dv = fund.velocities[i] - fund.velocities[j];
            double dy = fund.positions[j] - fund.positions[i];
            if (dv == 0.0) {
                if (dy == 0.0)
                    throw DegenerateLine(
                        "collision_schedule: coincident rods with equal "
                        "velocities, pair (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
                continue;  // parallel lines never meet
            }
            sched.events.push_back({dy / dv, i, j});
        }
    }
    std::sort(sched.events.begin(), sched.events.end(),
              [](const PairEvent& a, const PairEvent& b) { return a.time < b.time; });
    return sched;
}

DatumClass classify_datum(const RodGeometry& geom, const PhaseState& z0) {
    CollisionSchedule sched = collision_schedule(geom, z0);
    const auto& ev = sched.events;
    DatumClass cls;
    size_t k = 0;
    while (k < ev.size()) {
        // Chain coincident times into one group.
        size_t m = k + 1;
        while (m < ev.size() && times_coincide(ev[m - 1].time, ev[m].time)) ++m;
        if (m - k > 1) {
            // Union-find over the indices of the group's pairs; a component
            // with >= 3 members means >= 3 coordinates at one point.
            std::vector<int> parent(geom.n());
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            std::vector<char> touched(geom.n(), 0);
            for (size_t e = k; e < m; ++e) {
                touched[ev[e].i] = touched[ev[e].j] = 1;
                parent[find(ev[e].i)] = find(ev[e].j);
            }
            std::vector<std::vector<int>> comps(geom.n());
            for (int i = 0; i < geom.n(); ++i)
                if (touched[i]) comps[find(i)].push_back(i);
            for (auto& c : comps)
                if (c.size() >= 3) cls.chain.push_back(c);
            if (!cls.chain.empty()) {
                cls.good = false;
                cls.witness_time = ev[k].time;
                return cls;
            }
        }
        k = m;
    }
    return cls;
}

std::pair<PhaseState, SortPermutation> canonicalize(const RodGeometry& geom,
                                                    const PhaseState& state) {
    check_size(geom, state);
    auto [sorted, pi] = sort_with_permutation(state.positions);
    const double d = geom.diameter();
    const double tol = kGapTolerance * std::max(1.0, d);
    for (int i = 1; i < geom.n(); ++i)
        if (sorted[i] - sorted[i - 1] < d - tol)
            throw OverlapViolation("canonicalize: rods overlap at sorted index " +
                                   std::to_string(i));
    PhaseState out;
    out.positions = std::move(sorted);
    out.velocities = pi.apply(state.velocities);
    return {out, pi};
}

std::pair<double, double> conserved_quantities(const std::vector<double>& v) {
    double momentum = 0.0, energy = 0.0;
    for (double x : v) {
        momentum += x;
        energy += x * x;
    }
    return {momentum, energy};
}

PhaseState random_good_datum(const RodGeometry& geom, std::uint64_t seed,
                             double position_span, double velocity_span) {
    const int n = geom.n();
    for (std::uint64_t attempt = 0;; ++attempt) {
        auto rng = stream_rng(seed, attempt);
        std::uniform_real_distribution<double> upos(0.0, position_span);
        std::uniform_real_distribution<double> uvel(-velocity_span, velocity_span);
        PhaseState z;
        z.positions.resize(n);
        z.velocities.resize(n);
        double x = upos(rng);
        for (int i = 0; i < n; ++i) {
            z.positions[i] = x;
            x += geom.diameter() + upos(rng);
        }
        for (int i = 0; i < n; ++i) z.velocities[i] = uvel(rng);
        // Classification materializes the O(N^2) schedule; above this size
        // continuous draws are almost surely good and the check is skipped.
        if (n > 4096) return z;
        try {
            if (classify_datum(geom, z).good) return z;
        } catch (const DegenerateLine&) {
        }
    }
}

}  // namespace hardrods
