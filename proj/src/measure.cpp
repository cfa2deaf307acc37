#include "hardrods/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hardrods/dynamics.hpp"
#include "hardrods/rng.hpp"

namespace hardrods {

namespace {

void validate_intervals(const std::vector<std::pair<double, double>>& iv,
                        const char* what) {
    for (const auto& [lo, hi] : iv)
        if (!(lo < hi))
            throw std::invalid_argument(std::string(what) +
                                        ": interval must have lo < hi");
}

/// True when the position box meets the ordered component with positive
/// volume: a strictly feasible ascending choice with gaps >= 2r exists.
bool position_box_feasible(const RodGeometry& geom,
                           const std::vector<std::pair<double, double>>& iv) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < geom.n(); ++i) {
        m = std::max(iv[i].first, m + geom.diameter());
        if (!(m < iv[i].second)) return false;
    }
    return true;
}

bool in_ordered_component(const RodGeometry& geom,
                          const std::vector<double>& x) {
    for (int i = 1; i < geom.n(); ++i)
        if (x[i] - x[i - 1] < geom.diameter()) return false;
    return true;
}

bool in_intervals(const std::vector<double>& x,
                  const std::vector<std::pair<double, double>>& iv) {
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] < iv[i].first || x[i] > iv[i].second) return false;
    return true;
}

}  // namespace

double PhaseBox::volume() const {
    double v = 1.0;
    for (const auto& [lo, hi] : position_intervals) v *= hi - lo;
    for (const auto& [lo, hi] : velocity_intervals) v *= hi - lo;
    return v;
}

double jacobian_unit_check(const SortPermutation& g, double t) {
    const int n = static_cast<int>(g.perm.size());
    const int m = 2 * n;
    // M = diag(g,g) * (I + t * shear): row k selects row perm[k] of the
    // shear factor.
    std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
    for (int k = 0; k < n; ++k) {
        a[static_cast<size_t>(k) * m + g.perm[k]] = 1.0;
        a[static_cast<size_t>(k) * m + g.perm[k] + n] = t;
        a[static_cast<size_t>(n + k) * m + n + g.perm[k]] = 1.0;
    }
    // LU with partial pivoting; |det| is the product of pivot magnitudes.
    double det = 1.0;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(a[static_cast<size_t>(r) * m + col]) >
                std::fabs(a[static_cast<size_t>(piv) * m + col]))
                piv = r;
        if (piv != col)
            for (int c = 0; c < m; ++c)
                std::swap(a[static_cast<size_t>(piv) * m + c],
                          a[static_cast<size_t>(col) * m + c]);
        double p = a[static_cast<size_t>(col) * m + col];
        if (p == 0.0) return 0.0;
        det *= std::fabs(p);
        for (int r = col + 1; r < m; ++r) {
            double f = a[static_cast<size_t>(r) * m + col] / p;
            if (f == 0.0) continue;
            for (int c = col; c < m; ++c)
                a[static_cast<size_t>(r) * m + c] -=
                    f * a[static_cast<size_t>(col) * m + c];
        }
    }
    return det;
}

InvarianceReport estimate_pushforward_volume(const RodGeometry& geom,
                                             const PhaseBox& box, double t,
                                             std::uint64_t n_samples,
                                             std::uint64_t seed) {
    const int n = geom.n();
    if (static_cast<int>(box.position_intervals.size()) != n ||
        static_cast<int>(box.velocity_intervals.size()) != n)
        throw std::invalid_argument("estimate_pushforward_volume: box rank != N");
    if (n_samples < 1)
        throw std::invalid_argument("estimate_pushforward_volume: n_samples >= 1");
    validate_intervals(box.position_intervals, "position box");
    validate_intervals(box.velocity_intervals, "velocity box");
    if (!position_box_feasible(geom, box.position_intervals))
        throw EmptyTarget(
            "estimate_pushforward_volume: box does not meet the ordered "
            "component with positive volume");

    double vlo = box.velocity_intervals.front().first;
    double vhi = box.velocity_intervals.front().second;
    for (const auto& [lo, hi] : box.velocity_intervals) {
        vlo = std::min(vlo, lo);
        vhi = std::max(vhi, hi);
    }
    const double vmax = std::max(std::fabs(vlo), std::fabs(vhi));

    // Bounding box of the preimage: positions inflated by |t| * vmax, and
    // the velocity block widened to the common hull (the flow permutes
    // velocity components).
    PhaseBox bound = box;
    const double inflate = std::fabs(t) * vmax;
    for (auto& [lo, hi] : bound.position_intervals) {
        lo -= inflate;
        hi += inflate;
    }
    for (auto& iv : bound.velocity_intervals) iv = {vlo, vhi};

    InvarianceReport rep;
    rep.t = t;
    rep.n_samples = n_samples;
    rep.seed = seed;
    rep.bounding_volume = bound.volume();

    PhaseState z;
    z.positions.resize(n);
    z.velocities.resize(n);
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        auto rng = stream_rng(seed, k);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (;;) {
            for (int i = 0; i < n; ++i) {
                const auto& [lo, hi] = bound.position_intervals[i];
                z.positions[i] = lo + (hi - lo) * u01(rng);
            }
            for (int i = 0; i < n; ++i) {
                const auto& [lo, hi] = bound.velocity_intervals[i];
                z.velocities[i] = lo + (hi - lo) * u01(rng);
            }
            // Points outside the ordered component carry no Liouville mass.
            if (!in_ordered_component(geom, z.positions)) break;
            try {
                if (!classify_datum(geom, z).good) {
                    ++rep.rejected_bad;
                    continue;  // measure-zero, redraw from the same stream
                }
            } catch (const DegenerateLine&) {
                ++rep.rejected_bad;
                continue;
            }
            if (in_intervals(z.positions, box.position_intervals) &&
                in_intervals(z.velocities, box.velocity_intervals))
                ++rep.count_before;
            PhaseState zt = evaluate_state(geom, z, t);
            if (in_intervals(zt.positions, box.position_intervals) &&
                in_intervals(zt.velocities, box.velocity_intervals))
                ++rep.count_after;
            break;
        }
    }

    const double nn = static_cast<double>(n_samples);
    auto estimate = [&](std::uint64_t count, double& vol, double& se) {
        double p = static_cast<double>(count) / nn;
        vol = rep.bounding_volume * p;
        se = rep.bounding_volume * std::sqrt(std::max(0.0, p * (1.0 - p) / nn));
    };
    estimate(rep.count_before, rep.volume_before, rep.stderr_before);
    estimate(rep.count_after, rep.volume_after, rep.stderr_after);
    double denom = std::hypot(rep.stderr_before, rep.stderr_after);
    double diff = std::fabs(rep.volume_before - rep.volume_after);
    rep.z_score = denom > 0.0
                      ? diff / denom
                      : (diff == 0.0 ? 0.0
                                     : std::numeric_limits<double>::infinity());
    return rep;
}

std::vector<PhaseState> sample_canonical(const EnsembleParams& params,
                                         const RodGeometry& geom,
                                         std::uint64_t n, std::uint64_t seed) {
    const int dim = geom.n();
    if (!(params.beta > 0.0))
        throw std::invalid_argument("sample_canonical: beta must be > 0");
    if (static_cast<int>(params.position_box.size()) != dim)
        throw std::invalid_argument("sample_canonical: box rank != N");
    validate_intervals(params.position_box, "position box");
    if (!position_box_feasible(geom, params.position_box))
        throw EmptyTarget("sample_canonical: box does not meet the ordered component");

    const double sigma = 1.0 / std::sqrt(2.0 * params.beta);
    const std::uint64_t max_attempts = 1'000'000;  // acceptance floor 1e-6

    std::vector<PhaseState> out;
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        auto rng = stream_rng(seed, k);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, sigma);
        PhaseState z;
        z.positions.resize(dim);
        z.velocities.resize(dim);
        std::uint64_t attempts = 0;
        for (;;) {
            if (++attempts > max_attempts)
                throw RejectionStall(
                    "sample_canonical: position acceptance below 1e-6");
            for (int i = 0; i < dim; ++i) {
                const auto& [lo, hi] = params.position_box[i];
                z.positions[i] = lo + (hi - lo) * u01(rng);
            }
            if (in_ordered_component(geom, z.positions)) break;
        }
        for (int i = 0; i < dim; ++i) z.velocities[i] = gauss(rng);
        out.push_back(std::move(z));
    }
    return out;
}

}  // namespace hardrods
