#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardrods {

// Error hierarchy shared by all modules. Every failure mode carries a
// human-readable message; the CLI maps these onto exit codes.
struct OrderViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OverlapViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadDatumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateLine : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TripleCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyTarget : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RejectionStall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rod count and radius. Owns the per-index offsets that conjugate the
/// ordered hard-rod configuration space (gaps >= 2r) onto the fundamental
/// table (gaps >= 0). Offsets use the rod diameter 2r so that contact maps
/// exactly onto a chamber wall.
class RodGeometry {
public:
    RodGeometry(int n, double radius) : n_(n), radius_(radius) {
        if (n < 2) throw std::invalid_argument("RodGeometry: need n >= 2");
        if (!(radius >= 0.0))
            throw std::invalid_argument("RodGeometry: radius must be >= 0");
    }

    int n() const { return n_; }
    double radius() const { return radius_; }
    double diameter() const { return 2.0 * radius_; }

    /// Shift offset for rod i (0-based): 2r*(i+1).
    double offset(int i) const { return 2.0 * radius_ * (i + 1); }

private:
    int n_;
    double radius_;
};

/// A phase point Z = (X, V): rod centre positions and velocities.
struct PhaseState {
    std::vector<double> positions;
    std::vector<double> velocities;
};

/// Permutation on {0..N-1} stored as an index map: applying it to the
/// vector it was computed from yields ascending order, sorted[k] = y[perm[k]].
struct SortPermutation {
    std::vector<int> perm;

    bool is_identity() const {
        for (int k = 0; k < static_cast<int>(perm.size()); ++k)
            if (perm[k] != k) return false;
        return true;
    }

    SortPermutation inverse() const {
        SortPermutation inv;
        inv.perm.resize(perm.size());
        for (int k = 0; k < static_cast<int>(perm.size()); ++k)
            inv.perm[perm[k]] = k;
        return inv;
    }

    std::vector<double> apply(const std::vector<double>& y) const {
        std::vector<double> out(y.size());
        for (size_t k = 0; k < perm.size(); ++k) out[k] = y[perm[k]];
        return out;
    }
};

/// One pairwise meeting time of the free-flight lines, indices 0-based, i < j.
struct PairEvent {
    double time;
    int i;
    int j;
};

/// All finite meeting times of the free-flight line with the coincidence
/// hyperplanes, sorted ascending. Cardinality <= N(N-1)/2.
struct CollisionSchedule {
    std::vector<PairEvent> events;
};

/// Result of good/bad classification. A datum is Bad when at some time
/// three or more fundamental coordinates coincide pairwise; the witness
/// records that time and the offending index sets (links of size >= 3).
struct DatumClass {
    bool good = true;
    double witness_time = 0.0;
    std::vector<std::vector<int>> chain;  // each link: >= 3 coincident indices
};

}  // namespace hardrods
