#pragma once
// Weighted frontier propagation: breadth-first search whose labels are
// shortest weighted-path sums l(v) = min over paths of sum(w(next) + step),
// step in {1, sqrt2, sqrt3}. The frontier advances in batches: the active
// set F_A expands once per voxel, candidates wait in a pool until their
// label can no longer improve, and expanded voxels with pending candidates
// form the waiting set F_B.
//
// With a barrier set, propagation freezes where it meets the barrier: when a
// newly promoted voxel touches the barrier, the contacting wavefront piece
// (the promoted component plus its waiting band) stops, its members adjacent
// to the barrier and its waiting band become the terminal frontier, and the
// piece's lookahead candidates are dropped (re-discoverable from elsewhere).

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "voxel_grid.hpp"

namespace skelgrid {

inline constexpr double kUnlabeled = std::numeric_limits<double>::infinity();

// Fresh labels per the initial conditions: +inf everywhere, 0 on sources.
std::vector<double> initial_labels(uint32_t n);

struct BfsRun {
    std::vector<NodeId> terminal;          // frozen frontier, sorted (barrier runs)
    std::vector<uint32_t> frontier_sizes;  // |F_A^(k)| per expanding iteration
    uint64_t expanded = 0;                 // sum of frontier_sizes
};

// Test hook, called once per iteration after promotion.
struct BfsObserver {
    std::function<void(uint32_t k, std::span<const NodeId> next_active,
                       std::span<const NodeId> pool, double l_min,
                       std::span<const uint8_t> status)>
        on_iteration;
};

class BfsEngine {
public:
    // status byte per node, exposed to the observer
    enum : uint8_t {
        kUntouched = 0,
        kPool = 1,      // discovered, waiting to be promoted
        kActive = 2,    // promoted, expands next
        kExpanded = 3,  // relaxed its neighbors; label final
        kFrozen = 4,    // terminal frontier member
        kStopped = 5,   // killed with the contacting piece; label kept
    };

    explicit BfsEngine(const VoxelGrid& grid);

    // Labels persist across runs (incremental re-runs keep prior labels and
    // only improve them). Sources are forced to label 0. `barrier` nodes are
    // never relaxed or entered; sources must not lie on the barrier.
    BfsRun run(std::span<const double> weights, std::span<const NodeId> sources,
               std::vector<double>& labels,
               const std::vector<uint8_t>* barrier = nullptr,
               const BfsObserver* observer = nullptr);

    // Euclidean step between 26-adjacent nodes.
    double step_length(NodeId a, NodeId b) const;

private:
    void kill_piece(std::span<const NodeId> contacts, std::vector<double>& labels,
                    BfsRun& out);

    const VoxelGrid& grid_;
    std::vector<uint8_t> status_;
    std::vector<NodeId> pool_;
    std::vector<NodeId> active_;
    std::vector<NodeId> next_active_;
    std::vector<NodeId> touched_;
    std::vector<NodeId> flood_;
};

}  // namespace skelgrid
