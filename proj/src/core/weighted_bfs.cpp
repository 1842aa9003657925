#include "weighted_bfs.hpp"

#include <algorithm>
#include <cmath>

namespace skelgrid {

namespace {

// Promotion slack: a pooled voxel is promoted once no future relaxation can
// land below its label (future relaxations are >= l_min + w + 1); the 1e-9
// margin keeps double rounding at the boundary from breaking that guarantee.
constexpr double kPromoteSlack = 1e-9;

}  // namespace

std::vector<double> initial_labels(uint32_t n) {
    return std::vector<double>(n, kUnlabeled);
}

BfsEngine::BfsEngine(const VoxelGrid& grid) : grid_(grid) {
    status_.assign(grid.size(), kUntouched);
}

double BfsEngine::step_length(NodeId a, NodeId b) const {
    static const double table[4] = {0.0, 1.0, std::sqrt(2.0), std::sqrt(3.0)};
    const VoxelCoord &ca = grid_.coord(a), &cb = grid_.coord(b);
    int dx = ca.x - cb.x, dy = ca.y - cb.y, dz = ca.z - cb.z;
    return table[dx * dx + dy * dy + dz * dz];
}

void BfsEngine::kill_piece(std::span<const NodeId> contacts,
                           std::vector<double>& labels, BfsRun& out) {
    // Flood the contacting piece: promoted voxels plus expanded voxels that
    // still border the pool (the waiting band F_B). Contacts and the band
    // become terminal; co-promoted voxels stop silently; the piece's pool
    // lookahead is reset to undiscovered.
    auto in_band = [&](NodeId v) {
        for (NodeId nb : grid_.neighbors(v))
            if (status_[nb] == kPool) return true;
        return false;
    };
    flood_.clear();
    std::vector<NodeId> piece;
    for (NodeId c : contacts) {
        if (status_[c] == kFrozen) continue;
        status_[c] = kFrozen;
        out.terminal.push_back(c);
        piece.push_back(c);
        flood_.push_back(c);
        while (!flood_.empty()) {
            NodeId v = flood_.back();
            flood_.pop_back();
            for (NodeId nb : grid_.neighbors(v)) {
                if (status_[nb] == kActive) {
                    status_[nb] = kStopped;
                    piece.push_back(nb);
                    flood_.push_back(nb);
                } else if (status_[nb] == kExpanded && in_band(nb)) {
                    status_[nb] = kFrozen;
                    out.terminal.push_back(nb);
                    piece.push_back(nb);
                    flood_.push_back(nb);
                }
            }
        }
    }
    for (NodeId v : piece) {
        for (NodeId nb : grid_.neighbors(v)) {
            if (status_[nb] == kPool) {
                status_[nb] = kUntouched;
                labels[nb] = kUnlabeled;  // re-discoverable from other pieces
            }
        }
    }
}

BfsRun BfsEngine::run(std::span<const double> weights,
                      std::span<const NodeId> sources,
                      std::vector<double>& labels,
                      const std::vector<uint8_t>* barrier,
                      const BfsObserver* observer) {
    const uint32_t n = grid_.size();
    if (sources.empty()) throw std::invalid_argument("bfs: empty initial frontier");
    if (weights.size() != n || labels.size() != n)
        throw std::invalid_argument("bfs: weights/labels size mismatch");

    BfsRun out;
    touched_.clear();
    active_.clear();

    auto barrier_at = [&](NodeId v) { return barrier && (*barrier)[v] != 0; };
    auto touches_barrier = [&](NodeId v) {
        for (NodeId nb : grid_.neighbors(v))
            if ((*barrier)[nb]) return true;
        return false;
    };

    for (NodeId s : sources) {
        if (s >= n) throw std::invalid_argument("bfs: frontier voxel not occupied");
        if (barrier_at(s)) throw std::invalid_argument("bfs: frontier voxel on barrier");
        if (status_[s] == kActive) continue;  // duplicate source
        labels[s] = 0.0;
        status_[s] = kActive;
        touched_.push_back(s);
        active_.push_back(s);
    }
    std::sort(active_.begin(), active_.end());

    if (barrier) {
        std::vector<NodeId> contacts;
        for (NodeId s : active_)
            if (touches_barrier(s)) contacts.push_back(s);
        if (!contacts.empty()) {
            kill_piece(contacts, labels, out);
            std::erase_if(active_, [&](NodeId v) { return status_[v] != kActive; });
        }
    }

    pool_.clear();
    uint32_t k = 0;
    while (!active_.empty() || !pool_.empty()) {
        for (NodeId i : active_) {
            status_[i] = kExpanded;
            const double li = labels[i];
            for (NodeId j : grid_.neighbors(i)) {
                if (barrier_at(j)) continue;
                double cand = li + weights[j] + step_length(i, j);
                if (cand < labels[j]) {
                    labels[j] = cand;
                    if (status_[j] == kUntouched) {
                        status_[j] = kPool;
                        pool_.push_back(j);
                        touched_.push_back(j);
                    }
                }
            }
        }
        if (!active_.empty()) {
            out.frontier_sizes.push_back(uint32_t(active_.size()));
            out.expanded += active_.size();
        }
        active_.clear();

        // drop entries invalidated by a kill
        std::erase_if(pool_, [&](NodeId v) { return status_[v] != kPool; });
        if (pool_.empty()) {
            if (observer && observer->on_iteration)
                observer->on_iteration(k, active_, pool_, kUnlabeled, status_);
            break;
        }

        double l_min = kUnlabeled;
        for (NodeId v : pool_) l_min = std::min(l_min, labels[v]);

        next_active_.clear();
        size_t keep = 0;
        for (NodeId v : pool_) {
            if (labels[v] <= l_min + weights[v] + 1.0 - kPromoteSlack) {
                status_[v] = kActive;
                next_active_.push_back(v);
            } else {
                pool_[keep++] = v;
            }
        }
        pool_.resize(keep);
        std::sort(next_active_.begin(), next_active_.end());

        if (barrier) {
            std::vector<NodeId> contacts;
            for (NodeId v : next_active_)
                if (touches_barrier(v)) contacts.push_back(v);
            if (!contacts.empty()) {
                kill_piece(contacts, labels, out);
                std::erase_if(next_active_,
                              [&](NodeId v) { return status_[v] != kActive; });
                std::erase_if(pool_, [&](NodeId v) { return status_[v] != kPool; });
            }
        }

        active_.swap(next_active_);
        if (observer && observer->on_iteration) {
            double lm = pool_.empty() && active_.empty() ? kUnlabeled : l_min;
            observer->on_iteration(k, active_, pool_, lm, status_);
        }
        ++k;
    }

    for (NodeId v : touched_) status_[v] = kUntouched;  // labels persist
    std::sort(out.terminal.begin(), out.terminal.end());
    return out;
}

}  // namespace skelgrid
