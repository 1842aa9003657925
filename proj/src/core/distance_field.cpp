#include "distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skelgrid {

namespace {

constexpr int64_t kFar = std::numeric_limits<int64_t>::max() / 4;

// Lower envelope of parabolas f[j] + (q - p[j])^2 rooted at strictly
// increasing integer positions p, evaluated at the same positions.
// Intersections are compared exactly in 128-bit arithmetic.
class Envelope {
public:
    void resize(size_t m) {
        idx_.resize(m);
        num_.resize(m);
        den_.resize(m);
    }

    void run(const int64_t* p, const int64_t* f, size_t m, int64_t* out) {
        if (m == 1) {
            out[0] = f[0];
            return;
        }
        size_t k = 0;
        idx_[0] = 0;
        num_[0] = std::numeric_limits<__int128>::min() / 2;
        den_[0] = 1;
        for (size_t i = 1; i < m; ++i) {
            for (;;) {
                size_t j = idx_[k];
                // abscissa where parabola i overtakes parabola j
                __int128 num = __int128(f[i]) + __int128(p[i]) * p[i] -
                               __int128(f[j]) - __int128(p[j]) * p[j];
                __int128 den = 2 * (__int128(p[i]) - p[j]);
                if (k > 0 && num * den_[k] <= num_[k] * den) {
                    --k;
                    continue;
                }
                ++k;
                idx_[k] = i;
                num_[k] = num;
                den_[k] = den;
                break;
            }
        }
        size_t j = 0;
        for (size_t i = 0; i < m; ++i) {
            while (j < k && num_[j + 1] <= __int128(p[i]) * den_[j + 1]) ++j;
            size_t b = idx_[j];
            int64_t dq = p[i] - p[b];
            out[i] = f[b] + dq * dq;
        }
    }

private:
    std::vector<size_t> idx_;
    std::vector<__int128> num_;
    std::vector<__int128> den_;
};

// Nearest-site 1D pass: out[i] = min over sites s in the group of
// (pos[i] - pos[s])^2, where `site` flags the group's sites.
void nearest_site_1d(const int64_t* pos, const uint8_t* site, size_t m, int64_t* out) {
    int64_t last = kFar;
    for (size_t i = 0; i < m; ++i) {
        if (site[i]) last = pos[i];
        if (last == kFar)
            out[i] = kFar;
        else {
            int64_t dq = pos[i] - last;
            out[i] = dq * dq;
        }
    }
    last = kFar;
    for (size_t i = m; i-- > 0;) {
        if (site[i]) last = pos[i];
        if (last != kFar) {
            int64_t dq = pos[i] - last;
            out[i] = std::min(out[i], dq * dq);
        }
    }
}

}  // namespace

DistanceField distance_transform(const VoxelGrid& grid, const SurfaceMask& mask) {
    const uint32_t n = grid.size();
    DistanceField field;
    field.d2.assign(n, kFar);

    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;

    std::vector<int64_t> pos, fin, fout;
    std::vector<uint8_t> site;
    Envelope env;

    // Pass 1: squared x-distance to the nearest surface voxel in each
    // (y, z) row. Every row of occupied voxels contains a surface voxel
    // (run endpoints), so the result is finite everywhere.
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const VoxelCoord &ca = grid.coord(a), &cb = grid.coord(b);
        if (ca.y != cb.y) return ca.y < cb.y;
        if (ca.z != cb.z) return ca.z < cb.z;
        return ca.x < cb.x;
    });
    for (size_t lo = 0; lo < n;) {
        size_t hi = lo;
        const VoxelCoord& c0 = grid.coord(order[lo]);
        while (hi < n) {
            const VoxelCoord& c = grid.coord(order[hi]);
            if (c.y != c0.y || c.z != c0.z) break;
            ++hi;
        }
        size_t m = hi - lo;
        pos.resize(m);
        site.resize(m);
        fout.resize(m);
        for (size_t i = 0; i < m; ++i) {
            pos[i] = grid.coord(order[lo + i]).x;
            site[i] = mask.is_surface[order[lo + i]];
        }
        nearest_site_1d(pos.data(), site.data(), m, fout.data());
        for (size_t i = 0; i < m; ++i) field.d2[order[lo + i]] = fout[i];
        lo = hi;
    }

    // Pass 2 (y) and pass 3 (z): parabola envelopes over each column's
    // occupied entries, folding in the previous pass.
    auto envelope_pass = [&](auto key_less, auto same_column, auto coord_along) {
        std::sort(order.begin(), order.end(), key_less);
        for (size_t lo = 0; lo < n;) {
            size_t hi = lo;
            while (hi < n && same_column(order[lo], order[hi])) ++hi;
            size_t m = hi - lo;
            pos.resize(m);
            fin.resize(m);
            fout.resize(m);
            env.resize(m);
            for (size_t i = 0; i < m; ++i) {
                pos[i] = coord_along(order[lo + i]);
                fin[i] = field.d2[order[lo + i]];
            }
            env.run(pos.data(), fin.data(), m, fout.data());
            for (size_t i = 0; i < m; ++i) field.d2[order[lo + i]] = fout[i];
            lo = hi;
        }
    };

    envelope_pass(
        [&](NodeId a, NodeId b) {
            const VoxelCoord &ca = grid.coord(a), &cb = grid.coord(b);
            if (ca.x != cb.x) return ca.x < cb.x;
            if (ca.z != cb.z) return ca.z < cb.z;
            return ca.y < cb.y;
        },
        [&](NodeId a, NodeId b) {
            const VoxelCoord &ca = grid.coord(a), &cb = grid.coord(b);
            return ca.x == cb.x && ca.z == cb.z;
        },
        [&](NodeId a) { return int64_t(grid.coord(a).y); });

    envelope_pass(
        [&](NodeId a, NodeId b) { return a < b; },  // id order is (x, y, z)
        [&](NodeId a, NodeId b) {
            const VoxelCoord &ca = grid.coord(a), &cb = grid.coord(b);
            return ca.x == cb.x && ca.y == cb.y;
        },
        [&](NodeId a) { return int64_t(grid.coord(a).z); });

    field.d.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        field.d[i] = std::sqrt(double(field.d2[i]));
        field.d2_max = std::max(field.d2_max, field.d2[i]);
    }
    field.d_max = std::sqrt(double(field.d2_max));
    return field;
}

std::vector<double> weights_from_distance(const DistanceField& field) {
    std::vector<double> w(field.d.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = field.d_max - field.d[i];
    return w;
}

}  // namespace skelgrid
