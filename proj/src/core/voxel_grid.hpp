#pragma once
// Sparse voxel model: the occupied cells of an nx*ny*nz lattice with dense
// node ids, a precomputed 26-neighborhood adjacency (CSR), surface flags and
// connected components. Grids are immutable once built; edits (noise, crops)
// construct a new grid.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skelgrid {

struct VoxelCoord {
    int32_t x = 0;
    int32_t y = 0;
    int32_t z = 0;
    friend auto operator<=>(const VoxelCoord&, const VoxelCoord&) = default;
};

struct GridDims {
    uint32_t nx = 0;
    uint32_t ny = 0;
    uint32_t nz = 0;
    uint64_t cell_count() const { return uint64_t(nx) * ny * nz; }
    bool contains(const VoxelCoord& c) const {
        return c.x >= 0 && c.y >= 0 && c.z >= 0 && uint32_t(c.x) < nx &&
               uint32_t(c.y) < ny && uint32_t(c.z) < nz;
    }
    friend bool operator==(const GridDims&, const GridDims&) = default;
};

using NodeId = uint32_t;
inline constexpr NodeId kInvalidNode = UINT32_MAX;

// Thrown by the file readers; message carries "path:line:" (ascii) or a byte
// offset (binary).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class VoxelGrid {
public:
    // Sorts, deduplicates and validates the coordinate list. Node ids are
    // assigned in lexicographic (x, y, z) order, so id order is the
    // tie-breaking order used throughout the pipeline.
    static VoxelGrid from_coords(std::vector<VoxelCoord> coords, GridDims dims);

    const GridDims& dims() const { return dims_; }
    uint32_t size() const { return uint32_t(coords_.size()); }
    const VoxelCoord& coord(NodeId id) const { return coords_[id]; }
    std::span<const VoxelCoord> coords() const { return coords_; }

    // Binary search; kInvalidNode when the coordinate is not occupied.
    NodeId find(const VoxelCoord& c) const;
    bool occupied(const VoxelCoord& c) const { return find(c) != kInvalidNode; }

    // Occupied 26-neighbors, ascending node id (= lexicographic coords).
    std::span<const NodeId> neighbors(NodeId id) const {
        return {adjacency_.data() + adj_offsets_[id],
                adj_offsets_[id + 1] - adj_offsets_[id]};
    }
    uint32_t degree(NodeId id) const {
        return adj_offsets_[id + 1] - adj_offsets_[id];
    }
    bool is_surface(NodeId id) const { return degree(id) < 26; }

private:
    GridDims dims_;
    std::vector<VoxelCoord> coords_;
    std::vector<uint32_t> adj_offsets_;
    std::vector<NodeId> adjacency_;
};

struct SurfaceMask {
    std::vector<uint8_t> is_surface;  // per node id
    uint32_t surface_count = 0;
};

// Occupied neighbors of v as coordinates; throws std::invalid_argument if v
// is not occupied.
std::vector<VoxelCoord> neighbors26(const VoxelGrid& grid, const VoxelCoord& v);

SurfaceMask surface_mask(const VoxelGrid& grid);

// Maximal 26-connected components as node id lists, each sorted ascending,
// ordered by their lexicographically smallest voxel.
std::vector<std::vector<NodeId>> connected_components(const VoxelGrid& grid);

enum class GridFormat { Ascii, Binary };

// Reads either format; when `format` is empty the file magic decides.
VoxelGrid load_grid(const std::filesystem::path& path,
                    std::optional<GridFormat> format = std::nullopt);

// `comment` is emitted as a '#' line after the ascii header (ignored for
// binary). Ascii rows are sorted lexicographically, so output bytes are a
// pure function of the grid.
void save_grid(const VoxelGrid& grid, const std::filesystem::path& path,
               GridFormat format, const std::string& comment = {});

}  // namespace skelgrid
