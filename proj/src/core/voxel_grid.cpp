#include "voxel_grid.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace skelgrid {

namespace {

struct Delta {
    int32_t dx, dy, dz;
};

// The 13 lexicographically positive offsets; the other 13 are their mirrors.
constexpr std::array<Delta, 13> positive_deltas() {
    std::array<Delta, 13> d{};
    int k = 0;
    for (int32_t dx = -1; dx <= 1; ++dx)
        for (int32_t dy = -1; dy <= 1; ++dy)
            for (int32_t dz = -1; dz <= 1; ++dz) {
                if (dx > 0 || (dx == 0 && (dy > 0 || (dy == 0 && dz > 0))))
                    d[size_t(k++)] = {dx, dy, dz};
            }
    return d;
}

// coords[i] vs coords[j] + delta, in int64 to dodge edge-of-range overflow.
int compare_shifted(const VoxelCoord& a, const VoxelCoord& b, const Delta& d) {
    int64_t bx = int64_t(b.x) + d.dx;
    if (a.x != bx) return a.x < bx ? -1 : 1;
    int64_t by = int64_t(b.y) + d.dy;
    if (a.y != by) return a.y < by ? -1 : 1;
    int64_t bz = int64_t(b.z) + d.dz;
    if (a.z != bz) return a.z < bz ? -1 : 1;
    return 0;
}

}  // namespace

VoxelGrid VoxelGrid::from_coords(std::vector<VoxelCoord> coords, GridDims dims) {
    if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0)
        throw std::invalid_argument("grid dims must be positive");
    if (dims.nx > uint32_t(INT32_MAX) || dims.ny > uint32_t(INT32_MAX) ||
        dims.nz > uint32_t(INT32_MAX))
        throw std::invalid_argument("grid dims exceed 32-bit signed range");

    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    if (coords.empty()) throw std::invalid_argument("grid has no occupied voxels");
    for (const VoxelCoord& c : coords)
        if (!dims.contains(c))
            throw std::invalid_argument("voxel coordinate outside grid dims");

    VoxelGrid g;
    g.dims_ = dims;
    g.coords_ = std::move(coords);

    const uint32_t n = g.size();
    const auto deltas = positive_deltas();
    std::vector<uint32_t> deg(n, 0);

    // Two sorted-merge passes per offset: count degrees, then fill rows.
    // Shifting every coordinate by a fixed delta preserves lexicographic
    // order, so matches are found with a linear two-pointer walk.
    auto merge_pass = [&](auto&& emit) {
        for (const Delta& d : deltas) {
            size_t i = 0, j = 0;
            while (i < n && j < n) {
                int c = compare_shifted(g.coords_[i], g.coords_[j], d);
                if (c < 0)
                    ++i;
                else if (c > 0)
                    ++j;
                else {
                    emit(NodeId(j), NodeId(i));  // coords_[i] == coords_[j] + d
                    ++i;
                    ++j;
                }
            }
        }
    };

    merge_pass([&](NodeId a, NodeId b) {
        ++deg[a];
        ++deg[b];
    });

    g.adj_offsets_.assign(n + 1, 0);
    for (uint32_t i = 0; i < n; ++i) g.adj_offsets_[i + 1] = g.adj_offsets_[i] + deg[i];
    g.adjacency_.resize(g.adj_offsets_[n]);

    std::vector<uint32_t> fill(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
    merge_pass([&](NodeId a, NodeId b) {
        g.adjacency_[fill[a]++] = b;
        g.adjacency_[fill[b]++] = a;
    });

    for (uint32_t i = 0; i < n; ++i)
        std::sort(g.adjacency_.begin() + g.adj_offsets_[i],
                  g.adjacency_.begin() + g.adj_offsets_[i + 1]);
    return g;
}

NodeId VoxelGrid::find(const VoxelCoord& c) const {
    auto it = std::lower_bound(coords_.begin(), coords_.end(), c);
    if (it == coords_.end() || *it != c) return kInvalidNode;
    return NodeId(it - coords_.begin());
}

std::vector<VoxelCoord> neighbors26(const VoxelGrid& grid, const VoxelCoord& v) {
    NodeId id = grid.find(v);
    if (id == kInvalidNode)
        throw std::invalid_argument("neighbors26: voxel is not occupied");
    std::vector<VoxelCoord> out;
    for (NodeId nb : grid.neighbors(id)) out.push_back(grid.coord(nb));
    return out;
}

SurfaceMask surface_mask(const VoxelGrid& grid) {
    SurfaceMask m;
    m.is_surface.resize(grid.size());
    for (NodeId i = 0; i < grid.size(); ++i) {
        m.is_surface[i] = grid.is_surface(i) ? 1 : 0;
        m.surface_count += m.is_surface[i];
    }
    return m;
}

std::vector<std::vector<NodeId>> connected_components(const VoxelGrid& grid) {
    const uint32_t n = grid.size();
    std::vector<uint8_t> seen(n, 0);
    std::vector<std::vector<NodeId>> comps;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<NodeId> comp;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (NodeId nb : grid.neighbors(v)) {
                if (!seen[nb]) {
                    seen[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, size_t line,
                             const std::string& msg) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

bool parse_u32_field(std::string_view& s, uint32_t& out) {
    size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    s.remove_prefix(i);
    if (s.empty()) return false;
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || v > std::numeric_limits<uint32_t>::max()) return false;
    s.remove_prefix(size_t(p - s.data()));
    out = uint32_t(v);
    return true;
}

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t") == std::string_view::npos;
}

VoxelGrid load_ascii(std::ifstream& in, const std::filesystem::path& path) {
    std::string line;
    size_t lineno = 0;
    GridDims dims;
    bool have_header = false;
    std::vector<VoxelCoord> coords;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view s(line);
        if (blank(s) || s.front() == '#') continue;
        if (!have_header) {
            if (s.substr(0, 4) != "VOXA")
                parse_fail(path, lineno, "expected 'VOXA nx ny nz' header");
            s.remove_prefix(4);
            if (!parse_u32_field(s, dims.nx) || !parse_u32_field(s, dims.ny) ||
                !parse_u32_field(s, dims.nz) || !blank(s))
                parse_fail(path, lineno, "malformed header dimensions");
            if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0)
                parse_fail(path, lineno, "grid dims must be positive");
            if (dims.nx > uint32_t(INT32_MAX) || dims.ny > uint32_t(INT32_MAX) ||
                dims.nz > uint32_t(INT32_MAX))
                parse_fail(path, lineno, "grid dims exceed 32-bit signed range");
            have_header = true;
            continue;
        }
        uint32_t x, y, z;
        if (!parse_u32_field(s, x) || !parse_u32_field(s, y) ||
            !parse_u32_field(s, z) || !blank(s))
            parse_fail(path, lineno, "malformed voxel line, expected 'x y z'");
        VoxelCoord c{int32_t(x), int32_t(y), int32_t(z)};
        if (!dims.contains(c))
            parse_fail(path, lineno,
                       "coordinate (" + std::to_string(x) + "," + std::to_string(y) +
                           "," + std::to_string(z) + ") outside declared dims");
        coords.push_back(c);
    }
    if (!have_header) parse_fail(path, lineno, "missing 'VOXA' header");
    if (coords.empty()) parse_fail(path, lineno, "file declares no occupied voxels");
    return VoxelGrid::from_coords(std::move(coords), dims);
}

[[noreturn]] void binary_fail(const std::filesystem::path& path, uint64_t offset,
                              const std::string& msg) {
    throw ParseError(path.string() + ": offset " + std::to_string(offset) + ": " + msg);
}

VoxelGrid load_binary(std::ifstream& in, const std::filesystem::path& path) {
    auto read_bytes = [&](void* dst, size_t len, uint64_t offset, const char* what) {
        in.read(static_cast<char*>(dst), std::streamsize(len));
        if (size_t(in.gcount()) != len) binary_fail(path, offset, std::string("truncated ") + what);
    };
    auto rd_u32 = [](const unsigned char* p) {
        return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
               uint32_t(p[3]) << 24;
    };

    unsigned char head[4 + 12 + 8];
    read_bytes(head, sizeof head, 0, "header");
    if (std::memcmp(head, "VOXB", 4) != 0) binary_fail(path, 0, "bad magic, expected 'VOXB'");
    GridDims dims{rd_u32(head + 4), rd_u32(head + 8), rd_u32(head + 12)};
    uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= uint64_t(head[16 + i]) << (8 * i);
    if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0)
        binary_fail(path, 4, "grid dims must be positive");
    if (dims.nx > uint32_t(INT32_MAX) || dims.ny > uint32_t(INT32_MAX) ||
        dims.nz > uint32_t(INT32_MAX))
        binary_fail(path, 4, "grid dims exceed 32-bit signed range");
    if (n == 0) binary_fail(path, 16, "file declares no occupied voxels");
    if (n > dims.cell_count()) binary_fail(path, 16, "voxel count exceeds grid capacity");

    std::vector<VoxelCoord> coords;
    coords.reserve(size_t(n));
    std::vector<unsigned char> buf(12);
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t off = 24 + i * 12;
        read_bytes(buf.data(), 12, off, "voxel record");
        VoxelCoord c{int32_t(rd_u32(buf.data())), int32_t(rd_u32(buf.data() + 4)),
                     int32_t(rd_u32(buf.data() + 8))};
        if (!dims.contains(c)) binary_fail(path, off, "coordinate outside declared dims");
        coords.push_back(c);
    }
    in.peek();
    if (!in.eof()) binary_fail(path, 24 + n * 12, "trailing bytes after voxel records");
    return VoxelGrid::from_coords(std::move(coords), dims);
}

}  // namespace

VoxelGrid load_grid(const std::filesystem::path& path, std::optional<GridFormat> format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    if (!format) {
        char magic[4] = {};
        in.read(magic, 4);
        if (in.gcount() < 4) throw ParseError(path.string() + ": file too short");
        format = std::memcmp(magic, "VOXB", 4) == 0 ? GridFormat::Binary : GridFormat::Ascii;
        in.seekg(0);
    }
    return *format == GridFormat::Ascii ? load_ascii(in, path) : load_binary(in, path);
}

void save_grid(const VoxelGrid& grid, const std::filesystem::path& path,
               GridFormat format, const std::string& comment) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    if (format == GridFormat::Ascii) {
        out << "VOXA " << grid.dims().nx << ' ' << grid.dims().ny << ' '
            << grid.dims().nz << '\n';
        if (!comment.empty()) out << "# " << comment << '\n';
        char buf[64];
        for (const VoxelCoord& c : grid.coords()) {
            int len = std::snprintf(buf, sizeof buf, "%d %d %d\n", c.x, c.y, c.z);
            out.write(buf, len);
        }
    } else {
        auto wr_u32 = [&](uint32_t v) {
            unsigned char b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16),
                                  uint8_t(v >> 24)};
            out.write(reinterpret_cast<char*>(b), 4);
        };
        out.write("VOXB", 4);
        wr_u32(grid.dims().nx);
        wr_u32(grid.dims().ny);
        wr_u32(grid.dims().nz);
        uint64_t n = grid.size();
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = uint8_t(n >> (8 * i));
        out.write(reinterpret_cast<char*>(b), 8);
        for (const VoxelCoord& c : grid.coords()) {
            wr_u32(uint32_t(c.x));
            wr_u32(uint32_t(c.y));
            wr_u32(uint32_t(c.z));
        }
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace skelgrid
