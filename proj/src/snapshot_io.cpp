#include "sqglab/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sqg {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts need byte swaps");

constexpr char kMagic[4] = {'S', 'Q', 'G', 'F'};

}  // namespace

void write_snapshot(const std::string& path, const RealField& field, double time) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    out.write(kMagic, 4);
    const std::uint32_t n = static_cast<std::uint32_t>(field.grid.n());
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&time), sizeof time);
    out.write(reinterpret_cast<const char*>(field.v.data()),
              static_cast<std::streamsize>(field.v.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    std::uint32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    double time = 0.0;
    in.read(reinterpret_cast<char*>(&time), sizeof time);
    if (!in) throw std::runtime_error("read_snapshot: truncated header in " + path);
    Snapshot snap{RealField(Grid(static_cast<int>(n))), time};
    in.read(reinterpret_cast<char*>(snap.field.v.data()),
            static_cast<std::streamsize>(snap.field.v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_snapshot: truncated data in " + path);
    return snap;
}

}  // namespace sqg
