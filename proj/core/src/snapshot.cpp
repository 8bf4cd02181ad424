#include "epns/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace epns {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T byteswap_if_needed(T value) {
    if constexpr (std::endian::native == std::endian::little) {
        return value;
    } else {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        std::memcpy(&value, bytes, sizeof(T));
        return value;
    }
}

template <class T>
void put(std::ostream& os, T value) {
    value = byteswap_if_needed(value);
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("truncated snapshot");
    return byteswap_if_needed(value);
}

}  // namespace

SpectralField Snapshot::field(const GridPtr& grid, std::size_t index) const {
    if (grid->points_per_axis() != points_per_axis || grid->box_length() != box_length)
        throw std::invalid_argument("snapshot grid does not match");
    if (index >= components.size()) throw std::out_of_range("snapshot component index");
    return SpectralField(grid, components[index], real);
}

Snapshot make_snapshot(double time, const std::vector<const SpectralField*>& fields) {
    if (fields.empty()) throw std::invalid_argument("snapshot needs at least one field");
    const auto& grid = fields.front()->grid();
    Snapshot snap;
    snap.points_per_axis = static_cast<std::uint32_t>(grid.points_per_axis());
    snap.box_length = grid.box_length();
    snap.time = time;
    snap.real = true;
    for (const auto* f : fields) {
        if (f->grid_ptr() != fields.front()->grid_ptr()) throw std::invalid_argument("snapshot fields must share a grid");
        snap.real = snap.real && f->is_real();
        snap.components.emplace_back(f->coefficients().begin(), f->coefficients().end());
    }
    return snap;
}

void write_snapshot(std::ostream& os, const Snapshot& snap) {
    os.write("EPNS", 4);
    put<std::uint32_t>(os, Snapshot::kVersion);
    put<std::uint32_t>(os, snap.points_per_axis);
    put<double>(os, snap.box_length);
    put<double>(os, snap.time);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snap.components.size()));
    put<std::uint8_t>(os, snap.real ? 1 : 0);
    const std::size_t n = snap.points_per_axis;
    for (const auto& comp : snap.components) {
        if (comp.size() != n * n * n) throw std::invalid_argument("snapshot component has wrong size");
        for (const auto& c : comp) {
            put<double>(os, c.real());
            put<double>(os, c.imag());
        }
    }
    if (!os) throw std::runtime_error("failed writing snapshot");
}

Snapshot read_snapshot(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "EPNS", 4) != 0) throw std::runtime_error("not an EPNS snapshot");
    const auto version = get<std::uint32_t>(is);
    if (version != Snapshot::kVersion) throw std::runtime_error("unsupported snapshot version");
    Snapshot snap;
    snap.points_per_axis = get<std::uint32_t>(is);
    snap.box_length = get<double>(is);
    snap.time = get<double>(is);
    const auto count = get<std::uint32_t>(is);
    snap.real = get<std::uint8_t>(is) != 0;
    const std::size_t n = snap.points_per_axis;
    snap.components.resize(count);
    for (auto& comp : snap.components) {
        comp.resize(n * n * n);
        for (auto& c : comp) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            c = {re, im};
        }
    }
    return snap;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    write_snapshot(os, snap);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_snapshot(is);
}

}  // namespace epns
