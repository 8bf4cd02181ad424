#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "epns/spectral_field.hpp"

namespace epns {

/// Binary field snapshot.
///
/// Layout (little-endian, no padding, 33-byte header):
///   char[4] "EPNS" | u32 version | u32 N | f64 L | f64 t | u32 n_components | u8 real_flag
/// followed by n_components blocks of N^3 (re, im) f64 pairs in the grid's
/// row-major FFT mode order.
struct Snapshot {
    static constexpr std::uint32_t kVersion = 1;

    std::uint32_t points_per_axis = 0;
    double box_length = 0.0;
    double time = 0.0;
    bool real = true;
    std::vector<std::vector<Complex>> components;

    /// Rebuilds component `index` on `grid`; N and L must match.
    SpectralField field(const GridPtr& grid, std::size_t index) const;
};

Snapshot make_snapshot(double time, const std::vector<const SpectralField*>& fields);

void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace epns
