#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rskyline/core.hpp"

// Hilbert space-filling curve index for up to 8 dimensions at 16 bits per
// dimension (Skilling's transpose formulation).  Used to order candidate
// sets so nearby candidates land in the same batch.

namespace rskyline {

using HilbertKey = unsigned __int128;

inline constexpr int kHilbertBits = 16;

// Converts grid coordinates (kHilbertBits each) into the transpose form of
// the Hilbert index, then collects it into a single integer, most
// significant bit plane first.
inline HilbertKey hilbert_index(std::array<std::uint32_t, kMaxDim> x, int dims) {
    const std::uint32_t m = 1u << (kHilbertBits - 1);
    // inverse undo of the Gray-code rotation
    for (std::uint32_t q = m; q > 1; q >>= 1) {
        const std::uint32_t p = q - 1;
        for (int i = 0; i < dims; ++i) {
            if (x[static_cast<std::size_t>(i)] & q) {
                x[0] ^= p;
            } else {
                const std::uint32_t t = (x[0] ^ x[static_cast<std::size_t>(i)]) & p;
                x[0] ^= t;
                x[static_cast<std::size_t>(i)] ^= t;
            }
        }
    }
    for (int i = 1; i < dims; ++i) x[static_cast<std::size_t>(i)] ^= x[static_cast<std::size_t>(i - 1)];
    std::uint32_t t = 0;
    for (std::uint32_t q = m; q > 1; q >>= 1) {
        if (x[static_cast<std::size_t>(dims - 1)] & q) t ^= q - 1;
    }
    for (int i = 0; i < dims; ++i) x[static_cast<std::size_t>(i)] ^= t;

    HilbertKey key = 0;
    for (int bit = kHilbertBits - 1; bit >= 0; --bit) {
        for (int i = 0; i < dims; ++i) {
            key = (key << 1) | ((x[static_cast<std::size_t>(i)] >> bit) & 1u);
        }
    }
    return key;
}

// Hilbert key of a point scaled into the grid spanned by [lo, hi] per
// dimension; degenerate dimensions map to cell 0.
inline HilbertKey hilbert_key(const Point& p, const std::vector<double>& lo, const std::vector<double>& hi) {
    std::array<std::uint32_t, kMaxDim> cells{};
    const std::uint32_t max_cell = (1u << kHilbertBits) - 1;
    for (int i = 0; i < p.dim(); ++i) {
        const double span = hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
        std::uint32_t c = 0;
        if (span > 0) {
            const double t = (p[i] - lo[static_cast<std::size_t>(i)]) / span;
            const double scaled = t * static_cast<double>(max_cell + 1u);
            c = scaled <= 0 ? 0u
                            : (scaled >= static_cast<double>(max_cell) ? max_cell
                                                                       : static_cast<std::uint32_t>(scaled));
        }
        cells[static_cast<std::size_t>(i)] = c;
    }
    return hilbert_index(cells, p.dim());
}

}  // namespace rskyline
