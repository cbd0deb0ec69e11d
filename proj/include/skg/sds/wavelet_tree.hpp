#pragma once

#include <cstdint>
#include <vector>

#include "skg/sds/bitmap.hpp"

namespace skg::sds {

// Balanced wavelet tree over fixed-width codes, stored level-wise: the root
// bitmap holds the most significant bit of every code in sequence order and
// each further level partitions its parent's node ranges by the next bit.
// Index conventions match BitMap (exclusive-prefix rank, 1-ordinal select
// with the length sentinel). Immutable after construction.
class WaveletTree {
public:
    WaveletTree() = default;
    WaveletTree(const std::vector<uint64_t>& codes, unsigned alphabet_bits);
    WaveletTree(std::vector<BitMap> levels, uint64_t length, unsigned alphabet_bits);

    [[nodiscard]] uint64_t access(uint64_t i) const;
    [[nodiscard]] uint64_t rank(uint64_t i, uint64_t c) const;
    [[nodiscard]] uint64_t select(uint64_t k, uint64_t c) const;

    // Positions of c in [a, b), ascending. The store keeps the relevant ranges
    // sorted, which makes this the boundary search of a binary-searchable run;
    // the rank-space boundaries used here also cover scattered occurrences.
    [[nodiscard]] std::vector<uint64_t> range_search(uint64_t a, uint64_t b, uint64_t c) const;
    [[nodiscard]] uint64_t count_range(uint64_t a, uint64_t b, uint64_t c) const;

    [[nodiscard]] uint64_t size() const { return n_; }
    [[nodiscard]] bool empty() const { return n_ == 0; }
    [[nodiscard]] unsigned width() const { return width_; }
    [[nodiscard]] const std::vector<BitMap>& levels() const { return levels_; }

    bool operator==(const WaveletTree&) const = default;

private:
    [[nodiscard]] bool fits(uint64_t code) const;

    std::vector<BitMap> levels_;
    uint64_t n_ = 0;
    unsigned width_ = 0;
};

}  // namespace skg::sds
