#pragma once

#include <cstdint>
#include <iosfwd>

#include "skg/sds/bitmap.hpp"
#include "skg/sds/wavelet_tree.hpp"

namespace skg::sds {

// Binary format, identical on every platform:
//   magic "SKG1" | structure tag byte | little-endian u64 length |
//   raw bit payload padded to a byte boundary | auxiliary index payload.
// Wavelet trees nest one bitmap record per level after a width byte.

inline constexpr char kMagic[4] = {'S', 'K', 'G', '1'};

enum class StructureTag : uint8_t {
    BitMapTag = 0x01,
    WaveletTreeTag = 0x02,
    DictionaryTag = 0x03,
    ContainerTag = 0x04,
};

void write_header(std::ostream& out, StructureTag tag);
StructureTag read_header(std::istream& in);
void expect_tag(std::istream& in, StructureTag tag);

void save(const BitMap& bm, std::ostream& out);
void save(const WaveletTree& wt, std::ostream& out);

BitMap load_bitmap(std::istream& in);
WaveletTree load_wavelet_tree(std::istream& in);

}  // namespace skg::sds
