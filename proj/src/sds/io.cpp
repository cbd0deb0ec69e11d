#include "skg/sds/io.hpp"

#include <istream>
#include <ostream>
#include <vector>

#include "skg/bytes.hpp"
#include "skg/errors.hpp"

namespace skg::sds {

void write_header(std::ostream& out, StructureTag tag) {
    bytes::write_raw(out, kMagic, 4);
    bytes::write_u8(out, static_cast<uint8_t>(tag));
}

StructureTag read_header(std::istream& in) {
    char magic[4];
    bytes::read_raw(in, magic, 4);
    for (int i = 0; i < 4; ++i)
        if (magic[i] != kMagic[i]) throw FormatError("bad magic bytes");
    const uint8_t tag = bytes::read_u8(in);
    if (tag < 0x01 || tag > 0x04) throw FormatError("unknown structure tag");
    return static_cast<StructureTag>(tag);
}

void expect_tag(std::istream& in, StructureTag tag) {
    if (read_header(in) != tag) throw FormatError("unexpected structure tag");
}

void save(const BitMap& bm, std::ostream& out) {
    write_header(out, StructureTag::BitMapTag);
    bytes::write_u64(out, bm.size());
    const uint64_t n_bytes = (bm.size() + 7) / 8;
    const std::vector<uint64_t>& words = bm.words();
    for (uint64_t k = 0; k < n_bytes; ++k)
        bytes::write_u8(out, static_cast<uint8_t>(words[k / 8] >> ((k % 8) * 8)));
    bytes::write_u64(out, bm.rank_samples().size());
    for (uint64_t sample : bm.rank_samples()) bytes::write_u64(out, sample);
}

BitMap load_bitmap(std::istream& in) {
    expect_tag(in, StructureTag::BitMapTag);
    const uint64_t n_bits = bytes::read_u64(in);
    const uint64_t n_bytes = (n_bits + 7) / 8;
    std::vector<uint64_t> words((n_bits + 63) / 64, 0);
    for (uint64_t k = 0; k < n_bytes; ++k)
        words[k / 8] |= static_cast<uint64_t>(bytes::read_u8(in)) << ((k % 8) * 8);
    BitMap bm(std::move(words), n_bits);

    const uint64_t sample_count = bytes::read_u64(in);
    if (sample_count != bm.rank_samples().size())
        throw FormatError("rank index size mismatch");
    for (uint64_t j = 0; j < sample_count; ++j)
        if (bytes::read_u64(in) != bm.rank_samples()[j])
            throw FormatError("rank index content mismatch");
    return bm;
}

void save(const WaveletTree& wt, std::ostream& out) {
    write_header(out, StructureTag::WaveletTreeTag);
    bytes::write_u64(out, wt.size());
    bytes::write_u8(out, static_cast<uint8_t>(wt.width()));
    for (const BitMap& level : wt.levels()) save(level, out);
}

WaveletTree load_wavelet_tree(std::istream& in) {
    expect_tag(in, StructureTag::WaveletTreeTag);
    const uint64_t length = bytes::read_u64(in);
    const unsigned width = bytes::read_u8(in);
    if (width > 64) throw FormatError("alphabet width exceeds 64 bits");
    std::vector<BitMap> levels;
    levels.reserve(width);
    for (unsigned level = 0; level < width; ++level) {
        levels.push_back(load_bitmap(in));
        if (levels.back().size() != length)
            throw FormatError("wavelet level length mismatch");
    }
    return WaveletTree(std::move(levels), length, width);
}

}  // namespace skg::sds
