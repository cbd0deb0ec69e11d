#pragma once

#include <cstdint>
#include <vector>

namespace skg::sds {

// Bit sequence with a sampled rank index. Immutable after construction; any
// number of threads may query it concurrently.
//
// Conventions (shared with WaveletTree):
//   access(i)    bit at 0-based position i, 0 <= i < size()
//   rank(i, c)   occurrences of c in the exclusive prefix [0, i), 0 <= i <= size()
//   select(k, c) 0-based position of the k-th occurrence of c (k is 1-ordinal);
//                select(count(c) + 1, c) == size() is a virtual sentinel so the
//                end of the last block of a chained layout can be located.
class BitMap {
public:
    BitMap() = default;
    explicit BitMap(const std::vector<bool>& bits);
    BitMap(std::vector<uint64_t> words, uint64_t n_bits);  // bit i = word[i/64] >> (i%64)

    [[nodiscard]] bool access(uint64_t i) const;
    [[nodiscard]] uint64_t rank(uint64_t i, bool c) const;
    [[nodiscard]] uint64_t select(uint64_t k, bool c) const;

    [[nodiscard]] uint64_t size() const { return n_; }
    [[nodiscard]] bool empty() const { return n_ == 0; }
    [[nodiscard]] uint64_t count(bool c) const;

    [[nodiscard]] const std::vector<uint64_t>& words() const { return words_; }
    [[nodiscard]] const std::vector<uint64_t>& rank_samples() const { return rank_; }

    bool operator==(const BitMap&) const = default;

    static constexpr uint64_t kBlockBits = 512;

private:
    void build_rank();
    [[nodiscard]] uint64_t block_count(uint64_t block, bool c) const;

    std::vector<uint64_t> words_;
    // rank_[j] = set bits before position j * kBlockBits; one trailing entry
    // holds the total so count() is O(1).
    std::vector<uint64_t> rank_{0};
    uint64_t n_ = 0;
};

}  // namespace skg::sds
