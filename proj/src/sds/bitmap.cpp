#include "skg/sds/bitmap.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace skg::sds {

namespace {

uint64_t low_mask(uint64_t bits) {
    return bits >= 64 ? ~uint64_t(0) : (uint64_t(1) << bits) - 1;
}

}  // namespace

BitMap::BitMap(const std::vector<bool>& bits) : n_(bits.size()) {
    words_.assign((n_ + 63) / 64, 0);
    for (uint64_t i = 0; i < n_; ++i)
        if (bits[i]) words_[i >> 6] |= uint64_t(1) << (i & 63);
    build_rank();
}

BitMap::BitMap(std::vector<uint64_t> words, uint64_t n_bits)
    : words_(std::move(words)), n_(n_bits) {
    if (words_.size() != (n_ + 63) / 64)
        throw std::invalid_argument("word count does not match bit length");
    if (n_ % 64 != 0 && !words_.empty())
        words_.back() &= low_mask(n_ % 64);  // keep padding bits clear
    build_rank();
}

void BitMap::build_rank() {
    const uint64_t blocks = (n_ + kBlockBits - 1) / kBlockBits;
    rank_.assign(blocks + 1, 0);
    uint64_t total = 0;
    const uint64_t words_per_block = kBlockBits / 64;
    for (uint64_t b = 0; b < blocks; ++b) {
        rank_[b] = total;
        const uint64_t w_end = std::min<uint64_t>((b + 1) * words_per_block, words_.size());
        for (uint64_t w = b * words_per_block; w < w_end; ++w)
            total += std::popcount(words_[w]);
    }
    rank_[blocks] = total;
}

bool BitMap::access(uint64_t i) const {
    if (i >= n_)
        throw std::out_of_range("BitMap::access: index " + std::to_string(i) +
                                " out of range for length " + std::to_string(n_));
    return (words_[i >> 6] >> (i & 63)) & 1;
}

uint64_t BitMap::rank(uint64_t i, bool c) const {
    if (i > n_)
        throw std::out_of_range("BitMap::rank: prefix bound " + std::to_string(i) +
                                " exceeds length " + std::to_string(n_));
    const uint64_t block = i / kBlockBits;
    uint64_t ones = rank_[std::min<uint64_t>(block, rank_.size() - 1)];
    const uint64_t target_word = i / 64;
    for (uint64_t w = block * (kBlockBits / 64); w < target_word; ++w)
        ones += std::popcount(words_[w]);
    if (i % 64)
        ones += std::popcount(words_[target_word] & low_mask(i % 64));
    return c ? ones : i - ones;
}

uint64_t BitMap::count(bool c) const {
    const uint64_t ones = rank_.empty() ? 0 : rank_.back();
    return c ? ones : n_ - ones;
}

uint64_t BitMap::block_count(uint64_t block, bool c) const {
    const uint64_t pos = std::min(block * kBlockBits, n_);
    return c ? rank_[block] : pos - rank_[block];
}

uint64_t BitMap::select(uint64_t k, bool c) const {
    const uint64_t total = count(c);
    if (k == total + 1) return n_;  // virtual sentinel
    if (k == 0 || k > total)
        throw std::out_of_range("BitMap::select: ordinal " + std::to_string(k) +
                                " out of range, count is " + std::to_string(total));

    // Last block whose running count is still below k.
    uint64_t left = 0, right = rank_.size() - 1;
    while (left < right) {
        const uint64_t mid = (left + right + 1) / 2;
        if (block_count(mid, c) < k)
            left = mid;
        else
            right = mid - 1;
    }

    uint64_t remaining = k - block_count(left, c);
    for (uint64_t w = left * (kBlockBits / 64);; ++w) {
        const uint64_t valid = std::min<uint64_t>(64, n_ - w * 64);
        uint64_t x = c ? words_[w] : ~words_[w];
        if (valid < 64) x &= low_mask(valid);
        const uint64_t cnt = std::popcount(x);
        if (remaining <= cnt) {
            while (--remaining) x &= x - 1;
            return w * 64 + std::countr_zero(x);
        }
        remaining -= cnt;
    }
}

}  // namespace skg::sds
