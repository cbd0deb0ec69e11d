#include "skg/sds/wavelet_tree.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace skg::sds {

bool WaveletTree::fits(uint64_t code) const {
    return width_ >= 64 || (code >> width_) == 0;
}

WaveletTree::WaveletTree(const std::vector<uint64_t>& codes, unsigned alphabet_bits)
    : n_(codes.size()), width_(alphabet_bits) {
    if (width_ > 64) throw std::invalid_argument("alphabet width exceeds 64 bits");
    for (uint64_t c : codes)
        if (!fits(c))
            throw std::invalid_argument("code " + std::to_string(c) +
                                        " does not fit in " + std::to_string(width_) + " bits");

    levels_.reserve(width_);
    std::vector<uint64_t> cur = codes, next(n_);
    // Node ranges of the current level; children stay contiguous, so each
    // level is produced by partitioning every node by the next bit.
    std::vector<std::pair<uint64_t, uint64_t>> nodes{{0, n_}}, next_nodes;
    for (unsigned level = 0; level < width_ && n_ > 0; ++level) {
        const unsigned shift = width_ - 1 - level;
        std::vector<bool> bits(n_);
        next_nodes.clear();
        for (auto [s, e] : nodes) {
            uint64_t zeros = 0;
            for (uint64_t i = s; i < e; ++i)
                if (!((cur[i] >> shift) & 1)) ++zeros;
            uint64_t p0 = s, p1 = s + zeros;
            for (uint64_t i = s; i < e; ++i) {
                const bool b = (cur[i] >> shift) & 1;
                bits[i] = b;
                next[b ? p1++ : p0++] = cur[i];
            }
            if (level + 1 < width_) {
                if (zeros) next_nodes.emplace_back(s, s + zeros);
                if (zeros < e - s) next_nodes.emplace_back(s + zeros, e);
            }
        }
        levels_.emplace_back(bits);
        cur.swap(next);
        nodes.swap(next_nodes);
    }
    if (n_ == 0)
        for (unsigned level = 0; level < width_; ++level)
            levels_.emplace_back(std::vector<bool>{});
}

WaveletTree::WaveletTree(std::vector<BitMap> levels, uint64_t length, unsigned alphabet_bits)
    : levels_(std::move(levels)), n_(length), width_(alphabet_bits) {
    if (levels_.size() != width_)
        throw std::invalid_argument("level count does not match alphabet width");
    for (const BitMap& bm : levels_)
        if (bm.size() != n_)
            throw std::invalid_argument("level length does not match sequence length");
}

uint64_t WaveletTree::access(uint64_t i) const {
    if (i >= n_)
        throw std::out_of_range("WaveletTree::access: index " + std::to_string(i) +
                                " out of range for length " + std::to_string(n_));
    uint64_t code = 0, s = 0, e = n_;
    for (const BitMap& bm : levels_) {
        const uint64_t zeros = bm.rank(e, 0) - bm.rank(s, 0);
        const bool b = bm.access(i);
        code = (code << 1) | (b ? 1 : 0);
        if (b) {
            i = s + zeros + (bm.rank(i, 1) - bm.rank(s, 1));
            s = s + zeros;
        } else {
            i = s + (bm.rank(i, 0) - bm.rank(s, 0));
            e = s + zeros;
        }
    }
    return code;
}

uint64_t WaveletTree::rank(uint64_t i, uint64_t c) const {
    if (i > n_)
        throw std::out_of_range("WaveletTree::rank: prefix bound " + std::to_string(i) +
                                " exceeds length " + std::to_string(n_));
    if (!fits(c)) return 0;
    uint64_t s = 0, e = n_, p = i;
    for (unsigned level = 0; level < width_; ++level) {
        const BitMap& bm = levels_[level];
        const uint64_t zeros = bm.rank(e, 0) - bm.rank(s, 0);
        if ((c >> (width_ - 1 - level)) & 1) {
            p = s + zeros + (bm.rank(p, 1) - bm.rank(s, 1));
            s = s + zeros;
        } else {
            p = s + (bm.rank(p, 0) - bm.rank(s, 0));
            e = s + zeros;
        }
    }
    return p - s;
}

uint64_t WaveletTree::select(uint64_t k, uint64_t c) const {
    const uint64_t total = fits(c) ? rank(n_, c) : 0;
    if (k == total + 1) return n_;  // virtual sentinel
    if (k == 0 || k > total)
        throw std::out_of_range("WaveletTree::select: ordinal " + std::to_string(k) +
                                " out of range, count is " + std::to_string(total));

    struct Frame {
        uint64_t node_start;
        bool bit;
    };
    std::vector<Frame> frames;
    frames.reserve(width_);
    uint64_t s = 0, e = n_;
    for (unsigned level = 0; level < width_; ++level) {
        const BitMap& bm = levels_[level];
        const uint64_t zeros = bm.rank(e, 0) - bm.rank(s, 0);
        const bool b = (c >> (width_ - 1 - level)) & 1;
        frames.push_back({s, b});
        if (b)
            s = s + zeros;
        else
            e = s + zeros;
    }
    // k-th occurrence inside the leaf, walked back up level by level.
    uint64_t pos = k;
    for (unsigned level = width_; level-- > 0;) {
        const BitMap& bm = levels_[level];
        const Frame& f = frames[level];
        const uint64_t abs = bm.select(bm.rank(f.node_start, f.bit) + pos, f.bit);
        pos = abs - f.node_start + 1;
    }
    return pos - 1;
}

uint64_t WaveletTree::count_range(uint64_t a, uint64_t b, uint64_t c) const {
    if (a > b || b > n_)
        throw std::out_of_range("WaveletTree::count_range: bad interval [" +
                                std::to_string(a) + ", " + std::to_string(b) + ")");
    if (!fits(c)) return 0;
    return rank(b, c) - rank(a, c);
}

std::vector<uint64_t> WaveletTree::range_search(uint64_t a, uint64_t b, uint64_t c) const {
    const uint64_t cnt = count_range(a, b, c);
    std::vector<uint64_t> positions;
    positions.reserve(cnt);
    const uint64_t base = fits(c) ? rank(a, c) : 0;
    for (uint64_t j = 1; j <= cnt; ++j)
        positions.push_back(select(base + j, c));
    return positions;
}

}  // namespace skg::sds
