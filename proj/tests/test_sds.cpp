#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "skg/errors.hpp"
#include "skg/sds/bitmap.hpp"
#include "skg/sds/io.hpp"
#include "skg/sds/wavelet_tree.hpp"
#include "support/naive_sds.hpp"

using skg::sds::BitMap;
using skg::sds::WaveletTree;
using testsupport::naive_range_search;
using testsupport::naive_rank;
using testsupport::naive_select;

namespace {

std::vector<bool> bits_of(const char* s) {
    std::vector<bool> bits;
    for (const char* p = s; *p; ++p) bits.push_back(*p == '1');
    return bits;
}

std::vector<bool> random_bits(std::mt19937_64& rng, uint64_t n, double density) {
    std::bernoulli_distribution bit(density);
    std::vector<bool> bits(n);
    for (uint64_t i = 0; i < n; ++i) bits[i] = bit(rng);
    return bits;
}

// ABFECBCCADEF with A..F = 0..5 on 3 bits.
const std::vector<uint64_t> kExample = {0, 1, 5, 4, 2, 1, 2, 2, 0, 3, 4, 5};

}  // namespace

TEST_CASE("bitmap access") {
    BitMap bm(bits_of("1011"));
    CHECK(bm.access(0) == true);
    CHECK(bm.access(1) == false);
    CHECK(bm.access(2) == true);
    CHECK(bm.access(3) == true);
    CHECK_THROWS_AS((void)bm.access(4), std::out_of_range);
}

TEST_CASE("bitmap rank is an exclusive prefix count") {
    BitMap bm(bits_of("1011"));
    CHECK(bm.rank(0, 1) == 0);
    CHECK(bm.rank(4, 1) == 3);
    CHECK(bm.rank(3, 0) == 1);
    for (uint64_t i = 0; i <= 4; ++i) CHECK(bm.rank(i, 1) + bm.rank(i, 0) == i);
    CHECK_THROWS_AS((void)bm.rank(5, 1), std::out_of_range);
}

TEST_CASE("bitmap select with the sentinel convention") {
    BitMap bm(bits_of("1011"));
    CHECK(bm.select(1, 1) == 0);
    CHECK(bm.select(3, 1) == 3);
    CHECK(bm.select(4, 1) == 4);  // count+1 -> length
    CHECK(bm.select(1, 0) == 1);
    CHECK(bm.select(2, 0) == 4);
    CHECK_THROWS_AS((void)bm.select(5, 1), std::out_of_range);
    CHECK_THROWS_AS((void)bm.select(0, 1), std::out_of_range);
}

TEST_CASE("empty bitmap") {
    BitMap bm;
    CHECK(bm.size() == 0);
    CHECK(bm.count(true) == 0);
    CHECK(bm.rank(0, 1) == 0);
    CHECK(bm.select(1, 1) == 0);  // sentinel of an empty sequence
}

TEST_CASE("bitmap matches the naive oracle on random inputs") {
    std::mt19937_64 rng(0x5eed0001);
    for (double density : {0.02, 0.5, 0.97}) {
        for (uint64_t n : {1ull, 63ull, 64ull, 65ull, 511ull, 512ull, 513ull, 9000ull}) {
            const std::vector<bool> bits = random_bits(rng, n, density);
            BitMap bm(bits);
            REQUIRE(bm.size() == n);
            for (int trial = 0; trial < 40; ++trial) {
                const uint64_t i = rng() % (n + 1);
                const bool c = rng() & 1;
                CHECK(bm.rank(i, c) == naive_rank(bits, i, c));
                if (i < n) CHECK(bm.access(i) == bits[i]);
            }
            for (bool c : {false, true}) {
                const uint64_t total = bm.count(c);
                CHECK(bm.select(total + 1, c) == n);
                for (int trial = 0; trial < 20 && total > 0; ++trial) {
                    const uint64_t k = 1 + rng() % total;
                    CHECK(bm.select(k, c) == *naive_select(bits, k, c));
                }
            }
        }
    }
}

TEST_CASE("rank and select round through each other") {
    std::mt19937_64 rng(0x5eed0002);
    const std::vector<bool> bits = random_bits(rng, 4000, 0.3);
    BitMap bm(bits);
    for (bool c : {false, true}) {
        const uint64_t total = bm.count(c);
        for (uint64_t k = 1; k <= total; ++k) CHECK(bm.rank(bm.select(k, c), c) == k - 1);
        for (uint64_t i = 0; i < bm.size(); ++i) {
            const uint64_t next = bm.rank(i, c) + 1;
            if (next <= total) CHECK(bm.select(next, c) >= i);
        }
    }
}

TEST_CASE("wavelet tree splits the running example by the top bit") {
    WaveletTree wt(kExample, 3);
    REQUIRE(wt.size() == 12);
    // root layer: ABCBCCAD goes left (0), FEEF goes right (1)
    const BitMap& root = wt.levels()[0];
    std::vector<int> expected = {0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(static_cast<int>(root.access(i)) == expected[i]);

    CHECK(wt.access(2) == 5);   // F
    CHECK(wt.rank(6, 2) == 1);  // one C in ABFECB
    CHECK(wt.select(2, 2) == 6);
    for (std::size_t i = 0; i < kExample.size(); ++i) CHECK(wt.access(i) == kExample[i]);
}

TEST_CASE("wavelet tree edge cases") {
    CHECK(WaveletTree({}, 3).size() == 0);
    WaveletTree constant({7, 7, 7}, 3);
    for (uint64_t i = 0; i < 3; ++i) CHECK(constant.access(i) == 7);
    CHECK(constant.levels()[0].count(true) == 3);
    CHECK_THROWS_AS(WaveletTree({8}, 3), std::invalid_argument);
    CHECK(WaveletTree({0, 0}, 0).size() == 2);  // zero-width alphabet
}

TEST_CASE("wavelet tree matches the naive oracle on random sequences") {
    std::mt19937_64 rng(0x5eed0003);
    for (unsigned width : {1u, 3u, 9u, 16u}) {
        const uint64_t sigma = uint64_t(1) << width;
        for (uint64_t n : {0ull, 1ull, 100ull, 4096ull}) {
            std::vector<uint64_t> seq(n);
            for (auto& v : seq) v = rng() % sigma;
            WaveletTree wt(seq, width);
            for (int trial = 0; trial < 60; ++trial) {
                const uint64_t c = rng() % sigma;
                const uint64_t i = n ? rng() % (n + 1) : 0;
                CHECK(wt.rank(i, c) == naive_rank(seq, i, c));
                if (i < n) CHECK(wt.access(i) == seq[i]);
                const uint64_t total = wt.rank(n, c);
                CHECK(wt.select(total + 1, c) == n);
                if (total) {
                    const uint64_t k = 1 + rng() % total;
                    CHECK(wt.select(k, c) == *naive_select(seq, k, c));
                }
            }
        }
    }
}

TEST_CASE("range search equals a linear scan of the segment") {
    std::vector<uint64_t> sorted = {2, 2, 3, 3, 3, 5};
    WaveletTree wt(sorted, 3);
    CHECK(wt.range_search(0, 6, 3) == std::vector<uint64_t>{2, 3, 4});
    CHECK(wt.range_search(0, 6, 4).empty());
    CHECK(wt.range_search(3, 3, 2).empty());
    CHECK_THROWS_AS((void)wt.range_search(4, 2, 3), std::out_of_range);

    std::mt19937_64 rng(0x5eed0004);
    std::vector<uint64_t> seq(600);
    for (auto& v : seq) v = rng() % 32;
    std::sort(seq.begin() + 100, seq.begin() + 400);  // the probed window is sorted
    WaveletTree wide(seq, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const uint64_t c = rng() % 32;
        CHECK(wide.range_search(100, 400, c) == naive_range_search(seq, 100, 400, c));
    }
}

TEST_CASE("serialization round-trips bit-exactly") {
    std::mt19937_64 rng(0x5eed0005);
    const std::vector<bool> bits = random_bits(rng, 1337, 0.4);
    BitMap bm(bits);
    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    skg::sds::save(bm, buf);
    BitMap back = skg::sds::load_bitmap(buf);
    CHECK(back == bm);
    for (uint64_t i = 0; i <= back.size(); i += 13) CHECK(back.rank(i, 1) == bm.rank(i, 1));

    WaveletTree wt(kExample, 3);
    std::stringstream buf2(std::ios::in | std::ios::out | std::ios::binary);
    skg::sds::save(wt, buf2);
    WaveletTree wt_back = skg::sds::load_wavelet_tree(buf2);
    CHECK(wt_back == wt);
    for (std::size_t i = 0; i < kExample.size(); ++i) CHECK(wt_back.access(i) == kExample[i]);

    BitMap empty;
    std::stringstream buf3(std::ios::in | std::ios::out | std::ios::binary);
    skg::sds::save(empty, buf3);
    CHECK(skg::sds::load_bitmap(buf3).size() == 0);
}

TEST_CASE("serialization rejects corrupt payloads") {
    BitMap bm(bits_of("10110100"));
    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    skg::sds::save(bm, buf);
    std::string raw = buf.str();

    std::istringstream truncated(raw.substr(0, raw.size() - 3), std::ios::binary);
    CHECK_THROWS_AS((void)skg::sds::load_bitmap(truncated), skg::FormatError);

    raw[0] = 'X';
    std::istringstream bad_magic(raw, std::ios::binary);
    CHECK_THROWS_AS((void)skg::sds::load_bitmap(bad_magic), skg::FormatError);
}

TEST_CASE("serialized wavelet tree stays within twice the raw code size") {
    std::mt19937_64 rng(0x5eed0006);
    const unsigned width = 12;
    std::vector<uint64_t> seq(10000);
    for (auto& v : seq) v = rng() % (1ull << width);
    WaveletTree wt(seq, width);
    std::ostringstream buf(std::ios::binary);
    skg::sds::save(wt, buf);
    const uint64_t bits = 8 * buf.str().size();
    const uint64_t budget = 2 * seq.size() * width + 64 * 1024;  // fixed overhead allowance
    CHECK(bits <= budget);
}
