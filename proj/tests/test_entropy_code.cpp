#include <doctest.h>

#include <cmath>
#include <random>

#include "occ/entropy_code.hpp"
#include "occ/rng.hpp"

using namespace occ;

namespace {

// Brute-force prefix check: no codeword may be a prefix of another.
bool prefix_free(const Codebook& book) {
    const auto& support = book.support();
    for (std::size_t i = 0; i < support.size(); ++i) {
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (i == j) continue;
            const auto& a = book.codeword(support[i]);
            const auto& b = book.codeword(support[j]);
            if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) return false;
        }
    }
    return true;
}

std::vector<double> random_distribution(std::mt19937_64& g, std::size_t n) {
    std::vector<double> p(n);
    double sum = 0;
    for (auto& v : p) {
        v = -std::log(1.0 - uniform01(g));
        sum += v;
    }
    for (auto& v : p) v /= sum;
    return p;
}

}  // namespace

TEST_CASE("shannon lengths") {
    CHECK(shannon_length(1.0) == 0);
    CHECK(shannon_length(0.5) == 1);
    CHECK(shannon_length(0.5625) == 1);
    CHECK(shannon_length(0.25) == 2);
    CHECK(shannon_length(0.3) == 2);
    CHECK(shannon_length(0.15) == 3);
    CHECK(shannon_length(0.1) == 4);
    CHECK(shannon_length(0.05) == 5);
    CHECK_THROWS(shannon_length(0.0));
}

TEST_CASE("dyadic pair") {
    auto book = Codebook::build(std::vector<double>{0.5, 0.5});
    CHECK(book.length(0) == 1);
    CHECK(book.length(1) == 1);
    CHECK(book.codeword(0) == BitString{0});
    CHECK(book.codeword(1) == BitString{1});
    CHECK(book.encode(1).bits == BitString{1});
}

TEST_CASE("shannon lengths for a known distribution") {
    auto book = Codebook::build(std::vector<double>{0.5, 0.3, 0.15, 0.05});
    CHECK(book.length(0) == 1);
    CHECK(book.length(1) == 2);
    CHECK(book.length(2) == 3);
    CHECK(book.length(3) == 5);
    CHECK(book.kraft_sum() <= 1.0);
    CHECK(prefix_free(book));
}

TEST_CASE("zero-probability symbols are excluded from the support") {
    auto book = Codebook::build(std::vector<double>{0.6, 0.0, 0.4});
    CHECK(book.in_support(0));
    CHECK_FALSE(book.in_support(1));
    CHECK(book.in_support(2));
    CHECK_THROWS(book.encode(1));
    CHECK_THROWS(Codebook::build(std::vector<double>{0.0, 0.0}));
}

TEST_CASE("singleton support encodes to the empty message") {
    auto book = Codebook::build(std::vector<double>{0.0, 1.0});
    CHECK(book.support_size() == 1);
    CHECK(book.encode(1).length() == 0);
    const auto [sym, consumed] = book.decode({});
    CHECK(sym == 1);
    CHECK(consumed == 0);
}

TEST_CASE("random codebooks: prefix-free, Kraft, round trip, H+1") {
    std::mt19937_64 g(42);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(uniform01(g) * 62);
        const auto p = random_distribution(g, n);
        const auto book = Codebook::build(p);

        CHECK(book.kraft_sum() <= 1.0 + 1e-12);
        CHECK(prefix_free(book));

        double expected_len = 0, entropy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] <= 0) continue;
            const int sym = static_cast<int>(i);
            const Message m = book.encode(sym);
            CHECK(m.length() == static_cast<std::size_t>(book.length(sym)));

            // Round trip, with noise appended past the codeword.
            BitString bits = m.bits;
            bits.push_back(1);
            bits.push_back(0);
            const auto [decoded, consumed] = book.decode(bits);
            CHECK(decoded == sym);
            CHECK(consumed == m.length());

            expected_len += p[i] * static_cast<double>(book.length(sym));
            entropy -= p[i] * std::log2(p[i]);
        }
        CHECK(expected_len <= entropy + 1.0 + 1e-9);
    }
}

TEST_CASE("decode rejects a corrupt stream") {
    // Lengths 1,2,3,5 leave some prefixes unassigned: 11110... matches nothing.
    auto book = Codebook::build(std::vector<double>{0.5, 0.3, 0.15, 0.05});
    BitString bad{1, 1, 1, 1, 0, 0, 0, 0};
    bool any_prefix = false;
    for (int sym : book.support()) {
        const auto& w = book.codeword(sym);
        any_prefix |= w.size() <= bad.size() && std::equal(w.begin(), w.end(), bad.begin());
    }
    if (!any_prefix) CHECK_THROWS(book.decode(bad));
}

TEST_CASE("MSB-first packing") {
    CHECK(pack_msb_first({1, 0, 1}) == std::vector<std::uint8_t>{0xA0});
    CHECK(pack_msb_first({1, 1, 1, 1, 0, 0, 0, 0, 1}) == std::vector<std::uint8_t>{0xF0, 0x80});
    CHECK(bits_to_hex({1, 0, 1}) == "a0");
    CHECK(bits_to_hex({}) == "");
}
