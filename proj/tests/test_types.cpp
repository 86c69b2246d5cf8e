#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "occ/rng.hpp"
#include "occ/types.hpp"

using namespace occ;

TEST_CASE("distribution validation") {
    CHECK_THROWS(Distribution({0.5, 0.4}));          // sum != 1
    CHECK_THROWS(Distribution({1.5, -0.5}));         // negative entry
    CHECK_NOTHROW(Distribution({0.5, 0.5 + 1e-10})); // inside the sum tolerance
    CHECK(Distribution::uniform(4).at(2) == doctest::Approx(0.25));
    CHECK_THROWS(Alphabet(1));
}

TEST_CASE("argmax ties break to the smallest index") {
    CHECK(Distribution({0.4, 0.4, 0.2}).argmax() == 0);
    CHECK(Distribution({0.2, 0.4, 0.4}).argmax() == 1);
}

TEST_CASE("outage distortion") {
    CHECK(outage_distortion(3, 3) == 0.0);
    CHECK(outage_distortion(3, 7) == 1.0);
    CHECK(outage_distortion(0, 1) == 1.0);
}

TEST_CASE("cosine matrix from simple embeddings") {
    // Orthogonal unit vectors -> 0.5 off the diagonal.
    auto m = cosine_matrix_from_embeddings({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(m(0, 1) == doctest::Approx(0.5));
    CHECK(m(0, 0) == 0.0);
    // Antipodal -> 1.
    auto anti = cosine_matrix_from_embeddings({{1.0, 0.0}, {-1.0, 0.0}});
    CHECK(anti(0, 1) == doctest::Approx(1.0));
    // Identical embeddings -> all zeros.
    auto same = cosine_matrix_from_embeddings({{2.0, 1.0}, {2.0, 1.0}});
    CHECK(same(0, 1) == doctest::Approx(0.0));
    CHECK_THROWS(cosine_matrix_from_embeddings({{0.0, 0.0}, {1.0, 0.0}}));
}

TEST_CASE("cosine matrix matches a direct recomputation") {
    auto emb = synthetic_embeddings(8, 5, 1234);
    auto m = cosine_matrix_from_embeddings(emb);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            // Independent recomputation of the normalized-cosine distance.
            double dot = 0, ni = 0, nj = 0;
            for (int k = 0; k < 5; ++k) {
                dot += emb[i][k] * emb[j][k];
                ni += emb[i][k] * emb[i][k];
                nj += emb[j][k] * emb[j][k];
            }
            const double expected = 0.5 * (1.0 - dot / std::sqrt(ni * nj));
            CHECK(m(i, j) == doctest::Approx(expected).epsilon(1e-12));
            CHECK(m(i, j) >= 0.0);
            CHECK(m(i, j) <= 1.0);
        }
        CHECK(m(i, i) == 0.0);
    }
}

TEST_CASE("distortion measure invariants hold on every constructed matrix") {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(uniform01(g) * 30);
        auto m = cosine_matrix_from_embeddings(synthetic_embeddings(n, 4, g()));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double d = m(static_cast<Symbol>(i), static_cast<Symbol>(j));
                CHECK(d >= 0.0);
                CHECK(d <= m.d_max());
                if (i == j) CHECK(d == 0.0);
            }
    }
}

TEST_CASE("outage equals the 0/1 matrix measure") {
    const std::size_t n = 6;
    std::vector<double> values(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 0.0;
    auto m = DistortionMeasure::matrix(n, values, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(m(static_cast<Symbol>(i), static_cast<Symbol>(j)) ==
                  outage_distortion(static_cast<Symbol>(i), static_cast<Symbol>(j)));
}

TEST_CASE("symbol file round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "occ_types_test";
    fs::create_directories(dir);
    const std::vector<Symbol> symbols = {0, 5, 17, 65535, 3};

    const auto bin = (dir / "s.bin").string();
    save_symbols_u16le(bin, symbols);
    CHECK(load_symbols_u16le(bin) == symbols);

    const auto js = (dir / "s.json").string();
    save_symbols_json(js, symbols);
    CHECK(load_symbols_json(js) == symbols);
    fs::remove_all(dir);
}
