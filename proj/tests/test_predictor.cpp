#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "occ/predictor.hpp"
#include "occ/rng.hpp"

using namespace occ;

TEST_CASE("uniform predictor") {
    auto p = Predictor::uniform(4);
    const std::vector<Symbol> ctx = {1, 2, 3};
    auto d = p.predict({ctx});
    for (int i = 0; i < 4; ++i) CHECK(d.at(i) == doctest::Approx(0.25));
    p.online_update({ctx}, 2);  // no-op kind
    CHECK(p.predict({ctx}).at(2) == doctest::Approx(0.25));
    CHECK(*p.assumption_bound_L() == doctest::Approx(2.0));
}

TEST_CASE("order-0 counts with smoothing") {
    // Counts (3,1,0,0), alpha = 0.4: 0.6*(0.75,0.25,0,0) + 0.1*(1,1,1,1).
    auto p = Predictor::markov(4, 0, 0.4);
    std::vector<Symbol> stream = {0, 0, 0, 1};
    p.train(stream);
    auto d = p.predict({{}});
    CHECK(d.at(0) == doctest::Approx(0.55));
    CHECK(d.at(1) == doctest::Approx(0.25));
    CHECK(d.at(2) == doctest::Approx(0.1));
    CHECK(d.at(3) == doctest::Approx(0.1));
}

TEST_CASE("order-1 predictions match an independent count-and-normalize") {
    const std::vector<Symbol> corpus = {0, 1, 0, 1, 1, 2, 0, 1, 0, 0, 2, 1};
    const int n = 3;
    const double alpha = 0.2;
    auto p = Predictor::markov(n, 1, alpha);
    p.train(corpus);

    // Independent oracle: count ctx -> next transitions directly.
    std::map<Symbol, std::vector<double>> counts;
    for (std::size_t i = 1; i < corpus.size(); ++i) {
        auto& row = counts[corpus[i - 1]];
        if (row.empty()) row.assign(n, 0.0);
        row[static_cast<std::size_t>(corpus[i])] += 1.0;
    }
    for (const auto& [ctx_sym, row] : counts) {
        double total = 0;
        for (double v : row) total += v;
        const std::vector<Symbol> ctx = {ctx_sym};
        auto d = p.predict({ctx});
        for (int x = 0; x < n; ++x) {
            const double expected = (1 - alpha) * row[static_cast<std::size_t>(x)] / total +
                                    alpha / static_cast<double>(n);
            CHECK(d.at(x) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("unseen context falls back to the order-0 marginal") {
    auto p = Predictor::markov(3, 2, 0.3);
    const std::vector<Symbol> corpus = {0, 0, 1, 0, 0, 1};
    p.train(corpus);
    // Context (2,2) never occurs; marginal counts are (4,2,0).
    const std::vector<Symbol> ctx = {2, 2};
    auto d = p.predict({ctx});
    CHECK(d.at(0) == doctest::Approx(0.7 * 4.0 / 6.0 + 0.1));
    CHECK(d.at(1) == doctest::Approx(0.7 * 2.0 / 6.0 + 0.1));
    CHECK(d.at(2) == doctest::Approx(0.1));
}

TEST_CASE("online updates over a stream match offline recounting") {
    std::mt19937_64 g(99);
    std::vector<Symbol> stream;
    for (int i = 0; i < 100; ++i) stream.push_back(static_cast<Symbol>(uniform01(g) * 5));

    auto online = Predictor::markov(5, 2, 0.1);
    for (std::size_t i = 0; i < stream.size(); ++i)
        online.online_update({std::span<const Symbol>(stream.data(), i)}, stream[i]);

    auto offline = Predictor::markov(5, 2, 0.1);
    offline.train(stream);

    // Identical tables imply identical predictions everywhere; spot-check all
    // length-2 contexts plus the short-context fallback.
    for (Symbol a = 0; a < 5; ++a) {
        for (Symbol b = 0; b < 5; ++b) {
            const std::vector<Symbol> ctx = {a, b};
            const auto d1 = online.predict({ctx});
            const auto d2 = offline.predict({ctx});
            for (int x = 0; x < 5; ++x) CHECK(d1.at(x) == d2.at(x));
        }
    }
    const std::vector<Symbol> short_ctx = {1};
    const auto d1 = online.predict({short_ctx});
    const auto d2 = offline.predict({short_ctx});
    for (int x = 0; x < 5; ++x) CHECK(d1.at(x) == d2.at(x));
}

TEST_CASE("counting example from the update contract") {
    auto p = Predictor::markov(2, 0, 0.5);
    p.online_update({{}}, 1);
    p.online_update({{}}, 1);
    auto d = p.predict({{}});
    // counts (0,2) -> empirical (0,1); 0.5*(0,1) + 0.25*(1,1)
    CHECK(d.at(0) == doctest::Approx(0.25));
    CHECK(d.at(1) == doctest::Approx(0.75));
}

TEST_CASE("code-length bound L") {
    CHECK(*Predictor::uniform(4).assumption_bound_L() == doctest::Approx(2.0));
    CHECK(*Predictor::markov(32, 1, 0.5).assumption_bound_L() == doctest::Approx(6.0));
    // A 50257-token vocabulary needs 16 bits per symbol uncompressed.
    const double L = *Predictor::markov(50257, 0, 1.0).assumption_bound_L();
    CHECK(L == doctest::Approx(15.617).epsilon(1e-3));
    CHECK(std::ceil(L) == 16.0);

    auto unbounded = Predictor::scripted(2, {{1.0, 0.0}}, 0.0);
    CHECK_FALSE(unbounded.assumption_bound_L().has_value());
    auto floored = Predictor::scripted(2, {{1.0, 0.0}}, 0.1);
    CHECK(*floored.assumption_bound_L() == doctest::Approx(std::log2(20.0)));
}

TEST_CASE("scripted predictor replays lines by prefix length") {
    auto p = Predictor::scripted(2, {{0.9, 0.1}, {0.2, 0.8}}, 0.0);
    const std::vector<Symbol> empty = {};
    const std::vector<Symbol> one = {0};
    const std::vector<Symbol> two = {0, 1};
    CHECK(p.predict({empty}).at(0) == doctest::Approx(0.9));
    CHECK(p.predict({one}).at(1) == doctest::Approx(0.8));
    CHECK(p.predict({two}).at(0) == doctest::Approx(0.9));  // wraps
}

TEST_CASE("smoothing floor and unit sum under fuzzing") {
    std::mt19937_64 g(123);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(uniform01(g) * 40);
        const double alpha = 0.01 + uniform01(g) * 0.99;
        auto p = Predictor::markov(n, 2, alpha);
        std::vector<Symbol> stream;
        for (int i = 0; i < 200; ++i) stream.push_back(static_cast<Symbol>(uniform01(g) * n));
        p.train(stream);

        std::vector<Symbol> ctx;
        for (int i = 0; i < 5; ++i) ctx.push_back(static_cast<Symbol>(uniform01(g) * n));
        const auto d = p.predict({ctx});
        double total = 0;
        for (int x = 0; x < n; ++x) {
            CHECK(d.at(x) >= alpha / n - 1e-15);
            total += d.at(x);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

        // Determinism: identical state and context give identical bits.
        const auto d2 = p.predict({ctx});
        for (int x = 0; x < n; ++x) CHECK(d.at(x) == d2.at(x));
    }
}
