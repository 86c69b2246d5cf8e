#include <doctest.h>

#include <cmath>
#include <random>

#include "occ/ocsc.hpp"
#include "occ/rng.hpp"

using namespace occ;

namespace {

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

TEST_CASE("high-probability set thresholding") {
    Distribution d({0.5, 0.3, 0.15, 0.05});
    CHECK(high_prob_set(d, 0.2) == std::vector<Symbol>{0, 1});
    CHECK(high_prob_set(d, 0.6).empty());
    CHECK(high_prob_set(d, 0.05) == std::vector<Symbol>{0, 1, 2, 3});  // closed inequality
    CHECK_THROWS(high_prob_set(d, -0.1));

    // s = 0 keeps every positive-probability symbol but drops exact zeros.
    Distribution z({0.5, 0.0, 0.5});
    CHECK(high_prob_set(z, 0.0) == std::vector<Symbol>{0, 2});
}

TEST_CASE("augmented truncated distribution") {
    Distribution d({0.5, 0.3, 0.15, 0.05});
    auto plan = build_plan(d, 0.2, 0.1);
    REQUIRE(plan.set == std::vector<Symbol>{0, 1});
    CHECK(plan.aug[0] == doctest::Approx(0.5625));
    CHECK(plan.aug[1] == doctest::Approx(0.3375));
    CHECK(plan.aug[2] == doctest::Approx(0.1));

    auto lossless = build_plan(d, 0.2, 0.0);
    CHECK(lossless.aug[0] == doctest::Approx(0.625));
    CHECK(lossless.aug[1] == doctest::Approx(0.375));
    CHECK(lossless.aug[2] == 0.0);

    auto empty = build_plan(d, 0.6, 0.1);
    CHECK(empty.set.empty());
    REQUIRE(empty.aug.size() == 1);
    CHECK(empty.aug[0] == 1.0);
}

TEST_CASE("a target of one forces the pure-outage plan") {
    Distribution d({0.5, 0.5});
    auto plan = build_plan(d, 0.0, 1.0);
    CHECK(plan.set.empty());
    CHECK(ocsc_encode_step(plan, 0).message.length() == 0);
}

TEST_CASE("encode step lengths") {
    Distribution d({0.5, 0.3, 0.15, 0.05});
    auto plan = build_plan(d, 0.2, 0.1);

    auto in_set = ocsc_encode_step(plan, 0);
    CHECK(in_set.x_tilde == 0);
    CHECK(in_set.message.length() == 1);  // ceil(-log2 0.5625) = 1
    CHECK(in_set.ideal_bits == doctest::Approx(-std::log2(0.5625)));

    auto outed = ocsc_encode_step(plan, 3);
    CHECK(outed.x_tilde == kOutage);
    CHECK(outed.message.length() == 4);  // ceil(-log2 0.1) = 4
}

TEST_CASE("decode step recovers set members and falls back outside") {
    Distribution d({0.5, 0.3, 0.15, 0.05});
    auto plan = build_plan(d, 0.2, 0.1);

    auto m1 = ocsc_encode_step(plan, 1);
    CHECK(ocsc_decode_step(d, plan, m1.message.bits) == 1);

    auto mo = ocsc_encode_step(plan, 3);
    CHECK(ocsc_decode_step(d, plan, mo.message.bits) == 2);  // argmax outside {0,1}

    // Tie outside the set breaks to the smallest index.
    Distribution tie({0.4, 0.3, 0.15, 0.15});
    auto plan_tie = build_plan(tie, 0.2, 0.1);
    REQUIRE(plan_tie.set == std::vector<Symbol>{0, 1});
    auto mo2 = ocsc_encode_step(plan_tie, 2);
    CHECK(ocsc_decode_step(tie, plan_tie, mo2.message.bits) == 2);
}

TEST_CASE("empty set decodes to the global argmax") {
    Distribution d({0.2, 0.5, 0.3});
    auto plan = build_plan(d, 0.9, 0.1);
    REQUIRE(plan.set.empty());
    auto m = ocsc_encode_step(plan, 0);
    CHECK(m.message.length() == 0);
    CHECK(ocsc_decode_step(d, plan, {}) == 1);
}

TEST_CASE("threshold update arithmetic") {
    ConformalState st;
    st.lambda = 1.0;
    st.eta = 0.1;
    st.target_d = 0.2;
    CHECK(update_lambda_ocsc(st, 1).lambda == doctest::Approx(0.92));
    CHECK(update_lambda_ocsc(st, 0).lambda == doctest::Approx(1.02));
    CHECK_THROWS(update_lambda_ocsc(st, 2));
}

TEST_CASE("fuzz: in-set symbols always round trip exactly") {
    std::mt19937_64 g(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(uniform01(g) * 30);
        Distribution d(random_distribution(g, n));
        const double s = uniform01(g) * 0.3;
        const double D = uniform01(g) * 0.9;
        auto plan = build_plan(d, s, D);
        for (Symbol x = 0; x < static_cast<Symbol>(n); ++x) {
            auto enc = ocsc_encode_step(plan, x);
            const Symbol decoded = ocsc_decode_step(d, plan, enc.message.bits);
            if (plan.in_set(x)) {
                CHECK(enc.x_tilde == x);
                CHECK(decoded == x);
            } else {
                CHECK(enc.x_tilde == kOutage);
                CHECK_FALSE(plan.in_set(decoded));
            }
        }
    }
}

TEST_CASE("telescoping identity over a 2000-step replay") {
    // Replay the update against an independently accumulated outage count.
    std::mt19937_64 g(555);
    const double eta = 0.1, D = 0.2, lambda0 = 0.1;
    ConformalState st;
    st.lambda = lambda0;
    st.lambda0 = lambda0;
    st.eta = eta;
    st.target_d = D;

    const long T = 2000;
    double outage_sum = 0;
    double lambda_min = lambda0;
    for (long t = 0; t < T; ++t) {
        const int outage = uniform01(g) < 0.25 ? 1 : 0;
        outage_sum += outage;
        st = update_lambda_ocsc(st, outage);
        lambda_min = std::min(lambda_min, st.lambda);
    }
    const double lhs = outage_sum / static_cast<double>(T);
    const double rhs = D + (lambda0 - st.lambda) / (eta * static_cast<double>(T));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    CHECK(std::fabs(lhs - rhs) < 1e-7);
}

TEST_CASE("two replicas fed the same observables stay synchronized") {
    std::mt19937_64 g(31);
    ConformalState a, b;
    a.lambda = b.lambda = 0.1;
    a.eta = b.eta = 0.05;
    a.target_d = b.target_d = 0.3;
    for (int t = 0; t < 500; ++t) {
        const int outage = uniform01(g) < 0.3 ? 1 : 0;
        a = update_lambda_ocsc(a, outage);
        b = update_lambda_ocsc(b, outage);
        CHECK(a.lambda == b.lambda);
        CHECK(a.hyperparameter() == b.hyperparameter());
    }
}
