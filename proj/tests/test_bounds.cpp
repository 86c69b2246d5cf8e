#include <doctest.h>

#include "occ/bounds.hpp"
#include "occ/config.hpp"
#include "occ/episode.hpp"

using namespace occ;
using namespace occ::bounds;

TEST_CASE("error-free threshold bound") {
    CHECK(theorem1_rhs(0.2, 0.1, 0.1, 1000) == doctest::Approx(0.2018));
    CHECK(theorem1_rhs(0.2, 0.1, 0.1, 1000000) == doctest::Approx(0.2).epsilon(1e-5));
    CHECK(theorem1_rhs(1.0, 0.3, 0.0, 10) == doctest::Approx(1.0));
    CHECK_THROWS(theorem1_rhs(0.2, 0.1, 0.1, 0));
}

TEST_CASE("error-free slope bound") {
    CHECK(theorem2_rhs(0.3, 0.1, 0.1, 6.0, 1.0, 3000) == doctest::Approx(0.3665566667));
    // Oracle predictor floor: L = 0.
    CHECK(theorem2_rhs(0.5, 0.2, 0.1, 0.0, 1.0, 100) ==
          doctest::Approx(0.5 + (0.2 * 0.5 - 0.1) / (0.2 * 100)));
    CHECK_THROWS(theorem2_rhs(0.0, 0.1, 0.1, 6.0, 1.0, 100));
}

TEST_CASE("queue-form constants") {
    CHECK(ca_K(CaScheme::Sparse, 0.1, 0.1, 0.0, 1.0, 0.05) == doctest::Approx(0.195));
    CHECK(prop1_rhs(CaScheme::Sparse, 0.4, 0.1, 0.1, 0.0, 1.0, 0.05, 1000, 0.0) ==
          doctest::Approx(0.4 + 0.00195));
    CHECK(prop1_rhs(CaScheme::Sparse, 0.4, 0.1, 0.1, 0.0, 1.0, 0.05, 1000, 3.0) ==
          doctest::Approx(0.4 + 0.00195 + 0.003));
    // The slope-family K mirrors the error-free constant with D replaced by eps.
    const double K = ca_K(CaScheme::RateDistortion, 0.1, 0.1, 6.0, 1.0, 0.05);
    CHECK(K == doctest::Approx(6.0 / 0.05 + 0.1 * 0.95 - 0.1));
}

TEST_CASE("deterministic-channel bound") {
    const double rhs = theorem3_rhs(CaScheme::Sparse, 0.3, 0.1, 0.1, 0.0, 1.0, 0.05, 2000, 8);
    const double K = ca_K(CaScheme::Sparse, 0.1, 0.1, 0.0, 1.0, 0.05);
    CHECK(rhs == doctest::Approx(0.3 + K / 200.0 + (8 * 0.75 + 0.25) / 2000.0));
    CHECK(queue_sup_bound(0.3, 1.0, 0.05, 8) == doctest::Approx(6.25));
    // tau_max = 1 with psi = 0: the channel term collapses to d_max / T.
    CHECK(queue_sup_bound(0.3, 1.0, 0.05, 1) == doctest::Approx(1.0));
}

TEST_CASE("every bound is nonincreasing in T") {
    long prev_T = 0;
    double prev1 = 1e9, prev2 = 1e9, prev3 = 1e9;
    for (long T : {10L, 100L, 1000L, 10000L, 100000L}) {
        const double r1 = theorem1_rhs(0.2, 0.1, 0.1, T);
        const double r2 = theorem2_rhs(0.3, 0.1, 0.1, 6.0, 1.0, T);
        const double r3 = prop1_rhs(CaScheme::RateDistortion, 0.3, 0.1, 0.1, 6.0, 1.0, 0.05, T, 0.0);
        CHECK(r1 <= prev1);
        CHECK(r2 <= prev2);
        CHECK(r3 <= prev3);
        prev1 = r1;
        prev2 = r2;
        prev3 = r3;
        prev_T = T;
    }
    (void)prev_T;
}

TEST_CASE("verdicts never hold with negative slack") {
    RunConfig cfg;
    cfg.scheme = Scheme::Ocsc;
    cfg.T = 100;
    cfg.D = 0.2;
    EpisodeSummary e;
    e.T = 100;
    e.outage_rate = 0.5;  // far above the bound
    e.d_max = 1.0;
    auto v = verify(e, "theorem1", cfg);
    CHECK(v.status == VerdictStatus::Violated);
    CHECK(v.slack < 0);

    e.outage_rate = 0.1;
    v = verify(e, "theorem1", cfg);
    CHECK(v.status == VerdictStatus::Holds);
    CHECK(v.slack >= 0);
}

TEST_CASE("inapplicable combinations are reported as such") {
    RunConfig cfg;
    cfg.scheme = Scheme::LlmzipDropout;
    EpisodeSummary e;
    e.T = 10;
    CHECK(verify(e, "theorem1", cfg).status == VerdictStatus::NotApplicable);
    CHECK(verify(e, "prop1", cfg).status == VerdictStatus::NotApplicable);
    CHECK_THROWS(verify(e, "no-such-theorem", cfg));

    // A channel-adaptive run on a stochastic channel has no theorem-3 verdict.
    RunConfig ca;
    ca.scheme = Scheme::CaOcrdc;
    ca.D = 0.3;
    ca.channel.kind = ChannelConfig::Kind::Bernoulli;
    ca.channel.e = 0.1;
    EpisodeSummary es;
    es.T = 10;
    es.predictor_L = 10.0;
    CHECK(verify(es, "theorem3", ca).status == VerdictStatus::NotApplicable);
    CHECK(verify(es, "theorem4", ca).status != VerdictStatus::NotApplicable);
    CHECK(verify(es, "theorem5", ca).status == VerdictStatus::NotApplicable);
}
