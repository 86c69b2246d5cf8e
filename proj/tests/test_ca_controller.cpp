#include <doctest.h>

#include <cmath>
#include <random>

#include "occ/ca_controller.hpp"
#include "occ/rng.hpp"

using namespace occ;

TEST_CASE("ml fallback is the argmax with smallest-index ties") {
    CHECK(ml_fallback(Distribution({0.5, 0.3, 0.2})) == 0);
    CHECK(ml_fallback(Distribution({0.4, 0.4, 0.2})) == 0);
    CHECK(ml_fallback(Distribution::uniform(5)) == 0);
}

TEST_CASE("channel distortion bound") {
    const auto outage = DistortionMeasure::outage();
    CHECK(channel_distortion_bound(CompressorFamily::Sparse, 1, outage, 2, 2, 0) == 1.0);
    CHECK(channel_distortion_bound(CompressorFamily::Sparse, 0, outage, 2, 2, 2) == 0.0);
    CHECK(channel_distortion_bound(CompressorFamily::RateDistortion, 0, outage, 2, 2, 2) == 0.0);
    // x = 2 transmitted exactly, erased to 0: bound = d(2,0) - d(2,2) = 1.
    CHECK(channel_distortion_bound(CompressorFamily::RateDistortion, 1, outage, 2, 2, 0) == 1.0);
}

TEST_CASE("true channel distortion") {
    const auto outage = DistortionMeasure::outage();
    // Erased, the symbol was exactly recoverable, and it differs from the argmax.
    CHECK(true_channel_distortion(CompressorFamily::Sparse, 1, outage, 2, 2, 0, 2, 0) == 1.0);
    // Erased but the symbol IS the argmax: nothing was lost.
    CHECK(true_channel_distortion(CompressorFamily::Sparse, 1, outage, 0, 0, 0, 0, 0) == 0.0);
    CHECK(true_channel_distortion(CompressorFamily::Sparse, 0, outage, 2, 2, 2, 2, 0) == 0.0);
    // Slope family: the bound is tight.
    CHECK(true_channel_distortion(CompressorFamily::RateDistortion, 1, outage, 2, 2, 0, 2, 0) ==
          channel_distortion_bound(CompressorFamily::RateDistortion, 1, outage, 2, 2, 0));
}

TEST_CASE("adjustment policy caps at D - epsilon") {
    DistortionQueue q;
    q.epsilon = 0.05;
    CHECK(next_adjustment(q, 0.3) == 0.0);
    q.delta_ch_cum = 5.0;
    CHECK(next_adjustment(q, 0.3) == doctest::Approx(0.25));
    q.delta_ch_cum = 0.1;
    CHECK(next_adjustment(q, 0.3) == doctest::Approx(0.1));
    q.epsilon = 0.3;
    CHECK_THROWS(next_adjustment(q, 0.3));  // D <= epsilon
}

TEST_CASE("doubly-adaptive update arithmetic") {
    ConformalState st;
    st.lambda = 0.5;
    st.eta = 0.1;
    st.target_d = 0.3;
    // Erasure masks the outage term: 0.5 - 0.1*(0 - 0.3 + 0.25) = 0.505.
    CHECK(ca_update_lambda(CompressorFamily::Sparse, st, 1, 1.0, 0.25).lambda ==
          doctest::Approx(0.505));
    CHECK(ca_update_lambda(CompressorFamily::RateDistortion, st, 0, 0.2, 0.0).lambda ==
          doctest::Approx(0.49));
}

TEST_CASE("the erasure-free update reduces to the plain recursions bitwise") {
    std::mt19937_64 g(5);
    ConformalState plain_s, ca_s, plain_r, ca_r;
    plain_s.lambda = ca_s.lambda = plain_r.lambda = ca_r.lambda = 0.1;
    plain_s.eta = ca_s.eta = plain_r.eta = ca_r.eta = 0.1;
    plain_s.target_d = ca_s.target_d = plain_r.target_d = ca_r.target_d = 0.3;
    for (int t = 0; t < 1000; ++t) {
        const int outage = uniform01(g) < 0.4 ? 1 : 0;
        plain_s = update_lambda_ocsc(plain_s, outage);
        ca_s = ca_update_lambda(CompressorFamily::Sparse, ca_s, 0, outage, 0.0);
        CHECK(plain_s.lambda == ca_s.lambda);

        const double d = uniform01(g);
        plain_r = update_lambda_ocrdc(plain_r, d);
        ca_r = ca_update_lambda(CompressorFamily::RateDistortion, ca_r, 0, d, 0.0);
        CHECK(plain_r.lambda == ca_r.lambda);
    }
}

TEST_CASE("queue bookkeeping and replay identity") {
    DistortionQueue q;
    q.epsilon = 0.05;
    q = step_queue(q, 1.0, 0.0);
    CHECK(q.q() == doctest::Approx(1.0));
    q = step_queue(q, 0.0, 0.25);
    CHECK(q.q() == doctest::Approx(0.75));
    CHECK_THROWS(step_queue(q, -0.1, 0.0));
    CHECK_THROWS(step_queue(DistortionQueue{}, 0.0, 1.0));  // service with an empty queue

    // Random episode: Q equals the running arrival/service difference, stays
    // nonnegative, and the policy never services more than D - epsilon.
    std::mt19937_64 g(11);
    const double D = 0.3;
    DistortionQueue queue;
    queue.epsilon = 0.05;
    double service = 0.0;  // delta_tgt in force at the current step
    double arr_sum = 0, srv_sum = 0;
    for (int t = 0; t < 5000; ++t) {
        const double arrival = uniform01(g) < 0.2 ? uniform01(g) : 0.0;
        queue = step_queue(queue, arrival, service);
        arr_sum += arrival;
        srv_sum += service;
        CHECK(queue.q() == doctest::Approx(arr_sum - srv_sum).epsilon(1e-12));
        CHECK(queue.q() >= -1e-12);
        service = next_adjustment(queue, D);
        CHECK(service <= D - queue.epsilon + 1e-12);
        CHECK(service >= 0.0);
    }
}

TEST_CASE("floors and ceilings of the adaptive recursion") {
    // CA sparse lambda never drops below -eta*(1-eps); CA slope never exceeds
    // L/eps + eta*(d_max - eps) when per-step distortion obeys the cost bound.
    std::mt19937_64 g(23);
    const double eta = 0.1, D = 0.3, eps = 0.05, d_max = 1.0;
    const double L = std::log2(32 / 0.05);

    ConformalState sp;
    sp.lambda = 0.1;
    sp.eta = eta;
    sp.target_d = D;
    DistortionQueue q1;
    q1.epsilon = eps;
    double tgt = 0.0;
    for (int t = 0; t < 20000; ++t) {
        const int E = uniform01(g) < 0.15 ? 1 : 0;
        // Replays the full controller the way the episode loop wires it, with
        // a synthetic outage process that reacts to the threshold.
        const int outage = sp.hyperparameter() > 0.0 && uniform01(g) < 0.5 ? 1 : 0;
        sp = ca_update_lambda(CompressorFamily::Sparse, sp, E, outage, tgt);
        q1 = step_queue(q1, static_cast<double>(E), tgt);
        tgt = next_adjustment(q1, D);
        CHECK(sp.lambda >= -eta * (1 - eps) - 1e-12);
    }

    ConformalState rd;
    rd.lambda = 0.1;
    rd.eta = eta;
    rd.target_d = D;
    DistortionQueue q2;
    q2.epsilon = eps;
    tgt = 0.0;
    const double ceiling = L / eps + eta * (d_max - eps);
    for (int t = 0; t < 20000; ++t) {
        const int E = uniform01(g) < 0.15 ? 1 : 0;
        // The selection rule guarantees d <= L / lambda when lambda > 0.
        double d = uniform01(g);
        if (rd.hyperparameter() > 0.0) d = std::min(d, L / rd.hyperparameter());
        rd = ca_update_lambda(CompressorFamily::RateDistortion, rd, E, d, tgt);
        const double arrival = E ? uniform01(g) * d_max : 0.0;
        q2 = step_queue(q2, arrival, tgt);
        tgt = next_adjustment(q2, D);
        CHECK(rd.lambda <= ceiling + 1e-12);
    }
}
