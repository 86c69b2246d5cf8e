#include "occ/ca_controller.hpp"

#include <stdexcept>

namespace occ {

Symbol ml_fallback(const Distribution& dist) {
    return dist.argmax();
}

double channel_distortion_bound(CompressorFamily family, int erased, const DistortionMeasure& d,
                                Symbol x, Symbol x_tilde, Symbol x_hat) {
    if (family == CompressorFamily::Sparse) return static_cast<double>(erased);
    if (erased == 0) return 0.0;
    return d(x, x_hat) - d(x, x_tilde);
}

double true_channel_distortion(CompressorFamily family, int erased, const DistortionMeasure& d,
                               Symbol x, Symbol x_tilde, Symbol x_hat,
                               Symbol x_hat_error_free, Symbol ml_symbol) {
    if (family == CompressorFamily::Sparse) {
        if (erased == 0) return 0.0;
        return (x == x_hat_error_free && x != ml_symbol) ? 1.0 : 0.0;
    }
    if (erased == 0) return 0.0;
    return d(x, x_hat) - d(x, x_tilde);
}

double next_adjustment(const DistortionQueue& queue, double D) {
    const double cap = D - queue.epsilon;
    if (!(cap > 0.0)) throw std::invalid_argument("next_adjustment: requires D - epsilon > 0");
    const double q = queue.q();
    return q < cap ? (q > 0.0 ? q : 0.0) : cap;
}

ConformalState ca_update_lambda(CompressorFamily family, ConformalState state, int erased,
                                double outage_or_dist, double delta_tgt) {
    if (family == CompressorFamily::Sparse) {
        const double masked = (1.0 - static_cast<double>(erased)) * outage_or_dist;
        state.lambda -= state.eta * (masked - state.target_d + delta_tgt);
    } else {
        state.lambda += state.eta * (outage_or_dist - state.target_d + delta_tgt);
    }
    return state;
}

DistortionQueue step_queue(DistortionQueue queue, double arrival, double service) {
    if (arrival < 0.0 || service < 0.0)
        throw std::invalid_argument("step_queue: arrival and service must be >= 0");
    queue.delta_ch_cum += arrival;
    queue.delta_tgt_cum += service;
    if (queue.q() < -1e-9) throw std::logic_error("step_queue: negative residual queue");
    return queue;
}

}  // namespace occ
