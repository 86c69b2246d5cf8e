#pragma once

#include "occ/ocsc.hpp"
#include "occ/types.hpp"

namespace occ {

// Which compressor family the channel-adaptive layer is wrapped around:
// Sparse = threshold-based with outage accounting, RateDistortion =
// Lagrangian selection with general bounded distortion.
enum class CompressorFamily { Sparse, RateDistortion };

// Residual channel-distortion queue: cumulative bound on channel-induced
// distortion (arrivals) minus cumulative target adjustments (service).
struct DistortionQueue {
    double delta_ch_cum = 0.0;
    double delta_tgt_cum = 0.0;
    double epsilon = 0.0;

    double q() const { return delta_ch_cum - delta_tgt_cum; }
};

// argmax reconstruction used by the decoder on an erasure and mirrored by the
// encoder through the feedback channel. Ties break to the smallest index.
Symbol ml_fallback(const Distribution& dist);

// Controller-usable upper bound on the channel-induced distortion: the raw
// erasure bit for Sparse, the exact reconstruction gap for RateDistortion.
double channel_distortion_bound(CompressorFamily family, int erased, const DistortionMeasure& d,
                                Symbol x, Symbol x_tilde, Symbol x_hat);

// Exact channel-induced distortion, recorded in traces for diagnostics only;
// the Sparse controller cannot use it (the receiver cannot evaluate it).
// x_hat_error_free is what the decoder would have output had the packet been
// delivered; ml_symbol is the full-alphabet argmax.
double true_channel_distortion(CompressorFamily family, int erased, const DistortionMeasure& d,
                               Symbol x, Symbol x_tilde, Symbol x_hat,
                               Symbol x_hat_error_free, Symbol ml_symbol);

// Next target adjustment: min{D - epsilon, Q_t}. Requires D - epsilon > 0.
double next_adjustment(const DistortionQueue& queue, double D);

// Doubly-adaptive update:
//   Sparse:          lambda' = lambda - eta * ((1 - E) * outage - D + delta_tgt)
//   RateDistortion:  lambda' = lambda + eta * (dist_val - D + delta_tgt)
ConformalState ca_update_lambda(CompressorFamily family, ConformalState state, int erased,
                                double outage_or_dist, double delta_tgt);

// Adds one arrival/service pair and re-checks the running identity Q >= 0.
DistortionQueue step_queue(DistortionQueue queue, double arrival, double service);

}  // namespace occ
