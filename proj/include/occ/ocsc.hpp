#pragma once

#include <vector>

#include "occ/entropy_code.hpp"
#include "occ/types.hpp"

namespace occ {

// Shared conformal controller state. The hyperparameter s_t (threshold for
// sparse compression, slope for rate-distortion compression) is always derived
// as max{0, lambda} and never stored.
struct ConformalState {
    double lambda = 0.1;
    double eta = 0.1;
    double lambda0 = 0.1;
    double target_d = 0.1;
    double epsilon = 0.0;  // channel-adaptive variants only

    double hyperparameter() const { return lambda > 0.0 ? lambda : 0.0; }
};

// Symbols whose predicted probability meets the threshold (closed inequality).
// Zero-probability symbols are excluded even at s = 0 so the codebook support
// stays well-defined.
std::vector<Symbol> high_prob_set(const Distribution& dist, double s);

// Encoding plan for one step: the high-probability set, the augmented
// truncated distribution over set + outage symbol, and its codebook. The plan
// alphabet indexes set members as 0..set.size()-1 and the outage symbol as
// set.size(). An empty set collapses to {x_o: 1} and a zero-length message.
struct SparseEncodingPlan {
    std::vector<Symbol> set;   // ascending symbol order
    std::vector<double> aug;   // size set.size()+1; last entry is the x_o mass
    Codebook codebook;

    int outage_index() const { return static_cast<int>(set.size()); }
    // Plan-alphabet index of a source symbol, or -1 if outside the set.
    int plan_index_of(Symbol x) const;
    bool in_set(Symbol x) const { return plan_index_of(x) >= 0; }
};

// target_d = 1 forces an empty set: every aug mass would sit on x_o anyway,
// and keeping set members with zero coded probability would be unencodable.
SparseEncodingPlan build_plan(const Distribution& dist, double s, double target_d);

struct SparseEncodeResult {
    Message message;
    Symbol x_tilde;     // transmitted symbol; kOutage when outside the set
    double ideal_bits;  // -log2 of the coded symbol's augmented probability
};

SparseEncodeResult ocsc_encode_step(const SparseEncodingPlan& plan, Symbol x);

// Maximum-likelihood reconstruction for a received outage symbol: argmax over
// the complement of the set (argmax over all of X when the complement is
// empty). Ties break to the smallest index.
Symbol ocsc_outage_reconstruction(const Distribution& dist, const SparseEncodingPlan& plan);

// Inverts the prefix-free code and applies the reconstruction rule. The plan
// must be the decoder's own rebuild from the shared (dist, s, target_d).
Symbol ocsc_decode_step(const Distribution& dist, const SparseEncodingPlan& plan, const BitString& bits);

// lambda' = lambda - eta * (outage - D), with outage = 1{X_t not in set}.
ConformalState update_lambda_ocsc(ConformalState state, int outage);

}  // namespace occ
