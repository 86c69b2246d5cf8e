#pragma once

#include "occ/ocsc.hpp"
#include "occ/types.hpp"

namespace occ {

// Minimizer of the rate-distortion objective -log2 p(z) + s * d(x, z) over the
// alphabet. Zero-probability symbols carry infinite rate cost and are skipped;
// ties break to the smallest index. With s = 0 this is the distribution
// argmax; for outage distortion and s > L it returns x itself.
Symbol rd_select(const Distribution& dist, Symbol x, double s, const DistortionMeasure& d);

// lambda' = lambda + eta * (d(X_t, X_tilde_t) - D).
ConformalState update_lambda_ocrdc(ConformalState state, double dist_val);

// Ceiling on lambda under a code-length bound L (bits): L/D + eta*(d_max - D).
// Not applicable in lossless mode (D = 0), which pins the selection to the
// source symbol instead of running the slope update against a bound.
double lemma1_bound(double L_bits, double eta, double D, double d_max);

}  // namespace occ
