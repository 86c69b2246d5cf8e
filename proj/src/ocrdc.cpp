#include "occ/ocrdc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace occ {

Symbol rd_select(const Distribution& dist, Symbol x, double s, const DistortionMeasure& d) {
    if (s < 0.0) throw std::invalid_argument("rd_select: slope must be >= 0");
    if (x < 0 || static_cast<std::size_t>(x) >= dist.size())
        throw std::out_of_range("rd_select: source symbol out of range");
    Symbol best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double p = dist.probs()[i];
        if (p <= 0.0) continue;
        const Symbol z = static_cast<Symbol>(i);
        const double cost = -std::log2(p) + s * d(x, z);
        if (cost < best_cost) {
            best_cost = cost;
            best = z;
        }
    }
    if (best < 0) throw std::logic_error("rd_select: no symbol with positive probability");
    return best;
}

ConformalState update_lambda_ocrdc(ConformalState state, double dist_val) {
    state.lambda += state.eta * (dist_val - state.target_d);
    return state;
}

double lemma1_bound(double L_bits, double eta, double D, double d_max) {
    if (!(D > 0.0)) throw std::invalid_argument("lemma1_bound: requires D > 0");
    return L_bits / D + eta * (d_max - D);
}

}  // namespace occ
