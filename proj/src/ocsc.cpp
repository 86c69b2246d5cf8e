#include "occ/ocsc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occ {

std::vector<Symbol> high_prob_set(const Distribution& dist, double s) {
    if (s < 0.0) throw std::invalid_argument("high_prob_set: threshold must be >= 0");
    std::vector<Symbol> set;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double p = dist.probs()[i];
        if (p > 0.0 && p >= s) set.push_back(static_cast<Symbol>(i));
    }
    return set;
}

int SparseEncodingPlan::plan_index_of(Symbol x) const {
    auto it = std::lower_bound(set.begin(), set.end(), x);
    if (it == set.end() || *it != x) return -1;
    return static_cast<int>(it - set.begin());
}

SparseEncodingPlan build_plan(const Distribution& dist, double s, double target_d) {
    if (target_d < 0.0 || target_d > 1.0)
        throw std::invalid_argument("build_plan: target distortion must be in [0,1]");
    SparseEncodingPlan plan;
    if (target_d < 1.0) plan.set = high_prob_set(dist, s);

    if (plan.set.empty()) {
        plan.aug = {1.0};
        plan.codebook = Codebook::build(plan.aug);
        return plan;
    }

    double mass = 0.0;
    for (Symbol x : plan.set) mass += dist.at(x);
    plan.aug.resize(plan.set.size() + 1);
    for (std::size_t i = 0; i < plan.set.size(); ++i)
        plan.aug[i] = (1.0 - target_d) * dist.at(plan.set[i]) / mass;
    plan.aug.back() = target_d;
    plan.codebook = Codebook::build(plan.aug);
    return plan;
}

SparseEncodeResult ocsc_encode_step(const SparseEncodingPlan& plan, Symbol x) {
    const int idx = plan.plan_index_of(x);
    const int coded = idx >= 0 ? idx : plan.outage_index();
    SparseEncodeResult r;
    r.message = plan.codebook.encode(coded);
    r.x_tilde = idx >= 0 ? x : kOutage;
    const double p = plan.aug[static_cast<std::size_t>(coded)];
    r.ideal_bits = p >= 1.0 ? 0.0 : -std::log2(p);
    return r;
}

Symbol ocsc_outage_reconstruction(const Distribution& dist, const SparseEncodingPlan& plan) {
    Symbol best = -1;
    double best_p = -1.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const Symbol x = static_cast<Symbol>(i);
        if (plan.in_set(x)) continue;
        if (dist.probs()[i] > best_p) {
            best_p = dist.probs()[i];
            best = x;
        }
    }
    if (best < 0) return dist.argmax();  // complement empty: the set is all of X
    return best;
}

Symbol ocsc_decode_step(const Distribution& dist, const SparseEncodingPlan& plan, const BitString& bits) {
    const auto [coded, consumed] = plan.codebook.decode(bits);
    (void)consumed;
    if (coded == plan.outage_index()) return ocsc_outage_reconstruction(dist, plan);
    return plan.set[static_cast<std::size_t>(coded)];
}

ConformalState update_lambda_ocsc(ConformalState state, int outage) {
    if (outage != 0 && outage != 1)
        throw std::invalid_argument("update_lambda_ocsc: outage must be 0 or 1");
    state.lambda -= state.eta * (static_cast<double>(outage) - state.target_d);
    return state;
}

}  // namespace occ
