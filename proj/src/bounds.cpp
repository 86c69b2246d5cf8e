#include "occ/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "occ/channel.hpp"
#include "occ/config.hpp"
#include "occ/episode.hpp"
#include "occ/types.hpp"

namespace occ::bounds {

namespace {

constexpr double kCompareTol = 1e-9;
constexpr double kTelescopeTol = 1e-7;

Verdict make(const std::string& id, double lhs, double rhs, const std::string& note = "") {
    Verdict v;
    v.id = id;
    v.lhs = lhs;
    v.rhs = rhs;
    const double slack = rhs - lhs;
    if (slack >= -kCompareTol) {
        v.status = VerdictStatus::Holds;
        v.slack = slack < 0.0 ? 0.0 : slack;
    } else {
        v.status = VerdictStatus::Violated;
        v.slack = slack;
    }
    v.note = note;
    return v;
}

Verdict not_applicable(const std::string& id, const std::string& note) {
    Verdict v;
    v.id = id;
    v.status = VerdictStatus::NotApplicable;
    v.note = note;
    return v;
}

bool channel_can_erase(const RunConfig& cfg) {
    if (cfg.channel.kind == ChannelConfig::Kind::ErrorFree) return false;
    if (cfg.channel.kind == ChannelConfig::Kind::Deterministic && cfg.channel.pattern_path.empty()) {
        for (auto v : cfg.channel.pattern)
            if (v) return true;
        return false;
    }
    if (cfg.channel.kind == ChannelConfig::Kind::Bernoulli && cfg.channel.schedule_path.empty() &&
        cfg.channel.schedule.empty())
        return cfg.channel.e > 0.0;
    return true;
}

CaScheme ca_scheme_of(const RunConfig& cfg) {
    return cfg.scheme == Scheme::CaOcsc ? CaScheme::Sparse : CaScheme::RateDistortion;
}

// The sparse-family guarantees bound the outage rate; that also dominates any
// configured measure with d_max <= 1. The slope family bounds the configured
// measure directly.
double guarantee_lhs(const EpisodeSummary& e, const RunConfig& cfg) {
    return scheme_is_sparse_family(cfg.scheme) ? e.outage_rate : e.avg_distortion;
}

}  // namespace

double theorem1_rhs(double D, double eta, double lambda0, long T) {
    if (T < 1) throw std::invalid_argument("theorem1_rhs: T must be >= 1");
    if (D < 0.0 || D > 1.0) throw std::invalid_argument("theorem1_rhs: D must be in [0,1]");
    return D + (eta * (1.0 - D) + lambda0) / (eta * static_cast<double>(T));
}

double theorem2_rhs(double D, double eta, double lambda0, double L, double d_max, long T) {
    if (!(D > 0.0)) throw std::invalid_argument("theorem2_rhs: requires D > 0");
    if (T < 1) throw std::invalid_argument("theorem2_rhs: T must be >= 1");
    return D + (L / D + eta * (d_max - D) - lambda0) / (eta * static_cast<double>(T));
}

double ca_K(CaScheme scheme, double eta, double lambda0, double L, double d_max, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ca_K: requires epsilon > 0");
    if (scheme == CaScheme::Sparse) return eta * (1.0 - epsilon) + lambda0;
    return L / epsilon + eta * (d_max - epsilon) - lambda0;
}

double prop1_rhs(CaScheme scheme, double D, double eta, double lambda0, double L, double d_max,
                 double epsilon, long T, double q_final) {
    if (T < 1) throw std::invalid_argument("prop1_rhs: T must be >= 1");
    const double K = ca_K(scheme, eta, lambda0, L, d_max, epsilon);
    return D + K / (eta * static_cast<double>(T)) + q_final / static_cast<double>(T);
}

double queue_sup_bound(double D, double d_max, double epsilon, long tau_max) {
    return static_cast<double>(tau_max) * (d_max - D + epsilon) + D - epsilon;
}

double theorem3_rhs(CaScheme scheme, double D, double eta, double lambda0, double L, double d_max,
                    double epsilon, long T, long tau_max) {
    if (T < 1) throw std::invalid_argument("theorem3_rhs: T must be >= 1");
    const double K = ca_K(scheme, eta, lambda0, L, d_max, epsilon);
    return D + K / (static_cast<double>(T) * eta) +
           queue_sup_bound(D, d_max, epsilon, tau_max) / static_cast<double>(T);
}

const char* verdict_status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Holds: return "holds";
        case VerdictStatus::Violated: return "violated";
        case VerdictStatus::NotApplicable: return "not-applicable";
    }
    return "?";
}

Verdict verify(const EpisodeSummary& e, const std::string& id, const RunConfig& cfg) {
    const bool erasing = channel_can_erase(cfg);
    const double eps = cfg.effective_epsilon();
    const double T = static_cast<double>(e.T);

    if (id == "theorem1") {
        if (cfg.scheme != Scheme::Ocsc) return not_applicable(id, "threshold scheme only");
        return make(id, e.outage_rate, theorem1_rhs(cfg.D, cfg.eta, cfg.lambda0, e.T));
    }

    if (id == "theorem2") {
        if (cfg.scheme != Scheme::Ocrdc) return not_applicable(id, "slope scheme only");
        if (erasing) return not_applicable(id, "error-free channels only");
        if (e.lossless_mode) return not_applicable(id, "lossless mode (D = 0)");
        if (!e.predictor_L) return not_applicable(id, "no finite code-length bound for this predictor");
        return make(id, e.avg_distortion,
                    theorem2_rhs(cfg.D, cfg.eta, cfg.lambda0, *e.predictor_L, e.d_max, e.T));
    }

    if (id == "lemma1") {
        if (cfg.scheme != Scheme::Ocrdc || e.lossless_mode)
            return not_applicable(id, "slope scheme with D > 0 only");
        if (!e.predictor_L) return not_applicable(id, "no finite code-length bound for this predictor");
        return make(id, e.lambda_max, lemma1_bound(*e.predictor_L, cfg.eta, cfg.D, e.d_max),
                    "max_t lambda_t vs the slope ceiling");
    }

    if (id == "lemma2") {
        if (cfg.scheme == Scheme::CaOcsc)
            return make(id, -e.lambda_min, cfg.eta * (1.0 - eps), "-min_t lambda_t vs eta*(1-eps)");
        if (cfg.scheme == Scheme::CaOcrdc) {
            if (!e.predictor_L)
                return not_applicable(id, "no finite code-length bound for this predictor");
            return make(id, e.lambda_max, *e.predictor_L / eps + cfg.eta * (e.d_max - eps),
                        "max_t lambda_t vs the adaptive ceiling");
        }
        return not_applicable(id, "channel-adaptive schemes only");
    }

    if (id == "telescoping") {
        double residual = 0.0;
        switch (cfg.scheme) {
            case Scheme::Ocsc:
                residual = e.nonmember_rate - cfg.D - (cfg.lambda0 - e.lambda_final) / (cfg.eta * T);
                break;
            case Scheme::Ocrdc:
                residual = e.cum_selected_dist / T - cfg.D - (e.lambda_final - cfg.lambda0) / (cfg.eta * T);
                break;
            case Scheme::CaOcsc:
                residual = e.masked_nonmember_rate - cfg.D -
                           (cfg.lambda0 - e.lambda_final) / (cfg.eta * T) + e.cum_delta_tgt / T;
                break;
            case Scheme::CaOcrdc:
                residual = e.cum_selected_dist / T - cfg.D -
                           (e.lambda_final - cfg.lambda0) / (cfg.eta * T) + e.cum_delta_tgt / T;
                break;
            default:
                return not_applicable(id, "conformal schemes only");
        }
        return make(id, std::fabs(residual), kTelescopeTol, "update-rule telescoping identity");
    }

    if (id == "prop1" || id == "theorem4" || id == "theorem5") {
        if (!scheme_is_channel_adaptive(cfg.scheme))
            return not_applicable(id, "channel-adaptive schemes only");
        if (id == "theorem4" && cfg.channel.kind != ChannelConfig::Kind::Bernoulli)
            return not_applicable(id, "memoryless stochastic channels only");
        if (id == "theorem5" && cfg.channel.kind != ChannelConfig::Kind::GilbertElliott)
            return not_applicable(id, "Gilbert-Elliott channels only");
        if (cfg.scheme == Scheme::CaOcrdc && !e.predictor_L)
            return not_applicable(id, "no finite code-length bound for this predictor");
        const double L = e.predictor_L.value_or(0.0);
        const double rhs = prop1_rhs(ca_scheme_of(cfg), cfg.D, cfg.eta, cfg.lambda0, L, e.d_max,
                                     eps, e.T, e.q_final);
        std::string note = "queue-form bound on this realization";
        if (id != "prop1") note += "; probabilistic content is aggregated across seeds";
        return make(id, guarantee_lhs(e, cfg), rhs, note);
    }

    if (id == "theorem3" || id == "queue_bound") {
        if (!scheme_is_channel_adaptive(cfg.scheme))
            return not_applicable(id, "channel-adaptive schemes only");
        if (cfg.channel.kind != ChannelConfig::Kind::Deterministic)
            return not_applicable(id, "deterministic erasure channels only");
        if (!cfg.assumption3) return not_applicable(id, "no declared envelope parameters");
        if (cfg.scheme == Scheme::CaOcrdc && !e.predictor_L)
            return not_applicable(id, "no finite code-length bound for this predictor");
        // The sparse controller accounts in outage units, so its channel
        // arrivals are bounded by 1 regardless of the reporting measure.
        const double margin_d_max = cfg.scheme == Scheme::CaOcsc ? 1.0 : e.d_max;
        if (!(cfg.assumption3->A < (cfg.D - eps) / margin_d_max))
            return not_applicable(id, "envelope slope A is not below (D - eps)/d_max");
        std::vector<std::uint8_t> pattern = cfg.channel.pattern;
        if (pattern.empty()) return not_applicable(id, "pattern unavailable for the envelope scan");
        if (!check_assumption3(pattern, cfg.assumption3->A, cfg.assumption3->psi, cfg.D, eps,
                               margin_d_max, e.T))
            return not_applicable(id, "envelope condition fails on this pattern");
        const auto tmax = tau_max(cfg.assumption3->A, cfg.assumption3->psi, cfg.D, eps, margin_d_max);
        if (!tmax) return not_applicable(id, "tau_max scan cap exceeded");
        if (id == "queue_bound") {
            Verdict v;
            v.id = id;
            v.lhs = e.q_max;
            v.rhs = queue_sup_bound(cfg.D, margin_d_max, eps, *tmax);
            // Strict inequality per the queue analysis.
            v.status = e.q_max < v.rhs ? VerdictStatus::Holds : VerdictStatus::Violated;
            v.slack = v.rhs - e.q_max;
            v.note = "sup_t Q_t vs the envelope queue ceiling";
            return v;
        }
        const double L = e.predictor_L.value_or(0.0);
        const double rhs = theorem3_rhs(ca_scheme_of(cfg), cfg.D, cfg.eta, cfg.lambda0, L,
                                        margin_d_max, eps, e.T, *tmax);
        return make(id, guarantee_lhs(e, cfg), rhs, "tau_max = " + std::to_string(*tmax));
    }

    throw std::invalid_argument("verify: unknown theorem id '" + id + "'");
}

std::vector<Verdict> verify_all(const EpisodeSummary& e, const RunConfig& cfg) {
    static const char* ids[] = {"theorem1", "theorem2",   "lemma1",   "lemma2",   "telescoping",
                                "prop1",    "theorem3",   "queue_bound", "theorem4", "theorem5"};
    std::vector<Verdict> out;
    for (const char* id : ids) {
        Verdict v = verify(e, id, cfg);
        if (v.status != VerdictStatus::NotApplicable) out.push_back(std::move(v));
    }
    return out;
}

}  // namespace occ::bounds
