#pragma once

#include <string>
#include <vector>

namespace occ {

struct EpisodeSummary;
struct RunConfig;

namespace bounds {

// Guarantee for the threshold-based compressor over an error-free channel:
// outage rate <= D + (eta*(1-D) + lambda0) / (eta*T).
double theorem1_rhs(double D, double eta, double lambda0, long T);

// Guarantee for the slope-based compressor over an error-free channel:
// average distortion <= D + (L/D + eta*(d_max - D) - lambda0) / (eta*T).
double theorem2_rhs(double D, double eta, double lambda0, double L, double d_max, long T);

enum class CaScheme { Sparse, RateDistortion };

// The K constant of the channel-adaptive bounds.
double ca_K(CaScheme scheme, double eta, double lambda0, double L, double d_max, double epsilon);

// Queue-form bound: D + K/(eta*T) + Q_T/T.
double prop1_rhs(CaScheme scheme, double D, double eta, double lambda0, double L, double d_max,
                 double epsilon, long T, double q_final);

// Deterministic-channel bound: D + K/(eta*T) + (tau_max*(d_max - D + eps) + D - eps)/T.
double theorem3_rhs(CaScheme scheme, double D, double eta, double lambda0, double L, double d_max,
                    double epsilon, long T, long tau_max);

// Queue ceiling under the envelope condition: tau_max*(d_max - D + eps) + D - eps.
double queue_sup_bound(double D, double d_max, double epsilon, long tau_max);

enum class VerdictStatus { Holds, Violated, NotApplicable };

struct Verdict {
    std::string id;
    VerdictStatus status = VerdictStatus::NotApplicable;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs, clamped to 0 inside the comparison tolerance
    std::string note;
};

const char* verdict_status_name(VerdictStatus s);

// Binds an episode to one named guarantee. Known ids: "theorem1", "theorem2",
// "lemma1", "lemma2", "telescoping", "prop1", "theorem3", "queue_bound",
// "theorem4", "theorem5". Stochastic-channel guarantees evaluate the
// deterministic queue-form bound on this realization; their probabilistic
// content is aggregated across seeds by the caller.
Verdict verify(const EpisodeSummary& episode, const std::string& theorem_id, const RunConfig& config);

// All verdicts applicable to this episode's scheme and channel.
std::vector<Verdict> verify_all(const EpisodeSummary& episode, const RunConfig& config);

}  // namespace bounds
}  // namespace occ
