#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "occ/entropy_code.hpp"

namespace occ {

enum class GeState : std::uint8_t { Good, Bad };

struct ChannelStep {
    bool erased = false;
    Message delivered;            // meaningful only when !erased
    GeState hidden = GeState::Good;  // Gilbert-Elliott diagnostics
};

// Packet erasure channel with perfect one-step-delayed ACK/NACK feedback (the
// feedback itself is enforced by the episode loop, not here). Erasures never
// flip bits: a packet is delivered intact or replaced by the erasure marker.
// Randomness comes from an internal seeded stream, independent of everything
// else in a run.
class Channel {
  public:
    enum class Kind { Deterministic, Bernoulli, GilbertElliott };

    static Channel error_free();
    static Channel deterministic(std::vector<std::uint8_t> pattern, bool wrap = true);
    static Channel bernoulli(double e, std::uint64_t seed);
    static Channel bernoulli_schedule(std::vector<double> schedule, bool wrap, std::uint64_t seed);
    // a = P(Bad -> Good), b = P(Good -> Bad). The state advances before each
    // erasure draw; with no explicit initial state the chain starts from its
    // stationary distribution.
    static Channel gilbert_elliott(double a, double b, double e_bad, double e_good,
                                   std::uint64_t seed, std::optional<GeState> initial = std::nullopt);

    ChannelStep transmit(const Message& msg);
    bool can_erase() const;
    Kind kind() const { return kind_; }
    long time() const { return t_; }

  private:
    explicit Channel(Kind k) : kind_(k) {}

    Kind kind_;
    long t_ = 0;
    bool wrap_ = true;
    std::vector<std::uint8_t> pattern_;
    std::vector<double> schedule_;
    double a_ = 0, b_ = 0, e_bad_ = 0, e_good_ = 0;
    GeState ge_state_ = GeState::Good;
    std::mt19937_64 rng_{0};
};

// Pass-through of the erasure bit; the episode loop delays it by one step.
int feedback(const ChannelStep& step);

struct SteadyState {
    double pi_bad;
    double pi_good;
    double e_bar;
};

SteadyState steady_state(double a, double b, double e_bad, double e_good);

// 1 - |1 - a - b|.
double spectral_gap(double a, double b);

// Maximum sum over tau+1 consecutive terms; windows are clipped to the finite
// sequence. Throws if tau+1 exceeds the sequence length.
double envelope(std::span<const double> seq, long tau);
double envelope_bits(std::span<const std::uint8_t> seq, long tau);

// Named sublinear family for the envelope margin function.
struct SublinearPsi {
    enum class Family { Constant, Sqrt, Log };
    Family family = Family::Constant;
    double c = 0.0;

    double operator()(double tau) const;
    static SublinearPsi constant(double c) { return {Family::Constant, c}; }
    static SublinearPsi sqrt(double c) { return {Family::Sqrt, c}; }
    static SublinearPsi log(double c) { return {Family::Log, c}; }
    static SublinearPsi parse(const std::string& family, double c);
    std::string family_name() const;
};

// True iff the envelope of the length-T realization of the pattern satisfies
// Psi(tau) < A*tau + psi(tau) for every tau in [1, T-1]. Requires the margin
// precondition A < (D - epsilon) / d_max.
bool check_assumption3(std::span<const std::uint8_t> pattern, double A, const SublinearPsi& psi,
                       double D, double epsilon, double d_max, long T);

// Smallest tau with psi(tau)/tau <= (D - epsilon)/d_max - A, by forward scan.
// nullopt if the cap is exceeded (psi not effectively sublinear at this scale).
std::optional<long> tau_max(double A, const SublinearPsi& psi, double D, double epsilon,
                            double d_max, long cap = 1000000);

}  // namespace occ
