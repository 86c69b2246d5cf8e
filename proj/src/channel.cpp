#include "occ/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "occ/rng.hpp"

namespace occ {

namespace {

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must be in [0,1]");
}

}  // namespace

Channel Channel::error_free() {
    return deterministic({0}, true);
}

Channel Channel::deterministic(std::vector<std::uint8_t> pattern, bool wrap) {
    if (pattern.empty()) throw std::invalid_argument("Channel: empty erasure pattern");
    for (auto v : pattern)
        if (v > 1) throw std::invalid_argument("Channel: pattern entries must be 0 or 1");
    Channel c(Kind::Deterministic);
    c.pattern_ = std::move(pattern);
    c.wrap_ = wrap;
    return c;
}

Channel Channel::bernoulli(double e, std::uint64_t seed) {
    check_prob(e, "Channel: erasure probability");
    Channel c(Kind::Bernoulli);
    c.schedule_ = {e};
    c.wrap_ = true;
    c.rng_.seed(seed);
    return c;
}

Channel Channel::bernoulli_schedule(std::vector<double> schedule, bool wrap, std::uint64_t seed) {
    if (schedule.empty()) throw std::invalid_argument("Channel: empty erasure schedule");
    for (double e : schedule) check_prob(e, "Channel: erasure probability");
    Channel c(Kind::Bernoulli);
    c.schedule_ = std::move(schedule);
    c.wrap_ = wrap;
    c.rng_.seed(seed);
    return c;
}

Channel Channel::gilbert_elliott(double a, double b, double e_bad, double e_good,
                                 std::uint64_t seed, std::optional<GeState> initial) {
    check_prob(a, "Channel: a");
    check_prob(b, "Channel: b");
    check_prob(e_bad, "Channel: e_bad");
    check_prob(e_good, "Channel: e_good");
    if (a + b <= 0.0) throw std::invalid_argument("Channel: a + b must be > 0 (reducible chain)");
    Channel c(Kind::GilbertElliott);
    c.a_ = a;
    c.b_ = b;
    c.e_bad_ = e_bad;
    c.e_good_ = e_good;
    c.rng_.seed(seed);
    if (initial.has_value()) {
        c.ge_state_ = *initial;
    } else {
        const double pi_bad = b / (a + b);
        c.ge_state_ = uniform01(c.rng_) < pi_bad ? GeState::Bad : GeState::Good;
    }
    return c;
}

ChannelStep Channel::transmit(const Message& msg) {
    const long t = t_++;  // 0-based position of this transmission
    ChannelStep step;
    switch (kind_) {
        case Kind::Deterministic: {
            std::size_t idx = static_cast<std::size_t>(t);
            if (idx >= pattern_.size()) {
                if (!wrap_) throw std::runtime_error("Channel: deterministic pattern exhausted");
                idx %= pattern_.size();
            }
            step.erased = pattern_[idx] != 0;
            break;
        }
        case Kind::Bernoulli: {
            std::size_t idx = static_cast<std::size_t>(t);
            if (idx >= schedule_.size()) {
                if (!wrap_) throw std::runtime_error("Channel: erasure schedule exhausted");
                idx %= schedule_.size();
            }
            step.erased = uniform01(rng_) < schedule_[idx];
            break;
        }
        case Kind::GilbertElliott: {
            // Advance the state, then draw the erasure for the new state. Both
            // draws always happen so the stream position is state-independent.
            const double flip = uniform01(rng_);
            if (ge_state_ == GeState::Bad) {
                if (flip < a_) ge_state_ = GeState::Good;
            } else {
                if (flip < b_) ge_state_ = GeState::Bad;
            }
            const double u = uniform01(rng_);
            step.erased = u < (ge_state_ == GeState::Bad ? e_bad_ : e_good_);
            step.hidden = ge_state_;
            break;
        }
    }
    if (!step.erased) step.delivered = msg;
    return step;
}

bool Channel::can_erase() const {
    switch (kind_) {
        case Kind::Deterministic:
            for (auto v : pattern_)
                if (v) return true;
            return false;
        case Kind::Bernoulli:
            for (double e : schedule_)
                if (e > 0.0) return true;
            return false;
        case Kind::GilbertElliott:
            return e_bad_ > 0.0 || e_good_ > 0.0;
    }
    return true;
}

int feedback(const ChannelStep& step) {
    return step.erased ? 1 : 0;
}

SteadyState steady_state(double a, double b, double e_bad, double e_good) {
    check_prob(a, "steady_state: a");
    check_prob(b, "steady_state: b");
    check_prob(e_bad, "steady_state: e_bad");
    check_prob(e_good, "steady_state: e_good");
    if (a + b <= 0.0) throw std::invalid_argument("steady_state: a + b must be > 0");
    SteadyState s;
    s.pi_bad = b / (a + b);
    s.pi_good = a / (a + b);
    s.e_bar = s.pi_bad * e_bad + s.pi_good * e_good;
    return s;
}

double spectral_gap(double a, double b) {
    check_prob(a, "spectral_gap: a");
    check_prob(b, "spectral_gap: b");
    return 1.0 - std::fabs(1.0 - a - b);
}

double envelope(std::span<const double> seq, long tau) {
    if (tau < 1) throw std::invalid_argument("envelope: tau must be >= 1");
    const long n = static_cast<long>(seq.size());
    const long window = tau + 1;
    if (window > n) throw std::invalid_argument("envelope: window exceeds sequence length");
    double sum = 0.0;
    for (long i = 0; i < window; ++i) sum += seq[static_cast<std::size_t>(i)];
    double best = sum;
    for (long k = window; k < n; ++k) {
        sum += seq[static_cast<std::size_t>(k)] - seq[static_cast<std::size_t>(k - window)];
        if (sum > best) best = sum;
    }
    return best;
}

double envelope_bits(std::span<const std::uint8_t> seq, long tau) {
    std::vector<double> tmp(seq.begin(), seq.end());
    return envelope(tmp, tau);
}

double SublinearPsi::operator()(double tau) const {
    switch (family) {
        case Family::Constant: return c;
        case Family::Sqrt: return c * std::sqrt(tau);
        case Family::Log: return c * std::log(1.0 + tau);
    }
    return c;
}

SublinearPsi SublinearPsi::parse(const std::string& family, double c) {
    if (family == "constant") return constant(c);
    if (family == "sqrt") return sqrt(c);
    if (family == "log") return log(c);
    throw std::invalid_argument("SublinearPsi: unknown family '" + family + "'");
}

std::string SublinearPsi::family_name() const {
    switch (family) {
        case Family::Constant: return "constant";
        case Family::Sqrt: return "sqrt";
        case Family::Log: return "log";
    }
    return "constant";
}

bool check_assumption3(std::span<const std::uint8_t> pattern, double A, const SublinearPsi& psi,
                       double D, double epsilon, double d_max, long T) {
    if (pattern.empty()) throw std::invalid_argument("check_assumption3: empty pattern");
    if (T < 2) throw std::invalid_argument("check_assumption3: T must be >= 2");
    if (!(A < (D - epsilon) / d_max))
        throw std::invalid_argument("check_assumption3: requires A < (D - epsilon)/d_max");

    // Realize the pattern out to the horizon, then prefix-sum for O(1) windows.
    std::vector<double> prefix(static_cast<std::size_t>(T) + 1, 0.0);
    for (long t = 0; t < T; ++t)
        prefix[static_cast<std::size_t>(t) + 1] =
            prefix[static_cast<std::size_t>(t)] +
            pattern[static_cast<std::size_t>(t) % pattern.size()];

    for (long tau = 1; tau < T; ++tau) {
        const long window = tau + 1;
        double best = 0.0;
        for (long k = 0; k + window <= T; ++k) {
            const double s = prefix[static_cast<std::size_t>(k + window)] - prefix[static_cast<std::size_t>(k)];
            if (s > best) best = s;
        }
        if (!(best < A * static_cast<double>(tau) + psi(static_cast<double>(tau)))) return false;
    }
    return true;
}

std::optional<long> tau_max(double A, const SublinearPsi& psi, double D, double epsilon,
                            double d_max, long cap) {
    const double margin = (D - epsilon) / d_max - A;
    if (!(margin > 0.0)) throw std::invalid_argument("tau_max: requires A < (D - epsilon)/d_max");
    for (long tau = 1; tau <= cap; ++tau) {
        if (psi(static_cast<double>(tau)) / static_cast<double>(tau) <= margin) return tau;
    }
    return std::nullopt;
}

}  // namespace occ
