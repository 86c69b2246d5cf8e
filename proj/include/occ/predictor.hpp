#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "occ/types.hpp"

namespace occ {

// The context handed to a predictor at step t is the reconstructed prefix
// (x_hat_1 .. x_hat_{t-1}), shared by encoder and decoder. Markov predictors
// look at the last `order` symbols only; scripted predictors use the prefix
// length as the replay index.
struct PredictorContext {
    std::span<const Symbol> history;
};

// Pluggable sequence predictor. A value type: encoder and decoder each hold
// their own copy and must evolve them identically.
//
// MarkovK predicts (1-alpha) * empirical + alpha * uniform, where the
// empirical part comes from context counts, falling back to the order-0
// marginal (and ultimately uniform) for unseen contexts. With alpha > 0 every
// probability is >= alpha/|X|, so -log2 p < log2(|X|/alpha) =: L.
class Predictor {
  public:
    enum class Kind { Uniform, MarkovK, Scripted };

    static Predictor uniform(std::int32_t alphabet_size);
    static Predictor markov(std::int32_t alphabet_size, int order, double alpha);
    // Scripted replay of one distribution per step; floor_alpha > 0 mixes each
    // line with uniform so that the script satisfies a finite code-length bound.
    static Predictor scripted(std::int32_t alphabet_size, std::vector<std::vector<double>> lines,
                              double floor_alpha = 0.0);
    static Predictor scripted_from_jsonl(std::int32_t alphabet_size, const std::string& path,
                                         double floor_alpha = 0.0);

    Distribution predict(PredictorContext ctx) const;

    // Count update for MarkovK; Uniform and Scripted are unchanged.
    void online_update(PredictorContext ctx, Symbol observed);

    // Batch counting over a corpus; equivalent to online_update along the stream.
    void train(std::span<const Symbol> corpus);

    // The code-length bound L = log2(|X|/alpha) in bits, when one exists.
    std::optional<double> assumption_bound_L() const;

    Kind kind() const { return kind_; }
    std::int32_t alphabet_size() const { return n_; }
    int order() const { return order_; }
    double alpha() const { return alpha_; }

  private:
    Predictor(Kind k, std::int32_t n) : kind_(k), n_(n) {}

    std::uint64_t context_key(std::span<const Symbol> history) const;

    Kind kind_;
    std::int32_t n_;
    int order_ = 0;
    double alpha_ = 1.0;       // smoothing weight (MarkovK), floor (Scripted), 1 for Uniform
    bool has_floor_ = false;   // Scripted only

    std::vector<std::uint64_t> order0_;                                   // marginal counts
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> table_; // context counts
    std::vector<std::vector<double>> script_;
};

}  // namespace occ
