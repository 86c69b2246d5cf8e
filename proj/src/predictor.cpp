#include "occ/predictor.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace occ {

Predictor Predictor::uniform(std::int32_t alphabet_size) {
    Alphabet a(alphabet_size);
    Predictor p(Kind::Uniform, a.size);
    p.alpha_ = 1.0;
    return p;
}

Predictor Predictor::markov(std::int32_t alphabet_size, int order, double alpha) {
    Alphabet a(alphabet_size);
    if (order < 0) throw std::invalid_argument("Predictor::markov: order must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("Predictor::markov: alpha must be in (0,1]");
    // Context keys are packed base-|X| into 64 bits.
    if (order > 0 && order * std::log2(static_cast<double>(alphabet_size)) > 63.0)
        throw std::invalid_argument("Predictor::markov: order too large for this alphabet");
    Predictor p(Kind::MarkovK, a.size);
    p.order_ = order;
    p.alpha_ = alpha;
    p.order0_.assign(static_cast<std::size_t>(a.size), 0);
    return p;
}

Predictor Predictor::scripted(std::int32_t alphabet_size, std::vector<std::vector<double>> lines,
                              double floor_alpha) {
    Alphabet a(alphabet_size);
    if (lines.empty()) throw std::invalid_argument("Predictor::scripted: empty script");
    if (floor_alpha < 0.0 || floor_alpha > 1.0)
        throw std::invalid_argument("Predictor::scripted: floor_alpha must be in [0,1]");
    Predictor p(Kind::Scripted, a.size);
    p.alpha_ = floor_alpha;
    p.has_floor_ = floor_alpha > 0.0;
    const double u = 1.0 / static_cast<double>(a.size);
    for (auto& line : lines) {
        if (line.size() != static_cast<std::size_t>(a.size))
            throw std::invalid_argument("Predictor::scripted: line length != alphabet size");
        if (floor_alpha > 0.0)
            for (auto& v : line) v = (1.0 - floor_alpha) * v + floor_alpha * u;
        Distribution check(line);  // validates
        (void)check;
    }
    p.script_ = std::move(lines);
    return p;
}

Predictor Predictor::scripted_from_jsonl(std::int32_t alphabet_size, const std::string& path,
                                         double floor_alpha) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script file: " + path);
    std::vector<std::vector<double>> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        lines.push_back(nlohmann::json::parse(line).get<std::vector<double>>());
    }
    return scripted(alphabet_size, std::move(lines), floor_alpha);
}

std::uint64_t Predictor::context_key(std::span<const Symbol> history) const {
    std::uint64_t key = 0;
    const std::size_t k = static_cast<std::size_t>(order_);
    for (std::size_t i = history.size() - k; i < history.size(); ++i) {
        const Symbol s = history[i];
        if (s < 0 || s >= n_) throw std::out_of_range("Predictor: context symbol out of range");
        key = key * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(s);
    }
    return key;
}

Distribution Predictor::predict(PredictorContext ctx) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    const double u = 1.0 / static_cast<double>(n);

    if (kind_ == Kind::Uniform) return Distribution::uniform(n);

    if (kind_ == Kind::Scripted) {
        const std::size_t idx = ctx.history.size() % script_.size();
        return Distribution(script_[idx]);
    }

    // MarkovK: empirical part from context counts with order-0 fallback.
    const std::vector<std::uint32_t>* counts = nullptr;
    if (order_ > 0 && ctx.history.size() >= static_cast<std::size_t>(order_)) {
        auto it = table_.find(context_key(ctx.history));
        if (it != table_.end()) counts = &it->second;
    }

    std::vector<double> p(n, 0.0);
    bool have_empirical = false;
    if (counts != nullptr) {
        std::uint64_t total = 0;
        for (std::uint32_t c : *counts) total += c;
        if (total > 0) {
            for (std::size_t i = 0; i < n; ++i)
                p[i] = static_cast<double>((*counts)[i]) / static_cast<double>(total);
            have_empirical = true;
        }
    }
    if (!have_empirical && order_ >= 0) {
        std::uint64_t total = 0;
        for (std::uint64_t c : order0_) total += c;
        if (total > 0) {
            for (std::size_t i = 0; i < n; ++i)
                p[i] = static_cast<double>(order0_[i]) / static_cast<double>(total);
            have_empirical = true;
        }
    }
    if (!have_empirical) return Distribution::uniform(n);

    for (std::size_t i = 0; i < n; ++i) p[i] = (1.0 - alpha_) * p[i] + alpha_ * u;
    return Distribution(std::move(p));
}

void Predictor::online_update(PredictorContext ctx, Symbol observed) {
    if (kind_ != Kind::MarkovK) return;
    if (observed < 0 || observed >= n_)
        throw std::out_of_range("Predictor::online_update: symbol out of range");
    order0_[static_cast<std::size_t>(observed)]++;
    if (order_ > 0 && ctx.history.size() >= static_cast<std::size_t>(order_)) {
        auto& counts = table_[context_key(ctx.history)];
        if (counts.empty()) counts.assign(static_cast<std::size_t>(n_), 0);
        counts[static_cast<std::size_t>(observed)]++;
    }
}

void Predictor::train(std::span<const Symbol> corpus) {
    if (kind_ != Kind::MarkovK) return;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        online_update(PredictorContext{corpus.subspan(0, i)}, corpus[i]);
}

std::optional<double> Predictor::assumption_bound_L() const {
    if (kind_ == Kind::Scripted && !has_floor_) return std::nullopt;
    return std::log2(static_cast<double>(n_) / alpha_);
}

}  // namespace occ
