#include "occ/source.hpp"

#include <stdexcept>

#include "occ/rng.hpp"

namespace occ {

MarkovSource::MarkovSource(std::int32_t alphabet_size, const MarkovSourceConfig& cfg)
    : n_(alphabet_size), cfg_(cfg) {
    Alphabet check(alphabet_size);
    (void)check;
    if (cfg.order < 0) throw std::invalid_argument("MarkovSource: order must be >= 0");
    if (!(cfg.concentration > 0.0))
        throw std::invalid_argument("MarkovSource: concentration must be > 0");
    if (cfg.branch < 0 || cfg.branch > alphabet_size)
        throw std::invalid_argument("MarkovSource: branch out of range");
    if (cfg.order > 0 && cfg.order * std::log2(static_cast<double>(alphabet_size)) > 63.0)
        throw std::invalid_argument("MarkovSource: order too large for this alphabet");
    context_.assign(static_cast<std::size_t>(cfg.order), 0);
    sampler_.seed(derive_seed(cfg.seed, 0x5A3u));
}

const std::vector<double>& MarkovSource::context_distribution(std::uint64_t key) {
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;

    std::mt19937_64 g(derive_seed(cfg_.seed, key ^ 0xD1C7u));
    const std::size_t n = static_cast<std::size_t>(n_);
    std::vector<double> p(n, 0.0);
    const int branch = cfg_.branch > 0 ? cfg_.branch : n_;
    if (branch >= n_) {
        p = dirichlet_sample(g, n, cfg_.concentration);
    } else {
        // Seeded partial Fisher-Yates picks the allowed successors.
        std::vector<Symbol> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<Symbol>(i);
        for (int i = 0; i < branch; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) +
                static_cast<std::size_t>(uniform01(g) * static_cast<double>(n - static_cast<std::size_t>(i)));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        }
        const auto w = dirichlet_sample(g, static_cast<std::size_t>(branch), cfg_.concentration);
        for (int i = 0; i < branch; ++i) p[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = w[static_cast<std::size_t>(i)];
    }
    return table_.emplace(key, std::move(p)).first->second;
}

Symbol MarkovSource::next() {
    std::uint64_t key = 0;
    for (Symbol s : context_) key = key * static_cast<std::uint64_t>(n_) + static_cast<std::uint64_t>(s);
    const auto& p = context_distribution(key);

    const double u = uniform01(sampler_);
    double acc = 0.0;
    Symbol drawn = static_cast<Symbol>(n_ - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) {
            drawn = static_cast<Symbol>(i);
            break;
        }
    }
    if (cfg_.order > 0) {
        context_.erase(context_.begin());
        context_.push_back(drawn);
    }
    return drawn;
}

std::vector<Symbol> MarkovSource::generate(long n) {
    std::vector<Symbol> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out.push_back(next());
    return out;
}

SourceOutput materialize_source(const SourceConfig& cfg, std::int32_t alphabet_size, long length) {
    SourceOutput out;
    switch (cfg.kind) {
        case SourceConfig::Kind::Markov: {
            MarkovSource src(alphabet_size, cfg.markov);
            out.symbols = src.generate(length);
            break;
        }
        case SourceConfig::Kind::File: {
            out.symbols = cfg.format == "json" ? load_symbols_json(cfg.path)
                                               : load_symbols_u16le(cfg.path);
            if (static_cast<long>(out.symbols.size()) < length)
                throw std::runtime_error("source file shorter than the requested horizon");
            out.symbols.resize(static_cast<std::size_t>(length));
            for (Symbol s : out.symbols)
                if (s < 0 || s >= alphabet_size)
                    throw std::runtime_error("source file symbol outside the alphabet");
            break;
        }
        case SourceConfig::Kind::Concat: {
            long total = 0;
            for (const auto& [seg, len] : cfg.segments) total += len;
            if (total != length)
                throw std::runtime_error("concat segment lengths must sum to the horizon T");
            for (const auto& [seg, len] : cfg.segments) {
                if (!out.symbols.empty()) out.boundaries.push_back(static_cast<long>(out.symbols.size()));
                SourceOutput part = materialize_source(seg, alphabet_size, len);
                out.symbols.insert(out.symbols.end(), part.symbols.begin(), part.symbols.end());
            }
            break;
        }
    }
    return out;
}

}  // namespace occ
