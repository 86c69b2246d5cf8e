#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "occ/config.hpp"
#include "occ/types.hpp"

namespace occ {

// Seeded order-k Markov symbol source. Per-context next-symbol distributions
// are Dirichlet(concentration) draws generated lazily from a seed derived from
// (seed, context), so the table is identical no matter in which order contexts
// are visited. An optional branch limit restricts each context to a seeded
// subset of successors, giving sparser transition structure.
class MarkovSource {
  public:
    MarkovSource(std::int32_t alphabet_size, const MarkovSourceConfig& cfg);

    Symbol next();
    std::vector<Symbol> generate(long n);

  private:
    const std::vector<double>& context_distribution(std::uint64_t key);

    std::int32_t n_;
    MarkovSourceConfig cfg_;
    std::vector<Symbol> context_;
    std::mt19937_64 sampler_;
    std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

struct SourceOutput {
    std::vector<Symbol> symbols;
    std::vector<long> boundaries;  // segment start indices after the first (concat sources)
};

// Materializes exactly `length` symbols for the given configuration. Files
// shorter than `length` are an error; longer files are truncated.
SourceOutput materialize_source(const SourceConfig& cfg, std::int32_t alphabet_size, long length);

}  // namespace occ
