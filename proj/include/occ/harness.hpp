#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "occ/episode.hpp"

namespace occ {

// Offline hindsight search for the block baselines: evaluates a geometric grid
// of fixed hyperparameters over the whole sequence and returns the largest
// feasible threshold (block-csc) or the smallest feasible slope (block-crdc).
struct BlockGridPoint {
    double s = 0.0;
    double avg_distortion = 0.0;
    double rate_bits = 0.0;
    bool feasible = false;
};

struct BlockSearchResult {
    bool feasible = false;
    double s_star = 0.0;
    double achieved_distortion = 0.0;
    double rate_bits = 0.0;
    std::vector<BlockGridPoint> grid;
};

BlockSearchResult block_search(const RunConfig& cfg);

struct SweepRow {
    std::string scheme;
    double D = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    EpisodeSummary summary;
};

// One row per (D, seed) grid cell; failures are recorded per row.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

nlohmann::json step_to_json(const StepRecord& r, bool with_bits);
nlohmann::json summary_to_json(const EpisodeSummary& s, const RunConfig& cfg);
nlohmann::json block_search_to_json(const BlockSearchResult& r);
nlohmann::json verdict_to_json(const bounds::Verdict& v);

// Recomputes an episode summary from a JSONL step trace, independently
// replaying the conformal updates and the queue recursion from the traced
// observables and cross-checking them against the traced values. Used by the
// external verification path.
EpisodeSummary summarize_trace(const RunConfig& cfg, std::istream& jsonl);

// 0 = every applicable guarantee holds, 2 = at least one violated.
int exit_code_from_verdicts(const std::vector<bounds::Verdict>& verdicts);

// Writes the configured source to a symbol file (format per the source config)
// and returns metadata about what was written.
nlohmann::json generate_source_file(const RunConfig& cfg, const std::string& path,
                                    const std::string& format);

}  // namespace occ
