#include "occ/harness.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "occ/ca_controller.hpp"
#include "occ/source.hpp"

namespace occ {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double json_number(const nlohmann::json& j, const char* key) {
    return j.at(key).get<double>();
}

}  // namespace

BlockSearchResult block_search(const RunConfig& cfg_in) {
    if (cfg_in.scheme != Scheme::BlockCsc && cfg_in.scheme != Scheme::BlockCrdc)
        throw std::invalid_argument("block_search: scheme must be block-csc or block-crdc");

    const BlockSearchConfig& bs = cfg_in.block_search;
    if (!(bs.s_min > 0.0) || !(bs.s_max >= bs.s_min) || bs.points < 1)
        throw std::invalid_argument("block_search: need 0 < s_min <= s_max and points >= 1");

    std::vector<double> grid;
    grid.push_back(0.0);  // feasibility anchor
    if (bs.points == 1) {
        grid.push_back(bs.s_min);
    } else {
        const double ratio = std::pow(bs.s_max / bs.s_min, 1.0 / static_cast<double>(bs.points - 1));
        double s = bs.s_min;
        for (int i = 0; i < bs.points; ++i, s *= ratio) grid.push_back(s);
    }

    BlockSearchResult result;
    for (double s : grid) {
        RunConfig cfg = cfg_in;
        cfg.fixed_s = s;
        BlockGridPoint point;
        point.s = s;
        try {
            EpisodeSummary e = run_episode(cfg);
            point.avg_distortion = e.avg_distortion;
            point.rate_bits = e.rate_bits;
            point.feasible = e.avg_distortion <= cfg_in.D + 1e-12;
        } catch (const std::exception&) {
            point.feasible = false;  // e.g. an unencodable corner of the grid
        }
        result.grid.push_back(point);
    }

    // Largest feasible threshold for the sparse block scheme, smallest
    // feasible slope for the rate-distortion one.
    const bool want_largest = cfg_in.scheme == Scheme::BlockCsc;
    bool found = false;
    BlockGridPoint best;
    for (const auto& p : result.grid) {
        if (!p.feasible) continue;
        if (!found || (want_largest ? p.s > best.s : p.s < best.s)) {
            best = p;
            found = true;
        }
    }
    result.feasible = found;
    if (found) {
        result.s_star = best.s;
        result.achieved_distortion = best.avg_distortion;
        result.rate_bits = best.rate_bits;
    }
    return result;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw std::invalid_argument("run_sweep: config has no sweep section");
    std::vector<SweepRow> rows;
    for (double d : cfg.sweep->d_values) {
        for (std::uint64_t seed : cfg.sweep->seeds) {
            SweepRow row;
            row.scheme = scheme_name(cfg.scheme);
            row.D = d;
            row.seed = seed;
            RunConfig rc = cfg;
            rc.D = d;
            rc.seed = seed;
            rc.sweep.reset();
            try {
                row.summary = run_episode(rc);
                row.ok = true;
            } catch (const std::exception& ex) {
                row.ok = false;
                row.error = ex.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "scheme,D,seed,T,total_bits,rate_bits,ideal_rate_bits,avg_distortion,outage_rate,"
           "nonmember_rate,masked_nonmember_rate,lambda_final,q_final,q_max,erasures,"
           "sync_divergences,verdicts,status,error\n";
    for (const auto& r : rows) {
        out << r.scheme << ',' << fmt_double(r.D) << ',' << r.seed << ',';
        if (r.ok) {
            const EpisodeSummary& e = r.summary;
            std::string verdicts;
            for (const auto& v : e.verdicts) {
                if (!verdicts.empty()) verdicts += '|';
                verdicts += v.id;
                verdicts += ':';
                verdicts += bounds::verdict_status_name(v.status);
            }
            out << e.T << ',' << e.total_bits << ',' << fmt_double(e.rate_bits) << ','
                << fmt_double(e.ideal_rate_bits) << ',' << fmt_double(e.avg_distortion) << ','
                << fmt_double(e.outage_rate) << ',' << fmt_double(e.nonmember_rate) << ','
                << fmt_double(e.masked_nonmember_rate) << ',' << fmt_double(e.lambda_final) << ','
                << fmt_double(e.q_final) << ',' << fmt_double(e.q_max) << ',' << e.erasure_count
                << ',' << e.sync_divergences << ',' << verdicts << ",ok,\n";
        } else {
            std::string msg = r.error;
            for (auto& c : msg)
                if (c == ',' || c == '\n') c = ';';
            out << ",,,,,,,,,,,,,,error," << msg << "\n";
        }
    }
}

nlohmann::json step_to_json(const StepRecord& r, bool with_bits) {
    ordered_json j;
    j["t"] = r.t;
    j["x"] = r.x;
    j["x_tilde"] = r.x_tilde;
    j["x_hat"] = r.x_hat;
    j["b"] = r.b;
    j["ideal_bits"] = r.ideal_bits;
    j["E"] = r.erased;
    j["lambda"] = r.lambda;
    if (std::isnan(r.s)) j["s"] = nullptr;
    else j["s"] = r.s;
    j["delta_ch"] = r.delta_ch;
    j["delta_ch_bound"] = r.delta_ch_bound;
    j["delta_tgt"] = r.delta_tgt;
    j["Q"] = r.q;
    j["d"] = r.d;
    if (with_bits) j["bits"] = r.bits_hex;
    return j;
}

nlohmann::json verdict_to_json(const bounds::Verdict& v) {
    ordered_json j;
    j["id"] = v.id;
    j["status"] = bounds::verdict_status_name(v.status);
    if (v.status != bounds::VerdictStatus::NotApplicable) {
        j["lhs"] = v.lhs;
        j["rhs"] = v.rhs;
        j["slack"] = v.slack;
    }
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

nlohmann::json summary_to_json(const EpisodeSummary& e, const RunConfig& cfg) {
    ordered_json j;
    j["scheme"] = scheme_name(cfg.scheme);
    j["T"] = e.T;
    j["seed"] = e.seed;
    j["total_bits"] = e.total_bits;
    j["rate_bits"] = e.rate_bits;
    j["ideal_rate_bits"] = e.ideal_rate_bits;
    j["avg_distortion"] = e.avg_distortion;
    j["outage_rate"] = e.outage_rate;
    j["nonmember_rate"] = e.nonmember_rate;
    j["masked_nonmember_rate"] = e.masked_nonmember_rate;
    j["lambda_final"] = e.lambda_final;
    j["lambda_min"] = e.lambda_min;
    j["lambda_max"] = e.lambda_max;
    j["q_final"] = e.q_final;
    j["q_max"] = e.q_max;
    j["cum_delta_ch_bound"] = e.cum_delta_ch_bound;
    j["cum_delta_ch_true"] = e.cum_delta_ch_true;
    j["cum_delta_tgt"] = e.cum_delta_tgt;
    j["erasures"] = e.erasure_count;
    j["sync_divergences"] = e.sync_divergences;
    j["lossless_mode"] = e.lossless_mode;
    if (e.predictor_L) j["predictor_L_bits"] = *e.predictor_L;
    j["d_max"] = e.d_max;
    if (!e.source_boundaries.empty()) j["source_boundaries"] = e.source_boundaries;
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : e.verdicts) verdicts.push_back(verdict_to_json(v));
    j["verdicts"] = verdicts;
    j["config"] = run_config_to_json(cfg);
    return j;
}

nlohmann::json block_search_to_json(const BlockSearchResult& r) {
    ordered_json j;
    j["feasible"] = r.feasible;
    if (r.feasible) {
        j["s_star"] = r.s_star;
        j["achieved_distortion"] = r.achieved_distortion;
        j["rate_bits"] = r.rate_bits;
    }
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& p : r.grid) {
        ordered_json g;
        g["s"] = p.s;
        g["feasible"] = p.feasible;
        if (p.feasible) {
            g["avg_distortion"] = p.avg_distortion;
            g["rate_bits"] = p.rate_bits;
        }
        grid.push_back(g);
    }
    j["grid"] = grid;
    return j;
}

EpisodeSummary summarize_trace(const RunConfig& cfg, std::istream& jsonl) {
    const DistortionMeasure dm = build_distortion(cfg);
    const bool sparse = scheme_is_sparse_family(cfg.scheme);
    const bool dropout = cfg.scheme == Scheme::LlmzipDropout;
    const bool adaptive = scheme_is_channel_adaptive(cfg.scheme);
    const bool conformal = cfg.scheme == Scheme::Ocsc || cfg.scheme == Scheme::Ocrdc || adaptive;
    const bool lossless = cfg.scheme == Scheme::Ocrdc && cfg.D == 0.0;
    const double eps = adaptive ? cfg.effective_epsilon() : 0.0;

    EpisodeSummary e;
    e.seed = cfg.seed;
    e.lossless_mode = lossless;
    e.d_max = dm.d_max();
    switch (cfg.predictor.kind) {
        case PredictorConfig::Kind::Uniform:
            e.predictor_L = std::log2(static_cast<double>(cfg.alphabet_size));
            break;
        case PredictorConfig::Kind::Markov:
            e.predictor_L = std::log2(static_cast<double>(cfg.alphabet_size) / cfg.predictor.alpha);
            break;
        case PredictorConfig::Kind::Scripted:
            if (cfg.predictor.floor_alpha > 0.0)
                e.predictor_L =
                    std::log2(static_cast<double>(cfg.alphabet_size) / cfg.predictor.floor_alpha);
            break;
    }

    // Independent replay of the conformal recursion and the queue from the
    // traced observables; every traced lambda/Q must match the replay.
    double lambda = cfg.lambda0;
    DistortionQueue queue;
    queue.epsilon = eps;
    double delta_tgt = 0.0;
    e.lambda_min = e.lambda_max = cfg.lambda0;

    double cum_dist = 0.0, cum_outage = 0.0, ideal_total = 0.0;
    long t_expected = 1;
    std::string line;
    while (std::getline(jsonl, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        const long t = j.at("t").get<long>();
        if (t != t_expected)
            throw std::runtime_error("trace: unexpected step index " + std::to_string(t));
        t_expected++;

        const Symbol x = j.at("x").get<Symbol>();
        const Symbol x_tilde = j.at("x_tilde").get<Symbol>();
        const Symbol x_hat = j.at("x_hat").get<Symbol>();
        const int E = j.at("E").get<int>();
        const int b = j.at("b").get<int>();
        const double d = json_number(j, "d");

        const double d_check = dm(x, x_hat);
        if (std::fabs(d_check - d) > 1e-12)
            throw std::runtime_error("trace: distortion field mismatch at t=" + std::to_string(t));

        if (conformal) {
            const double traced_lambda = json_number(j, "lambda");
            if (std::fabs(traced_lambda - lambda) > 1e-9)
                throw std::runtime_error("trace: lambda deviates from the replayed recursion at t=" +
                                         std::to_string(t));
        }

        const int nonmember = sparse || dropout ? (x_tilde == kOutage ? 1 : 0)
                                                : (x_tilde == x ? 0 : 1);
        const double selected_dist =
            sparse || dropout ? 0.0 : dm(x, x_tilde == kOutage ? x : x_tilde);

        // Replay the update that produced lambda_{t+1}.
        if (cfg.scheme == Scheme::Ocsc) {
            lambda -= cfg.eta * (static_cast<double>(nonmember) - cfg.D);
        } else if (cfg.scheme == Scheme::Ocrdc) {
            lambda += cfg.eta * (selected_dist - cfg.D);
        } else if (adaptive) {
            const double traced_tgt = json_number(j, "delta_tgt");
            if (std::fabs(traced_tgt - delta_tgt) > 1e-9)
                throw std::runtime_error("trace: delta_tgt deviates from the replayed policy at t=" +
                                         std::to_string(t));
            const double arrival = json_number(j, "delta_ch_bound");
            if (cfg.scheme == Scheme::CaOcsc) {
                lambda -= cfg.eta * ((1.0 - E) * static_cast<double>(nonmember) - cfg.D + delta_tgt);
            } else {
                lambda += cfg.eta * (selected_dist - cfg.D + delta_tgt);
            }
            queue = step_queue(queue, arrival, delta_tgt);
            delta_tgt = next_adjustment(queue, cfg.D);
            const double traced_q = json_number(j, "Q");
            if (std::fabs(traced_q - queue.q()) > 1e-9)
                throw std::runtime_error("trace: Q deviates from the replayed queue at t=" +
                                         std::to_string(t));
            e.cum_delta_tgt += traced_tgt;
            e.cum_delta_ch_bound += arrival;
            e.q_max = std::max(e.q_max, queue.q());
        }
        if (conformal) {
            e.lambda_min = std::min(e.lambda_min, lambda);
            e.lambda_max = std::max(e.lambda_max, lambda);
        }

        e.T = t;
        e.total_bits += b;
        ideal_total += json_number(j, "ideal_bits");
        cum_dist += d;
        cum_outage += x_hat == x ? 0.0 : 1.0;
        e.cum_nonmember += nonmember;
        e.cum_masked_nonmember += (1 - E) * nonmember;
        e.cum_selected_dist += selected_dist;
        e.cum_delta_ch_true += json_number(j, "delta_ch");
        e.erasure_count += E;
    }
    if (e.T == 0) throw std::runtime_error("trace: no steps found");

    const double T = static_cast<double>(e.T);
    e.rate_bits = static_cast<double>(e.total_bits) / T;
    e.ideal_rate_bits = ideal_total / T;
    e.avg_distortion = cum_dist / T;
    e.outage_rate = cum_outage / T;
    e.nonmember_rate = e.cum_nonmember / T;
    e.masked_nonmember_rate = e.cum_masked_nonmember / T;
    e.lambda_final = conformal ? lambda : 0.0;
    if (!conformal) e.lambda_min = e.lambda_max = 0.0;
    e.q_final = adaptive ? queue.q() : 0.0;

    RunConfig cfg_t = cfg;
    cfg_t.T = e.T;
    e.verdicts = bounds::verify_all(e, cfg_t);
    return e;
}

int exit_code_from_verdicts(const std::vector<bounds::Verdict>& verdicts) {
    for (const auto& v : verdicts)
        if (v.status == bounds::VerdictStatus::Violated) return 2;
    return 0;
}

nlohmann::json generate_source_file(const RunConfig& cfg, const std::string& path,
                                    const std::string& format) {
    SourceOutput out = materialize_source(cfg.source, cfg.alphabet_size, cfg.T);
    if (format == "json") save_symbols_json(path, out.symbols);
    else if (format == "u16le") save_symbols_u16le(path, out.symbols);
    else throw std::invalid_argument("generate_source_file: format must be u16le or json");
    ordered_json j;
    j["path"] = path;
    j["format"] = format;
    j["length"] = static_cast<long>(out.symbols.size());
    j["alphabet_size"] = cfg.alphabet_size;
    if (!out.boundaries.empty()) j["boundaries"] = out.boundaries;
    return j;
}

}  // namespace occ
