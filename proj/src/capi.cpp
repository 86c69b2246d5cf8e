#include "occ.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "occ/config.hpp"
#include "occ/episode.hpp"
#include "occ/harness.hpp"

namespace {

thread_local std::string g_last_error = "";

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

occ_status fail(occ_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

occ_status parse_config(const char* config_json, occ::RunConfig& out) {
    if (config_json == nullptr) return fail(OCC_INVALID_ARGUMENT, "config_json is NULL");
    nlohmann::json j = nlohmann::json::parse(config_json, nullptr, false);
    if (j.is_discarded()) return fail(OCC_PARSE_ERROR, "config is not valid JSON");
    try {
        out = occ::parse_run_config(j);
    } catch (const std::exception& ex) {
        return fail(OCC_INVALID_ARGUMENT, ex.what());
    }
    return OCC_OK;
}

// Runs fn() under the standard exception-to-status mapping.
template <typename Fn>
occ_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& ex) {
        return fail(OCC_INVALID_ARGUMENT, ex.what());
    } catch (const std::exception& ex) {
        return fail(OCC_RUNTIME_ERROR, ex.what());
    } catch (...) {
        return fail(OCC_RUNTIME_ERROR, "unknown error");
    }
}

occ_status run_one(const occ::RunConfig& cfg, const char* trace_path, char** summary_json) {
    std::ofstream trace;
    if (trace_path != nullptr) {
        trace.open(trace_path);
        if (!trace) return fail(OCC_IO_ERROR, std::string("cannot open trace file: ") + trace_path);
    }
    occ::StepSink sink = [&](const occ::StepRecord& r) {
        trace << occ::step_to_json(r, cfg.trace_bits).dump() << '\n';
    };
    const occ::StepSink* sink_ptr = trace_path != nullptr ? &sink : nullptr;
    occ::EpisodeSummary summary = occ::run_episode(cfg, sink_ptr);
    if (trace_path != nullptr && !trace)
        return fail(OCC_IO_ERROR, std::string("failed writing trace file: ") + trace_path);
    if (summary_json != nullptr)
        *summary_json = copy_string(occ::summary_to_json(summary, cfg).dump(2));
    return OCC_OK;
}

}  // namespace

extern "C" {

struct occ_runner {
    occ::RunConfig config;
};

const char* occ_version(void) {
    return "1.0.0";
}

const char* occ_status_name(occ_status status) {
    switch (status) {
        case OCC_OK: return "ok";
        case OCC_INVALID_ARGUMENT: return "invalid-argument";
        case OCC_PARSE_ERROR: return "parse-error";
        case OCC_RUNTIME_ERROR: return "runtime-error";
        case OCC_IO_ERROR: return "io-error";
    }
    return "unknown";
}

const char* occ_last_error(void) {
    return g_last_error.c_str();
}

void occ_string_free(char* s) {
    std::free(s);
}

occ_status occ_runner_create(const char* config_json, occ_runner** out) {
    if (out == nullptr) return fail(OCC_INVALID_ARGUMENT, "out is NULL");
    *out = nullptr;
    occ::RunConfig cfg;
    const occ_status st = parse_config(config_json, cfg);
    if (st != OCC_OK) return st;
    *out = new occ_runner{std::move(cfg)};
    return OCC_OK;
}

void occ_runner_destroy(occ_runner* runner) {
    delete runner;
}

occ_status occ_runner_run(occ_runner* runner, const char* trace_path, char** summary_json) {
    if (runner == nullptr) return fail(OCC_INVALID_ARGUMENT, "runner is NULL");
    return guarded([&] { return run_one(runner->config, trace_path, summary_json); });
}

occ_status occ_run_episode(const char* config_json, const char* trace_path, char** summary_json) {
    occ::RunConfig cfg;
    const occ_status st = parse_config(config_json, cfg);
    if (st != OCC_OK) return st;
    return guarded([&] { return run_one(cfg, trace_path, summary_json); });
}

occ_status occ_sweep(const char* config_json, const char* csv_path, char** report_json) {
    occ::RunConfig cfg;
    const occ_status st = parse_config(config_json, cfg);
    if (st != OCC_OK) return st;
    return guarded([&]() -> occ_status {
        const auto rows = occ::run_sweep(cfg);
        if (csv_path != nullptr) {
            std::ofstream out(csv_path);
            if (!out) return fail(OCC_IO_ERROR, std::string("cannot open csv file: ") + csv_path);
            occ::write_sweep_csv(out, rows);
        }
        if (report_json != nullptr) {
            nlohmann::json j;
            j["rows"] = rows.size();
            long failures = 0;
            long violations = 0;
            for (const auto& r : rows) {
                if (!r.ok) failures++;
                else if (occ::exit_code_from_verdicts(r.summary.verdicts) != 0) violations++;
            }
            j["failures"] = failures;
            j["violations"] = violations;
            *report_json = copy_string(j.dump(2));
        }
        return OCC_OK;
    });
}

occ_status occ_block_search(const char* config_json, char** result_json) {
    occ::RunConfig cfg;
    const occ_status st = parse_config(config_json, cfg);
    if (st != OCC_OK) return st;
    return guarded([&]() -> occ_status {
        const occ::BlockSearchResult r = occ::block_search(cfg);
        if (result_json != nullptr) *result_json = copy_string(occ::block_search_to_json(r).dump(2));
        return OCC_OK;
    });
}

occ_status occ_verify_trace(const char* config_json, const char* trace_jsonl_path,
                            char** verdicts_json) {
    occ::RunConfig cfg;
    const occ_status st = parse_config(config_json, cfg);
    if (st != OCC_OK) return st;
    if (trace_jsonl_path == nullptr) return fail(OCC_INVALID_ARGUMENT, "trace path is NULL");
    return guarded([&]() -> occ_status {
        std::ifstream in(trace_jsonl_path);
        if (!in)
            return fail(OCC_IO_ERROR, std::string("cannot open trace file: ") + trace_jsonl_path);
        occ::EpisodeSummary e = occ::summarize_trace(cfg, in);
        if (verdicts_json != nullptr) {
            occ::RunConfig cfg_t = cfg;
            cfg_t.T = e.T;
            *verdicts_json = copy_string(occ::summary_to_json(e, cfg_t).dump(2));
        }
        return OCC_OK;
    });
}

occ_status occ_generate_source(const char* config_json, const char* out_path, const char* format,
                               char** info_json) {
    occ::RunConfig cfg;
    const occ_status st = parse_config(config_json, cfg);
    if (st != OCC_OK) return st;
    if (out_path == nullptr) return fail(OCC_INVALID_ARGUMENT, "output path is NULL");
    return guarded([&]() -> occ_status {
        const std::string fmt = format != nullptr ? format : "u16le";
        nlohmann::json info = occ::generate_source_file(cfg, out_path, fmt);
        if (info_json != nullptr) *info_json = copy_string(info.dump(2));
        return OCC_OK;
    });
}

}  // extern "C"
