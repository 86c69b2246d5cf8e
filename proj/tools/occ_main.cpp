// Command-line front end for the conformal compression simulator. Everything
// goes through the shared library's C interface; this binary only assembles
// the JSON configuration and reports results.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "occ.h"

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::string> scheme;
    std::optional<double> D;
    std::optional<double> eta;
    std::optional<double> lambda0;
    std::optional<double> epsilon;
    std::optional<long> T;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> channel;
    bool no_trace = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration file");
    cmd->add_option("--out-dir", args.out_dir, "output directory");
    cmd->add_option("--scheme", args.scheme,
                    "ocsc | ocrdc | ca-ocsc | ca-ocrdc | llmzip-dropout | block-csc | block-crdc");
    cmd->add_option("--D", args.D, "target distortion level");
    cmd->add_option("--eta", args.eta, "conformal step size");
    cmd->add_option("--lambda0", args.lambda0, "initial conformal parameter");
    cmd->add_option("--epsilon", args.epsilon, "channel-adaptive margin");
    cmd->add_option("--T", args.T, "horizon length");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--channel", args.channel,
                    "error-free | bernoulli:<e> | ge:<a>,<b>,<eB>,<eG> | pattern:<bits>");
}

json channel_from_string(const std::string& spec) {
    json ch;
    if (spec == "error-free" || spec == "ideal") {
        ch["kind"] = "error-free";
        return ch;
    }
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "bernoulli") {
        ch["kind"] = "bernoulli";
        ch["e"] = std::stod(rest);
    } else if (kind == "ge") {
        double a, b, eb, eg;
        if (std::sscanf(rest.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &eb, &eg) != 4)
            throw CLI::ValidationError("--channel", "ge needs a,b,eB,eG");
        ch["kind"] = "gilbert-elliott";
        ch["a"] = a;
        ch["b"] = b;
        ch["e_b"] = eb;
        ch["e_g"] = eg;
    } else if (kind == "pattern") {
        json pattern = json::array();
        for (char c : rest) {
            if (c != '0' && c != '1') throw CLI::ValidationError("--channel", "pattern bits must be 0/1");
            pattern.push_back(c - '0');
        }
        ch["kind"] = "deterministic";
        ch["pattern"] = pattern;
    } else {
        throw CLI::ValidationError("--channel", "unknown channel spec '" + spec + "'");
    }
    return ch;
}

json build_config(const CommonArgs& args) {
    json cfg = json::object();
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + args.config_path);
        in >> cfg;
    }
    if (args.scheme) cfg["scheme"] = *args.scheme;
    if (args.T) cfg["T"] = *args.T;
    if (args.seed) cfg["seed"] = *args.seed;
    if (args.channel) cfg["channel"] = channel_from_string(*args.channel);
    if (!cfg.contains("hyper")) cfg["hyper"] = json::object();
    if (args.D) cfg["hyper"]["D"] = *args.D;
    if (args.eta) cfg["hyper"]["eta"] = *args.eta;
    if (args.lambda0) cfg["hyper"]["lambda0"] = *args.lambda0;
    if (args.epsilon) cfg["hyper"]["epsilon"] = *args.epsilon;
    return cfg;
}

int report_error(occ_status st) {
    std::cerr << "error (" << occ_status_name(st) << "): " << occ_last_error() << "\n";
    return 1;
}

// 0 if every applicable guarantee holds, 2 if any is violated.
int exit_code_from_summary(const json& summary) {
    if (!summary.contains("verdicts")) return 0;
    for (const auto& v : summary["verdicts"])
        if (v.value("status", "") == "violated") return 2;
    return 0;
}

std::string take(char* s) {
    std::string out = s != nullptr ? s : "";
    occ_string_free(s);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-delay conformal compression simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, verify_args, block_args, gen_args;

    auto* run_cmd = app.add_subcommand("run", "run one episode and verify its guarantees");
    add_common(run_cmd, run_args);
    run_cmd->add_flag("--no-trace", run_args.no_trace, "skip writing the step trace");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a (D, seed) grid and write a CSV");
    add_common(sweep_cmd, sweep_args);
    std::string sweep_d_values, sweep_seeds;
    sweep_cmd->add_option("--d-values", sweep_d_values, "comma-separated distortion targets");
    sweep_cmd->add_option("--seeds", sweep_seeds, "comma-separated seeds");

    auto* verify_cmd = app.add_subcommand("verify", "re-verify guarantees from a step trace");
    add_common(verify_cmd, verify_args);
    std::string trace_path;
    verify_cmd->add_option("--trace", trace_path, "JSONL step trace")->required();

    auto* block_cmd = app.add_subcommand("block-search", "hindsight grid search for block baselines");
    add_common(block_cmd, block_args);

    auto* gen_cmd = app.add_subcommand("gen-source", "generate a symbol stream file");
    add_common(gen_cmd, gen_args);
    std::string gen_out = "source.bin", gen_format = "u16le";
    gen_cmd->add_option("--out", gen_out, "output file");
    gen_cmd->add_option("--format", gen_format, "u16le | json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const json cfg = build_config(run_args);
            std::filesystem::create_directories(run_args.out_dir);
            const std::string trace = run_args.out_dir + "/trace.jsonl";
            char* summary_raw = nullptr;
            const occ_status st = occ_run_episode(cfg.dump().c_str(),
                                                  run_args.no_trace ? nullptr : trace.c_str(),
                                                  &summary_raw);
            if (st != OCC_OK) return report_error(st);
            const std::string summary = take(summary_raw);
            std::ofstream(run_args.out_dir + "/summary.json") << summary << "\n";
            std::cout << summary << "\n";
            return exit_code_from_summary(json::parse(summary));
        }

        if (sweep_cmd->parsed()) {
            json cfg = build_config(sweep_args);
            if (!cfg.contains("sweep")) cfg["sweep"] = json::object();
            if (!sweep_d_values.empty()) {
                json arr = json::array();
                std::stringstream ss(sweep_d_values);
                std::string tok;
                while (std::getline(ss, tok, ',')) arr.push_back(std::stod(tok));
                cfg["sweep"]["d_values"] = arr;
            }
            if (!sweep_seeds.empty()) {
                json arr = json::array();
                std::stringstream ss(sweep_seeds);
                std::string tok;
                while (std::getline(ss, tok, ',')) arr.push_back(std::stoull(tok));
                cfg["sweep"]["seeds"] = arr;
            }
            std::filesystem::create_directories(sweep_args.out_dir);
            const std::string csv = sweep_args.out_dir + "/sweep.csv";
            char* report_raw = nullptr;
            const occ_status st = occ_sweep(cfg.dump().c_str(), csv.c_str(), &report_raw);
            if (st != OCC_OK) return report_error(st);
            const std::string report = take(report_raw);
            std::cout << report << "\n";
            const json r = json::parse(report);
            if (r.value("violations", 0) > 0) return 2;
            if (r.value("failures", 0) > 0) return 1;
            return 0;
        }

        if (verify_cmd->parsed()) {
            const json cfg = build_config(verify_args);
            char* verdicts_raw = nullptr;
            const occ_status st =
                occ_verify_trace(cfg.dump().c_str(), trace_path.c_str(), &verdicts_raw);
            if (st != OCC_OK) return report_error(st);
            const std::string verdicts = take(verdicts_raw);
            std::cout << verdicts << "\n";
            return exit_code_from_summary(json::parse(verdicts));
        }

        if (block_cmd->parsed()) {
            const json cfg = build_config(block_args);
            char* result_raw = nullptr;
            const occ_status st = occ_block_search(cfg.dump().c_str(), &result_raw);
            if (st != OCC_OK) return report_error(st);
            std::cout << take(result_raw) << "\n";
            return 0;
        }

        if (gen_cmd->parsed()) {
            const json cfg = build_config(gen_args);
            char* info_raw = nullptr;
            const occ_status st =
                occ_generate_source(cfg.dump().c_str(), gen_out.c_str(), gen_format.c_str(), &info_raw);
            if (st != OCC_OK) return report_error(st);
            std::cout << take(info_raw) << "\n";
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
