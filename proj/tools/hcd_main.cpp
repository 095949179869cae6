// Command-line front end. Talks to the core exclusively through the C API
// in hcd.h; the HCD_LOG environment variable (quiet|info|debug) controls
// stderr verbosity.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcd.h"

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("HCD_LOG");
    if (env == nullptr) return LogLevel::info;
    if (std::strcmp(env, "quiet") == 0) return LogLevel::quiet;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    return LogLevel::info;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::fprintf(stderr, "%s\n", msg.c_str());
}

int fail(hcd_status status) {
    std::fprintf(stderr, "error: %s (%s)\n", hcd_last_error(), hcd_status_name(status));
    return 1;
}

std::string sidecar_path(const std::string& output, const char* suffix) {
    const auto dot = output.rfind('.');
    const auto slash = output.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return output.substr(0, dot) + suffix;
    return output + suffix;
}

void add_detector_flags(CLI::App* cmd, hcd_config& config, std::string& window_mode) {
    cmd->add_option("--h", config.h, "Window half-width in snapshots");
    cmd->add_option("--delta", config.delta, "Confidence parameter for level-3 alarms");
    cmd->add_option("--delta-xz", config.delta_xz, "Confidence parameter for level-1 alarms");
    cmd->add_option("--delta-z", config.delta_z, "Confidence parameter for level-2 alarms");
    cmd->add_option("--kmax", config.k_max, "Largest candidate block count");
    cmd->add_option("--restarts", config.restarts, "Random restarts per model fit");
    cmd->add_option("--seed", config.seed, "RNG seed");
    cmd->add_option("--window-mode", window_mode, "pooled or per-snapshot")
        ->check(CLI::IsMember({"pooled", "per-snapshot"}));
}

struct ProgressPrinter {
    static void print(int trial, int n_trials, void*) {
        if (log_level() >= LogLevel::debug)
            std::fprintf(stderr, "trial %d/%d done\n", trial, n_trials);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical MDL change detection for network snapshot streams"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value config file");

    hcd_config config;
    hcd_config_default(&config);
    std::string window_mode = "pooled";

    std::string input, output, scenario = "abrupt";
    int n_nodes = 100;
    int trials = 20;
    std::vector<int> h_values;

    CLI::App* detect = app.add_subcommand("detect", "Run change detection on a stream file");
    detect->add_option("--input", input, "Snapshot stream file")->required();
    detect->add_option("--output", output, "Score CSV path (JSON summary written alongside)")
        ->required();
    add_detector_flags(detect, config, window_mode);

    CLI::App* generate = app.add_subcommand("generate", "Generate a synthetic stream");
    generate->add_option("--scenario", scenario, "abrupt or gradual")
        ->check(CLI::IsMember({"abrupt", "gradual"}));
    generate->add_option("--output", output, "Stream file path")->required();
    generate->add_option("--nodes", n_nodes, "Number of nodes");
    generate->add_option("--seed", config.seed, "RNG seed");

    CLI::App* experiment =
        app.add_subcommand("experiment", "Benefit/FAR comparison on synthetic streams");
    experiment->add_option("--scenario", scenario, "abrupt or gradual")
        ->check(CLI::IsMember({"abrupt", "gradual"}));
    experiment->add_option("--output", output, "Result CSV path (JSON written alongside)")
        ->required();
    experiment->add_option("--trials", trials, "Number of trials");
    experiment->add_option("--nodes", n_nodes, "Number of nodes");
    add_detector_flags(experiment, config, window_mode);
    experiment
        ->add_option("--h", h_values, "Window half-widths to evaluate (repeatable)")
        ->expected(-1);

    CLI11_PARSE(app, argc, argv);
    config.window_mode =
        window_mode == "per-snapshot" ? HCD_WINDOW_PER_SNAPSHOT : HCD_WINDOW_POOLED;

    if (detect->parsed()) {
        hcd_stream* stream = nullptr;
        if (auto rc = hcd_stream_load(input.c_str(), &stream); rc != HCD_OK) return fail(rc);
        log_info("loaded " + std::to_string(hcd_stream_length(stream)) + " snapshots, n=" +
                 std::to_string(hcd_stream_node_count(stream)));
        hcd_result* result = nullptr;
        if (auto rc = hcd_detect(stream, &config, &result); rc != HCD_OK) {
            hcd_stream_free(stream);
            return fail(rc);
        }
        const std::string json_path = sidecar_path(output, ".json");
        hcd_status rc = hcd_result_write_csv(result, output.c_str());
        if (rc == HCD_OK)
            rc = hcd_result_write_json(result, &config, input.c_str(), json_path.c_str());
        hcd_result_free(result);
        hcd_stream_free(stream);
        if (rc != HCD_OK) return fail(rc);
        log_info("wrote " + output + " and " + json_path);
        return 0;
    }

    if (generate->parsed()) {
        hcd_stream* stream = nullptr;
        if (auto rc = hcd_stream_generate(scenario.c_str(), n_nodes, config.seed, &stream);
            rc != HCD_OK)
            return fail(rc);
        const std::string truth_path = sidecar_path(output, ".truth.json");
        hcd_status rc = hcd_stream_save(stream, output.c_str());
        if (rc == HCD_OK) rc = hcd_stream_save_annotations(stream, truth_path.c_str());
        hcd_stream_free(stream);
        if (rc != HCD_OK) return fail(rc);
        log_info("wrote " + output + " and " + truth_path);
        return 0;
    }

    // experiment
    if (h_values.empty()) h_values = {1, 2, 3};
    hcd_table* table = nullptr;
    if (auto rc = hcd_experiment_run(scenario.c_str(), trials, h_values.data(), h_values.size(),
                                     n_nodes, &config, &ProgressPrinter::print, nullptr, &table);
        rc != HCD_OK)
        return fail(rc);
    const std::string json_path = sidecar_path(output, ".json");
    hcd_status rc = hcd_table_write_csv(table, output.c_str());
    if (rc == HCD_OK) rc = hcd_table_write_json(table, json_path.c_str());
    hcd_table_free(table);
    if (rc != HCD_OK) return fail(rc);
    log_info("wrote " + output + " and " + json_path);
    return 0;
}
