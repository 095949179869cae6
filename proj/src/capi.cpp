#include "hcd.h"

#include <cstring>
#include <memory>
#include <string>

#include "hcd/detector.hpp"
#include "hcd/eval.hpp"
#include "hcd/io.hpp"
#include "hcd/stream_gen.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
hcd_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return HCD_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return HCD_ERR_INVALID_ARGUMENT;
    } catch (const hcd::ParseError& e) {
        g_last_error = e.what();
        return HCD_ERR_PARSE;
    } catch (const hcd::IoError& e) {
        g_last_error = e.what();
        return HCD_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HCD_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return HCD_ERR_INTERNAL;
    }
}

hcd_status require(bool ok, const char* what) {
    if (ok) return HCD_OK;
    g_last_error = what;
    return HCD_ERR_INVALID_ARGUMENT;
}

hcd::DetectorConfig to_cpp(const hcd_config& c) {
    hcd::DetectorConfig out;
    out.h = c.h;
    out.delta = c.delta;
    out.delta_xz = c.delta_xz;
    out.delta_z = c.delta_z;
    out.k_max = c.k_max;
    out.restarts = c.restarts;
    out.seed = c.seed;
    out.window_mode = c.window_mode == HCD_WINDOW_PER_SNAPSHOT
                          ? hcd::WindowMode::per_snapshot
                          : hcd::WindowMode::pooled;
    return out;
}

}  // namespace

struct hcd_stream {
    std::vector<hcd::GraphSnapshot> snapshots;
    bool has_scenario = false;
    hcd::StreamScenario scenario;
};

struct hcd_result {
    std::vector<hcd::ChangeReport> reports;
};

struct hcd_table {
    hcd::ExperimentResult result;
    std::vector<std::string> method_storage;
};

extern "C" {

const char* hcd_status_name(hcd_status status) {
    switch (status) {
        case HCD_OK: return "ok";
        case HCD_ERR_INVALID_ARGUMENT: return "invalid argument";
        case HCD_ERR_IO: return "i/o error";
        case HCD_ERR_PARSE: return "parse error";
        case HCD_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* hcd_last_error(void) { return g_last_error.c_str(); }

hcd_status hcd_config_default(hcd_config* config) {
    if (auto rc = require(config != nullptr, "null config"); rc != HCD_OK) return rc;
    const hcd::DetectorConfig d;
    config->h = d.h;
    config->delta = d.delta;
    config->delta_xz = d.delta_xz;
    config->delta_z = d.delta_z;
    config->k_max = d.k_max;
    config->restarts = d.restarts;
    config->seed = d.seed;
    config->window_mode = HCD_WINDOW_POOLED;
    return HCD_OK;
}

hcd_status hcd_stream_load(const char* path, hcd_stream** out) {
    if (auto rc = require(path && out, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] {
        auto stream = std::make_unique<hcd_stream>();
        stream->snapshots = hcd::load_stream(path);
        *out = stream.release();
    });
}

hcd_status hcd_stream_save(const hcd_stream* stream, const char* path) {
    if (auto rc = require(stream && path, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] { hcd::save_stream(path, stream->snapshots); });
}

hcd_status hcd_stream_generate(const char* scenario, int n_nodes, uint64_t seed,
                               hcd_stream** out) {
    if (auto rc = require(scenario && out, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] {
        const hcd::Scenario which = hcd::scenario_from_name(scenario);
        auto stream = std::make_unique<hcd_stream>();
        hcd::GeneratedStream gen = which == hcd::Scenario::abrupt
                                       ? hcd::gen_abrupt(n_nodes, seed)
                                       : hcd::gen_gradual(n_nodes, seed);
        stream->snapshots = std::move(gen.snapshots);
        stream->scenario = std::move(gen.scenario);
        stream->has_scenario = true;
        *out = stream.release();
    });
}

hcd_status hcd_stream_save_annotations(const hcd_stream* stream, const char* path) {
    if (auto rc = require(stream && path, "null argument"); rc != HCD_OK) return rc;
    if (auto rc = require(stream->has_scenario, "stream carries no ground truth"); rc != HCD_OK)
        return rc;
    return guarded([&] { hcd::save_annotations(path, stream->scenario); });
}

size_t hcd_stream_length(const hcd_stream* stream) {
    return stream ? stream->snapshots.size() : 0;
}

int hcd_stream_node_count(const hcd_stream* stream) {
    return stream && !stream->snapshots.empty() ? stream->snapshots.front().n_nodes : 0;
}

void hcd_stream_free(hcd_stream* stream) { delete stream; }

hcd_status hcd_detect(const hcd_stream* stream, const hcd_config* config, hcd_result** out) {
    if (auto rc = require(stream && config && out, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] {
        auto result = std::make_unique<hcd_result>();
        result->reports = hcd::run_hcdl(stream->snapshots, to_cpp(*config));
        *out = result.release();
    });
}

size_t hcd_result_size(const hcd_result* result) { return result ? result->reports.size() : 0; }

hcd_status hcd_result_row(const hcd_result* result, size_t index, hcd_report_row* row) {
    if (auto rc = require(result && row, "null argument"); rc != HCD_OK) return rc;
    if (auto rc = require(index < result->reports.size(), "row index out of range");
        rc != HCD_OK)
        return rc;
    const hcd::ChangeReport& r = result->reports[index];
    *row = {r.t,      r.phi,   r.phi_xz, r.phi_z,  r.delta_l,
            r.eps,    r.eps_xz, r.eps_z,
            r.k_hat,  r.k_hat1, r.k_hat2,
            r.alarm_level3 ? 1 : 0, r.alarm_level2 ? 1 : 0, r.alarm_level1 ? 1 : 0,
            r.has_weights ? 1 : 0, r.w_xz, r.w_z};
    return HCD_OK;
}

hcd_status hcd_result_write_csv(const hcd_result* result, const char* path) {
    if (auto rc = require(result && path, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] { hcd::write_reports_csv(path, result->reports); });
}

hcd_status hcd_result_write_json(const hcd_result* result, const hcd_config* config,
                                 const char* input_path, const char* path) {
    if (auto rc = require(result && config && path, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] {
        hcd::write_reports_json(path, result->reports, to_cpp(*config),
                                input_path ? input_path : "");
    });
}

void hcd_result_free(hcd_result* result) { delete result; }

hcd_status hcd_experiment_run(const char* scenario, int n_trials, const int* h_values,
                              size_t n_h, int n_nodes, const hcd_config* config,
                              hcd_progress_fn progress, void* user, hcd_table** out) {
    if (auto rc = require(scenario && h_values && config && out && n_h > 0, "null argument");
        rc != HCD_OK)
        return rc;
    return guarded([&] {
        hcd::ExperimentConfig ec;
        ec.detector = to_cpp(*config);
        ec.n_nodes = n_nodes;
        if (progress)
            ec.progress = [progress, user](int trial, int total) {
                progress(trial, total, user);
            };
        auto table = std::make_unique<hcd_table>();
        table->result = hcd::run_experiment(hcd::scenario_from_name(scenario), n_trials,
                                            std::span<const int>(h_values, n_h), ec);
        for (const auto& row : table->result.rows)
            table->method_storage.push_back(row.method);
        *out = table.release();
    });
}

size_t hcd_table_size(const hcd_table* table) { return table ? table->result.rows.size() : 0; }

hcd_status hcd_table_row_at(const hcd_table* table, size_t index, hcd_table_row* row) {
    if (auto rc = require(table && row, "null argument"); rc != HCD_OK) return rc;
    if (auto rc = require(index < table->result.rows.size(), "row index out of range");
        rc != HCD_OK)
        return rc;
    const hcd::ResultRow& r = table->result.rows[index];
    row->method = table->method_storage[index].c_str();
    row->h = r.h;
    row->level = r.level;
    row->benefit_mean = r.benefit_mean;
    row->benefit_std = r.benefit_std;
    row->far_mean = r.far_mean;
    row->far_std = r.far_std;
    row->threshold = r.threshold;
    return HCD_OK;
}

hcd_status hcd_table_write_csv(const hcd_table* table, const char* path) {
    if (auto rc = require(table && path, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] { hcd::write_experiment_csv(path, table->result); });
}

hcd_status hcd_table_write_json(const hcd_table* table, const char* path) {
    if (auto rc = require(table && path, "null argument"); rc != HCD_OK) return rc;
    return guarded([&] { hcd::write_experiment_json(path, table->result); });
}

void hcd_table_free(hcd_table* table) { delete table; }

}  // extern "C"
