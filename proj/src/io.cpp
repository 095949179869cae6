#include "hcd/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hcd {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::vector<GraphSnapshot> load_stream(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<GraphSnapshot> stream;
    std::set<int> seen_timestamps;
    std::string line;
    std::size_t line_no = 0;
    GraphSnapshot* current = nullptr;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            int t = 0, n = 0, directed = 0;
            if (std::sscanf(line.c_str(), "# t=%d n=%d directed=%d", &t, &n, &directed) != 3)
                parse_fail(path, line_no, "malformed snapshot header");
            if (n < 1) parse_fail(path, line_no, "node count must be >= 1");
            if (directed != 0 && directed != 1)
                parse_fail(path, line_no, "directed flag must be 0 or 1");
            if (!seen_timestamps.insert(t).second)
                parse_fail(path, line_no, "duplicate timestamp t=" + std::to_string(t));
            GraphSnapshot g;
            g.timestamp = t;
            g.n_nodes = n;
            g.directed = directed == 1;
            stream.push_back(std::move(g));
            current = &stream.back();
            continue;
        }
        if (current == nullptr) parse_fail(path, line_no, "edge line before any snapshot header");
        int u = 0, v = 0;
        char extra = 0;
        if (std::sscanf(line.c_str(), "%d %d %c", &u, &v, &extra) != 2)
            parse_fail(path, line_no, "malformed edge line");
        if (u < 1 || u > current->n_nodes || v < 1 || v > current->n_nodes)
            parse_fail(path, line_no, "edge endpoint out of range");
        if (u == v) parse_fail(path, line_no, "self-loops are not allowed");
        current->edges.emplace_back(u - 1, v - 1);
    }
    if (stream.empty()) throw ParseError(path + ": no snapshots");

    for (auto& g : stream) g.canonicalize();
    std::sort(stream.begin(), stream.end(),
              [](const GraphSnapshot& a, const GraphSnapshot& b) {
                  return a.timestamp < b.timestamp;
              });
    for (std::size_t i = 1; i < stream.size(); ++i) {
        if (stream[i].n_nodes != stream.front().n_nodes)
            throw ParseError(path + ": inconsistent node counts across snapshots");
        if (stream[i].directed != stream.front().directed)
            throw ParseError(path + ": inconsistent directedness across snapshots");
    }
    return stream;
}

void save_stream(const std::string& path, std::span<const GraphSnapshot> stream) {
    auto out = open_out(path);
    for (const auto& g : stream) {
        out << "# t=" << g.timestamp << " n=" << g.n_nodes
            << " directed=" << (g.directed ? 1 : 0) << "\n";
        for (const auto& [u, v] : g.edges) out << u + 1 << " " << v + 1 << "\n";
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

void save_annotations(const std::string& path, const StreamScenario& scenario) {
    json doc;
    doc["scenario"] = scenario.name;
    doc["length"] = scenario.length;
    doc["n_nodes"] = scenario.n_nodes;
    doc["beta"] = scenario.beta;
    doc["seed"] = scenario.seed;
    doc["changes"] = json::array();
    for (const auto& tr : scenario.transitions)
        doc["changes"].push_back({{"t", tr.t_begin}, {"t_end", tr.t_end}, {"level", tr.level}});
    doc["segments"] = json::array();
    for (const auto& seg : scenario.segments)
        doc["segments"].push_back({{"t_begin", seg.t_begin}, {"t_end", seg.t_end}, {"k", seg.k}});
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_reports_csv(const std::string& path, std::span<const ChangeReport> reports) {
    auto out = open_out(path);
    out << "t,phi,phi_xz,phi_z,delta_l,eps,eps_xz,eps_z,"
           "k_hat,k_hat1,k_hat2,alarm_level3,alarm_level2,alarm_level1,w_xz,w_z\n";
    for (const auto& r : reports) {
        out << r.t << ',' << format_double(r.phi) << ',' << format_double(r.phi_xz) << ','
            << format_double(r.phi_z) << ',' << format_double(r.delta_l) << ','
            << format_double(r.eps) << ',' << format_double(r.eps_xz) << ','
            << format_double(r.eps_z) << ',' << r.k_hat << ',' << r.k_hat1 << ','
            << r.k_hat2 << ',' << (r.alarm_level3 ? 1 : 0) << ',' << (r.alarm_level2 ? 1 : 0)
            << ',' << (r.alarm_level1 ? 1 : 0) << ',';
        if (r.has_weights)
            out << format_double(r.w_xz) << ',' << format_double(r.w_z);
        else
            out << ',';
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_reports_json(const std::string& path, std::span<const ChangeReport> reports,
                        const DetectorConfig& config, const std::string& input_path) {
    json doc;
    doc["input"] = input_path;
    doc["config"] = {{"h", config.h},
                     {"delta", config.delta},
                     {"delta_xz", config.delta_xz},
                     {"delta_z", config.delta_z},
                     {"k_max", config.k_max},
                     {"restarts", config.restarts},
                     {"seed", config.seed},
                     {"window_mode",
                      config.window_mode == WindowMode::pooled ? "pooled" : "per-snapshot"}};
    doc["n_reports"] = reports.size();
    json alarms = json::array();
    for (const auto& r : reports) {
        if (r.alarm_level3) alarms.push_back({{"t", r.t}, {"level", 3}});
        if (r.alarm_level2) alarms.push_back({{"t", r.t}, {"level", 2}});
        if (r.alarm_level1) alarms.push_back({{"t", r.t}, {"level", 1}});
    }
    doc["alarms"] = std::move(alarms);
    json models = json::array();
    for (const auto& r : reports)
        models.push_back({{"t", r.t}, {"k_hat", r.k_hat}, {"k_hat1", r.k_hat1},
                          {"k_hat2", r.k_hat2}});
    doc["selected_models"] = std::move(models);
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

void write_experiment_csv(const std::string& path, const ExperimentResult& result) {
    auto out = open_out(path);
    out << "scenario,method,h,level,benefit_mean,benefit_std,far_mean,far_std,threshold,"
           "trials\n";
    for (const auto& row : result.rows) {
        out << scenario_name(result.scenario) << ',' << row.method << ',' << row.h << ','
            << row.level << ',' << format_double(row.benefit_mean) << ','
            << format_double(row.benefit_std) << ',' << format_double(row.far_mean) << ','
            << format_double(row.far_std) << ',' << format_double(row.threshold) << ','
            << result.trials << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_experiment_json(const std::string& path, const ExperimentResult& result) {
    json doc;
    doc["scenario"] = scenario_name(result.scenario);
    doc["trials"] = result.trials;
    doc["rows"] = json::array();
    for (const auto& row : result.rows)
        doc["rows"].push_back({{"method", row.method},
                               {"h", row.h},
                               {"level", row.level},
                               {"benefit_mean", row.benefit_mean},
                               {"benefit_std", row.benefit_std},
                               {"far_mean", row.far_mean},
                               {"far_std", row.far_std},
                               {"threshold", row.threshold}});
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

}  // namespace hcd
