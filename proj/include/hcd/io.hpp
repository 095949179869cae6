#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcd/detector.hpp"
#include "hcd/eval.hpp"
#include "hcd/graph.hpp"
#include "hcd/stream_gen.hpp"

namespace hcd {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Line-oriented snapshot stream format: a header line
/// `# t=<int> n=<int> directed=<0|1>` followed by one `u v` edge per line,
/// 1-indexed. Snapshots are returned ordered by timestamp; inconsistent
/// node counts, duplicate timestamps and malformed lines are rejected with
/// the offending line number.
std::vector<GraphSnapshot> load_stream(const std::string& path);
void save_stream(const std::string& path, std::span<const GraphSnapshot> stream);

/// Ground-truth sidecar for generated streams (JSON: change times with
/// levels plus the per-segment true block counts).
void save_annotations(const std::string& path, const StreamScenario& scenario);

/// Score series as CSV with a fixed header; one row per report. Weight
/// columns are empty unless both level-1 and level-2 alarms fired.
void write_reports_csv(const std::string& path, std::span<const ChangeReport> reports);

/// JSON summary: config echo, alarm list, selected models per report.
void write_reports_json(const std::string& path, std::span<const ChangeReport> reports,
                        const DetectorConfig& config, const std::string& input_path);

void write_experiment_csv(const std::string& path, const ExperimentResult& result);
void write_experiment_json(const std::string& path, const ExperimentResult& result);

/// Shortest round-trippable decimal form, locale-independent.
std::string format_double(double v);

}  // namespace hcd
