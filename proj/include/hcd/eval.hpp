#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcd/detector.hpp"
#include "hcd/stream_gen.hpp"

namespace hcd {

/// A time-indexed score sequence. The harness uses two indexings of the
/// detector margins: by claimed change time (window center + 1) when
/// scoring detection accuracy, and by wall-clock availability (window end)
/// when counting pre-change false alarms.
struct ScoreSeries {
    int t_begin = 1;
    std::vector<double> values;

    int t_end() const { return t_begin + static_cast<int>(values.size()) - 1; }
    bool covers(int t) const { return t >= t_begin && t <= t_end(); }
    double at(int t) const { return values[t - t_begin]; }
};

/// Detection-delay reward: max(1 - |t_hat - t_star| / T, 0).
double benefit(int t_hat, int t_star, int decay_horizon);

/// Fraction of guard points t in (t_star - U, t_star) whose score exceeds
/// the threshold.
double far(const ScoreSeries& scores, double threshold, int t_star, int guard_len);

/// First claimed change time c >= t_star with score above threshold.
std::optional<int> first_detection(const ScoreSeries& scores, double threshold, int t_star);

enum class Scenario { abrupt, gradual };

Scenario scenario_from_name(const std::string& name);
const char* scenario_name(Scenario scenario);

struct ExperimentConfig {
    DetectorConfig detector;  // h is overridden by each h_values entry
    int n_nodes = 100;
    int decay_horizon = 5;  // T
    int guard_len = 10;     // U
    double beta = 0.02;

    double tbe_eta = 0.05;
    double tbe_alpha = 0.2;
    std::vector<double> tbe_grid{0.2, 0.5, 0.8};
    std::vector<double> deltacon_grid{0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.05};
    double deltacon_eps = 0.1;

    int threads = 0;  // 0 = hardware concurrency
    std::function<void(int trial, int n_trials)> progress;  // optional
};

struct ResultRow {
    std::string method;
    int h = 0;  // 0 for the per-snapshot baselines
    int level = 0;
    double benefit_mean = 0.0, benefit_std = 0.0;
    double far_mean = 0.0, far_std = 0.0;
    double threshold = 0.0;  // tuned grid value; 0 for hcdl (adaptive)
};

struct ExperimentResult {
    Scenario scenario = Scenario::abrupt;
    int trials = 0;
    std::vector<ResultRow> rows;
};

/// Generates `n_trials` streams, runs the hierarchical detector for each
/// requested h plus the TBE and DeltaCon baselines, and aggregates
/// per-level benefit/FAR. Baseline thresholds are tuned on their grids by
/// maximizing the harmonic mean of benefit and (1 - FAR) at the level-3
/// change. Deterministic given the detector seed.
ExperimentResult run_experiment(Scenario scenario, int n_trials, std::span<const int> h_values,
                                const ExperimentConfig& config);

// Per-trial score series (exposed for the baseline-focused tests).
ScoreSeries hcdl_margin_series(std::span<const ChangeReport> reports, int level);
ScoreSeries deltacon_series(std::span<const GraphSnapshot> stream, double eps_fabp);
ScoreSeries tbe_series(std::span<const GraphSnapshot> stream, const StreamScenario& scenario,
                       const ExperimentConfig& config);

}  // namespace hcd
