#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hcd/graph.hpp"
#include "hcd/nml.hpp"
#include "hcd/sbm.hpp"

namespace hcd {

struct DetectorConfig {
    int h = 2;                 // window half-width in snapshots
    double delta = 0.05;       // confidence parameter, level 3
    double delta_xz = 0.05;    // level 1
    double delta_z = 0.05;     // level 2
    int k_max = 10;
    int restarts = 10;
    std::uint64_t seed = 0;
    WindowMode window_mode = WindowMode::pooled;

    void validate() const;
};

/// Per-time-point record emitted by the sliding-window driver. The report
/// at time t covers snapshots x_{t-h+1}..x_{t+h} and scores a change of
/// regime between t and t+1. Scores and thresholds are in nats/snapshot.
struct ChangeReport {
    int t = 0;
    double phi = 0.0, phi_xz = 0.0, phi_z = 0.0, delta_l = 0.0;
    double eps = 0.0, eps_xz = 0.0, eps_z = 0.0;
    int k_hat = 1, k_hat1 = 1, k_hat2 = 1;
    bool alarm_level3 = false, alarm_level2 = false, alarm_level1 = false;
    bool has_weights = false;
    double w_xz = 0.0, w_z = 0.0;
    BlockAssignment labels;  // aligned full-window labels at snapshot t
};

/// Integer code length for a model index: ln 2.865 + ln k + ln ln k + ...,
/// keeping only the strictly positive terms.
double model_code_len(int k);

/// L(M1) plus the add-half transition code for M2 given M1 with
/// alpha = (n_changes_so_far + 1/2) / (t + 1): -ln(1 - alpha) when the
/// model is kept, -ln(alpha / (k_max - 1)) when it switches.
double model_pair_code_len(int k1, int k2, std::int64_t n_changes_so_far, std::int64_t t,
                           int k_max);

struct Thresholds {
    double eps = 0.0, eps_xz = 0.0, eps_z = 0.0;
};

/// Thresholds from the Type I error bound, evaluated by plugging the
/// selected model's complexities into the bound at confidence delta:
///   eps      = (ln C_{X|Z} + ln C_Z + L(k_hat) - ln delta) / 2h
///   eps_xz   = (ln C_{X|Z}            - ln delta_xz)       / 2h
///   eps_z    = (ln C_Z                - ln delta_z)        / 2h
Thresholds thresholds(int k_hat, const SbmSufficientStats& stats_full,
                      const DetectorConfig& config, ComplexityCache& cache);

/// Same thresholds from an already-evaluated code length, so that the
/// complexity terms always match the active window mode.
Thresholds thresholds_from_parts(const DnmlParts& full_parts, int k_hat,
                                 const DetectorConfig& config);

/// Importance weights of simultaneous level-1/level-2 changes.
std::pair<double, double> weights(double phi_xz, double phi_z);

struct WindowEvaluation {
    ChangeReport report;  // scores and model fields only
    ModelFit full;        // fit of the concatenated window
};

WindowEvaluation evaluate_window(std::span<const GraphSnapshot> left,
                                 std::span<const GraphSnapshot> right,
                                 const DetectorConfig& config,
                                 std::int64_t n_changes_so_far, int t,
                                 ComplexityCache& cache);

/// MDL change statistic with DNML code lengths on an explicit window pair;
/// fits models on the full window and on each half, and decomposes the
/// score as phi = phi_xz + phi_z + delta_l exactly.
ChangeReport mdl_change_statistic(std::span<const GraphSnapshot> left,
                                  std::span<const GraphSnapshot> right,
                                  const DetectorConfig& config,
                                  std::int64_t n_changes_so_far, int t,
                                  ComplexityCache& cache);

/// Sliding-window hierarchical change detection over a snapshot stream
/// (1-based time; reports run from t = h to t = len - h). A level-3 alarm
/// suppresses the level-1/2 tests at the same t; the level-3 alarm count
/// feeds the model-transition code, and block labels of consecutive
/// windows are aligned.
std::vector<ChangeReport> run_hcdl(std::span<const GraphSnapshot> stream,
                                   const DetectorConfig& config);

}  // namespace hcd
