#include "hcd/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "hcd/rng.hpp"

namespace hcd {

void DetectorConfig::validate() const {
    if (h < 1) throw std::invalid_argument("window half-width must be >= 1");
    auto check_delta = [](double d, const char* name) {
        if (!(d > 0.0 && d < 1.0))
            throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
    };
    check_delta(delta, "delta");
    check_delta(delta_xz, "delta_xz");
    check_delta(delta_z, "delta_z");
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

double model_code_len(int k) {
    if (k < 1) throw std::invalid_argument("model index must be >= 1");
    double len = std::log(2.865);
    double term = std::log(static_cast<double>(k));
    while (term > 0.0) {
        len += term;
        term = std::log(term);
    }
    return len;
}

double model_pair_code_len(int k1, int k2, std::int64_t n_changes_so_far, std::int64_t t,
                           int k_max) {
    if (t < 0 || n_changes_so_far < 0 || n_changes_so_far > t)
        throw std::invalid_argument("change count must lie in [0, t]");
    const double alpha = (static_cast<double>(n_changes_so_far) + 0.5) /
                         (static_cast<double>(t) + 1.0);
    double transition;
    if (k1 == k2) {
        transition = -std::log1p(-alpha);
    } else {
        if (k_max < 2) throw std::invalid_argument("model switch requires k_max >= 2");
        transition = -std::log(alpha / (k_max - 1));
    }
    return model_code_len(k1) + transition;
}

Thresholds thresholds_from_parts(const DnmlParts& full_parts, int k_hat,
                                 const DetectorConfig& config) {
    const double two_h = 2.0 * config.h;
    const double log_c_xz = full_parts.x_complexity;
    const double log_c_z = full_parts.z_complexity;
    Thresholds out;
    out.eps = (log_c_xz + log_c_z + model_code_len(k_hat) - std::log(config.delta)) / two_h;
    out.eps_xz = (log_c_xz - std::log(config.delta_xz)) / two_h;
    out.eps_z = (log_c_z - std::log(config.delta_z)) / two_h;
    return out;
}

Thresholds thresholds(int k_hat, const SbmSufficientStats& stats_full,
                      const DetectorConfig& config, ComplexityCache& cache) {
    if (stats_full.k != k_hat) throw std::invalid_argument("stats were pooled at a different k");
    return thresholds_from_parts(dnml_code_length(stats_full, cache), k_hat, config);
}

std::pair<double, double> weights(double phi_xz, double phi_z) {
    const double sum = phi_xz + phi_z;
    if (!(sum > 0.0)) throw std::invalid_argument("weights need positive score components");
    return {phi_xz / sum, phi_z / sum};
}

WindowEvaluation evaluate_window(std::span<const GraphSnapshot> left,
                                 std::span<const GraphSnapshot> right,
                                 const DetectorConfig& config,
                                 std::int64_t n_changes_so_far, int t,
                                 ComplexityCache& cache) {
    config.validate();
    if (static_cast<int>(left.size()) != config.h || static_cast<int>(right.size()) != config.h)
        throw std::invalid_argument("both window halves must contain exactly h snapshots");
    const int n = left.front().n_nodes;
    for (const auto& g : left)
        if (g.n_nodes != n) throw std::invalid_argument("node count mismatch in window");
    for (const auto& g : right)
        if (g.n_nodes != n) throw std::invalid_argument("node count mismatch in window");

    std::vector<GraphSnapshot> full(left.begin(), left.end());
    full.insert(full.end(), right.begin(), right.end());

    const int k_max = std::min(config.k_max, n);
    const std::uint64_t st = static_cast<std::uint64_t>(t);
    ModelFit fit_full = select_model(full, k_max, config.restarts,
                                     mix_seed(config.seed, st, 0), config.window_mode, cache);
    ModelFit fit_left = select_model(left, k_max, config.restarts,
                                     mix_seed(config.seed, st, 1), config.window_mode, cache);
    ModelFit fit_right = select_model(right, k_max, config.restarts,
                                      mix_seed(config.seed, st, 2), config.window_mode, cache);

    const double l_m = model_code_len(fit_full.k_hat);
    const double l_m12 = model_pair_code_len(fit_left.k_hat, fit_right.k_hat,
                                             n_changes_so_far, t, config.k_max);
    const double inv = 1.0 / (2.0 * config.h);

    WindowEvaluation ev;
    ev.report.t = t;
    ev.report.k_hat = fit_full.k_hat;
    ev.report.k_hat1 = fit_left.k_hat;
    ev.report.k_hat2 = fit_right.k_hat;
    const DnmlParts &pf = fit_full.parts, &pl = fit_left.parts, &pr = fit_right.parts;
    ev.report.phi_xz = inv * (pf.x_given_z() - pl.x_given_z() - pr.x_given_z());
    ev.report.phi_z = inv * (pf.z_part() - pl.z_part() - pr.z_part());
    ev.report.delta_l = inv * (l_m - l_m12);
    ev.report.phi = ev.report.phi_xz + ev.report.phi_z + ev.report.delta_l;
    ev.full = std::move(fit_full);
    return ev;
}

ChangeReport mdl_change_statistic(std::span<const GraphSnapshot> left,
                                  std::span<const GraphSnapshot> right,
                                  const DetectorConfig& config,
                                  std::int64_t n_changes_so_far, int t,
                                  ComplexityCache& cache) {
    return evaluate_window(left, right, config, n_changes_so_far, t, cache).report;
}

namespace {

BlockAssignment stack_labels(std::span<const BlockAssignment> assignments, std::size_t begin,
                             std::size_t end) {
    BlockAssignment stacked;
    stacked.k = 1;
    for (std::size_t s = begin; s < end; ++s) {
        stacked.k = std::max(stacked.k, assignments[s].k);
        stacked.labels.insert(stacked.labels.end(), assignments[s].labels.begin(),
                              assignments[s].labels.end());
    }
    return stacked;
}

}  // namespace

std::vector<ChangeReport> run_hcdl(std::span<const GraphSnapshot> stream,
                                   const DetectorConfig& config) {
    config.validate();
    const int h = config.h;
    const int len = static_cast<int>(stream.size());
    if (len < 2 * h)
        throw std::invalid_argument("stream must contain at least 2h snapshots");

    ComplexityCache cache;
    std::vector<ChangeReport> reports;
    reports.reserve(len - 2 * h + 1);
    std::int64_t n_changes = 0;
    std::vector<BlockAssignment> prev_assignments;

    for (int t = h; t <= len - h; ++t) {
        auto left = stream.subspan(t - h, h);
        auto right = stream.subspan(t, h);
        WindowEvaluation ev = evaluate_window(left, right, config, n_changes, t, cache);
        ChangeReport& report = ev.report;

        report.eps = 0.0;
        const Thresholds thr = thresholds_from_parts(ev.full.parts, ev.full.k_hat, config);
        report.eps = thr.eps;
        report.eps_xz = thr.eps_xz;
        report.eps_z = thr.eps_z;

        if (report.phi > report.eps) {
            report.alarm_level3 = true;
            ++n_changes;
        } else {
            report.alarm_level1 = report.phi_xz > report.eps_xz;
            report.alarm_level2 = report.phi_z > report.eps_z;
            if (report.alarm_level1 && report.alarm_level2) {
                report.has_weights = true;
                std::tie(report.w_xz, report.w_z) = weights(report.phi_xz, report.phi_z);
            }
        }

        // undo label switching between overlapping windows: align this
        // window's fit to the previous one on their shared snapshots
        auto& cur = ev.full.assignments;
        if (!prev_assignments.empty() && cur.size() >= 2) {
            const BlockAssignment ref = stack_labels(prev_assignments, 1, prev_assignments.size());
            const BlockAssignment tgt = stack_labels(cur, 0, cur.size() - 1);
            const auto perm = label_permutation(ref, tgt);
            const int k_aligned = std::max(ref.k, tgt.k);
            for (auto& assignment : cur) {
                for (int& label : assignment.labels) label = perm[label];
                assignment.k = k_aligned;
            }
        }
        report.labels = cur[h - 1];
        prev_assignments = std::move(cur);

        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace hcd
