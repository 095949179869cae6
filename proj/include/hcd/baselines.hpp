#pragma once

#include <span>
#include <vector>

#include "hcd/graph.hpp"

namespace hcd {

/// Fixed-share expert weights, one per candidate block count.
struct ExpertState {
    std::vector<double> weights;  // normalized to sum 1
    double eta = 0.05;            // learning rate
    double alpha = 0.2;           // share ratio

    int best_expert() const;  // 1-based, ties toward the smaller index
};

ExpertState make_expert_state(int n_experts, double eta, double alpha);

/// One fixed-share update from per-expert losses:
///   w_m = w_s * exp(-eta * |loss|)
///   pool = sum_k alpha * w_m_k
///   w_s' = (1 - alpha) w_m + (pool - alpha w_m) / (K - 1), then normalized.
ExpertState tbe_update(const ExpertState& state, std::span<const double> losses);

/// DeltaCon-style change score in [0, 1] between two snapshots: affinity
/// matrices S = (I + eps^2 D - eps A)^{-1}, root-Euclidean (Matusita)
/// distance d between them, score = 1 - 1/(1 + d). For stability eps is
/// capped at 1/(1 + max degree).
double deltacon_score(const GraphSnapshot& g1, const GraphSnapshot& g2,
                      double eps_fabp = 0.1);

}  // namespace hcd
