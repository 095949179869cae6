#include "hcd/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace hcd {

int ExpertState::best_expert() const {
    int best = 1;
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i] > weights[best - 1]) best = static_cast<int>(i) + 1;
    return best;
}

ExpertState make_expert_state(int n_experts, double eta, double alpha) {
    if (n_experts < 1) throw std::invalid_argument("need at least one expert");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
    ExpertState state;
    state.weights.assign(n_experts, 1.0 / n_experts);
    state.eta = eta;
    state.alpha = alpha;
    return state;
}

ExpertState tbe_update(const ExpertState& state, std::span<const double> losses) {
    const std::size_t k = state.weights.size();
    if (losses.size() != k) throw std::invalid_argument("one loss per expert required");
    for (double loss : losses)
        if (!std::isfinite(loss)) throw std::invalid_argument("losses must be finite");

    std::vector<double> wm(k);
    double pool = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        wm[i] = state.weights[i] * std::exp(-state.eta * std::abs(losses[i]));
        pool += state.alpha * wm[i];
    }
    ExpertState next = state;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double w = (1.0 - state.alpha) * wm[i];
        if (k > 1) w += (pool - state.alpha * wm[i]) / static_cast<double>(k - 1);
        next.weights[i] = w;
        sum += w;
    }
    if (!(sum > 0.0)) throw std::runtime_error("expert weights collapsed to zero");
    for (double& w : next.weights) w /= sum;
    return next;
}

namespace {

Eigen::MatrixXd fabp_affinity(const GraphSnapshot& g, double eps) {
    const int n = g.n_nodes;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
    for (const auto& [u, v] : g.edges) {
        a(u, v) = 1.0;
        a(v, u) = 1.0;
        deg(u) += 1.0;
        deg(v) += 1.0;
    }
    Eigen::MatrixXd m = -eps * a;
    for (int i = 0; i < n; ++i) m(i, i) += 1.0 + eps * eps * deg(i);
    // strictly diagonally dominant for eps <= 1/(1 + max degree)
    return m.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace

double deltacon_score(const GraphSnapshot& g1, const GraphSnapshot& g2, double eps_fabp) {
    if (g1.n_nodes != g2.n_nodes)
        throw std::invalid_argument("snapshots must share the node count");
    if (!(eps_fabp > 0.0)) throw std::invalid_argument("eps_fabp must be positive");

    int max_degree = 0;
    for (const GraphSnapshot* g : {&g1, &g2}) {
        std::vector<int> deg(g->n_nodes, 0);
        for (const auto& [u, v] : g->edges) {
            ++deg[u];
            ++deg[v];
        }
        for (int d : deg) max_degree = std::max(max_degree, d);
    }
    const double eps = std::min(eps_fabp, 1.0 / (1.0 + max_degree));

    const Eigen::MatrixXd s1 = fabp_affinity(g1, eps);
    const Eigen::MatrixXd s2 = fabp_affinity(g2, eps);

    double sq = 0.0;
    for (int i = 0; i < s1.rows(); ++i)
        for (int j = 0; j < s1.cols(); ++j) {
            const double d = std::sqrt(std::max(s1(i, j), 0.0)) -
                             std::sqrt(std::max(s2(i, j), 0.0));
            sq += d * d;
        }
    const double root_ed = std::sqrt(sq);
    const double similarity = 1.0 / (1.0 + root_ed);
    return 1.0 - similarity;
}

}  // namespace hcd
