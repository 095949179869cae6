#include "hcd/stream_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hcd {

namespace {

constexpr double kClipEps = 1e-6;

void check_simplex(const std::vector<double>& pi) {
    if (pi.empty()) throw std::invalid_argument("mixture vector must be non-empty");
    double sum = 0.0;
    for (double p : pi) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("mixture entry outside [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mixture vector must sum to 1");
}

void check_theta(const ThetaMatrix& theta, std::size_t k) {
    if (theta.size() != k) throw std::invalid_argument("theta dimension mismatch");
    for (std::size_t i = 0; i < k; ++i) {
        if (theta[i].size() != k) throw std::invalid_argument("theta must be square");
        for (std::size_t j = 0; j < k; ++j) {
            if (theta[i][j] < 0.0 || theta[i][j] > 1.0)
                throw std::invalid_argument("link probability outside [0, 1]");
            if (theta[i][j] != theta[j][i])
                throw std::invalid_argument("theta must be symmetric for undirected sampling");
        }
    }
}

std::vector<double> dirichlet_uniform(int k, Rng& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> pi(k);
    double sum = 0.0;
    for (double& p : pi) {
        p = expo(rng);
        sum += p;
    }
    for (double& p : pi) p /= sum;
    return pi;
}

ThetaMatrix symmetric_uniform_theta(int k, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ThetaMatrix theta(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) theta[i][j] = theta[j][i] = unif(rng);
    return theta;
}

}  // namespace

int StreamScenario::true_k(int t) const {
    for (const auto& seg : segments)
        if (t >= seg.t_begin && t <= seg.t_end) return seg.k;
    throw std::invalid_argument("time index outside the scenario range");
}

std::pair<GraphSnapshot, BlockAssignment> sample_sbm(const std::vector<double>& pi,
                                                     const ThetaMatrix& theta, int n_nodes,
                                                     Rng& rng) {
    check_simplex(pi);
    check_theta(theta, pi.size());
    if (n_nodes < 1) throw std::invalid_argument("node count must be >= 1");

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    BlockAssignment z;
    z.k = static_cast<int>(pi.size());
    z.labels.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double u = unif(rng);
        double acc = 0.0;
        int label = z.k;
        for (int b = 0; b < z.k; ++b) {
            acc += pi[b];
            if (u < acc) {
                label = b + 1;
                break;
            }
        }
        z.labels[i] = label;
    }

    GraphSnapshot g;
    g.n_nodes = n_nodes;
    g.directed = false;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j)
            if (unif(rng) < theta[z.labels[i] - 1][z.labels[j] - 1]) g.edges.emplace_back(i, j);
    return {std::move(g), std::move(z)};
}

GraphSnapshot link_trans(const GraphSnapshot& prev, const BlockAssignment& z,
                         const ThetaMatrix& theta, double beta, Rng& rng) {
    if (z.n_nodes() != prev.n_nodes)
        throw std::invalid_argument("assignment does not match the previous snapshot");
    check_theta(theta, static_cast<std::size_t>(z.k));
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must lie in [0, 1]");

    const int n = prev.n_nodes;
    std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
    for (const auto& [u, v] : prev.edges) adj[static_cast<std::size_t>(u) * n + v] = 1;

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    GraphSnapshot g;
    g.n_nodes = n;
    g.directed = false;
    g.timestamp = prev.timestamp + 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool link;
            if (unif(rng) < beta)
                link = unif(rng) < theta[z.labels[i] - 1][z.labels[j] - 1];
            else
                link = adj[static_cast<std::size_t>(i) * n + j] != 0;
            if (link) g.edges.emplace_back(i, j);
        }
    return g;
}

std::vector<double> abrupt_pi2(const std::vector<double>& pi1) {
    check_simplex(pi1);
    if (pi1.size() != 3) throw std::invalid_argument("expected a 3-component mixture");
    const double d = (pi1[2] - pi1[1]) / 3.0;
    return {pi1[0], pi1[1] + d, pi1[2] - d};
}

std::vector<double> split_pi3(const std::vector<double>& pi2) {
    check_simplex(pi2);
    if (pi2.size() != 3) throw std::invalid_argument("expected a 3-component mixture");
    return {pi2[0], pi2[1], 3.0 * pi2[2] / 4.0, pi2[2] / 4.0};
}

std::vector<double> gradual_pi2(const std::vector<double>& pi1) {
    check_simplex(pi1);
    if (pi1.size() != 3) throw std::invalid_argument("expected a 3-component mixture");
    const double mid = (pi1[1] + pi1[2]) / 2.0;
    return {pi1[0], mid, mid};
}

std::vector<double> gradual_pi12(const std::vector<double>& pi1, int t) {
    check_simplex(pi1);
    if (t < 35 || t > 40) throw std::invalid_argument("t must lie in [35, 40]");
    const double step = (t - 35) * (pi1[2] - pi1[1]) / 10.0;
    return {pi1[0], pi1[1] + step, pi1[2] - step};
}

std::vector<double> gradual_pi23(const std::vector<double>& pi2, int t) {
    check_simplex(pi2);
    if (t < 60 || t > 70) throw std::invalid_argument("t must lie in [60, 70]");
    const double moved = (t - 60) * pi2[2] / 40.0;
    return {pi2[0], pi2[1], pi2[2] - moved, moved};
}

ThetaMatrix interpolate_theta(const ThetaMatrix& a, const ThetaMatrix& b, int t, int t_begin,
                              int span) {
    const double f = static_cast<double>(t - t_begin) / span;
    ThetaMatrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = a[i][j] + f * (b[i][j] - a[i][j]);
    return out;
}

ThetaMatrix perturb_theta(const ThetaMatrix& theta, Rng& rng) {
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    const std::size_t k = theta.size();
    ThetaMatrix out(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            const double v = theta[i][j] + unif(rng);
            double clipped = v;
            if (v > 1.0)
                clipped = 1.0 - kClipEps;
            else if (v < 0.0)
                clipped = kClipEps;
            out[i][j] = out[j][i] = clipped;
        }
    return out;
}

ThetaMatrix extend_theta(const ThetaMatrix& theta, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t k = theta.size();
    ThetaMatrix out(k + 1, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out[i][j] = theta[i][j];
    for (std::size_t i = 0; i <= k; ++i) out[i][k] = out[k][i] = unif(rng);
    return out;
}

GeneratedStream gen_abrupt(int n_nodes, std::uint64_t seed, double beta) {
    if (n_nodes < 20) throw std::invalid_argument("abrupt scenario needs at least 20 nodes");
    Rng rng(seed);

    std::vector<double> pi1 = dirichlet_uniform(3, rng);
    std::sort(pi1.begin(), pi1.end());
    const ThetaMatrix theta1 = symmetric_uniform_theta(3, rng);
    const ThetaMatrix theta2 = perturb_theta(theta1, rng);
    const ThetaMatrix theta3 = extend_theta(theta2, rng);
    const std::vector<double> pi2 = abrupt_pi2(pi1);
    const std::vector<double> pi3 = split_pi3(pi2);

    GeneratedStream out;
    out.scenario.name = "abrupt";
    out.scenario.length = 80;
    out.scenario.n_nodes = n_nodes;
    out.scenario.beta = beta;
    out.scenario.seed = seed;
    out.scenario.segments = {{1, 19, 3, pi1, theta1},
                             {20, 39, 3, pi1, theta2},
                             {40, 59, 3, pi2, theta2},
                             {60, 80, 4, pi3, theta3}};
    out.scenario.transitions = {{20, 20, 1}, {40, 40, 2}, {60, 60, 3}};

    out.snapshots.reserve(80);
    BlockAssignment z;
    for (int t = 1; t <= 80; ++t) {
        GraphSnapshot g;
        if (t == 1)
            std::tie(g, z) = sample_sbm(pi1, theta1, n_nodes, rng);
        else if (t == 20)
            std::tie(g, z) = sample_sbm(pi1, theta2, n_nodes, rng);
        else if (t == 40)
            std::tie(g, z) = sample_sbm(pi2, theta2, n_nodes, rng);
        else if (t == 60)
            std::tie(g, z) = sample_sbm(pi3, theta3, n_nodes, rng);
        else {
            const ThetaMatrix& theta = t < 20 ? theta1 : (t < 60 ? theta2 : theta3);
            g = link_trans(out.snapshots.back(), z, theta, beta, rng);
        }
        g.timestamp = t;
        out.snapshots.push_back(std::move(g));
    }
    return out;
}

GeneratedStream gen_gradual(int n_nodes, std::uint64_t seed, double beta) {
    if (n_nodes < 20) throw std::invalid_argument("gradual scenario needs at least 20 nodes");
    Rng rng(seed);

    std::vector<double> pi1 = dirichlet_uniform(3, rng);
    std::sort(pi1.begin(), pi1.end());
    const ThetaMatrix theta1 = symmetric_uniform_theta(3, rng);
    const ThetaMatrix theta2 = perturb_theta(theta1, rng);
    const ThetaMatrix theta3 = extend_theta(theta2, rng);
    const std::vector<double> pi2 = gradual_pi2(pi1);
    const std::vector<double> pi3 = gradual_pi23(pi2, 70);

    GeneratedStream out;
    out.scenario.name = "gradual";
    out.scenario.length = 90;
    out.scenario.n_nodes = n_nodes;
    out.scenario.beta = beta;
    out.scenario.seed = seed;
    out.scenario.segments = {{1, 9, 3, pi1, theta1},   {10, 15, 3, pi1, theta2},
                             {16, 34, 3, pi1, theta2}, {35, 40, 3, pi2, theta2},
                             {41, 59, 3, pi2, theta2}, {60, 70, 4, pi3, theta3},
                             {71, 90, 4, pi3, theta3}};
    out.scenario.transitions = {{10, 15, 1}, {35, 40, 2}, {60, 70, 3}};

    out.snapshots.reserve(90);
    BlockAssignment z;
    for (int t = 1; t <= 90; ++t) {
        GraphSnapshot g;
        if (t == 1)
            std::tie(g, z) = sample_sbm(pi1, theta1, n_nodes, rng);
        else if (t >= 10 && t <= 15)
            std::tie(g, z) = sample_sbm(pi1, interpolate_theta(theta1, theta2, t, 10, 5),
                                        n_nodes, rng);
        else if (t >= 35 && t <= 40)
            std::tie(g, z) = sample_sbm(gradual_pi12(pi1, t), theta2, n_nodes, rng);
        else if (t >= 60 && t <= 70)
            std::tie(g, z) = sample_sbm(gradual_pi23(pi2, t), theta3, n_nodes, rng);
        else {
            const ThetaMatrix& theta = t < 10 ? theta1 : (t < 60 ? theta2 : theta3);
            g = link_trans(out.snapshots.back(), z, theta, beta, rng);
        }
        g.timestamp = t;
        out.snapshots.push_back(std::move(g));
    }
    return out;
}

}  // namespace hcd
