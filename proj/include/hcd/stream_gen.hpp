#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcd/graph.hpp"
#include "hcd/rng.hpp"

namespace hcd {

using ThetaMatrix = std::vector<std::vector<double>>;

struct Segment {
    int t_begin = 0, t_end = 0;
    int k = 1;
    std::vector<double> pi;
    ThetaMatrix theta;
};

struct Transition {
    int t_begin = 0, t_end = 0;  // equal for abrupt changes
    int level = 0;               // 1 data, 2 latent, 3 model
};

/// Ground-truth description of a synthetic stream.
struct StreamScenario {
    std::string name;
    int length = 0;
    int n_nodes = 0;
    double beta = 0.02;
    std::uint64_t seed = 0;
    std::vector<Segment> segments;      // ranges partition [1, length]
    std::vector<Transition> transitions;

    int true_k(int t) const;
};

/// Draws one undirected SBM snapshot: blocks from Multinomial(pi), each
/// dyad linked independently with probability theta[z_i][z_j].
std::pair<GraphSnapshot, BlockAssignment> sample_sbm(const std::vector<double>& pi,
                                                     const ThetaMatrix& theta, int n_nodes,
                                                     Rng& rng);

/// Markov persistence kernel: each dyad is resampled from
/// Bernoulli(theta[z_i][z_j]) with probability beta and kept otherwise.
GraphSnapshot link_trans(const GraphSnapshot& prev, const BlockAssignment& z,
                         const ThetaMatrix& theta, double beta, Rng& rng);

// Parameter transformations of the synthetic scenarios, exposed for tests.
std::vector<double> abrupt_pi2(const std::vector<double>& pi1);
std::vector<double> split_pi3(const std::vector<double>& pi2);
std::vector<double> gradual_pi2(const std::vector<double>& pi1);
std::vector<double> gradual_pi12(const std::vector<double>& pi1, int t);
std::vector<double> gradual_pi23(const std::vector<double>& pi2, int t);
ThetaMatrix interpolate_theta(const ThetaMatrix& a, const ThetaMatrix& b, int t, int t_begin,
                              int span);
ThetaMatrix perturb_theta(const ThetaMatrix& theta, Rng& rng);
ThetaMatrix extend_theta(const ThetaMatrix& theta, Rng& rng);

struct GeneratedStream {
    std::vector<GraphSnapshot> snapshots;
    StreamScenario scenario;
};

/// 80-snapshot stream with abrupt changes: link probabilities at t=20
/// (level 1), block distribution at t=40 (level 2), block split 3:1 with a
/// fourth block at t=60 (level 3). Persistence kernel in between.
GeneratedStream gen_abrupt(int n_nodes, std::uint64_t seed, double beta = 0.02);

/// 90-snapshot stream with the same changes applied gradually over
/// t in [10,15] (level 1), [35,40] (level 2) and [60,70] (level 3).
GeneratedStream gen_gradual(int n_nodes, std::uint64_t seed, double beta = 0.02);

}  // namespace hcd
