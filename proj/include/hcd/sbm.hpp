#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hcd/graph.hpp"
#include "hcd/nml.hpp"

namespace hcd {

/// Pairwise link/no-link counts per block pair plus per-block membership
/// counts, poolable across the snapshots of a window. For undirected
/// graphs only the upper triangle (a <= b) is populated.
struct SbmSufficientStats {
    int k = 1;
    bool directed = false;
    std::vector<std::int64_t> n_plus;        // k*k, row-major
    std::vector<std::int64_t> n_minus;       // k*k, row-major
    std::vector<std::int64_t> block_sizes;   // k
    std::int64_t n_total = 0;                // nodes x snapshots pooled

    std::int64_t plus(int a, int b) const { return n_plus[idx(a, b)]; }
    std::int64_t minus(int a, int b) const { return n_minus[idx(a, b)]; }
    std::int64_t dyads(int a, int b) const { return plus(a, b) + minus(a, b); }

    // 1-based labels; undirected pairs are canonicalized to a <= b.
    std::size_t idx(int a, int b) const;
};

SbmSufficientStats pool_stats(std::span<const GraphSnapshot> snapshots,
                              std::span<const BlockAssignment> assignments, int k);

/// DNML code length split into its entropy and complexity components,
/// all in nats. x_given_z() + z_part() == total() exactly.
struct DnmlParts {
    double x_entropy = 0.0;     // sum over pairs of n ln n - n+ ln n+ - n- ln n-
    double x_complexity = 0.0;  // sum over pairs of ln C(n_pair, 2)
    double z_entropy = 0.0;     // sum over blocks of n_k (ln n - ln n_k)
    double z_complexity = 0.0;  // ln C(n_total, k)

    double x_given_z() const { return x_entropy + x_complexity; }
    double z_part() const { return z_entropy + z_complexity; }
    double total() const { return x_given_z() + z_part(); }

    DnmlParts& operator+=(const DnmlParts& o);
};

DnmlParts dnml_code_length(const SbmSufficientStats& stats, ComplexityCache& cache);

/// How the code length of a multi-snapshot window is assembled:
/// `pooled` evaluates one DNML at the pooled counts (canonical);
/// `per_snapshot` sums standalone per-snapshot DNML code lengths.
enum class WindowMode { pooled, per_snapshot };

DnmlParts window_code_length(std::span<const GraphSnapshot> snapshots,
                             std::span<const BlockAssignment> assignments, int k,
                             WindowMode mode, ComplexityCache& cache);

/// Hard-assignment EM for a Bernoulli SBM fitted to the pooled window.
/// Returns per-snapshot assignments; best of `restarts` random inits by
/// pooled log-likelihood; deterministic given seed. Blocks left empty at
/// convergence are dropped (the returned k may be smaller than requested).
std::vector<BlockAssignment> infer_assignments(std::span<const GraphSnapshot> snapshots,
                                               int k, int restarts, std::uint64_t seed);

struct ModelFit {
    int k_hat = 1;
    std::vector<BlockAssignment> assignments;
    DnmlParts parts;                                           // data part at k_hat
    double code_length = std::numeric_limits<double>::infinity();  // data + L(M)
};

/// DNML model selection: argmin over k in [1, k_max] of the window code
/// length plus the model code length; ties break toward smaller k.
ModelFit select_model(std::span<const GraphSnapshot> snapshots, int k_max, int restarts,
                      std::uint64_t seed, WindowMode mode, ComplexityCache& cache);

/// Permutation (old label -> new label, 1-based; index 0 unused) that makes
/// `target` agree with `reference` on as many nodes as possible, found by
/// optimal assignment matching on the label contingency table. Ties prefer
/// keeping a label in place.
std::vector<int> label_permutation(const BlockAssignment& reference,
                                   const BlockAssignment& target);

/// Relabels `target` by the optimal permutation of the larger label set;
/// unmatched new labels keep fresh indices. Idempotent.
BlockAssignment align_labels(const BlockAssignment& reference, const BlockAssignment& target);

/// Pooled complete-data log-likelihood at the hard-assignment ML estimates
/// (the negated entropy terms of the DNML code length).
double pooled_loglik(const SbmSufficientStats& stats);

}  // namespace hcd
