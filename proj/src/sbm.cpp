#include "hcd/sbm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hcd/detector.hpp"
#include "hcd/rng.hpp"

namespace hcd {

std::size_t SbmSufficientStats::idx(int a, int b) const {
    if (!directed && a > b) std::swap(a, b);
    return static_cast<std::size_t>(a - 1) * k + (b - 1);
}

SbmSufficientStats pool_stats(std::span<const GraphSnapshot> snapshots,
                              std::span<const BlockAssignment> assignments, int k) {
    if (snapshots.empty() || snapshots.size() != assignments.size())
        throw std::invalid_argument("snapshots and assignments must have equal nonzero length");
    if (k < 1) throw std::invalid_argument("block count must be >= 1");

    const int n = snapshots.front().n_nodes;
    const bool directed = snapshots.front().directed;

    SbmSufficientStats stats;
    stats.k = k;
    stats.directed = directed;
    stats.n_plus.assign(static_cast<std::size_t>(k) * k, 0);
    stats.n_minus.assign(static_cast<std::size_t>(k) * k, 0);
    stats.block_sizes.assign(k, 0);

    std::vector<std::int64_t> dyads(static_cast<std::size_t>(k) * k, 0);
    for (std::size_t s = 0; s < snapshots.size(); ++s) {
        const GraphSnapshot& g = snapshots[s];
        const BlockAssignment& z = assignments[s];
        if (g.n_nodes != n || g.directed != directed)
            throw std::invalid_argument("snapshots in a window must share node count and directedness");
        if (z.n_nodes() != n) throw std::invalid_argument("assignment length mismatch");
        for (int label : z.labels)
            if (label < 1 || label > k) throw std::invalid_argument("block label out of range");

        std::vector<std::int64_t> sizes(k, 0);
        for (int i = 0; i < n; ++i) ++sizes[z.labels[i] - 1];
        for (int a = 0; a < k; ++a) stats.block_sizes[a] += sizes[a];
        stats.n_total += n;

        // dyad totals per block pair from sizes; link counts from edges
        if (directed) {
            for (int a = 1; a <= k; ++a)
                for (int b = 1; b <= k; ++b) {
                    std::int64_t d = a == b ? sizes[a - 1] * (sizes[a - 1] - 1)
                                            : sizes[a - 1] * sizes[b - 1];
                    dyads[stats.idx(a, b)] += d;
                }
        } else {
            for (int a = 1; a <= k; ++a)
                for (int b = a; b <= k; ++b) {
                    std::int64_t d = a == b ? sizes[a - 1] * (sizes[a - 1] - 1) / 2
                                            : sizes[a - 1] * sizes[b - 1];
                    dyads[stats.idx(a, b)] += d;
                }
        }
        for (const auto& [u, v] : g.edges)
            ++stats.n_plus[stats.idx(z.labels[u], z.labels[v])];
    }
    for (std::size_t i = 0; i < dyads.size(); ++i) {
        if (stats.n_plus[i] > dyads[i])
            throw std::invalid_argument("edge multiset inconsistent with block sizes");
        stats.n_minus[i] = dyads[i] - stats.n_plus[i];
    }
    return stats;
}

DnmlParts& DnmlParts::operator+=(const DnmlParts& o) {
    x_entropy += o.x_entropy;
    x_complexity += o.x_complexity;
    z_entropy += o.z_entropy;
    z_complexity += o.z_complexity;
    return *this;
}

DnmlParts dnml_code_length(const SbmSufficientStats& stats, ComplexityCache& cache) {
    DnmlParts parts;
    const int k = stats.k;
    for (int a = 1; a <= k; ++a) {
        const int b0 = stats.directed ? 1 : a;
        for (int b = b0; b <= k; ++b) {
            const std::int64_t np = stats.plus(a, b);
            const std::int64_t nm = stats.minus(a, b);
            const std::int64_t nd = np + nm;
            if (nd == 0) continue;
            parts.x_entropy += xlogx(static_cast<double>(nd)) -
                               xlogx(static_cast<double>(np)) -
                               xlogx(static_cast<double>(nm));
            parts.x_complexity += cache(nd, 2);
        }
    }
    parts.z_entropy = xlogx(static_cast<double>(stats.n_total));
    for (int a = 0; a < k; ++a)
        parts.z_entropy -= xlogx(static_cast<double>(stats.block_sizes[a]));
    parts.z_complexity = cache(stats.n_total, k);
    return parts;
}

DnmlParts window_code_length(std::span<const GraphSnapshot> snapshots,
                             std::span<const BlockAssignment> assignments, int k,
                             WindowMode mode, ComplexityCache& cache) {
    if (mode == WindowMode::pooled)
        return dnml_code_length(pool_stats(snapshots, assignments, k), cache);
    DnmlParts parts;
    for (std::size_t s = 0; s < snapshots.size(); ++s)
        parts += dnml_code_length(
            pool_stats(snapshots.subspan(s, 1), assignments.subspan(s, 1), k), cache);
    return parts;
}

double pooled_loglik(const SbmSufficientStats& stats) {
    double ll = 0.0;
    const int k = stats.k;
    for (int a = 1; a <= k; ++a) {
        const int b0 = stats.directed ? 1 : a;
        for (int b = b0; b <= k; ++b) {
            const std::int64_t np = stats.plus(a, b);
            const std::int64_t nm = stats.minus(a, b);
            ll += xlogx(static_cast<double>(np)) + xlogx(static_cast<double>(nm)) -
                  xlogx(static_cast<double>(np + nm));
        }
    }
    for (int a = 0; a < k; ++a) ll += xlogx(static_cast<double>(stats.block_sizes[a]));
    ll -= xlogx(static_cast<double>(stats.n_total));
    return ll;
}

namespace {

constexpr int kMaxSweeps = 100;

// Dense bit-row adjacency for fast block-count queries during EM.
struct BitAdj {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> out_rows;  // n * words
    std::vector<std::uint64_t> in_rows;   // directed only

    const std::uint64_t* out_row(int i) const { return out_rows.data() + std::size_t(i) * words; }
    const std::uint64_t* in_row(int i) const { return in_rows.data() + std::size_t(i) * words; }
};

BitAdj build_bit_adj(const GraphSnapshot& g) {
    BitAdj adj;
    adj.n = g.n_nodes;
    adj.words = (g.n_nodes + 63) / 64;
    adj.out_rows.assign(std::size_t(adj.n) * adj.words, 0);
    if (g.directed) adj.in_rows.assign(std::size_t(adj.n) * adj.words, 0);
    auto set = [&](std::vector<std::uint64_t>& rows, int i, int j) {
        rows[std::size_t(i) * adj.words + j / 64] |= std::uint64_t(1) << (j % 64);
    };
    for (const auto& [u, v] : g.edges) {
        set(adj.out_rows, u, v);
        if (g.directed)
            set(adj.in_rows, v, u);
        else
            set(adj.out_rows, v, u);
    }
    return adj;
}

int count_in_mask(const std::uint64_t* row, const std::uint64_t* mask, int words) {
    int c = 0;
    for (int w = 0; w < words; ++w) c += std::popcount(row[w] & mask[w]);
    return c;
}

// The window model shares one membership vector across all snapshots (the
// block structure is what persists; links vary per snapshot), so a window
// straddling a regime boundary cannot be explained by any single fit.
struct EmScratch {
    int n = 0, k = 0, words = 0, n_snapshots = 0;
    bool directed = false;
    std::vector<BitAdj> adj;            // per snapshot
    std::vector<int> labels;            // shared across the window, 0-based
    std::vector<std::uint64_t> mask;    // block * words
    std::vector<int> sizes;             // shared block sizes

    std::uint64_t* block_mask(int b) { return mask.data() + std::size_t(b) * words; }
    void set_bit(int b, int i) { block_mask(b)[i / 64] |= std::uint64_t(1) << (i % 64); }
    void clear_bit(int b, int i) { block_mask(b)[i / 64] &= ~(std::uint64_t(1) << (i % 64)); }
};

// Pooled counts at the current hard labels.
void pooled_counts(const EmScratch& em, std::vector<std::int64_t>& n_plus,
                   std::vector<std::int64_t>& n_dyads, std::vector<std::int64_t>& n_block) {
    const int k = em.k;
    n_plus.assign(std::size_t(k) * k, 0);
    n_dyads.assign(std::size_t(k) * k, 0);
    n_block.assign(k, 0);
    std::vector<std::int64_t> ordered(std::size_t(k) * k, 0);
    for (int a = 0; a < k; ++a)
        n_block[a] = std::int64_t(em.sizes[a]) * em.n_snapshots;
    for (int s = 0; s < em.n_snapshots; ++s)
        for (int i = 0; i < em.n; ++i) {
            const int a = em.labels[i];
            for (int b = 0; b < k; ++b) {
                const int e = count_in_mask(em.adj[s].out_row(i),
                                            em.mask.data() + std::size_t(b) * em.words,
                                            em.words);
                ordered[std::size_t(a) * k + b] += e;
            }
        }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            if (!em.directed && a > b) continue;
            const std::int64_t sa = em.sizes[a], sb = em.sizes[b];
            std::int64_t d;
            if (a == b)
                d = em.directed ? sa * (sa - 1) : sa * (sa - 1) / 2;
            else
                d = sa * sb;
            n_dyads[std::size_t(a) * k + b] += d * em.n_snapshots;
        }
    if (em.directed) {
        n_plus = ordered;
    } else {
        // each within-block edge was counted from both endpoints; each
        // cross-block edge once per side of the ordered tally
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b)
                n_plus[std::size_t(a) * k + b] =
                    a == b ? ordered[std::size_t(a) * k + a] / 2 : ordered[std::size_t(a) * k + b];
    }
}

double em_loglik(const EmScratch& em) {
    std::vector<std::int64_t> n_plus, n_dyads, n_block;
    pooled_counts(em, n_plus, n_dyads, n_block);
    const int k = em.k;
    double ll = 0.0;
    std::int64_t n_total = 0;
    for (int a = 0; a < k; ++a) {
        n_total += n_block[a];
        const int b0 = em.directed ? 0 : a;
        for (int b = b0; b < k; ++b) {
            const std::int64_t np = n_plus[std::size_t(a) * k + b];
            const std::int64_t nd = n_dyads[std::size_t(a) * k + b];
            ll += xlogx(double(np)) + xlogx(double(nd - np)) - xlogx(double(nd));
        }
        ll += xlogx(double(n_block[a]));
    }
    ll -= xlogx(double(n_total));
    return ll;
}

struct EmModel {
    std::vector<double> log_theta, log_1m_theta;  // k*k
    std::vector<double> log_pi;                   // k
};

void m_step(const EmScratch& em, EmModel& model) {
    std::vector<std::int64_t> n_plus, n_dyads, n_block;
    pooled_counts(em, n_plus, n_dyads, n_block);
    const int k = em.k;
    model.log_theta.assign(std::size_t(k) * k, 0.0);
    model.log_1m_theta.assign(std::size_t(k) * k, 0.0);
    model.log_pi.assign(k, 0.0);
    std::int64_t n_total = 0;
    for (int a = 0; a < k; ++a) n_total += n_block[a];
    for (int a = 0; a < k; ++a) {
        // add-half smoothing keeps the E-step scores finite
        model.log_pi[a] =
            std::log((n_block[a] + 0.5) / (n_total + 0.5 * k));
        for (int b = 0; b < k; ++b) {
            std::size_t ab = std::size_t(a) * k + b;
            std::size_t cn = em.directed ? ab : (a <= b ? ab : std::size_t(b) * k + a);
            const double theta =
                (double(n_plus[cn]) + 0.5) / (double(n_dyads[cn]) + 1.0);
            model.log_theta[ab] = std::log(theta);
            model.log_1m_theta[ab] = std::log1p(-theta);
        }
    }
}

// One ICM pass over the nodes, scoring each against the pooled evidence of
// every snapshot; returns the number of label changes.
int e_step(EmScratch& em, const EmModel& model) {
    const int k = em.k, words = em.words;
    int changes = 0;
    std::vector<std::int64_t> e_out(k), e_in(k);
    for (int i = 0; i < em.n; ++i) {
        const int current = em.labels[i];
        em.clear_bit(current, i);
        --em.sizes[current];
        std::fill(e_out.begin(), e_out.end(), 0);
        std::fill(e_in.begin(), e_in.end(), 0);
        for (int s = 0; s < em.n_snapshots; ++s)
            for (int b = 0; b < k; ++b) {
                e_out[b] += count_in_mask(em.adj[s].out_row(i), em.block_mask(b), words);
                if (em.directed)
                    e_in[b] += count_in_mask(em.adj[s].in_row(i), em.block_mask(b), words);
            }
        int best = current;
        double best_score = -std::numeric_limits<double>::infinity();
        double current_score = 0.0;
        for (int a = 0; a < k; ++a) {
            double score = model.log_pi[a];
            for (int b = 0; b < k; ++b) {
                const std::int64_t m = std::int64_t(em.sizes[b]) * em.n_snapshots;
                const std::size_t ab = std::size_t(a) * k + b;
                score += e_out[b] * model.log_theta[ab] +
                         (m - e_out[b]) * model.log_1m_theta[ab];
                if (em.directed) {
                    const std::size_t ba = std::size_t(b) * k + a;
                    score += e_in[b] * model.log_theta[ba] +
                             (m - e_in[b]) * model.log_1m_theta[ba];
                }
            }
            if (a == current) current_score = score;
            if (score > best_score) {
                best_score = score;
                best = a;
            }
        }
        // keep the current label unless strictly improved (flat
        // likelihoods, e.g. empty graphs, stay put)
        if (best != current && best_score <= current_score + 1e-12) best = current;
        if (best != current) ++changes;
        em.labels[i] = best;
        em.set_bit(best, i);
        ++em.sizes[best];
    }
    return changes;
}

}  // namespace

std::vector<BlockAssignment> infer_assignments(std::span<const GraphSnapshot> snapshots,
                                               int k, int restarts, std::uint64_t seed) {
    if (snapshots.empty()) throw std::invalid_argument("window must be non-empty");
    if (k < 1) throw std::invalid_argument("block count must be >= 1");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    const int n = snapshots.front().n_nodes;
    if (k > n) throw std::invalid_argument("block count exceeds node count");

    const int n_snapshots = static_cast<int>(snapshots.size());
    std::vector<BlockAssignment> result(n_snapshots);
    if (k == 1) {
        for (int s = 0; s < n_snapshots; ++s) {
            result[s].k = 1;
            result[s].labels.assign(n, 1);
        }
        return result;
    }

    EmScratch em;
    em.n = n;
    em.k = k;
    em.words = (n + 63) / 64;
    em.n_snapshots = n_snapshots;
    em.directed = snapshots.front().directed;
    em.adj.reserve(n_snapshots);
    for (const auto& g : snapshots) em.adj.push_back(build_bit_adj(g));

    std::vector<int> best_labels;
    double best_ll = -std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r)));
        std::uniform_int_distribution<int> pick(0, k - 1);
        em.labels.assign(n, 0);
        em.mask.assign(std::size_t(k) * em.words, 0);
        em.sizes.assign(k, 0);
        for (int i = 0; i < n; ++i) {
            const int b = pick(rng);
            em.labels[i] = b;
            em.set_bit(b, i);
            ++em.sizes[b];
        }
        EmModel model;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            m_step(em, model);
            if (e_step(em, model) == 0) break;
        }
        const double ll = em_loglik(em);
        if (ll > best_ll) {
            best_ll = ll;
            best_labels = em.labels;
        }
    }

    // compact away empty blocks
    std::vector<std::int64_t> pooled(k, 0);
    for (int b : best_labels) ++pooled[b];
    std::vector<int> remap(k, 0);
    int k_eff = 0;
    for (int b = 0; b < k; ++b)
        if (pooled[b] > 0) remap[b] = ++k_eff;

    BlockAssignment shared;
    shared.k = k_eff;
    shared.labels.resize(n);
    for (int i = 0; i < n; ++i) shared.labels[i] = remap[best_labels[i]];
    for (int s = 0; s < n_snapshots; ++s) result[s] = shared;
    return result;
}

ModelFit select_model(std::span<const GraphSnapshot> snapshots, int k_max, int restarts,
                      std::uint64_t seed, WindowMode mode, ComplexityCache& cache) {
    if (snapshots.empty()) throw std::invalid_argument("window must be non-empty");
    const int n = snapshots.front().n_nodes;
    if (k_max < 1 || k_max > n) throw std::invalid_argument("k_max must be in [1, n_nodes]");

    ModelFit best;
    for (int k = 1; k <= k_max; ++k) {
        auto assignments = infer_assignments(snapshots, k, restarts, seed);
        const int k_eff = assignments.front().k;
        if (k_eff < k) continue;  // collapsed candidate: code length +inf
        DnmlParts parts = window_code_length(snapshots, assignments, k, mode, cache);
        const double cl = parts.total() + model_code_len(k);
        if (cl < best.code_length) {
            best.k_hat = k;
            best.assignments = std::move(assignments);
            best.parts = parts;
            best.code_length = cl;
        }
    }
    return best;
}

std::vector<int> label_permutation(const BlockAssignment& reference,
                                   const BlockAssignment& target) {
    if (reference.n_nodes() != target.n_nodes())
        throw std::invalid_argument("assignments must cover the same nodes");
    const int k = std::max(reference.k, target.k);
    std::vector<std::int64_t> w(std::size_t(k) * k, 0);  // w[ref][tgt]
    for (int i = 0; i < reference.n_nodes(); ++i)
        ++w[std::size_t(reference.labels[i] - 1) * k + (target.labels[i] - 1)];

    std::vector<int> perm(k + 1, 0);
    if (k <= 20) {
        // exact assignment by bitmask DP over reference slots; targets are
        // processed in label order and ties prefer the identity mapping
        const std::size_t full = std::size_t(1) << k;
        std::vector<double> f(full, 0.0);
        for (std::size_t mask = full - 1; mask + 1 > 0; --mask) {
            const int b = std::popcount(mask);
            if (b >= k) continue;
            double best = -1.0;
            for (int r = 0; r < k; ++r) {
                if (mask & (std::size_t(1) << r)) continue;
                const double v = double(w[std::size_t(r) * k + b]) + f[mask | (std::size_t(1) << r)];
                if (v > best) best = v;
            }
            f[mask] = best;
            if (mask == 0) break;
        }
        std::size_t mask = 0;
        for (int b = 0; b < k; ++b) {
            int choice = -1;
            double best = -1.0;
            for (int r = 0; r < k; ++r) {
                if (mask & (std::size_t(1) << r)) continue;
                const double v = double(w[std::size_t(r) * k + b]) + f[mask | (std::size_t(1) << r)];
                if (v > best || (v == best && r == b && choice != b)) {
                    best = v;
                    choice = r;
                }
            }
            perm[b + 1] = choice + 1;
            mask |= std::size_t(1) << choice;
        }
    } else {
        // greedy fallback for very large label sets
        std::vector<std::pair<std::int64_t, std::pair<int, int>>> cells;
        for (int r = 0; r < k; ++r)
            for (int b = 0; b < k; ++b) cells.push_back({w[std::size_t(r) * k + b], {r, b}});
        std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        std::vector<bool> ref_used(k, false), tgt_used(k, false);
        for (const auto& [cnt, rb] : cells) {
            const auto [r, b] = rb;
            if (ref_used[r] || tgt_used[b]) continue;
            perm[b + 1] = r + 1;
            ref_used[r] = tgt_used[b] = true;
        }
    }
    return perm;
}

BlockAssignment align_labels(const BlockAssignment& reference, const BlockAssignment& target) {
    const auto perm = label_permutation(reference, target);
    BlockAssignment out;
    out.k = std::max(reference.k, target.k);
    out.labels.resize(target.labels.size());
    for (std::size_t i = 0; i < target.labels.size(); ++i)
        out.labels[i] = perm[target.labels[i]];
    return out;
}

}  // namespace hcd
