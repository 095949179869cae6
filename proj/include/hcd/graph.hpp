#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hcd {

/// One time-indexed network snapshot. Node ids are 0-based in memory
/// (file formats are 1-based). Undirected edges are stored once in
/// canonical (u < v) order; edge lists are kept sorted.
struct GraphSnapshot {
    int n_nodes = 0;
    bool directed = false;
    int timestamp = 0;
    std::vector<std::pair<int, int>> edges;

    // Sorts edges, canonicalizes endpoint order, drops duplicates and
    // rejects self-loops or out-of-range endpoints.
    void canonicalize();

    bool has_edge(int u, int v) const;

    // Number of observable dyads: n(n-1)/2 undirected, n(n-1) directed.
    std::int64_t dyad_count() const;
};

/// Per-node block labels in [1, k] for one snapshot, or for a window when
/// several snapshots' labels are stacked into one vector.
struct BlockAssignment {
    std::vector<int> labels;
    int k = 1;

    int n_nodes() const { return static_cast<int>(labels.size()); }
    void validate() const;
};

}  // namespace hcd
