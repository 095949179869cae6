#include "hcd/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace hcd {

void GraphSnapshot::canonicalize() {
    if (n_nodes <= 0) throw std::invalid_argument("snapshot must have at least one node");
    for (auto& e : edges) {
        if (e.first == e.second) throw std::invalid_argument("self-loops are not allowed");
        if (e.first < 0 || e.first >= n_nodes || e.second < 0 || e.second >= n_nodes)
            throw std::invalid_argument("edge endpoint out of range");
        if (!directed && e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool GraphSnapshot::has_edge(int u, int v) const {
    if (!directed && u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::int64_t GraphSnapshot::dyad_count() const {
    const std::int64_t n = n_nodes;
    return directed ? n * (n - 1) : n * (n - 1) / 2;
}

void BlockAssignment::validate() const {
    if (k < 1) throw std::invalid_argument("block count must be >= 1");
    for (int label : labels)
        if (label < 1 || label > k) throw std::invalid_argument("block label out of range");
}

}  // namespace hcd
