#pragma once

// Undirected simple graphs over sensor positions and the connectivity tests
// the simulator needs.

#include "fwsn/geometry.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fwsn {

// Compressed adjacency; neighbor lists are sorted and symmetric.
class Graph {
public:
    Graph() = default;
    Graph(std::vector<Point> positions, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t size() const noexcept { return positions_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    const std::vector<Point>& positions() const noexcept { return positions_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }
    bool adjacent(std::uint32_t u, std::uint32_t v) const;

    // Edges as (u, v) with u < v in lexicographic order.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

private:
    std::vector<Point> positions_;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<std::uint32_t> targets_;
};

namespace graph {

// Edge {u, v} iff d(u, v) <= r and the pair's coin pair_uniform(seed, u, v) < p.
// A uniform cell index limits distance tests to nearby pairs.
Graph build_geometric_graph(std::vector<Point> points, double r, double p, std::uint64_t seed);

// is_connected(build_geometric_graph(...)) without materialising the graph.
bool geometric_graph_connected(const std::vector<Point>& points, double r, double p, std::uint64_t seed);

// All-pairs reference construction with the same edge rule.
Graph build_geometric_graph_bruteforce(std::vector<Point> points, double r, double p, std::uint64_t seed);

// Active subset of a sqrt(n) x sqrt(n) lattice; nodes closer than r are
// joined, decided on integer offsets so ties at lattice distances are exact.
Graph build_lattice_graph(std::uint64_t n, const std::vector<std::uint32_t>& active, double r);

bool is_connected(const Graph& g);

// True iff g stays connected after deleting any k - 1 vertices and has more
// than k vertices. k = 1 is plain connectivity, k = 2 uses articulation points,
// larger k uses vertex-split max flow.
bool vertex_connectivity_at_least(const Graph& g, unsigned k);

// The max-flow procedure for every k, exposed for cross-checking.
bool vertex_connectivity_at_least_flow(const Graph& g, unsigned k);

// Number of internally vertex-disjoint s-t paths, capped at `cap`; s and t must
// be distinct and non-adjacent.
unsigned local_connectivity(const Graph& g, std::uint32_t s, std::uint32_t t, unsigned cap);

}  // namespace graph
}  // namespace fwsn
