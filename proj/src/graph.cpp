#include "fwsn/graph.hpp"

#include "fwsn/error.hpp"
#include "fwsn/grid_model.hpp"
#include "fwsn/kernels.hpp"
#include "fwsn/rng.hpp"
#include "fwsn/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace fwsn {

Graph::Graph(std::vector<Point> positions, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : positions_(std::move(positions)) {
    const auto n = static_cast<std::uint32_t>(positions_.size());
    std::vector<std::uint32_t> offsets(n + 1, 0);
    for (const auto& [u, v] : edges) {
        require(u < n && v < n, "Graph: edge endpoint out of range");
        if (u == v) continue;
        ++offsets[u + 1];
        ++offsets[v + 1];
    }
    for (std::uint32_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
    std::vector<std::uint32_t> targets(offsets[n]);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        targets[fill[u]++] = v;
        targets[fill[v]++] = u;
    }
    // Sort each list and drop repeated edges while compacting in place.
    offsets_.assign(n + 1, 0);
    std::uint32_t write = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto first = targets.begin() + offsets[v];
        const auto last = targets.begin() + offsets[v + 1];
        std::sort(first, last);
        const auto end = std::unique(first, last);
        for (auto it = first; it != end; ++it) targets[write++] = *it;
        offsets_[v + 1] = write;
    }
    targets.resize(write);
    targets_ = std::move(targets);
}

bool Graph::adjacent(std::uint32_t u, std::uint32_t v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Graph::edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(edge_count());
    for (std::uint32_t u = 0; u < size(); ++u) {
        for (std::uint32_t v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

namespace graph {

namespace {

// Calls visit(slot_a, slot_b, ids) for every pair within r, each pair once,
// using cells of side >= r over S0. visit returns false to stop the scan.
template <class Visit>
void for_each_close_pair(const std::vector<Point>& points, double r, Visit&& visit) {
    const std::size_t n = points.size();
    const double r2 = r * r;

    // Points outside S0 fall into the border cells.
    int cells = r > 0.0 ? static_cast<int>(std::min(1024.0, std::floor(1.0 / r))) : 1024;
    cells = std::max(cells, 1);
    auto cell_of = [&](double c) {
        const int i = static_cast<int>(std::floor((c + 0.5) * cells));
        return std::clamp(i, 0, cells - 1);
    };
    std::vector<std::uint32_t> start(static_cast<std::size_t>(cells) * cells + 1, 0);
    std::vector<std::uint32_t> cell_index(n);
    for (std::size_t i = 0; i < n; ++i) {
        cell_index[i] = static_cast<std::uint32_t>(cell_of(points[i].y) * cells + cell_of(points[i].x));
        ++start[cell_index[i] + 1];
    }
    for (std::size_t c = 0; c + 1 < start.size(); ++c) start[c + 1] += start[c];
    std::vector<double> sx(n), sy(n);
    std::vector<std::uint32_t> sid(n);
    {
        std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t slot = fill[cell_index[i]]++;
            sx[slot] = points[i].x;
            sy[slot] = points[i].y;
            sid[slot] = static_cast<std::uint32_t>(i);
        }
    }

    // Each pair is visited once: later slots of the own row block, then the
    // whole block of the row above.
    std::vector<std::uint32_t> hits;
    const std::span<const double> all_x(sx), all_y(sy);
    for (std::uint32_t slot = 0; slot < n; ++slot) {
        const std::uint32_t cell = cell_index[sid[slot]];
        const int cx = static_cast<int>(cell % cells);
        const int cy = static_cast<int>(cell / cells);
        const std::size_t right = static_cast<std::size_t>(std::min(cx + 1, cells - 1));
        hits.clear();
        {
            const std::uint32_t lo = slot + 1;
            const std::uint32_t hi = start[static_cast<std::size_t>(cy) * cells + right + 1];
            kernels::collect_within(all_x.subspan(lo, hi - lo), all_y.subspan(lo, hi - lo), sx[slot], sy[slot], r2,
                                    lo, hits);
        }
        if (cy + 1 < cells) {
            const std::size_t row = static_cast<std::size_t>(cy + 1) * cells;
            const std::uint32_t lo = start[row + static_cast<std::size_t>(std::max(cx - 1, 0))];
            const std::uint32_t hi = start[row + right + 1];
            kernels::collect_within(all_x.subspan(lo, hi - lo), all_y.subspan(lo, hi - lo), sx[slot], sy[slot], r2,
                                    lo, hits);
        }
        const std::uint32_t a = sid[slot];
        for (std::uint32_t other : hits) {
            const std::uint32_t b = sid[other];
            if (!visit(std::min(a, b), std::max(a, b))) return;
        }
    }
}

void check_link_args(double r, double p) {
    require(p > 0.0 && p <= 1.0, "link probability p must lie in (0, 1]");
    require(r >= 0.0, "radius must be nonnegative");
}

}  // namespace

Graph build_geometric_graph(std::vector<Point> points, double r, double p, std::uint64_t seed) {
    check_link_args(r, p);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for_each_close_pair(points, r, [&](std::uint32_t u, std::uint32_t v) {
        if (p >= 1.0 || pair_uniform(seed, u, v) < p) edges.emplace_back(u, v);
        return true;
    });
    return Graph(std::move(points), std::move(edges));
}

bool geometric_graph_connected(const std::vector<Point>& points, double r, double p, std::uint64_t seed) {
    check_link_args(r, p);
    if (points.size() <= 1) return true;
    UnionFind sets(points.size());
    for_each_close_pair(points, r, [&](std::uint32_t u, std::uint32_t v) {
        if (sets.find(u) == sets.find(v)) return true;
        if (p >= 1.0 || pair_uniform(seed, u, v) < p) sets.unite(u, v);
        return sets.components() > 1;
    });
    return sets.components() == 1;
}

Graph build_geometric_graph_bruteforce(std::vector<Point> points, double r, double p, std::uint64_t seed) {
    require(p > 0.0 && p <= 1.0, "link probability p must lie in (0, 1]");
    const double r2 = r * r;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t u = 0; u < points.size(); ++u) {
        for (std::uint32_t v = u + 1; v < points.size(); ++v) {
            if (geometry::distance_squared(points[u], points[v]) > r2) continue;
            if (p < 1.0 && pair_uniform(seed, u, v) >= p) continue;
            edges.emplace_back(u, v);
        }
    }
    return Graph(std::move(points), std::move(edges));
}

Graph build_lattice_graph(std::uint64_t n, const std::vector<std::uint32_t>& active, double r) {
    const std::uint64_t s = grid::side(n);
    require(r >= 0.0, "radius must be nonnegative");
    // Squared lattice offsets a^2 + b^2 <= n r^2, with slack for rounding in n r^2.
    const auto cap = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * r * r + 1e-9));
    const std::vector<Point> lattice = grid::grid_positions(n);

    std::vector<Point> pts;
    pts.reserve(active.size());
    for (std::uint32_t id : active) pts.push_back(lattice.at(id));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    const auto side = static_cast<std::int64_t>(s);
    for (std::uint32_t a = 0; a < active.size(); ++a) {
        const std::int64_t ai = active[a] % side, aj = active[a] / side;
        for (std::uint32_t b = a + 1; b < active.size(); ++b) {
            const std::int64_t di = active[b] % side - ai, dj = active[b] / side - aj;
            if (di * di + dj * dj <= cap) edges.emplace_back(a, b);
        }
    }
    return Graph(std::move(pts), std::move(edges));
}

bool is_connected(const Graph& g) {
    if (g.size() <= 1) return true;
    UnionFind uf(g.size());
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        for (std::uint32_t v : g.neighbors(u)) {
            if (u < v && uf.unite(u, v) && uf.components() == 1) return true;
        }
    }
    return uf.components() == 1;
}

namespace {

// Connected with no articulation point (iterative Tarjan lowpoints).
bool biconnected(const Graph& g) {
    const auto n = static_cast<std::uint32_t>(g.size());
    constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> order(n, kUnseen), low(n, 0), parent(n, kUnseen), next(n, 0);
    std::uint32_t counter = 0;
    std::uint32_t root_children = 0;
    std::vector<std::uint32_t> stack{0};
    order[0] = low[0] = counter++;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        const auto nb = g.neighbors(u);
        if (next[u] < nb.size()) {
            const std::uint32_t w = nb[next[u]++];
            if (order[w] == kUnseen) {
                parent[w] = u;
                order[w] = low[w] = counter++;
                if (u == 0) ++root_children;
                stack.push_back(w);
            } else if (w != parent[u]) {
                low[u] = std::min(low[u], order[w]);
            }
            continue;
        }
        stack.pop_back();
        const std::uint32_t pu = parent[u];
        if (pu != kUnseen) {
            low[pu] = std::min(low[pu], low[u]);
            if (pu != 0 && low[u] >= order[pu]) return false;
        }
    }
    return counter == n && root_children <= 1;
}

std::uint32_t min_degree_vertex(const Graph& g) {
    std::uint32_t best = 0;
    for (std::uint32_t v = 1; v < g.size(); ++v) {
        if (g.degree(v) < g.degree(best)) best = v;
    }
    return best;
}

}  // namespace

unsigned local_connectivity(const Graph& g, std::uint32_t s, std::uint32_t t, unsigned cap) {
    const auto n = static_cast<std::uint32_t>(g.size());
    require(s < n && t < n && s != t, "local_connectivity: bad endpoints");
    require(!g.adjacent(s, t), "local_connectivity: endpoints must be non-adjacent");

    // Vertex v splits into in = 2v and out = 2v + 1 joined by a unit arc.
    struct Arc {
        std::uint32_t to;
        std::int32_t cap;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<std::uint32_t>> out(2 * n);
    auto add = [&](std::uint32_t a, std::uint32_t b) {
        out[a].push_back(static_cast<std::uint32_t>(arcs.size()));
        arcs.push_back({b, 1});
        out[b].push_back(static_cast<std::uint32_t>(arcs.size()));
        arcs.push_back({a, 0});
    };
    for (std::uint32_t v = 0; v < n; ++v) {
        if (v != s && v != t) add(2 * v, 2 * v + 1);
    }
    for (std::uint32_t u = 0; u < n; ++u) {
        for (std::uint32_t v : g.neighbors(u)) add(2 * u + 1, 2 * v);
    }

    const std::uint32_t source = 2 * s + 1;
    const std::uint32_t sink = 2 * t;
    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> via(2 * n);
    unsigned flow = 0;
    while (flow < cap) {
        std::fill(via.begin(), via.end(), kNone);
        std::deque<std::uint32_t> queue{source};
        via[source] = kNone - 1;
        while (!queue.empty() && via[sink] == kNone) {
            const std::uint32_t a = queue.front();
            queue.pop_front();
            for (std::uint32_t id : out[a]) {
                const Arc& arc = arcs[id];
                if (arc.cap > 0 && via[arc.to] == kNone) {
                    via[arc.to] = id;
                    queue.push_back(arc.to);
                }
            }
        }
        if (via[sink] == kNone) break;
        for (std::uint32_t v = sink; v != source;) {
            const std::uint32_t id = via[v];
            arcs[id].cap -= 1;
            arcs[id ^ 1].cap += 1;
            v = arcs[id ^ 1].to;
        }
        ++flow;
    }
    return flow;
}

bool vertex_connectivity_at_least_flow(const Graph& g, unsigned k) {
    if (k == 0) return true;
    if (k == 1) return is_connected(g);
    const std::size_t n = g.size();
    if (k >= n) return false;
    const std::uint32_t v = min_degree_vertex(g);
    if (g.degree(v) < k) return false;
    if (g.degree(v) == n - 1) return true;  // complete graph

    const auto nv = g.neighbors(v);
    for (std::uint32_t w = 0; w < n; ++w) {
        if (w == v || std::binary_search(nv.begin(), nv.end(), w)) continue;
        if (local_connectivity(g, v, w, k) < k) return false;
    }
    for (std::size_t a = 0; a < nv.size(); ++a) {
        for (std::size_t b = a + 1; b < nv.size(); ++b) {
            if (g.adjacent(nv[a], nv[b])) continue;
            if (local_connectivity(g, nv[a], nv[b], k) < k) return false;
        }
    }
    return true;
}

bool vertex_connectivity_at_least(const Graph& g, unsigned k) {
    if (k == 0) return true;
    if (k == 1) return is_connected(g);
    if (k >= g.size()) return false;
    if (g.degree(min_degree_vertex(g)) < k) return false;
    if (k == 2) return biconnected(g);
    return vertex_connectivity_at_least_flow(g, k);
}

}  // namespace graph
}  // namespace fwsn
