#pragma once

#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "gqlc/gf2.hpp"

namespace gqlc {

/// Bipartite decoding graph: variable nodes are columns, check nodes rows.
/// Unified node ids: variables [0, n), checks [n, n + m).
struct TannerGraph {
    int num_vars = 0;
    int num_checks = 0;
    std::vector<std::vector<int>> adj;

    static TannerGraph from_matrix(const BitMatrix& h) {
        TannerGraph g;
        g.num_vars = h.cols();
        g.num_checks = h.rows();
        g.adj.assign(g.num_vars + g.num_checks, {});
        for (int c = 0; c < h.rows(); ++c)
            for (int v = 0; v < h.cols(); ++v)
                if (h.get(c, v)) {
                    g.adj[v].push_back(g.num_vars + c);
                    g.adj[g.num_vars + c].push_back(v);
                }
        return g;
    }

    int size() const { return num_vars + num_checks; }
};

/// Length of the shortest cycle containing `node`, or nullopt if none.
/// BFS from the node with first-branch labels: an edge joining vertices of
/// different branches closes a cycle through the node of length
/// depth(u) + depth(w) + 1; branch-disjoint tree paths meet only at the root.
inline std::optional<int> node_girth(const TannerGraph& g, int node) {
    const int inf = -1;
    std::vector<int> depth(g.size(), inf), branch(g.size(), inf);
    std::queue<int> q;
    depth[node] = 0;
    q.push(node);
    int best = -1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        if (best >= 0 && 2 * depth[u] >= best) break;  // no shorter closure possible
        for (int wv : g.adj[u]) {
            if (depth[wv] == inf) {
                depth[wv] = depth[u] + 1;
                branch[wv] = (u == node) ? wv : branch[u];
                q.push(wv);
            } else if (wv != node && branch[wv] != branch[u]) {
                const int len = depth[u] + depth[wv] + 1;
                if (best < 0 || len < best) best = len;
            }
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

/// Per-node-class girth counts; acyclic nodes tallied separately.
struct GirthHistogram {
    std::map<int, int> vn, cn;
    int vn_acyclic = 0, cn_acyclic = 0;

    void add(const GirthHistogram& o) {
        for (auto [g, c] : o.vn) vn[g] += c;
        for (auto [g, c] : o.cn) cn[g] += c;
        vn_acyclic += o.vn_acyclic;
        cn_acyclic += o.cn_acyclic;
    }
};

inline GirthHistogram girth_histograms(const BitMatrix& h) {
    const TannerGraph g = TannerGraph::from_matrix(h);
    GirthHistogram hist;
    for (int v = 0; v < g.num_vars; ++v) {
        if (auto gi = node_girth(g, v))
            ++hist.vn[*gi];
        else
            ++hist.vn_acyclic;
    }
    for (int c = 0; c < g.num_checks; ++c) {
        if (auto gi = node_girth(g, g.num_vars + c))
            ++hist.cn[*gi];
        else
            ++hist.cn_acyclic;
    }
    return hist;
}

/// Mean girth over cycle-bearing nodes of one class; 0 when all acyclic.
inline double mean_girth(const std::map<int, int>& hist) {
    long count = 0, sum = 0;
    for (auto [g, c] : hist) {
        sum += long(g) * c;
        count += c;
    }
    return count == 0 ? 0.0 : double(sum) / double(count);
}

/// Minimum node girth, i.e. the shortest cycle anywhere in the graph.
inline std::optional<int> code_girth(const BitMatrix& h) {
    const GirthHistogram hist = girth_histograms(h);
    std::optional<int> best;
    if (!hist.vn.empty()) best = hist.vn.begin()->first;
    if (!hist.cn.empty() && (!best || hist.cn.begin()->first < *best))
        best = hist.cn.begin()->first;
    return best;
}

struct DegreeDistribution {
    std::vector<int> vn_degrees, cn_degrees;  // per column / per row of H
    std::map<int, int> vn, cn;                // histograms
    long edges = 0;
};

inline DegreeDistribution degree_distributions(const BitMatrix& h) {
    DegreeDistribution d;
    d.vn_degrees.resize(h.cols());
    d.cn_degrees.resize(h.rows());
    for (int v = 0; v < h.cols(); ++v) {
        d.vn_degrees[v] = h.col_weight(v);
        ++d.vn[d.vn_degrees[v]];
    }
    for (int c = 0; c < h.rows(); ++c) {
        d.cn_degrees[c] = h.row_weight(c);
        ++d.cn[d.cn_degrees[c]];
        d.edges += d.cn_degrees[c];
    }
    return d;
}

}  // namespace gqlc
