#pragma once

#include "schottky/group.hpp"
#include "schottky/moebius.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace schottky {

/// Connected stable graph with oriented edges and numbered tails.
/// Edge e runs from v_{-e} (`from`) to v_e (`to`).
struct StableGraph {
    struct Edge {
        std::string id;
        int from = 0;
        int to = 0;
    };
    struct Tail {
        std::string id;
        int vertex = 0;
        int number = 0;
    };

    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::vector<Tail> tails;

    int genus() const noexcept
    {
        return static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + 1;
    }
    int vertex_index(const std::string& id) const;
    int edge_index(const std::string& id) const;
    /// Throws InvalidGraph unless connected, stable and of genus >= 1.
    void validate() const;
    bool is_connected() const;
    bool is_stable() const;
};

/// Oriented edge h = +-(k+1) for edge index k; -h is the reverse.
using OrientedEdge = int;

inline int edge_of(OrientedEdge h) noexcept { return (h > 0 ? h : -h) - 1; }
/// v_h: the endpoint where x_h lives.
int head(const StableGraph& g, OrientedEdge h);
/// v_{-h}.
int tail_vertex(const StableGraph& g, OrientedEdge h);
/// "id" for +e and "-id" for -e.
std::string oriented_key(const StableGraph& g, OrientedEdge h);

/// Sequence of oriented edges h(1)..h(l) with v_{h(i)} = v_{-h(i+1)}.
using GraphWordPath = std::vector<OrientedEdge>;

/// Values x_h for oriented edges and tails, and y_e for edges.
struct SchottkyParams {
    std::map<std::string, SpherePoint> x;
    std::map<std::string, cplx> y;

    SpherePoint x_of(const std::string& key) const;
    cplx y_of(const std::string& edge_id) const;
    /// Throws InvalidParams, CoincidentFixedPoints or NotLoxodromic.
    void validate(const StableGraph& graph) const;
};

MoebiusMap build_phi(const SpherePoint& x_plus, const SpherePoint& x_minus, cplx y);

/// Breadth-first maximal subtree from `base`, edges scanned in declaration order.
std::vector<int> spanning_tree(const StableGraph& graph, int base = 0);

/// One closed path per non-tree edge e: tree path base -> v_{-e}, e, tree path v_e -> base.
std::vector<GraphWordPath> pi1_generators(const StableGraph& graph, int base, const std::vector<int>& tree);

/// Group plus the coordinate changes relating vertex spheres to the base sphere.
struct Uniformization {
    SchottkyGroup group;
    int base = 0;
    std::vector<int> tree;
    /// Non-tree edges in generator order.
    std::vector<int> generator_edges;
    /// transport[v] maps v-coordinates to base coordinates.
    std::vector<MoebiusMap> transport;
    /// phi_h for every edge, oriented +e.
    std::vector<MoebiusMap> phi;
};

/// Builds the group without validation; explicit base and tree allow subgraph use.
Uniformization uniformize(const StableGraph& graph, const SchottkyParams& params, int base = 0,
                          const std::optional<std::vector<int>>& tree = std::nullopt);

struct ValidationReport {
    bool pass = false;
    double min_gap = 0.0;
    std::string detail;
};

/// Pairwise disjointness of the isometric circles of the generators and their inverses.
ValidationReport validate_classical(const SchottkyGroup& group);

/// Validates params, builds the group and throws CirclesOverlap if validation fails.
SchottkyGroup instantiate_group(const StableGraph& graph, const SchottkyParams& params);

/// Base-coordinate position of the tail numbered 1, if there are tails.
std::optional<SpherePoint> marked_point(const StableGraph& graph, const SchottkyParams& params,
                                        const Uniformization& uni);

struct CurveConfig {
    StableGraph graph;
    SchottkyParams params;
};

/// One vertex, g loops, n tails; x_{-1} < x_1 < x_{-2} < ... spaced by `scale`, tails to the left.
CurveConfig mcurve_params(int g, int n_tails, double scale, double y_value);

} // namespace schottky
