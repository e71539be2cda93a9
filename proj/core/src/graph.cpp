#include "schottky/graph.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace schottky {

int StableGraph::vertex_index(const std::string& id) const
{
    const auto it = std::find(vertices.begin(), vertices.end(), id);
    if (it == vertices.end())
        fail(ErrorKind::InvalidGraph, "unknown vertex '" + id + "'");
    return static_cast<int>(it - vertices.begin());
}

int StableGraph::edge_index(const std::string& id) const
{
    for (std::size_t k = 0; k < edges.size(); ++k)
        if (edges[k].id == id)
            return static_cast<int>(k);
    fail(ErrorKind::InvalidGraph, "unknown edge '" + id + "'");
}

bool StableGraph::is_connected() const
{
    if (vertices.empty())
        return false;
    std::vector<bool> seen(vertices.size(), false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const Edge& e : edges) {
            for (const auto& [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}}) {
                if (a == v && !seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

bool StableGraph::is_stable() const
{
    std::vector<int> branches(vertices.size(), 0);
    for (const Edge& e : edges) {
        ++branches[static_cast<std::size_t>(e.from)];
        ++branches[static_cast<std::size_t>(e.to)];
    }
    for (const Tail& t : tails)
        ++branches[static_cast<std::size_t>(t.vertex)];
    return std::all_of(branches.begin(), branches.end(), [](int b) { return b >= 3; });
}

void StableGraph::validate() const
{
    if (vertices.empty())
        fail(ErrorKind::InvalidGraph, "no vertices");
    const int nv = static_cast<int>(vertices.size());
    for (const Edge& e : edges)
        if (e.from < 0 || e.from >= nv || e.to < 0 || e.to >= nv)
            fail(ErrorKind::InvalidGraph, "edge '" + e.id + "' has an invalid endpoint");
    for (const Tail& t : tails)
        if (t.vertex < 0 || t.vertex >= nv)
            fail(ErrorKind::InvalidGraph, "tail '" + t.id + "' has an invalid vertex");
    std::vector<std::string> ids;
    for (const Edge& e : edges)
        ids.push_back(e.id);
    for (const Tail& t : tails)
        ids.push_back(t.id);
    for (const std::string& id : ids)
        if (id.empty() || id[0] == '-')
            fail(ErrorKind::InvalidGraph, "edge and tail ids must be non-empty and not start with '-'");
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        fail(ErrorKind::InvalidGraph, "duplicate edge or tail id");
    std::vector<int> numbers;
    for (const Tail& t : tails)
        numbers.push_back(t.number);
    std::sort(numbers.begin(), numbers.end());
    for (std::size_t k = 0; k < numbers.size(); ++k)
        if (numbers[k] != static_cast<int>(k) + 1)
            fail(ErrorKind::InvalidGraph, "tail numbering must be a bijection onto 1..n");
    if (!is_connected())
        fail(ErrorKind::InvalidGraph, "graph is not connected");
    if (!is_stable())
        fail(ErrorKind::InvalidGraph, "some vertex has fewer than 3 branches");
    if (genus() < 1)
        fail(ErrorKind::InvalidGraph, "first Betti number must be >= 1");
}

int head(const StableGraph& g, OrientedEdge h)
{
    const StableGraph::Edge& e = g.edges.at(static_cast<std::size_t>(edge_of(h)));
    return h > 0 ? e.to : e.from;
}

int tail_vertex(const StableGraph& g, OrientedEdge h) { return head(g, -h); }

std::string oriented_key(const StableGraph& g, OrientedEdge h)
{
    const std::string& id = g.edges.at(static_cast<std::size_t>(edge_of(h))).id;
    return h > 0 ? id : "-" + id;
}

SpherePoint SchottkyParams::x_of(const std::string& key) const
{
    const auto it = x.find(key);
    if (it == x.end())
        fail(ErrorKind::InvalidParams, "missing x for '" + key + "'");
    return it->second;
}

cplx SchottkyParams::y_of(const std::string& edge_id) const
{
    const auto it = y.find(edge_id);
    if (it == y.end())
        fail(ErrorKind::InvalidParams, "missing y for edge '" + edge_id + "'");
    return it->second;
}

void SchottkyParams::validate(const StableGraph& graph) const
{
    graph.validate();
    // Points living on each vertex sphere.
    std::vector<std::vector<std::pair<std::string, SpherePoint>>> at(graph.vertices.size());
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        const auto h = static_cast<OrientedEdge>(k + 1);
        const SpherePoint xp = x_of(oriented_key(graph, h));
        const SpherePoint xm = x_of(oriented_key(graph, -h));
        if (xp == xm)
            fail(ErrorKind::CoincidentFixedPoints, "x_e = x_{-e} for edge '" + graph.edges[k].id + "'");
        if (xp.is_infinite() && xm.is_infinite())
            fail(ErrorKind::InvalidParams, "both ends of edge '" + graph.edges[k].id + "' at infinity");
        at[static_cast<std::size_t>(head(graph, h))].emplace_back(oriented_key(graph, h), xp);
        at[static_cast<std::size_t>(head(graph, -h))].emplace_back(oriented_key(graph, -h), xm);
        const cplx ye = y_of(graph.edges[k].id);
        if (!std::isfinite(ye.real()) || !std::isfinite(ye.imag()) || ye == cplx(0.0))
            fail(ErrorKind::InvalidParams, "y for edge '" + graph.edges[k].id + "' must be finite and nonzero");
        if (std::abs(ye) >= 1.0)
            fail(ErrorKind::NotLoxodromic, "|y| >= 1 for edge '" + graph.edges[k].id + "'");
    }
    for (const StableGraph::Tail& t : graph.tails)
        at[static_cast<std::size_t>(t.vertex)].emplace_back(t.id, x_of(t.id));
    for (std::size_t v = 0; v < at.size(); ++v) {
        int n_inf = 0;
        for (std::size_t a = 0; a < at[v].size(); ++a) {
            n_inf += at[v][a].second.is_infinite() ? 1 : 0;
            for (std::size_t b = a + 1; b < at[v].size(); ++b)
                if (at[v][a].second == at[v][b].second)
                    fail(ErrorKind::InvalidParams,
                         "x_" + at[v][a].first + " = x_" + at[v][b].first + " on vertex '" + graph.vertices[v] + "'");
        }
        if (n_inf > 1)
            fail(ErrorKind::InvalidParams, "more than one point at infinity on vertex '" + graph.vertices[v] + "'");
    }
}

MoebiusMap build_phi(const SpherePoint& x_plus, const SpherePoint& x_minus, cplx y)
{
    return map_from_fixed_points(x_plus, x_minus, y);
}

namespace {

// BFS over the whole graph; parent_edge[v] is the tree edge toward the base.
struct BfsTree {
    std::vector<int> tree;
    std::vector<OrientedEdge> to_parent; // 0 at the base
    std::vector<int> order;
};

BfsTree bfs_tree(const StableGraph& graph, int base, const std::optional<std::vector<int>>& fixed)
{
    const std::size_t nv = graph.vertices.size();
    BfsTree t;
    t.to_parent.assign(nv, 0);
    std::vector<bool> seen(nv, false);
    std::deque<int> queue{base};
    seen[static_cast<std::size_t>(base)] = true;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        t.order.push_back(v);
        for (std::size_t k = 0; k < graph.edges.size(); ++k) {
            if (fixed && std::find(fixed->begin(), fixed->end(), static_cast<int>(k)) == fixed->end())
                continue;
            const StableGraph::Edge& e = graph.edges[k];
            if (e.from == e.to)
                continue;
            int w = -1;
            OrientedEdge toward = 0;
            if (e.from == v) {
                w = e.to;
                toward = -static_cast<OrientedEdge>(k + 1); // from v_e = w back to v_{-e} = v
            } else if (e.to == v) {
                w = e.from;
                toward = static_cast<OrientedEdge>(k + 1);
            }
            if (w < 0 || seen[static_cast<std::size_t>(w)])
                continue;
            seen[static_cast<std::size_t>(w)] = true;
            t.to_parent[static_cast<std::size_t>(w)] = toward;
            t.tree.push_back(static_cast<int>(k));
            queue.push_back(w);
        }
    }
    if (t.order.size() != nv)
        fail(ErrorKind::InvalidGraph, "tree does not span the graph");
    std::sort(t.tree.begin(), t.tree.end());
    return t;
}

GraphWordPath path_to_base(const StableGraph& graph, const BfsTree& t, int v)
{
    GraphWordPath p;
    while (t.to_parent[static_cast<std::size_t>(v)] != 0) {
        const OrientedEdge h = t.to_parent[static_cast<std::size_t>(v)];
        p.push_back(h);
        v = head(graph, h);
    }
    return p;
}

GraphWordPath reversed(const GraphWordPath& p)
{
    GraphWordPath r;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        r.push_back(-*it);
    return r;
}

std::vector<int> non_tree_edges(const StableGraph& graph, const std::vector<int>& tree)
{
    std::vector<int> out;
    for (std::size_t k = 0; k < graph.edges.size(); ++k)
        if (std::find(tree.begin(), tree.end(), static_cast<int>(k)) == tree.end())
            out.push_back(static_cast<int>(k));
    return out;
}

} // namespace

std::vector<int> spanning_tree(const StableGraph& graph, int base)
{
    if (base < 0 || base >= static_cast<int>(graph.vertices.size()))
        fail(ErrorKind::InvalidGraph, "base vertex out of range");
    return bfs_tree(graph, base, std::nullopt).tree;
}

std::vector<GraphWordPath> pi1_generators(const StableGraph& graph, int base, const std::vector<int>& tree)
{
    const BfsTree t = bfs_tree(graph, base, tree);
    std::vector<GraphWordPath> out;
    for (int k : non_tree_edges(graph, t.tree)) {
        const auto e = static_cast<OrientedEdge>(k + 1);
        GraphWordPath p = reversed(path_to_base(graph, t, tail_vertex(graph, e)));
        p.push_back(e);
        const GraphWordPath back = path_to_base(graph, t, head(graph, e));
        p.insert(p.end(), back.begin(), back.end());
        out.push_back(std::move(p));
    }
    return out;
}

Uniformization uniformize(const StableGraph& graph, const SchottkyParams& params, int base,
                          const std::optional<std::vector<int>>& tree)
{
    if (base < 0 || base >= static_cast<int>(graph.vertices.size()))
        fail(ErrorKind::InvalidGraph, "base vertex out of range");
    const BfsTree t = bfs_tree(graph, base, tree);
    Uniformization u;
    u.base = base;
    u.tree = t.tree;
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        const auto h = static_cast<OrientedEdge>(k + 1);
        u.phi.push_back(build_phi(params.x_of(oriented_key(graph, h)), params.x_of(oriented_key(graph, -h)),
                                  params.y_of(graph.edges[k].id)));
    }
    auto phi_of = [&](OrientedEdge h) {
        const MoebiusMap& m = u.phi[static_cast<std::size_t>(edge_of(h))];
        return h > 0 ? m : m.inverse().normalized();
    };
    u.transport.assign(graph.vertices.size(), MoebiusMap::identity());
    for (int v : t.order) {
        const OrientedEdge h = t.to_parent[static_cast<std::size_t>(v)];
        if (h != 0)
            u.transport[static_cast<std::size_t>(v)] = compose(u.transport[static_cast<std::size_t>(head(graph, h))], phi_of(h));
    }
    std::vector<MoebiusMap> gens;
    for (int k : non_tree_edges(graph, t.tree)) {
        const auto e = static_cast<OrientedEdge>(k + 1);
        const MoebiusMap& to_head = u.transport[static_cast<std::size_t>(head(graph, e))];
        const MoebiusMap& to_tail = u.transport[static_cast<std::size_t>(tail_vertex(graph, e))];
        gens.push_back(compose(compose(to_head, phi_of(e)), to_tail.inverse()));
        u.generator_edges.push_back(k);
    }
    u.group = SchottkyGroup(std::move(gens));
    return u;
}

ValidationReport validate_classical(const SchottkyGroup& group)
{
    struct Circle {
        cplx center;
        double radius;
        int letter;
    };
    std::vector<Circle> circles;
    for (int i = 1; i <= group.rank(); ++i) {
        const MoebiusMap m = group.generator(i).unit_det();
        if (std::abs(m.c()) <= 1e-14 * std::max(std::abs(m.a()), std::abs(m.d()))) {
            return {false, -std::numeric_limits<double>::infinity(),
                    "generator " + std::to_string(i) + " fixes infinity; isometric circles undefined"};
        }
        const double r = 1.0 / std::abs(m.c());
        circles.push_back({-m.d() / m.c(), r, i});
        circles.push_back({m.a() / m.c(), r, -i});
    }
    ValidationReport rep;
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < circles.size(); ++a) {
        for (std::size_t b = a + 1; b < circles.size(); ++b) {
            const double gap = std::abs(circles[a].center - circles[b].center) - circles[a].radius - circles[b].radius;
            if (gap < rep.min_gap) {
                rep.min_gap = gap;
                rep.detail = "closest isometric circles: " + std::to_string(circles[a].letter) + " and " +
                             std::to_string(circles[b].letter);
            }
        }
    }
    rep.pass = rep.min_gap > 0.0;
    return rep;
}

SchottkyGroup instantiate_group(const StableGraph& graph, const SchottkyParams& params)
{
    params.validate(graph);
    Uniformization u = uniformize(graph, params);
    const ValidationReport rep = validate_classical(u.group);
    if (!rep.pass)
        fail(ErrorKind::CirclesOverlap, rep.detail + " (gap " + std::to_string(rep.min_gap) + ")");
    return u.group;
}

std::optional<SpherePoint> marked_point(const StableGraph& graph, const SchottkyParams& params,
                                        const Uniformization& uni)
{
    for (const StableGraph::Tail& t : graph.tails)
        if (t.number == 1)
            return uni.transport[static_cast<std::size_t>(t.vertex)](params.x_of(t.id));
    return std::nullopt;
}

CurveConfig mcurve_params(int g, int n_tails, double scale, double y_value)
{
    if (!std::isfinite(scale) || scale <= 0.0)
        fail(ErrorKind::InvalidScale, "scale must be positive and finite");
    if (g < 1 || n_tails < 0)
        fail(ErrorKind::InvalidInput, "need g >= 1 and n_tails >= 0");
    if (!(y_value > 0.0 && y_value < 1.0))
        fail(ErrorKind::InvalidParams, "y_value must lie in (0, 1)");
    CurveConfig cfg;
    cfg.graph.vertices = {"v0"};
    for (int i = 1; i <= g; ++i) {
        const std::string id = std::to_string(i);
        cfg.graph.edges.push_back({id, 0, 0});
        cfg.params.x[id] = SpherePoint(-1.0 + scale * (2 * (i - 1) + 1));
        cfg.params.x["-" + id] = SpherePoint(-1.0 + scale * (2 * (i - 1)));
        cfg.params.y[id] = cplx(y_value, 0.0);
    }
    for (int j = 1; j <= n_tails; ++j) {
        const std::string id = "t" + std::to_string(j);
        cfg.graph.tails.push_back({id, 0, j});
        cfg.params.x[id] = SpherePoint(-1.0 - scale * j);
    }
    // Equal spacing collapses only when the offsets vanish relative to the anchor point.
    std::vector<double> pts;
    for (const auto& [k, p] : cfg.params.x)
        pts.push_back(p.value().real());
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
        fail(ErrorKind::InvalidScale, "scale too small: parameter points collide");
    return cfg;
}

} // namespace schottky
