#include "schottky/series.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>

namespace schottky {

namespace {

constexpr double kPoleEps = 1e-8;
constexpr double kMaxRatio = 0.95;

// Outcome of growing a word tree level by level.
template <class Node>
struct Grown {
    std::vector<Node> nodes; // level >= 1 nodes in enumeration order
    TailReport tail;
    double pruned_tail = 0.0; // share of the tail due to pruning, relative
};

// Node needs members `int first` and `double s`. `ref_from_root` selects the
// reference scale: the root proxy, or the first shell when the root has none.
template <class Node, class MakeChild>
Grown<Node> grow(const SchottkyGroup& group, const Node& root, int excluded, bool ref_from_root,
                 const TruncationPolicy& pol, double kappa, MakeChild make_child)
{
    Grown<Node> out;
    const int rank = group.rank();
    std::vector<Node> level{root};
    std::vector<double> shells{ref_from_root ? root.s : 0.0};
    std::vector<double> ratios;
    double ref = ref_from_root ? root.s : 0.0;
    double theta = kappa * pol.tail_tol * ref;
    double pruned_total = 0.0;
    double rho = 0.0;
    double tail_abs = 0.0;
    bool done = false;
    int depth = 0;

    for (int l = 1; l <= pol.max_word_len; ++l) {
        std::vector<Node> next;
        double pruned_here = 0.0;
        const bool can_prune = ref_from_root || l >= 2;
        for (const Node& node : level) {
            for (int r = 0; r < 2 * rank; ++r) {
                const int k = letter_from_rank(r);
                if (node.first != 0 && k == -node.first)
                    continue;
                if (node.first == 0 && excluded != 0 && std::abs(k) == excluded)
                    continue;
                Node child = make_child(node, k);
                child.first = k;
                if (can_prune && child.s < theta) {
                    pruned_here += child.s;
                    continue;
                }
                next.push_back(child);
            }
        }
        double shell = 0.0;
        for (const Node& n : next)
            shell += n.s;
        depth = l;
        if (!ref_from_root && l == 1) {
            ref = shell;
            theta = kappa * pol.tail_tol * ref;
        }
        if (shells.back() > 0.0)
            ratios.push_back((shell + pruned_here) / shells.back());
        shells.push_back(shell);
        pruned_total += pruned_here;
        out.nodes.insert(out.nodes.end(), next.begin(), next.end());

        rho = 0.0;
        for (std::size_t q = ratios.size() >= 2 ? ratios.size() - 2 : 0; q < ratios.size(); ++q)
            rho = std::max(rho, ratios[q]);

        if (next.empty()) {
            tail_abs = rho < kMaxRatio ? pruned_total / (1.0 - rho) : pruned_total * 20.0;
            done = true;
            break;
        }
        if (ratios.size() >= 2 && rho < kMaxRatio) {
            tail_abs = (shell * rho + pruned_total) / (1.0 - rho);
            if (tail_abs <= 0.5 * pol.tail_tol * ref) {
                done = true;
                break;
            }
        } else {
            tail_abs = shell + pruned_total;
        }
        if (out.nodes.size() > pol.max_terms)
            break;
        level = std::move(next);
    }
    if (pol.max_word_len == 0)
        tail_abs = 0.0;
    const bool childless = !done && pol.max_word_len == 0;
    if (childless) {
        // Nothing grown: estimate the first shell by one expansion without keeping it.
        double first = 0.0;
        for (int r = 0; r < 2 * rank; ++r) {
            const int k = letter_from_rank(r);
            if (excluded != 0 && std::abs(k) == excluded)
                continue;
            first += make_child(root, k).s;
        }
        tail_abs = first;
    }
    const double scale = ref > 0.0 ? ref : 1.0;
    out.tail.depth = depth;
    out.tail.terms = out.nodes.size();
    out.tail.tail = tail_abs / scale;
    out.tail.shell_ratio = rho;
    out.tail.converged = out.tail.tail <= pol.tail_tol;
    out.pruned_tail = (rho < kMaxRatio ? pruned_total / (1.0 - rho) : pruned_total) / scale;
    return out;
}

// Retries with finer pruning when pruned mass alone spoils the tolerance. Frontier
// mass scales roughly like kappa^0.7, so kappa is moved by the overshoot to the
// power 1.5.
template <class Node, class MakeChild>
Grown<Node> grow_adaptive(const SchottkyGroup& group, const Node& root, int excluded, bool ref_from_root,
                          const TruncationPolicy& pol, MakeChild make_child)
{
    double kappa = 0.1;
    Grown<Node> g = grow(group, root, excluded, ref_from_root, pol, kappa, make_child);
    for (int attempt = 0; attempt < 5 && !g.tail.converged && g.pruned_tail > 0.25 * pol.tail_tol; ++attempt) {
        const double over = g.pruned_tail / (0.2 * pol.tail_tol);
        kappa /= std::clamp(std::pow(over, 1.5), 2.0, 1e4);
        g = grow(group, root, excluded, ref_from_root, pol, kappa, make_child);
    }
    return g;
}

cplx checked(cplx w)
{
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        fail(ErrorKind::InvalidParams, "series term mapped to infinity");
    return w;
}

} // namespace

cplx log1p(cplx u) noexcept
{
    const cplx w = 1.0 + u;
    if (w == cplx(1.0))
        return u;
    return std::log(w) * (u / (w - 1.0));
}

double segment_distance(cplx z, cplx a, cplx b) noexcept
{
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0)
        return std::abs(z - a);
    const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

PolePairSeries PolePairSeries::build(const SchottkyGroup& group, cplx p0, cplx q0, int excluded,
                                     const TruncationPolicy& policy)
{
    if (policy.max_word_len < 0 || !(policy.tail_tol > 0.0))
        fail(ErrorKind::InvalidInput, "truncation policy needs L >= 0 and tail_tol > 0");
    struct Node {
        cplx p, delta;
        int first = 0;
        double s = 0.0;
    };
    const Node root{p0, p0 - q0, 0, std::abs(p0 - q0)};
    auto make = [&](const Node& n, int k) {
        const MoebiusMap& m = group.generator(k);
        const cplx q = n.p - n.delta;
        const cplx dp = m.c() * n.p + m.d();
        const cplx dq = m.c() * q + m.d();
        Node c{checked((m.a() * n.p + m.b()) / dp), checked(m.det() * n.delta / (dp * dq)), k, 0.0};
        c.s = std::abs(c.delta);
        return c;
    };
    const Grown<Node> g = grow_adaptive(group, root, excluded, true, policy, make);
    PolePairSeries out;
    out.pairs_.reserve(g.nodes.size() + 1);
    out.pairs_.push_back({p0, q0, p0 - q0, 0});
    for (const Node& n : g.nodes)
        out.pairs_.push_back({n.p, n.p - n.delta, n.delta, n.first});
    out.tail_ = g.tail;
    out.tail_.terms = out.pairs_.size();
    return out;
}

cplx PolePairSeries::density(cplx z) const
{
    cplx sum(0.0);
    for (const Pair& pr : pairs_) {
        const cplx zp = z - pr.p, zq = z - pr.q;
        if (std::abs(zp) < kPoleEps || std::abs(zq) < kPoleEps)
            fail(ErrorKind::PoleProximity, "evaluation point within 1e-8 of a pole");
        sum += pr.delta / (zp * zq);
    }
    return sum;
}

cplx PolePairSeries::integrate_segment(cplx a, cplx b) const
{
    const double guard = 1e-13 * (1.0 + std::abs(a) + std::abs(b));
    cplx sum(0.0);
    for (const Pair& pr : pairs_) {
        const double dp = segment_distance(pr.p, a, b);
        const double dq = segment_distance(pr.q, a, b);
        if (dp < guard || dq < guard)
            fail(ErrorKind::PathBlocked, "pole on integration segment");
        if (std::abs(pr.delta) <= 0.25 * std::min(dp, dq))
            sum += log1p(pr.delta * (b - a) / ((a - pr.p) * (b - pr.q)));
        else
            sum += std::log((b - pr.p) / (a - pr.p)) - std::log((b - pr.q) / (a - pr.q));
    }
    return sum;
}

MapSeries MapSeries::build(const SchottkyGroup& group, cplx x_t, bool include_identity, const TruncationPolicy& policy)
{
    if (policy.max_word_len < 0 || !(policy.tail_tol > 0.0))
        fail(ErrorKind::InvalidInput, "truncation policy needs L >= 0 and tail_tol > 0");
    struct Node {
        cplx a, b, c, d;
        int first = 0;
        double s = 0.0;
    };
    std::vector<MoebiusMap> unit;
    for (int r = 0; r < 2 * group.rank(); ++r)
        unit.push_back(group.generator(letter_from_rank(r)).unit_det());
    const Node root{1.0, 0.0, 0.0, 1.0, 0, 0.0};
    auto make = [&](const Node& n, int k) {
        const MoebiusMap& g = unit[static_cast<std::size_t>(letter_rank(k))];
        Node c{g.a() * n.a + g.b() * n.c, g.a() * n.b + g.b() * n.d, g.c() * n.a + g.d() * n.c,
               g.c() * n.b + g.d() * n.d, k, 0.0};
        c.s = 1.0 / std::norm(c.c);
        return c;
    };
    const Grown<Node> g = grow_adaptive(group, root, 0, false, policy, make);
    MapSeries out;
    out.x_t_ = x_t;
    auto pole_of = [&](cplx a, cplx b, cplx c, cplx d) { return (d * x_t - b) / (a - c * x_t); };
    if (include_identity)
        out.terms_.push_back({1.0, 0.0, 0.0, 1.0, x_t});
    for (const Node& n : g.nodes)
        out.terms_.push_back({n.a, n.b, n.c, n.d, pole_of(n.a, n.b, n.c, n.d)});
    out.tail_ = g.tail;
    out.tail_.terms = out.terms_.size();
    return out;
}

cplx MapSeries::density(cplx z, int k) const
{
    std::vector<cplx> v;
    densities(z, k, v);
    return v.back();
}

void MapSeries::densities(cplx z, int k_max, std::vector<cplx>& out) const
{
    if (k_max < 2)
        fail(ErrorKind::InvalidInput, "second-kind exponent must be >= 2");
    out.assign(static_cast<std::size_t>(k_max - 1), cplx(0.0));
    for (const Term& t : terms_) {
        if (std::abs(z - t.pole) < kPoleEps)
            fail(ErrorKind::PoleProximity, "evaluation point within 1e-8 of a pole");
        const cplx w = t.c * z + t.d;
        const cplx v = t.a * z + t.b - x_t_ * w;
        const cplx ratio = w / v;
        cplx term = 1.0 / (v * v);
        out[0] += term;
        for (int k = 3; k <= k_max; ++k) {
            term *= ratio;
            out[static_cast<std::size_t>(k - 2)] += term;
        }
    }
}

cplx MapSeries::integrate_segment(cplx a, cplx b, int k) const
{
    if (k < 2)
        fail(ErrorKind::InvalidInput, "second-kind exponent must be >= 2");
    cplx sum(0.0);
    for (const Term& t : terms_) {
        auto prim = [&](cplx z) {
            const cplx w = t.c * z + t.d;
            const cplx v = t.a * z + t.b - x_t_ * w;
            return -std::pow(w / v, k - 1) / static_cast<double>(k - 1);
        };
        sum += prim(b) - prim(a);
    }
    return sum;
}

} // namespace schottky
