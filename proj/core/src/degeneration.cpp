#include "schottky/degeneration.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <random>

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx finite(const SpherePoint& p, const char* what)
{
    if (p.is_infinite())
        fail(ErrorKind::InvalidInput, std::string(what) + " must be finite");
    return p.value();
}

// Vertices reachable from `from` without crossing edge `skip`.
std::vector<bool> reachable(const StableGraph& g, int from, int skip)
{
    std::vector<bool> seen(g.vertices.size(), false);
    std::queue<int> todo;
    seen[static_cast<std::size_t>(from)] = true;
    todo.push(from);
    while (!todo.empty()) {
        const int v = todo.front();
        todo.pop();
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            if (static_cast<int>(k) == skip)
                continue;
            const auto& e = g.edges[k];
            for (auto [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}}) {
                if (a == v && !seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = true;
                    todo.push(b);
                }
            }
        }
    }
    return seen;
}

int marked_vertex(const StableGraph& g)
{
    for (const auto& t : g.tails)
        if (t.number == 1)
            return t.vertex;
    fail(ErrorKind::InvalidInput, "scenario curve needs a tail numbered 1");
}

// Subgraph on the vertices with keep[v]; returns it with the old -> new vertex map and
// the kept edge indices (old numbering, declaration order).
struct SubGraph {
    StableGraph graph;
    std::vector<int> vertex_map;
    std::vector<int> edges;
};

SubGraph subgraph(const StableGraph& g, const std::vector<bool>& keep, int skip_edge)
{
    SubGraph s;
    s.vertex_map.assign(g.vertices.size(), -1);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (keep[v]) {
            s.vertex_map[v] = static_cast<int>(s.graph.vertices.size());
            s.graph.vertices.push_back(g.vertices[v]);
        }
    }
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        if (static_cast<int>(k) == skip_edge || !keep[static_cast<std::size_t>(e.from)])
            continue;
        s.graph.edges.push_back({e.id, s.vertex_map[static_cast<std::size_t>(e.from)],
                                 s.vertex_map[static_cast<std::size_t>(e.to)]});
        s.edges.push_back(static_cast<int>(k));
    }
    for (const auto& t : g.tails)
        if (keep[static_cast<std::size_t>(t.vertex)])
            s.graph.tails.push_back({t.id, s.vertex_map[static_cast<std::size_t>(t.vertex)], t.number});
    return s;
}

// Family tree edges restricted to the subgraph, in subgraph numbering.
std::vector<int> restrict_tree(const SubGraph& s, const std::vector<int>& tree)
{
    std::vector<int> out;
    for (std::size_t k = 0; k < s.edges.size(); ++k)
        if (std::find(tree.begin(), tree.end(), s.edges[k]) != tree.end())
            out.push_back(static_cast<int>(k));
    return out;
}

Eigen::VectorXcd c_vector(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& alpha, const Eigen::VectorXd& beta)
{
    return 2.0 * kPi * kI * (alpha + Z * beta.cast<cplx>());
}

bool decreasing(const std::vector<double>& xs)
{
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (!(xs[k] < xs[k - 1]))
            return false;
    return !xs.empty();
}

double max_abs(const std::vector<cplx>& xs)
{
    double m = 0.0;
    for (cplx x : xs)
        m = std::max(m, std::abs(x));
    return m;
}

// max |a - b| / max |b|.
double relative_gap(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double num = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        num = std::max(num, std::abs(a[k] - b[k]));
    const double den = max_abs(b);
    return den > 0.0 ? num / den : num;
}

std::vector<cplx> densities(const Differential& d, const std::vector<cplx>& zs)
{
    std::vector<cplx> out;
    for (cplx z : zs)
        out.push_back(d.density(z));
    return out;
}

PeriodData empty_periods()
{
    PeriodData p;
    p.P.resize(0, 0);
    p.Z.resize(0, 0);
    return p;
}

} // namespace

std::vector<LimitPole> stable_limit_first_kind(const StableGraph& graph, const SchottkyParams& params, int cycle,
                                               int vertex)
{
    const std::vector<int> tree = spanning_tree(graph, 0);
    const std::vector<GraphWordPath> paths = pi1_generators(graph, 0, tree);
    if (cycle < 1 || cycle > static_cast<int>(paths.size()))
        fail(ErrorKind::IndexOutOfRange, "cycle index out of range");
    if (vertex < 0 || vertex >= static_cast<int>(graph.vertices.size()))
        fail(ErrorKind::IndexOutOfRange, "vertex index out of range");
    std::map<std::string, int> weight;
    std::vector<std::string> order;
    auto add = [&](const std::string& key, int r) {
        if (!weight.count(key))
            order.push_back(key);
        weight[key] += r;
    };
    for (OrientedEdge h : paths[static_cast<std::size_t>(cycle - 1)]) {
        if (head(graph, h) == vertex)
            add(oriented_key(graph, h), +1);
        if (tail_vertex(graph, h) == vertex)
            add(oriented_key(graph, -h), -1);
    }
    std::vector<LimitPole> out;
    for (const std::string& key : order)
        if (weight[key] != 0)
            out.push_back({key, params.x_of(key), weight[key]});
    return out;
}

PinchKind DegenerationScenario::kind() const
{
    const int k = base.graph.edge_index(pinch);
    const std::vector<bool> seen = reachable(base.graph, 0, k);
    const bool all = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    return all ? PinchKind::Irreducible : PinchKind::Reducible;
}

CurveConfig DegenerationScenario::at(double y) const
{
    CurveConfig cfg = base;
    cfg.params.y[pinch] = cplx(y, 0.0);
    return cfg;
}

void DegenerationScenario::validate() const
{
    base.graph.validate();
    base.params.validate(base.graph);
    (void)base.graph.edge_index(pinch);
    const int g = base.graph.genus();
    if (alpha.size() != g || beta.size() != g)
        fail(ErrorKind::InvalidInput, "alpha and beta need one entry per generator");
    if (times < 1)
        fail(ErrorKind::InvalidInput, "need at least one time");
    if (y_sequence.empty())
        fail(ErrorKind::InvalidInput, "y_sequence is empty");
    for (double y : y_sequence)
        if (!(y > 0.0 && y < 1.0))
            fail(ErrorKind::InvalidParams, "y_sequence entries must lie in (0, 1)");
    (void)marked_vertex(base.graph);
    if (kind() == PinchKind::Irreducible) {
        const Uniformization u = uniformize(base.graph, base.params);
        const int k = base.graph.edge_index(pinch);
        if (std::find(u.generator_edges.begin(), u.generator_edges.end(), k) == u.generator_edges.end())
            fail(ErrorKind::InvalidInput, "pinched loop must not lie in the spanning tree; list it after the tree edges");
    } else if (marked_vertex(base.graph) != 0 &&
               !reachable(base.graph, 0, base.graph.edge_index(pinch))[static_cast<std::size_t>(marked_vertex(base.graph))]) {
        fail(ErrorKind::InvalidInput, "base vertex must lie on the marked component");
    }
}

json to_json(const DegenerationScenario& s)
{
    json j;
    j["curve"] = to_json(s.base);
    j["pinch"] = s.pinch;
    j["y_sequence"] = s.y_sequence;
    json a = json::array();
    for (Eigen::Index i = 0; i < s.alpha.size(); ++i)
        a.push_back(to_json(s.alpha(i)));
    j["alpha"] = a;
    j["beta"] = std::vector<double>(s.beta.data(), s.beta.data() + s.beta.size());
    j["times"] = s.times;
    return j;
}

DegenerationScenario scenario_from_json(const json& j)
{
    if (!j.is_object())
        fail(ErrorKind::InvalidInput, "scenario must be a JSON object");
    for (const char* key : {"curve", "pinch", "beta"})
        if (!j.contains(key))
            fail(ErrorKind::InvalidInput, std::string("scenario is missing \"") + key + "\"");
    DegenerationScenario s;
    s.base = curve_config_from_json(j.at("curve"));
    if (!j.at("pinch").is_string())
        fail(ErrorKind::InvalidInput, "\"pinch\" must be an edge id string");
    s.pinch = j.at("pinch").get<std::string>();
    try {
        if (j.contains("y_sequence"))
            s.y_sequence = j.at("y_sequence").get<std::vector<double>>();
        const auto beta = j.at("beta").get<std::vector<double>>();
        s.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
        if (j.contains("times"))
            s.times = j.at("times").get<int>();
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("scenario: ") + e.what());
    }
    const int g = s.base.graph.genus();
    s.alpha = Eigen::VectorXcd::Zero(g);
    if (j.contains("alpha")) {
        const json& a = j.at("alpha");
        if (!a.is_array())
            fail(ErrorKind::InvalidInput, "\"alpha\" must be an array");
        s.alpha.resize(static_cast<Eigen::Index>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i)
            s.alpha(static_cast<Eigen::Index>(i)) = complex_from_json(a[i]);
    }
    s.validate();
    return s;
}

CharacteristicBranch classify_characteristic(double beta_g)
{
    const double f = beta_g - std::floor(beta_g);
    return std::abs(f - 0.5) <= 1e-12 ? CharacteristicBranch::HalfInteger : CharacteristicBranch::Generic;
}

int beta_bar(double beta_g)
{
    if (classify_characteristic(beta_g) == CharacteristicBranch::HalfInteger)
        fail(ErrorKind::HalfIntegerCharacteristic, "beta_g is a half integer; use the two-term branch");
    return static_cast<int>(std::lround(-beta_g));
}

LimitData limit_data_irreducible(const DegenerationScenario& s)
{
    s.validate();
    if (s.kind() != PinchKind::Irreducible)
        fail(ErrorKind::InvalidInput, "pinched edge is separating");
    const CurveConfig cfg = s.at(s.y_sequence.front());
    const Uniformization uni = uniformize(cfg.graph, cfg.params);
    const int edge = cfg.graph.edge_index(s.pinch);
    const auto it = std::find(uni.generator_edges.begin(), uni.generator_edges.end(), edge);
    LimitData L;
    L.kind = PinchKind::Irreducible;
    L.pinched = static_cast<int>(it - uni.generator_edges.begin());
    const int g = uni.group.rank();
    std::vector<MoebiusMap> gens;
    for (int i = 0; i < g; ++i) {
        if (i == L.pinched)
            continue;
        L.kept.push_back(i);
        gens.push_back(uni.group.generator(i + 1));
    }
    // The other generators do not depend on the pinched parameter, and its fixed points do not either.
    L.group = SchottkyGroup(std::move(gens));
    L.p1 = uni.group.fixed_point(L.pinched + 1);
    L.p2 = uni.group.fixed_point(-(L.pinched + 1));
    const auto xt = marked_point(cfg.graph, cfg.params, uni);
    L.x_t = finite(*xt, "marked point");
    L.times = s.times;

    const Differential third(L.group, DifferentialSpec::third_kind(L.p1, L.p2), s.policy);
    require_converged(third.tail(), "third-kind limit differential");
    const int h = L.group.rank();
    L.Zbar = Eigen::VectorXcd::Zero(h);
    if (h > 0) {
        const std::vector<Differential> omegas = first_kind_differentials(L.group, s.policy);
        L.periods = period_matrix(L.group, omegas);
        L.laurent = laurent_data(L.group, omegas, L.x_t, s.times, s.policy);
        for (int i = 0; i < h; ++i)
            L.Zbar(i) = b_period_integral(third, L.group, i + 1, L.periods.z0) / (2.0 * kPi * kI);
    } else {
        L.periods = empty_periods();
        L.laurent = laurent_data(L.group, std::vector<Differential>{}, L.x_t, s.times, s.policy);
    }
    double radius = L.laurent.radius;
    for (const SpherePoint& p : {L.p1, L.p2})
        if (!p.is_infinite())
            radius = std::min(radius, 0.5 * std::abs(p.value() - L.x_t));
    const std::vector<cplx> c =
        taylor_coefficients(third, L.x_t, radius, s.times, std::max(s.policy.tail_tol, 1e-13));
    L.rbar_g = Eigen::Map<const Eigen::VectorXcd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return L;
}

LimitData limit_data_reducible(const DegenerationScenario& s)
{
    s.validate();
    if (s.kind() != PinchKind::Reducible)
        fail(ErrorKind::InvalidInput, "pinched edge is not separating");
    const CurveConfig cfg = s.at(s.y_sequence.front());
    const StableGraph& G = cfg.graph;
    const int edge = G.edge_index(s.pinch);
    const Uniformization uni = uniformize(G, cfg.params);
    const std::vector<bool> side1 = reachable(G, 0, edge);
    std::vector<bool> side2(side1.size());
    for (std::size_t v = 0; v < side1.size(); ++v)
        side2[v] = !side1[v];

    LimitData L;
    L.kind = PinchKind::Reducible;
    L.times = s.times;
    for (std::size_t i = 0; i < uni.generator_edges.size(); ++i) {
        const int from = G.edges[static_cast<std::size_t>(uni.generator_edges[i])].from;
        (side1[static_cast<std::size_t>(from)] ? L.kept : L.other).push_back(static_cast<int>(i));
    }

    const SubGraph s1 = subgraph(G, side1, edge);
    L.group = uniformize(s1.graph, cfg.params, s1.vertex_map[0], restrict_tree(s1, uni.tree)).group;
    const auto& e = G.edges[static_cast<std::size_t>(edge)];
    const int v2 = side2[static_cast<std::size_t>(e.to)] ? e.to : e.from;
    const SubGraph s2 = subgraph(G, side2, edge);
    L.second = uniformize(s2.graph, cfg.params, s2.vertex_map[static_cast<std::size_t>(v2)], restrict_tree(s2, uni.tree)).group;

    const auto xt = marked_point(G, cfg.params, uni);
    L.x_t = finite(*xt, "marked point");
    if (L.group.rank() > 0) {
        const std::vector<Differential> omegas = first_kind_differentials(L.group, s.policy);
        L.periods = period_matrix(L.group, omegas);
        L.laurent = laurent_data(L.group, omegas, L.x_t, s.times, s.policy);
    } else {
        L.periods = empty_periods();
        L.laurent = laurent_data(L.group, std::vector<Differential>{}, L.x_t, s.times, s.policy);
    }
    L.second_periods = L.second.rank() > 0 ? period_matrix(L.second, s.policy) : empty_periods();
    return L;
}

LimitData limit_data(const DegenerationScenario& s)
{
    return s.kind() == PinchKind::Irreducible ? limit_data_irreducible(s) : limit_data_reducible(s);
}

namespace {

// tau(t, X'_{cbar}) times exp(b (E0 + rbar_g . t)) for one integer b.
ExponentialSum irreducible_branch(const LimitData& L, const DegenerationScenario& s, int b,
                                  const std::vector<Eigen::VectorXcd>& ts)
{
    const int k = L.pinched;
    const double beta_g = s.beta(k);
    const int h = static_cast<int>(L.kept.size());
    Eigen::VectorXcd alpha(h);
    Eigen::VectorXd beta(h);
    for (int i = 0; i < h; ++i) {
        alpha(i) = s.alpha(L.kept[static_cast<std::size_t>(i)]);
        beta(i) = s.beta(L.kept[static_cast<std::size_t>(i)]);
    }
    TauData data;
    data.Z = L.periods.Z;
    data.c = c_vector(L.periods.Z, alpha, beta) + 2.0 * kPi * kI * (b + beta_g) * L.Zbar;
    data.r = L.laurent.r;
    data.q = L.laurent.q;
    data.theta = s.theta;
    ExponentialSum out = tau_sum(data, ts);
    const cplx E0 = 2.0 * kPi * kI * (s.alpha(k) + (beta.cast<cplx>().transpose() * L.Zbar)(0, 0));
    out.multiply_exp(static_cast<double>(b) * E0, static_cast<double>(b) * L.rbar_g);
    return out;
}

} // namespace

ExponentialSum modified_tau_generic_sum(const LimitData& L, const DegenerationScenario& s,
                                        const std::vector<Eigen::VectorXcd>& ts)
{
    if (L.kind != PinchKind::Irreducible)
        fail(ErrorKind::InvalidInput, "generic modified tau needs an irreducible pinch");
    return irreducible_branch(L, s, beta_bar(s.beta(L.pinched)), ts);
}

ExponentialSum modified_tau_halfint_sum(const LimitData& L, const DegenerationScenario& s,
                                        const std::vector<Eigen::VectorXcd>& ts)
{
    if (L.kind != PinchKind::Irreducible)
        fail(ErrorKind::InvalidInput, "half-integer modified tau needs an irreducible pinch");
    const double beta_g = s.beta(L.pinched);
    if (classify_characteristic(beta_g) != CharacteristicBranch::HalfInteger)
        fail(ErrorKind::GenericCharacteristic, "beta_g is not a half integer; use the generic branch");
    const int b1 = static_cast<int>(std::lround(-beta_g - 0.5));
    const int b2 = static_cast<int>(std::lround(-beta_g + 0.5));
    ExponentialSum out = irreducible_branch(L, s, b1, ts);
    out.append(irreducible_branch(L, s, b2, ts));
    return out;
}

ExponentialSum modified_tau_reducible_sum(const LimitData& L, const DegenerationScenario& s,
                                          const std::vector<Eigen::VectorXcd>& ts)
{
    if (L.kind != PinchKind::Reducible)
        fail(ErrorKind::InvalidInput, "reducible modified tau needs a separating pinch");
    auto block = [&](const std::vector<int>& idx, Eigen::VectorXcd& a, Eigen::VectorXd& b) {
        a.resize(static_cast<Eigen::Index>(idx.size()));
        b.resize(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            a(static_cast<Eigen::Index>(i)) = s.alpha(idx[i]);
            b(static_cast<Eigen::Index>(i)) = s.beta(idx[i]);
        }
    };
    Eigen::VectorXcd a1, a2;
    Eigen::VectorXd b1, b2;
    block(L.kept, a1, b1);
    block(L.other, a2, b2);
    TauData data;
    data.Z = L.periods.Z;
    data.c = c_vector(L.periods.Z, a1, b1);
    data.r = L.laurent.r;
    data.q = L.laurent.q;
    data.theta = s.theta;
    ExponentialSum out = tau_sum(data, ts);
    if (!L.other.empty()) {
        const cplx th2 = theta(L.second_periods.Z, c_vector(L.second_periods.Z, a2, b2), s.theta);
        if (th2 == cplx(0.0))
            fail(ErrorKind::ThetaZero, "theta of the unmarked component vanishes");
        out.multiply_exp(std::log(th2), Eigen::VectorXcd::Zero(s.times));
    }
    return out;
}

ExponentialSum modified_tau_sum(const LimitData& L, const DegenerationScenario& s,
                                const std::vector<Eigen::VectorXcd>& ts)
{
    if (L.kind == PinchKind::Reducible)
        return modified_tau_reducible_sum(L, s, ts);
    if (classify_characteristic(s.beta(L.pinched)) == CharacteristicBranch::HalfInteger)
        return modified_tau_halfint_sum(L, s, ts);
    return modified_tau_generic_sum(L, s, ts);
}

cplx modified_tau_generic(const LimitData& L, const DegenerationScenario& s, const Eigen::VectorXcd& t)
{
    return modified_tau_generic_sum(L, s, {t})(t);
}

cplx modified_tau_halfint(const LimitData& L, const DegenerationScenario& s, const Eigen::VectorXcd& t)
{
    return modified_tau_halfint_sum(L, s, {t})(t);
}

cplx modified_tau_reducible(const LimitData& L, const DegenerationScenario& s, const Eigen::VectorXcd& t)
{
    return modified_tau_reducible_sum(L, s, {t})(t);
}

cplx scaling_log(const DegenerationScenario& s, cplx Z_gg)
{
    if (s.kind() == PinchKind::Reducible)
        return 0.0;
    const Uniformization uni = uniformize(s.base.graph, s.base.params);
    const int edge = s.base.graph.edge_index(s.pinch);
    const auto it = std::find(uni.generator_edges.begin(), uni.generator_edges.end(), edge);
    const double beta_g = s.beta(static_cast<Eigen::Index>(it - uni.generator_edges.begin()));
    if (classify_characteristic(beta_g) == CharacteristicBranch::HalfInteger)
        return kPi * kI * (beta_g * beta_g - 0.25) * Z_gg;
    const int b = beta_bar(beta_g);
    return -kPi * kI * (b + 2.0 * beta_g) * static_cast<double>(b) * Z_gg;
}

FamilyTau family_tau(const DegenerationScenario& s, double y, const std::vector<Eigen::VectorXcd>& ts)
{
    FamilyTau f;
    f.y = y;
    const Characteristic chi{s.alpha, s.beta};
    f.curve = curve_tau(s.at(y), s.times, chi, s.policy, s.theta);
    if (s.kind() == PinchKind::Irreducible) {
        const Uniformization uni = uniformize(s.base.graph, s.base.params);
        const int edge = s.base.graph.edge_index(s.pinch);
        const auto k = std::find(uni.generator_edges.begin(), uni.generator_edges.end(), edge) - uni.generator_edges.begin();
        f.log_scale = scaling_log(s, f.curve.periods.Z(k, k));
    }
    f.scaled = tau_sum(f.curve.tau, ts);
    f.scaled.multiply_exp(f.log_scale, Eigen::VectorXcd::Zero(s.times));
    return f;
}

std::vector<Eigen::VectorXcd> default_time_samples(int M, int count)
{
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::VectorXcd> out;
    for (int n = 0; n < count; ++n) {
        Eigen::VectorXcd t = Eigen::VectorXcd::Zero(M);
        for (int m = 0; m < std::min(M, 3); ++m)
            t(m) = u(rng);
        out.push_back(t);
    }
    return out;
}

DegenerationReport degeneration_check(const DegenerationScenario& s, const std::vector<Eigen::VectorXcd>& ts)
{
    DegenerationReport rep;
    rep.kind = s.kind();
    const LimitData L = limit_data(s);
    if (rep.kind == PinchKind::Irreducible)
        rep.branch = classify_characteristic(s.beta(L.pinched));
    const ExponentialSum limit = modified_tau_sum(L, s, ts);
    std::vector<double> devs;
    for (double y : s.y_sequence) {
        const FamilyTau f = family_tau(s, y, ts);
        DegenerationStep step;
        step.y = y;
        for (const auto& t : ts) {
            const ExponentialSum::Scaled a = f.scaled.scaled(t);
            const ExponentialSum::Scaled b = limit.scaled(t);
            const cplx ratio = a.mantissa / b.mantissa * std::exp(a.log_scale - b.log_scale);
            step.deviation = std::max(step.deviation, std::abs(ratio - 1.0));
            const double log_unscaled = std::log(std::abs(a.mantissa)) + a.log_scale - f.log_scale.real();
            step.log_unscaled = std::max(step.log_unscaled, std::abs(log_unscaled));
        }
        devs.push_back(step.deviation);
        rep.steps.push_back(step);
    }
    rep.monotone = decreasing(devs);
    rep.final_deviation = devs.back();
    return rep;
}

json to_json(const DegenerationReport& r)
{
    json j;
    j["kind"] = r.kind == PinchKind::Irreducible ? "irreducible" : "reducible";
    if (r.kind == PinchKind::Irreducible)
        j["branch"] = r.branch == CharacteristicBranch::Generic ? "generic" : "half-integer";
    json steps = json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"y", s.y}, {"deviation", s.deviation}, {"log_unscaled", s.log_unscaled}});
    j["steps"] = steps;
    j["monotone"] = r.monotone;
    j["final_deviation"] = r.final_deviation;
    return j;
}

DifferentialLimitReport differential_limit_check(const DegenerationScenario& s, const std::vector<cplx>& samples,
                                                 const std::vector<cplx>& other_samples)
{
    DifferentialLimitReport rep;
    rep.kind = s.kind();
    const LimitData L = limit_data(s);
    const std::vector<Differential> limit_first =
        L.group.rank() > 0 ? first_kind_differentials(L.group, s.policy) : std::vector<Differential>{};
    std::vector<std::vector<cplx>> limit_vals;
    for (const Differential& d : limit_first)
        limit_vals.push_back(densities(d, samples));
    std::vector<cplx> third_vals;
    if (rep.kind == PinchKind::Irreducible) {
        const Differential third(L.group, DifferentialSpec::third_kind(L.p1, L.p2), s.policy);
        third_vals = densities(third, samples);
    }
    std::vector<std::vector<cplx>> second_vals;
    if (rep.kind == PinchKind::Reducible && L.second.rank() > 0)
        for (const Differential& d : first_kind_differentials(L.second, s.policy))
            second_vals.push_back(densities(d, other_samples));

    std::vector<double> track;
    for (double y : s.y_sequence) {
        const CurveConfig cfg = s.at(y);
        const SchottkyGroup group = instantiate_group(cfg.graph, cfg.params);
        const std::vector<Differential> omegas = first_kind_differentials(group, s.policy);
        DifferentialLimitStep step;
        step.y = y;
        for (std::size_t i = 0; i < L.kept.size(); ++i)
            step.kept = std::max(step.kept, relative_gap(densities(omegas[static_cast<std::size_t>(L.kept[i])], samples), limit_vals[i]));
        if (rep.kind == PinchKind::Irreducible) {
            step.pinched = relative_gap(densities(omegas[static_cast<std::size_t>(L.pinched)], samples), third_vals);
            track.push_back(std::max(step.pinched, step.kept));
        } else {
            // Pull back to the unmarked component through the family transport.
            const Uniformization uni = uniformize(cfg.graph, cfg.params);
            const int edge = cfg.graph.edge_index(s.pinch);
            const auto& e = cfg.graph.edges[static_cast<std::size_t>(edge)];
            const std::vector<bool> side1 = reachable(cfg.graph, 0, edge);
            const int v2 = side1[static_cast<std::size_t>(e.to)] ? e.from : e.to;
            const MoebiusMap& A = uni.transport[static_cast<std::size_t>(v2)];
            auto pullback = [&](const Differential& d) {
                std::vector<cplx> out;
                for (cplx w : other_samples)
                    out.push_back(d.density(A(SpherePoint(w)).value()) * A.derivative(w));
                return out;
            };
            for (int i : L.kept) {
                const double own = max_abs(densities(omegas[static_cast<std::size_t>(i)], samples));
                step.block_vanishing = std::max(step.block_vanishing, max_abs(pullback(omegas[static_cast<std::size_t>(i)])) / own);
            }
            for (std::size_t j = 0; j < L.other.size(); ++j)
                step.other_block = std::max(step.other_block,
                                            relative_gap(pullback(omegas[static_cast<std::size_t>(L.other[j])]), second_vals[j]));
            track.push_back(std::max({step.kept, step.block_vanishing, step.other_block}));
        }
        rep.steps.push_back(step);
    }
    rep.monotone = decreasing(track);
    return rep;
}

json to_json(const DifferentialLimitReport& r)
{
    json j;
    j["kind"] = r.kind == PinchKind::Irreducible ? "irreducible" : "reducible";
    json steps = json::array();
    for (const auto& s : r.steps) {
        json e{{"y", s.y}, {"kept", s.kept}};
        if (r.kind == PinchKind::Irreducible) {
            e["pinched"] = s.pinched;
        } else {
            e["block_vanishing"] = s.block_vanishing;
            e["other_block"] = s.other_block;
        }
        steps.push_back(e);
    }
    j["steps"] = steps;
    j["monotone"] = r.monotone;
    return j;
}

void SolitonData::validate() const
{
    const int g = genus();
    if (static_cast<int>(x_minus.size()) != g || static_cast<int>(n.size()) != g ||
        static_cast<int>(alpha_prime.size()) != g)
        fail(ErrorKind::InvalidInput, "soliton data lengths differ");
    if (times < 1)
        fail(ErrorKind::InvalidInput, "need at least one time");
    std::vector<cplx> pts{x_t};
    pts.insert(pts.end(), x_plus.begin(), x_plus.end());
    pts.insert(pts.end(), x_minus.begin(), x_minus.end());
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            if (std::abs(pts[a] - pts[b]) <= 1e-14 * std::max(1.0, std::abs(pts[a])))
                fail(ErrorKind::InvalidInput, "soliton points must be distinct");
}

cplx soliton_cross_ratio(const SolitonData& s, int i, int j)
{
    const cplx xi = s.x_plus[static_cast<std::size_t>(i)], xj = s.x_plus[static_cast<std::size_t>(j)];
    const cplx yi = s.x_minus[static_cast<std::size_t>(i)], yj = s.x_minus[static_cast<std::size_t>(j)];
    const cplx num = (xi - xj) * (yi - yj);
    const cplx den = (yi - xj) * (xi - yj);
    const double scale = std::max({std::abs(xi), std::abs(xj), std::abs(yi), std::abs(yj), 1.0});
    if (std::abs(den) <= 1e-14 * scale * scale || std::abs(num) <= 1e-14 * scale * scale)
        fail(ErrorKind::DegenerateCrossRatio, "soliton cross-ratio is 0 or infinite");
    return num / den;
}

Eigen::MatrixXcd soliton_flows(const SolitonData& s)
{
    const int g = s.genus();
    Eigen::MatrixXcd F(g, s.times);
    for (int i = 0; i < g; ++i) {
        const cplx a = 1.0 / (s.x_plus[static_cast<std::size_t>(i)] - s.x_t);
        const cplx b = 1.0 / (s.x_minus[static_cast<std::size_t>(i)] - s.x_t);
        cplx am = 1.0, bm = 1.0;
        for (int m = 0; m < s.times; ++m) {
            am *= a;
            bm *= b;
            F(i, m) = -(am - bm);
        }
    }
    return F;
}

Eigen::VectorXcd soliton_alpha_prime(const Eigen::VectorXcd& alpha, const Eigen::VectorXd& beta,
                                     const Eigen::MatrixXcd& Zbar)
{
    const Eigen::Index g = alpha.size();
    if (beta.size() != g || Zbar.rows() != g || Zbar.cols() != g)
        fail(ErrorKind::InvalidInput, "alpha, beta and Zbar sizes differ");
    Eigen::VectorXcd out(g);
    for (Eigen::Index i = 0; i < g; ++i) {
        cplx s = alpha(i);
        for (Eigen::Index j = 0; j < g; ++j)
            if (j != i)
                s += Zbar(i, j) * beta(j);
        out(i) = 2.0 * kPi * kI * s;
    }
    return out;
}

SolitonData soliton_from_config(const CurveConfig& cfg, std::vector<int> n, std::vector<cplx> alpha_prime, int M)
{
    if (cfg.graph.vertices.size() != 1)
        fail(ErrorKind::InvalidInput, "soliton data needs a one-vertex graph");
    SolitonData s;
    for (const auto& e : cfg.graph.edges) {
        s.x_plus.push_back(finite(cfg.params.x_of(e.id), "x_h"));
        s.x_minus.push_back(finite(cfg.params.x_of("-" + e.id), "x_-h"));
    }
    bool found = false;
    for (const auto& t : cfg.graph.tails) {
        if (t.number == 1) {
            s.x_t = finite(cfg.params.x_of(t.id), "marked point");
            found = true;
        }
    }
    if (!found)
        fail(ErrorKind::InvalidInput, "configuration has no tail numbered 1");
    const std::size_t g = s.x_plus.size();
    s.n = n.empty() ? std::vector<int>(g, 0) : std::move(n);
    s.alpha_prime = alpha_prime.empty() ? std::vector<cplx>(g, cplx(0.0)) : std::move(alpha_prime);
    s.times = M;
    s.validate();
    return s;
}

ExponentialSum soliton_sum(const SolitonData& s)
{
    s.validate();
    const int g = s.genus();
    if (g > 20)
        fail(ErrorKind::InvalidInput, "soliton genus too large for the 2^g expansion");
    Eigen::MatrixXcd logcr = Eigen::MatrixXcd::Zero(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = i + 1; j < g; ++j)
            logcr(i, j) = std::log(soliton_cross_ratio(s, i, j));
    const Eigen::MatrixXcd F = soliton_flows(s);
    ExponentialSum out(s.times);
    for (unsigned mask = 0; mask < (1u << g); ++mask) {
        std::vector<int> e(static_cast<std::size_t>(g));
        for (int i = 0; i < g; ++i)
            e[static_cast<std::size_t>(i)] = static_cast<int>((mask >> i) & 1u) - s.n[static_cast<std::size_t>(i)];
        cplx logc(0.0);
        Eigen::VectorXcd K = Eigen::VectorXcd::Zero(s.times);
        for (int i = 0; i < g; ++i) {
            const int ei = e[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < g; ++j)
                logc += static_cast<double>(ei * e[static_cast<std::size_t>(j)]) * logcr(i, j);
            logc += static_cast<double>(ei) * s.alpha_prime[static_cast<std::size_t>(i)];
            K += static_cast<double>(ei) * F.row(i).transpose();
        }
        out.add_term(logc, K);
    }
    return out;
}

cplx soliton_tau(const SolitonData& s, const Eigen::VectorXcd& t)
{
    if (t.size() != s.times)
        fail(ErrorKind::InvalidInput, "time vector length differs from M");
    return soliton_sum(s)(t);
}

KpReport soliton_kp_residual(const SolitonData& s, const KpGrid& grid)
{
    return kp_residual(soliton_sum(s), grid);
}

} // namespace schottky
