#include "schottky/config_io.hpp"

#include "schottky/error.hpp"

#include <fstream>
#include <sstream>

namespace schottky {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const SpherePoint& p)
{
    if (p.is_infinite())
        return "inf";
    return to_json(p.value());
}

cplx complex_from_json(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(ErrorKind::InvalidInput, "expected a complex number [re, im], got " + j.dump());
}

SpherePoint sphere_point_from_json(const json& j)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "inf")
            return SpherePoint::infinity();
        fail(ErrorKind::InvalidInput, "unknown sphere point string " + j.dump());
    }
    return SpherePoint(complex_from_json(j));
}

json to_json(const CurveConfig& cfg)
{
    const StableGraph& g = cfg.graph;
    json graph;
    graph["vertices"] = g.vertices;
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"id", e.id}, {"from", g.vertices[static_cast<std::size_t>(e.from)]},
                         {"to", g.vertices[static_cast<std::size_t>(e.to)]}});
    graph["edges"] = edges;
    json tails = json::array();
    for (const auto& t : g.tails)
        tails.push_back({{"id", t.id}, {"vertex", g.vertices[static_cast<std::size_t>(t.vertex)]}, {"number", t.number}});
    graph["tails"] = tails;

    json x = json::object();
    for (const auto& [k, v] : cfg.params.x)
        x[k] = to_json(v);
    json y = json::object();
    for (const auto& [k, v] : cfg.params.y)
        y[k] = to_json(v);

    json out;
    out["graph"] = graph;
    out["params"] = {{"x", x}, {"y", y}};
    out["convention"] = kConvention;
    return out;
}

namespace {

std::string id_string(const json& j)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    fail(ErrorKind::InvalidInput, "expected a string or integer id, got " + j.dump());
}

const json& field(const json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
        fail(ErrorKind::InvalidInput, std::string("missing field '") + name + "'");
    return j.at(name);
}

} // namespace

CurveConfig curve_config_from_json(const json& j)
{
    CurveConfig cfg;
    if (j.contains("convention") && j.at("convention") != kConvention)
        fail(ErrorKind::InvalidInput, "unsupported convention " + j.at("convention").dump());
    const json& graph = field(j, "graph");
    StableGraph& g = cfg.graph;
    for (const json& v : field(graph, "vertices"))
        g.vertices.push_back(id_string(v));
    for (const json& e : field(graph, "edges"))
        g.edges.push_back({id_string(field(e, "id")), g.vertex_index(id_string(field(e, "from"))),
                           g.vertex_index(id_string(field(e, "to")))});
    if (graph.contains("tails")) {
        for (const json& t : graph.at("tails")) {
            const json& num = field(t, "number");
            if (!num.is_number_integer())
                fail(ErrorKind::InvalidInput, "tail number must be an integer");
            g.tails.push_back({id_string(field(t, "id")), g.vertex_index(id_string(field(t, "vertex"))), num.get<int>()});
        }
    }
    const json& params = field(j, "params");
    const json& x = field(params, "x");
    const json& y = field(params, "y");
    if (!x.is_object() || !y.is_object())
        fail(ErrorKind::InvalidInput, "params.x and params.y must be objects");
    for (const auto& [k, v] : x.items())
        cfg.params.x[k] = sphere_point_from_json(v);
    for (const auto& [k, v] : y.items())
        cfg.params.y[k] = complex_from_json(v);
    return cfg;
}

std::string serialize_curve_config(const CurveConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

CurveConfig parse_curve_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    try {
        return curve_config_from_json(j);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("malformed curve configuration: ") + e.what());
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::InvalidInput, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CurveConfig load_curve_config(const std::string& path) { return parse_curve_config(read_text_file(path)); }

} // namespace schottky
