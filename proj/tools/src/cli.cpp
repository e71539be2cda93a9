#include "schottky/cli.hpp"

#include "schottky/config_io.hpp"
#include "schottky/degeneration.hpp"
#include "schottky/differentials.hpp"
#include "schottky/periods.hpp"
#include "schottky/tau.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace schottky::cli {

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::HalfIntegerCharacteristic:
    case ErrorKind::GenericCharacteristic:
        return kInputError;
    case ErrorKind::ParabolicOrEllipticMap:
    case ErrorKind::NotReduced:
    case ErrorKind::CoincidentFixedPoints:
    case ErrorKind::NotLoxodromic:
    case ErrorKind::CirclesOverlap:
    case ErrorKind::InvalidGraph:
    case ErrorKind::InvalidParams:
    case ErrorKind::InvalidScale:
    case ErrorKind::DegenerateCrossRatio:
        return kValidationFailed;
    case ErrorKind::PoleProximity:
    case ErrorKind::TruncationNotConverged:
    case ErrorKind::PoleOnContour:
    case ErrorKind::PathBlocked:
    case ErrorKind::FourierNotConverged:
    case ErrorKind::RiemannRelationViolated:
    case ErrorKind::LatticeNotConverged:
    case ErrorKind::ThetaZero:
    case ErrorKind::RatioPoleOnCircle:
    case ErrorKind::TruncationTooShallow:
    case ErrorKind::TauZeroOnGrid:
        return kNotConverged;
    }
    return kNotConverged;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double parse_number(const std::string& s, const char* what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        fail(ErrorKind::InvalidInput, std::string("bad number in ") + what + ": '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

std::vector<double> parse_list(const std::string& s, const char* what)
{
    std::vector<double> out;
    if (s.empty())
        return out;
    for (const std::string& part : split(s, ','))
        out.push_back(parse_number(part, what));
    return out;
}

} // namespace

GridSpec parse_grid(const std::string& text)
{
    const std::vector<std::string> axes = split(text, ',');
    if (axes.size() != 3)
        fail(ErrorKind::InvalidInput, "grid needs three axes x0:x1:nx,t20:t21:n2,t30:t31:n3");
    double lo[3], hi[3];
    int n[3];
    for (int a = 0; a < 3; ++a) {
        const std::vector<std::string> f = split(axes[static_cast<std::size_t>(a)], ':');
        if (f.size() != 3)
            fail(ErrorKind::InvalidInput, "grid axis must be lo:hi:n, got '" + axes[static_cast<std::size_t>(a)] + "'");
        lo[a] = parse_number(f[0], "grid");
        hi[a] = parse_number(f[1], "grid");
        const double count = parse_number(f[2], "grid");
        if (count < 0.0 || count != static_cast<double>(static_cast<int>(count)) || count > 1e6)
            fail(ErrorKind::InvalidInput, "grid count must be a non-negative integer");
        n[a] = static_cast<int>(count);
    }
    return {lo[0], hi[0], n[0], lo[1], hi[1], n[1], lo[2], hi[2], n[2]};
}

namespace {

struct Options {
    std::optional<double> tol;
    int max_word_len = TruncationPolicy{}.max_word_len;
    double tail_tol = TruncationPolicy{}.tail_tol;
    int lattice_radius = 0;
    std::optional<int> times;
    std::string grid = "-1:1:5,-1:1:5,-1:1:5";
    std::string format = "json";
    std::string out;
    std::string input;
    std::string alpha, beta;
    int genus = 2, tails = 1;
    double scale = 2.0, y = 0.01;

    TruncationPolicy policy() const
    {
        TruncationPolicy p;
        p.max_word_len = max_word_len;
        p.tail_tol = tail_tol;
        return p;
    }
    ThetaPolicy theta() const
    {
        ThetaPolicy t;
        t.radius = lattice_radius;
        return t;
    }
    int M(int fallback) const { return times.value_or(fallback); }
};

void check_options(const Options& o)
{
    if (o.tol && !(*o.tol > 0.0))
        fail(ErrorKind::InvalidInput, "--tol must be > 0");
    if (!(o.tail_tol > 0.0))
        fail(ErrorKind::InvalidInput, "--tail-tol must be > 0");
    if (o.max_word_len < 0)
        fail(ErrorKind::InvalidInput, "--max-word-len must be >= 0");
    if (o.lattice_radius < 0)
        fail(ErrorKind::InvalidInput, "--lattice-radius must be >= 0");
    if (o.times && (*o.times < 1 || *o.times > 16))
        fail(ErrorKind::InvalidInput, "--times must lie in [1, 16]");
    if (o.format != "json" && o.format != "csv")
        fail(ErrorKind::InvalidInput, "--format must be csv or json");
}

json load_json(const std::string& path)
{
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, path + ": " + e.what());
    }
}

CurveConfig load_config(const std::string& path)
{
    return curve_config_from_json(load_json(path));
}

Characteristic characteristic(const Options& o, int g)
{
    const std::vector<double> a = parse_list(o.alpha, "--alpha");
    const std::vector<double> b = parse_list(o.beta, "--beta");
    Characteristic chi = Characteristic::zero(g);
    if (!a.empty()) {
        if (static_cast<int>(a.size()) != g)
            fail(ErrorKind::InvalidInput, "--alpha needs one entry per generator");
        for (int i = 0; i < g; ++i)
            chi.alpha(i) = a[static_cast<std::size_t>(i)];
    }
    if (!b.empty()) {
        if (static_cast<int>(b.size()) != g)
            fail(ErrorKind::InvalidInput, "--beta needs one entry per generator");
        for (int i = 0; i < g; ++i)
            chi.beta(i) = b[static_cast<std::size_t>(i)];
    }
    return chi;
}

// KP samples as CSV rows or a JSON document.
std::string kp_output(const KpReport& rep, bool empty, double tol, const std::string& format)
{
    std::ostringstream s;
    const double scale = rep.term_scale > 0.0 ? rep.term_scale : 1.0;
    if (format == "csv") {
        s << "x,t2,t3,re_u1,im_u1,residual\n";
        if (!empty)
            for (const KpPoint& p : rep.points)
                s << format_double(p.x) << ',' << format_double(p.t2) << ',' << format_double(p.t3) << ','
                  << format_double(p.u.real()) << ',' << format_double(p.u.imag()) << ','
                  << format_double(std::abs(p.residual) / scale) << '\n';
        return s.str();
    }
    json j;
    j["max_residual"] = empty ? 0.0 : rep.max_residual;
    j["rms_residual"] = empty ? 0.0 : rep.rms_residual;
    j["max_abs_residual"] = empty ? 0.0 : rep.max_abs_residual;
    j["term_scale"] = empty ? 0.0 : rep.term_scale;
    j["tol"] = tol;
    j["pass"] = empty || rep.max_residual <= tol;
    json pts = json::array();
    if (!empty)
        for (const KpPoint& p : rep.points)
            pts.push_back({{"x", p.x}, {"t2", p.t2}, {"t3", p.t3}, {"u1", to_json(p.u)},
                           {"residual", std::abs(p.residual) / scale}});
    j["points"] = pts;
    return j.dump(2) + "\n";
}

struct Result {
    int code = kOk;
    std::string body;
    std::string summary;
};

KpGrid to_kp_grid(const GridSpec& g)
{
    KpGrid k;
    k.x0 = g.x0;
    k.x1 = g.x1;
    k.nx = g.nx;
    k.t20 = g.t20;
    k.t21 = g.t21;
    k.n2 = g.n2;
    k.t30 = g.t30;
    k.t31 = g.t31;
    k.n3 = g.n3;
    return k;
}

bool grid_empty(const GridSpec& g) { return g.nx == 0 || g.n2 == 0 || g.n3 == 0; }

Result kp_result(const std::function<KpReport(const KpGrid&)>& eval, const Options& o, double default_tol)
{
    const GridSpec gs = parse_grid(o.grid);
    const double tol = o.tol.value_or(default_tol);
    const bool empty = grid_empty(gs);
    const KpReport rep = empty ? KpReport{} : eval(to_kp_grid(gs));
    Result r;
    r.body = kp_output(rep, empty, tol, o.format);
    const double res = empty ? 0.0 : rep.max_residual;
    r.summary = "max_normalized_residual " + format_double(res) + " tol " + format_double(tol) + "\n";
    r.code = res <= tol ? kOk : kToleranceUnmet;
    return r;
}

Result cmd_validate(const Options& o)
{
    const CurveConfig cfg = load_config(o.input);
    json j;
    j["genus"] = cfg.graph.genus();
    Result r;
    try {
        cfg.graph.validate();
        cfg.params.validate(cfg.graph);
        const Uniformization u = uniformize(cfg.graph, cfg.params);
        const ValidationReport v = validate_classical(u.group);
        j["min_gap"] = v.min_gap;
        j["detail"] = v.detail;
        if (!v.pass)
            fail(ErrorKind::CirclesOverlap, v.detail);
        j["valid"] = true;
    } catch (const Error& e) {
        if (exit_code_for(e.kind()) != kValidationFailed)
            throw;
        j["valid"] = false;
        j["error"] = std::string(to_string(e.kind()));
        j["message"] = e.what();
        r.code = kValidationFailed;
    }
    r.body = j.dump(2) + "\n";
    return r;
}

Result cmd_periods(const Options& o)
{
    const CurveConfig cfg = load_config(o.input);
    const SchottkyGroup group = instantiate_group(cfg.graph, cfg.params);
    const PeriodData p = period_matrix(group, o.policy());
    Result r;
    if (o.format == "csv") {
        std::ostringstream s;
        s << "matrix,i,j,re,im\n";
        for (const auto& [name, m] : {std::pair<const char*, const Eigen::MatrixXcd*>{"P", &p.P}, {"Z", &p.Z}})
            for (Eigen::Index i = 0; i < m->rows(); ++i)
                for (Eigen::Index k = 0; k < m->cols(); ++k)
                    s << name << ',' << i + 1 << ',' << k + 1 << ',' << format_double((*m)(i, k).real()) << ','
                      << format_double((*m)(i, k).imag()) << '\n';
        r.body = s.str();
    } else {
        r.body = to_json(p).dump(2) + "\n";
    }
    return r;
}

Result cmd_laurent(const Options& o)
{
    const CurveConfig cfg = load_config(o.input);
    const SchottkyGroup group = instantiate_group(cfg.graph, cfg.params);
    const Uniformization uni = uniformize(cfg.graph, cfg.params);
    const auto xt = marked_point(cfg.graph, cfg.params, uni);
    if (!xt)
        fail(ErrorKind::InvalidInput, "configuration has no marked point (tail numbered 1)");
    const LaurentData L = laurent_data(group, *xt, o.M(3), o.policy());
    const double qn = L.q.cwiseAbs().maxCoeff();
    const double defect = qn > 0.0 ? (L.q - L.q.transpose()).cwiseAbs().maxCoeff() / qn : 0.0;
    Result r;
    if (o.format == "csv") {
        std::ostringstream s;
        s << "matrix,i,j,re,im\n";
        for (const auto& [name, m] : {std::pair<const char*, const Eigen::MatrixXcd*>{"r", &L.r}, {"q", &L.q}})
            for (Eigen::Index i = 0; i < m->rows(); ++i)
                for (Eigen::Index k = 0; k < m->cols(); ++k)
                    s << name << ',' << i + 1 << ',' << k + 1 << ',' << format_double((*m)(i, k).real()) << ','
                      << format_double((*m)(i, k).imag()) << '\n';
        r.body = s.str();
    } else {
        json j;
        j["x_t"] = to_json(L.x_t);
        j["radius"] = L.radius;
        j["fourier_points"] = L.fourier_points;
        j["r"] = matrix_to_json(L.r);
        j["q"] = matrix_to_json(L.q);
        j["q_symmetry_defect"] = defect;
        r.body = j.dump(2) + "\n";
    }
    return r;
}

Result cmd_kp_check(const Options& o)
{
    const CurveConfig cfg = load_config(o.input);
    const Characteristic chi = characteristic(o, cfg.graph.genus());
    (void)instantiate_group(cfg.graph, cfg.params);
    const CurveTau ct = curve_tau(cfg, o.M(3), chi, o.policy(), o.theta());
    ct.tau.validate();
    return kp_result([&](const KpGrid& g) { return kp_residual(ct.tau, g); }, o, 1e-6);
}

SolitonData soliton_from_json(const json& j, const Options& o)
{
    if (!j.is_object())
        fail(ErrorKind::InvalidInput, "soliton input must be a JSON object");
    const int M = o.M(j.contains("times") ? j.at("times").get<int>() : 3);
    auto ints = [&](const char* key) {
        std::vector<int> v;
        if (j.contains(key))
            for (const json& x : j.at(key)) {
                if (!x.is_number_integer())
                    fail(ErrorKind::InvalidInput, std::string(key) + " entries must be integers");
                v.push_back(x.get<int>());
            }
        return v;
    };
    auto complexes = [&](const char* key) {
        std::vector<cplx> v;
        if (j.contains(key)) {
            if (!j.at(key).is_array())
                fail(ErrorKind::InvalidInput, std::string(key) + " must be an array");
            for (const json& x : j.at(key))
                v.push_back(complex_from_json(x));
        }
        return v;
    };
    if (j.contains("curve"))
        return soliton_from_config(curve_config_from_json(j.at("curve")), ints("n"), complexes("alpha_prime"), M);
    for (const char* key : {"x_plus", "x_minus", "x_t"})
        if (!j.contains(key))
            fail(ErrorKind::InvalidInput, std::string("soliton input is missing \"") + key + "\"");
    SolitonData s;
    s.x_plus = complexes("x_plus");
    s.x_minus = complexes("x_minus");
    s.x_t = complex_from_json(j.at("x_t"));
    const std::size_t g = s.x_plus.size();
    s.n = ints("n");
    if (s.n.empty())
        s.n.assign(g, 0);
    s.alpha_prime = complexes("alpha_prime");
    if (s.alpha_prime.empty())
        s.alpha_prime.assign(g, cplx(0.0));
    s.times = M;
    s.validate();
    return s;
}

Result cmd_soliton(const Options& o)
{
    const SolitonData s = soliton_from_json(load_json(o.input), o);
    const ExponentialSum tau = soliton_sum(s);
    return kp_result([&](const KpGrid& g) { return kp_residual(tau, g); }, o, 1e-9);
}

Result cmd_degenerate(const Options& o)
{
    DegenerationScenario s = scenario_from_json(load_json(o.input));
    if (o.times)
        s.times = *o.times;
    s.policy = o.policy();
    s.theta = o.theta();
    const double tol = o.tol.value_or(1e-2);
    const DegenerationReport rep = degeneration_check(s, default_time_samples(s.times, 5));
    const bool pass = rep.monotone && rep.final_deviation <= tol;
    Result r;
    if (o.format == "csv") {
        std::ostringstream out;
        out << "y,deviation,log_unscaled\n";
        for (const DegenerationStep& st : rep.steps)
            out << format_double(st.y) << ',' << format_double(st.deviation) << ',' << format_double(st.log_unscaled)
                << '\n';
        r.body = out.str();
    } else {
        json j = to_json(rep);
        j["tol"] = tol;
        j["pass"] = pass;
        r.body = j.dump(2) + "\n";
    }
    r.summary = std::string(rep.monotone ? "monotone" : "not monotone") + ", final deviation " +
                format_double(rep.final_deviation) + " tol " + format_double(tol) + "\n";
    r.code = pass ? kOk : kToleranceUnmet;
    return r;
}

Result cmd_mcurve(const Options& o)
{
    const CurveConfig cfg = mcurve_params(o.genus, o.tails, o.scale, o.y);
    (void)instantiate_group(cfg.graph, cfg.params);
    Result r;
    r.body = serialize_curve_config(cfg);
    return r;
}

void emit(const Result& r, const Options& o, std::ostream& out)
{
    if (o.out.empty()) {
        out << r.body;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
        fail(ErrorKind::InvalidInput, "cannot open output file " + o.out);
    f << r.body;
    if (!f)
        fail(ErrorKind::InvalidInput, "failed writing " + o.out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Schottky uniformization, theta and tau functions, and KP checks", "schottky-kp"};
    app.require_subcommand(1);
    Options o;
    std::string tol_text, times_text;

    auto common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input)
            sub->add_option("input", o.input, "input JSON file")->required();
        sub->add_option("--tol", tol_text, "tolerance for the pass/fail verdict");
        sub->add_option("--max-word-len", o.max_word_len, "hard limit on word length in group series");
        sub->add_option("--tail-tol", o.tail_tol, "relative tail tolerance of group series");
        sub->add_option("--lattice-radius", o.lattice_radius, "theta lattice box radius (0 = automatic)");
        sub->add_option("--times", times_text, "number of KP times M");
        sub->add_option("--grid", o.grid, "x0:x1:nx,t20:t21:n2,t30:t31:n3");
        sub->add_option("--format", o.format, "csv or json");
        sub->add_option("--out", o.out, "output file (default stdout)");
    };
    CLI::App* validate = app.add_subcommand("validate", "check graph, parameters and Schottky circles");
    common(validate, true);
    CLI::App* periods = app.add_subcommand("periods", "multiplicative and normalized period matrices");
    common(periods, true);
    CLI::App* laurent = app.add_subcommand("laurent", "Laurent data r and q at the marked point");
    common(laurent, true);
    CLI::App* kp = app.add_subcommand("kp-check", "KP residual of u1 on a grid");
    common(kp, true);
    kp->add_option("--alpha", o.alpha, "characteristic alpha, comma separated");
    kp->add_option("--beta", o.beta, "characteristic beta, comma separated");
    CLI::App* soliton = app.add_subcommand("soliton", "soliton tau and KP residual on a grid");
    common(soliton, true);
    CLI::App* degenerate = app.add_subcommand("degenerate", "scaled tau against the modified tau along a pinch");
    common(degenerate, true);
    CLI::App* mcurve = app.add_subcommand("mcurve", "write an M-curve configuration");
    common(mcurve, false);
    mcurve->add_option("--genus,-g", o.genus, "genus");
    mcurve->add_option("--tails,-n", o.tails, "number of tails");
    mcurve->add_option("--scale", o.scale, "spacing of the fixed points");
    mcurve->add_option("--y", o.y, "multiplier of every loop");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (!tol_text.empty())
            o.tol = parse_number(tol_text, "--tol");
        if (!times_text.empty()) {
            const double m = parse_number(times_text, "--times");
            if (m != static_cast<double>(static_cast<int>(m)))
                fail(ErrorKind::InvalidInput, "--times must be an integer");
            o.times = static_cast<int>(m);
        }
        check_options(o);
        Result r;
        if (*validate)
            r = cmd_validate(o);
        else if (*periods)
            r = cmd_periods(o);
        else if (*laurent)
            r = cmd_laurent(o);
        else if (*kp) {
            if (o.format == "json" && !kp->count("--format"))
                o.format = "csv";
            r = cmd_kp_check(o);
        } else if (*soliton) {
            if (o.format == "json" && !soliton->count("--format"))
                o.format = "csv";
            r = cmd_soliton(o);
        } else if (*degenerate)
            r = cmd_degenerate(o);
        else
            r = cmd_mcurve(o);
        emit(r, o, out);
        err << r.summary;
        return r.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

} // namespace schottky::cli
