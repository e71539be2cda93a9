// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include "schottky/cli.hpp"
#include "schottky/degeneration.hpp"
#include "schottky/differentials.hpp"
#include "schottky/hierarchy.hpp"
#include "schottky/periods.hpp"
#include "schottky/tau.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace schottky;

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CurveConfig dumbbell()
{
    CurveConfig cfg;
    cfg.graph.vertices = {"v1", "v2"};
    cfg.graph.edges = {{"1", 0, 0}, {"2", 1, 1}, {"3", 0, 1}};
    cfg.graph.tails = {{"t1", 0, 1}};
    cfg.params.x = {{"1", SpherePoint(1.0)},  {"-1", SpherePoint(-1.0)}, {"2", SpherePoint(5.0)},
                    {"-2", SpherePoint(3.0)}, {"3", SpherePoint(0.0)},   {"-3", SpherePoint(4.0)},
                    {"t1", SpherePoint(-3.0)}};
    cfg.params.y = {{"1", 0.02}, {"2", 0.02}, {"3", 0.01}};
    return cfg;
}

DegenerationScenario irreducible(double beta_g)
{
    DegenerationScenario s;
    s.base = mcurve_params(2, 1, 2.0, 0.01);
    s.pinch = "2";
    s.alpha = Eigen::VectorXcd::Zero(2);
    s.beta = Eigen::Vector2d(0.1, beta_g);
    return s;
}

DegenerationScenario reducible()
{
    DegenerationScenario s;
    s.base = dumbbell();
    s.pinch = "3";
    s.alpha = Eigen::Vector2cd(0.1, 0.2);
    s.beta = Eigen::Vector2d(0.3, -0.2);
    return s;
}

SchottkyGroup group_of(const CurveConfig& cfg) { return instantiate_group(cfg.graph, cfg.params); }

Outcome rank_one()
{
    CurveConfig cfg = mcurve_params(1, 1, 2.0, 0.01);
    const SchottkyGroup g = group_of(cfg);
    const cplx P = period_matrix(g, TruncationPolicy{}).P(0, 0);
    const double err = std::abs(P - 0.01) / 0.01;
    return {err <= 1e-14, "P11 relative error " + sci(err)};
}

Outcome normalization()
{
    double worst = 0.0;
    for (auto [g, y] : {std::pair{2, 0.01}, std::pair{3, 0.02}}) {
        const SchottkyGroup group = group_of(mcurve_params(g, 1, 2.0, y));
        const std::vector<Differential> omegas = first_kind_differentials(group, {});
        for (int i = 1; i <= g; ++i)
            for (int j = 1; j <= g; ++j) {
                const cplx want = i == j ? 2.0 * kPi * kI : cplx(0.0);
                worst = std::max(worst, std::abs(a_period(omegas[static_cast<std::size_t>(j - 1)], group, i, {}) - want));
            }
    }
    return {worst <= 1e-7, "max |A - 2 pi i I| " + sci(worst) + " (g = 2, 3)"};
}

// Genus-two configurations with complex fixed points and multipliers, kept when classical.
std::vector<SchottkyGroup> random_suite(int count)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<SchottkyGroup> out;
    while (static_cast<int>(out.size()) < count) {
        CurveConfig cfg = mcurve_params(2, 1, 2.0, 0.01);
        for (auto& [key, p] : cfg.params.x)
            if (key != "t1")
                p = SpherePoint(p.value() + 0.4 * cplx(u(rng), u(rng)));
        for (auto& [key, y] : cfg.params.y)
            y = std::polar(0.005 + 0.045 * 0.5 * (1.0 + u(rng)), kPi * u(rng));
        const Uniformization uni = uniformize(cfg.graph, cfg.params);
        if (validate_classical(uni.group).pass)
            out.push_back(uni.group);
    }
    return out;
}

Outcome consistency()
{
    double cons = 0.0, sym = 0.0, min_eig = 1e300;
    for (const SchottkyGroup& g : random_suite(20)) {
        const PeriodData p = period_matrix(g, TruncationPolicy{});
        cons = std::max(cons, p.consistency_defect);
        sym = std::max(sym, p.symmetry_defect);
        min_eig = std::min(min_eig, p.min_im_eig);
    }
    const bool ok = cons <= 1e-6 && sym <= 1e-7 && min_eig > 0.0;
    return {ok, "20 cases: consistency " + sci(cons) + ", symmetry " + sci(sym) + ", min eig Im Z " + sci(min_eig)};
}

Outcome residues()
{
    const CurveConfig cfg = mcurve_params(2, 1, 2.0, 0.01);
    const SchottkyGroup g = group_of(cfg);
    const cplx p1(0.5, 1.5), p2(-2.0, 0.5);
    const DifferentialSpec third = DifferentialSpec::third_kind(p1, p2);
    double res = std::max(std::abs(residue(g, third, p1, {}) - 1.0), std::abs(residue(g, third, p2, {}) + 1.0));
    double aper = 0.0;
    const SpherePoint xt(-3.0);
    for (int i = 1; i <= 2; ++i) {
        aper = std::max(aper, std::abs(a_period(g, third, i, {})));
        for (int k = 2; k <= 4; ++k)
            aper = std::max(aper, std::abs(a_period(g, DifferentialSpec::second_kind(xt, k), i, {})));
    }
    return {res <= 1e-8 && aper <= 1e-8, "residue error " + sci(res) + ", a-periods " + sci(aper)};
}

Outcome cross_ratio()
{
    bool ok = true;
    std::string d;
    for (double y : {1e-2, 1e-3, 1e-4}) {
        const SchottkyGroup g = group_of(mcurve_params(2, 1, 2.0, y));
        const double err = std::abs(multiplicative_period(g, 1, 2, {}) - 4.0 / 3.0);
        ok = ok && err <= 3.0 * y;
        d += (d.empty() ? "" : ", ") + std::string("y=") + sci(y) + ": " + sci(err);
    }
    return {ok, "|P12 - 4/3| " + d};
}

Outcome kp_residual_floor()
{
    const std::vector<std::pair<double, double>> levels{{1e-4, 1e-6}, {1e-6, 1e-10}, {1e-10, 1e-14}};
    bool ok = true;
    std::string d;
    for (auto [g, bound] : {std::pair{1, 1e-8}, std::pair{2, 1e-6}}) {
        std::vector<double> res;
        for (auto [tail, lat] : levels) {
            TruncationPolicy p;
            p.tail_tol = tail;
            ThetaPolicy th;
            th.tol = lat;
            const CurveTau ct = curve_tau(mcurve_params(g, 1, 2.0, 0.01), 3, Characteristic::zero(g), p, th);
            res.push_back(kp_residual(ct.tau, KpGrid{}).max_residual);
        }
        ok = ok && res.back() <= bound && res[1] <= res[0] && res[2] <= res[1];
        d += (d.empty() ? "" : "; ") + std::string("g=") + std::to_string(g) + ": " + sci(res[0]) + " > " + sci(res[1]) +
             " > " + sci(res[2]);
    }
    return {ok, d};
}

Outcome soliton_exact()
{
    const SolitonData one = soliton_from_config(mcurve_params(1, 1, 2.0, 0.01), {0}, {0.4}, 3);
    const SolitonData two = soliton_from_config(mcurve_params(2, 1, 2.0, 0.01), {0, 0}, {0.3, -0.2}, 3);
    const double r1 = soliton_kp_residual(one, KpGrid{}).max_residual;
    const double r2 = soliton_kp_residual(two, KpGrid{}).max_residual;
    return {r1 <= 1e-9 && r2 <= 1e-9, "one-soliton " + sci(r1) + ", two-soliton " + sci(r2)};
}

Outcome degeneration()
{
    const auto ts = default_time_samples(3, 5);
    bool ok = true;
    std::string d;
    const std::vector<std::pair<std::string, DegenerationScenario>> cases{
        {"generic", irreducible(0.2)}, {"half-integer", irreducible(0.5)}, {"reducible", reducible()}};
    for (const auto& [name, s] : cases) {
        const DegenerationReport r = degeneration_check(s, ts);
        const bool pass = r.monotone && r.final_deviation <= 1e-2;
        ok = ok && pass;
        d += (d.empty() ? "" : "; ") + name + " " + (r.monotone ? "monotone" : "not monotone") + ", final " +
             sci(r.final_deviation);
    }
    return {ok, d};
}

Outcome differential_limits()
{
    const std::vector<cplx> s1{{0.2, 1.5}, {-2.0, 0.8}, {1.5, -1.2}, {-0.5, -2.0}, {2.5, 2.5}};
    const std::vector<cplx> s2{{4.0, 1.2}, {2.5, -0.9}, {6.0, 0.8}, {4.0, -2.0}};
    const DifferentialLimitReport irr = differential_limit_check(irreducible(0.2), s1);
    const DifferentialLimitReport red = differential_limit_check(reducible(), s1, s2);
    const double pinched = irr.steps.back().pinched;
    const double block = red.steps.back().block_vanishing;
    return {pinched <= 1e-3 && block <= 1e-3,
            "omega_g vs third kind " + sci(pinched) + ", block vanishing " + sci(block) + " at y=1e-4"};
}

Outcome reality()
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double tau_im = 0.0, per_im = 0.0;
    bool unit = true;
    for (auto [g, y] : {std::pair{1, 0.01}, std::pair{2, 0.01}, std::pair{3, 0.02}}) {
        const CurveTau ct = curve_tau(mcurve_params(g, 1, 2.0, y), 3, Characteristic::zero(g));
        std::vector<Eigen::VectorXcd> ts;
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXcd t(3);
            for (int m = 0; m < 3; ++m)
                t(m) = u(rng);
            ts.push_back(t);
        }
        const RealityReport r = reality_check(ct.tau, ts);
        tau_im = std::max(tau_im, r.max_rel_imag_tau);
        per_im = std::max(per_im, r.max_rel_imag_period);
        unit = unit && r.half_periods_in_unit_interval;
    }
    return {tau_im <= 1e-8 && per_im <= 1e-7 && unit, "max |Im tau|/|tau| " + sci(tau_im) + ", Im exp(2 pi i Z) " +
                                                          sci(per_im) + ", exp(pi i Z_ii) in (0,1): " +
                                                          (unit ? "yes" : "no")};
}

Outcome laurent_symmetry()
{
    double worst = 0.0;
    for (int g : {1, 2}) {
        const SchottkyGroup group = group_of(mcurve_params(g, 1, 2.0, 0.01));
        const LaurentData L = laurent_data(group, SpherePoint(-3.0), 4, {});
        worst = std::max(worst, (L.q - L.q.transpose()).cwiseAbs().maxCoeff() / L.q.cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-7, "||q - q^T|| / ||q|| " + sci(worst)};
}

Outcome hierarchy()
{
    const int M = 10;
    const SolitonData one = soliton_from_config(mcurve_params(1, 1, 2.0, 0.01), {0}, {0.3}, M);
    const CurveTau g1 = curve_tau(mcurve_params(1, 1, 2.0, 0.01), M, Characteristic::zero(1));
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(M);
    t(0) = 0.2;
    t(1) = -0.1;
    double worst = 0.0, deeper = 0.0;
    for (const ExponentialSum& tau : {soliton_sum(one), tau_sum(g1.tau, std::vector<Eigen::VectorXcd>{t})})
        for (const HierarchyReport& r : hierarchy_check(tau, t, {2, 3})) {
            worst = std::max(worst, r.residual);
            deeper = std::max(deeper, r.residual_deeper);
        }
    return {worst <= 1e-5 && deeper <= 1e-5, "depth 6 " + sci(worst) + ", depth 8 " + sci(deeper)};
}

Outcome determinism()
{
    const std::string dir = SCHOTTKY_CONFIG_DIR;
    const std::vector<std::vector<std::string>> runs{
        {"validate", dir + "/mcurve_g2.json"},
        {"periods", dir + "/mcurve_g2.json"},
        {"laurent", dir + "/mcurve_g2.json", "--times", "4"},
        {"kp-check", dir + "/mcurve_g2.json"},
        {"soliton", dir + "/soliton_two.json"},
        {"degenerate", dir + "/degenerate_reducible.json"},
        {"mcurve", "-g", "3", "--y", "0.02"},
    };
    int same = 0;
    for (const auto& args : runs) {
        std::ostringstream a, b, ea, eb;
        const int ca = cli::run(args, a, ea);
        const int cb = cli::run(args, b, eb);
        same += a.str() == b.str() && ca == cb && !a.str().empty();
    }
    return {same == static_cast<int>(runs.size()),
            std::to_string(same) + "/" + std::to_string(runs.size()) + " subcommands byte-identical"};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rank-1 exactness", rank_one},
        {"a-period normalization", normalization},
        {"period consistency", consistency},
        {"residues and a-periods", residues},
        {"cross-ratio limit", cross_ratio},
        {"KP residual", kp_residual_floor},
        {"soliton exactness", soliton_exact},
        {"degeneration convergence", degeneration},
        {"differential limits", differential_limits},
        {"reality", reality},
        {"Laurent symmetry", laurent_symmetry},
        {"hierarchy check", hierarchy},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str(), secs);
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
