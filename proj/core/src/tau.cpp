#include "schottky/tau.hpp"

#include "schottky/error.hpp"
#include "schottky/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Eigen::VectorXcd unit(int M, int k)
{
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(M);
    e(k) = 1.0;
    return e;
}

// Theta value and the sum of |terms| at z.
std::pair<cplx, double> theta_with_mass(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z, int R)
{
    cplx sum(0.0);
    double mass = 0.0;
    for (const auto& v : lattice_box(static_cast<int>(Z.rows()), R)) {
        const Eigen::VectorXcd vc = v.cast<cplx>();
        const cplx term = std::exp(kI * kPi * (vc.transpose() * Z * vc)(0, 0) + (vc.transpose() * z)(0, 0));
        sum += term;
        mass += std::abs(term);
    }
    return {sum, mass};
}

} // namespace

void TauData::validate() const
{
    check_period_matrix(Z);
    const int g = genus(), M = times();
    if (c.size() != g || r.rows() != g || r.cols() != M || q.cols() != M)
        fail(ErrorKind::InvalidInput, "tau data dimensions are inconsistent");
    const int R = theta.radius > 0 ? theta.radius : lattice_radius(Z, theta.tol, c);
    const auto [th, mass] = theta_with_mass(Z, c, R);
    if (std::abs(th) <= 1e-12 * mass)
        fail(ErrorKind::ThetaZero, "Theta(c) vanishes");
}

Eigen::VectorXcd TauData::argument(const Eigen::VectorXcd& t) const
{
    if (t.size() != times())
        fail(ErrorKind::InvalidInput, "time vector length differs from M");
    return c + r * t;
}

CurveTau curve_tau(const SchottkyGroup& group, const SpherePoint& x_t, int M, const Characteristic& chi,
                   const TruncationPolicy& policy, const ThetaPolicy& theta)
{
    const std::vector<Differential> omegas = first_kind_differentials(group, policy);
    CurveTau out;
    out.periods = period_matrix(group, omegas);
    out.laurent = laurent_data(group, omegas, x_t, M, policy);
    out.tau.Z = out.periods.Z;
    out.tau.c = chi.c(out.periods.Z);
    out.tau.r = out.laurent.r;
    out.tau.q = out.laurent.q;
    out.tau.theta = theta;
    out.tau.validate();
    return out;
}

CurveTau curve_tau(const CurveConfig& config, int M, const Characteristic& chi, const TruncationPolicy& policy,
                   const ThetaPolicy& theta)
{
    const SchottkyGroup group = instantiate_group(config.graph, config.params);
    const Uniformization uni = uniformize(config.graph, config.params);
    const auto xt = marked_point(config.graph, config.params, uni);
    if (!xt)
        fail(ErrorKind::InvalidInput, "curve has no marked point (tail numbered 1)");
    return curve_tau(group, *xt, M, chi, policy, theta);
}

cplx tau(const TauData& data, const Eigen::VectorXcd& t)
{
    const Eigen::VectorXcd z = data.argument(t);
    const cplx quad = 0.5 * (t.transpose() * data.q * t)(0, 0);
    return std::exp(quad) * theta(data.Z, z, data.theta);
}

ExponentialSum tau_sum(const TauData& data, int R)
{
    const int g = data.genus();
    ExponentialSum out(data.q, {});
    for (const auto& v : lattice_box(g, R)) {
        const Eigen::VectorXcd vc = v.cast<cplx>();
        const cplx logc = kI * kPi * (vc.transpose() * data.Z * vc)(0, 0) + (vc.transpose() * data.c)(0, 0);
        out.add_term(logc, data.r.transpose() * vc);
    }
    return out;
}

ExponentialSum tau_sum(const TauData& data, const std::vector<Eigen::VectorXcd>& ts)
{
    std::vector<Eigen::VectorXcd> zs;
    for (const auto& t : ts)
        zs.push_back(data.argument(t));
    int R = data.theta.radius;
    if (R <= 0)
        R = lattice_radius(data.Z, data.theta.tol, zs);
    ThetaPolicy check = data.theta;
    check.radius = R;
    for (const auto& z : zs)
        (void)theta(data.Z, z, check); // throws LatticeNotConverged
    return tau_sum(data, R);
}

cplx u1(const TauData& data, double x, double t2, double t3)
{
    const int M = data.times();
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(M);
    if (M >= 1)
        t(0) = x;
    if (M >= 2)
        t(1) = t2;
    if (M >= 3)
        t(2) = t3;
    const Eigen::VectorXcd z = data.argument(t);
    const Eigen::VectorXcd r1 = M >= 1 ? Eigen::VectorXcd(data.r.col(0)) : Eigen::VectorXcd::Zero(data.genus());
    const int R = data.theta.radius > 0 ? data.theta.radius : lattice_radius(data.Z, data.theta.tol, z);
    const auto [th, mass] = theta_with_mass(data.Z, z, R);
    if (std::abs(th) <= 1e-12 * mass)
        fail(ErrorKind::ThetaZero, "Theta vanishes at the u1 argument");
    const cplx d1 = theta_directional_derivative(data.Z, z, {r1}, {1}, R);
    const cplx d2 = theta_directional_derivative(data.Z, z, {r1}, {2}, R);
    const cplx q11 = M >= 1 ? data.q(0, 0) : cplx(0.0);
    return (d2 * th - d1 * d1) / (th * th) + q11;
}

std::vector<Eigen::Vector3d> KpGrid::points() const
{
    if (nx < 1 || n2 < 1 || n3 < 1)
        fail(ErrorKind::InvalidInput, "grid sizes must be >= 1");
    auto axis = [](double a, double b, int n, int i) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
    std::vector<Eigen::Vector3d> out;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < n2; ++j)
            for (int k = 0; k < n3; ++k)
                out.emplace_back(axis(x0, x1, nx, i), axis(t20, t21, n2, j), axis(t30, t31, n3, k));
    return out;
}

KpReport kp_residual(const ExponentialSum& tau, const KpGrid& grid)
{
    const int M = tau.times();
    if (M < 3)
        fail(ErrorKind::InvalidInput, "KP residual needs at least 3 times");
    const std::vector<Eigen::Vector3d> pts = grid.points();
    const std::vector<Eigen::VectorXcd> dirs{unit(M, 0), unit(M, 1), unit(M, 2)};
    KpReport rep;
    rep.points.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t n) {
        Eigen::VectorXcd t = Eigen::VectorXcd::Zero(M);
        t(0) = pts[n](0);
        t(1) = pts[n](1);
        t(2) = pts[n](2);
        const Jet L = tau.log_jet(t, dirs, 6);
        const cplx u = L.partial(2);
        const cplx ux = L.partial(3);
        const cplx uxx = L.partial(4);
        const cplx uxxxx = L.partial(6);
        const cplx u22 = L.partial(2, 2, 0);
        const cplx ux3 = L.partial(3, 0, 1);
        const cplx T1 = 0.75 * u22;
        const cplx T2 = ux3;
        const cplx T3 = 0.25 * uxxxx;
        const cplx T4 = 3.0 * (ux * ux + u * uxx);
        KpPoint& p = rep.points[n];
        p.x = pts[n](0);
        p.t2 = pts[n](1);
        p.t3 = pts[n](2);
        p.u = u;
        p.residual = T1 - T2 + T3 + T4;
        p.term_scale = std::max({std::abs(T1), std::abs(T2), std::abs(T3), std::abs(T4)});
    });
    double sumsq = 0.0;
    for (const KpPoint& p : rep.points) {
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(p.residual));
        rep.term_scale = std::max(rep.term_scale, p.term_scale);
        sumsq += std::norm(p.residual);
    }
    const double rms = std::sqrt(sumsq / static_cast<double>(rep.points.size()));
    if (rep.term_scale > 0.0) {
        rep.max_residual = rep.max_abs_residual / rep.term_scale;
        rep.rms_residual = rms / rep.term_scale;
    }
    return rep;
}

KpReport kp_residual(const TauData& data, const KpGrid& grid)
{
    data.validate();
    const int M = data.times();
    if (M < 3)
        fail(ErrorKind::InvalidInput, "KP residual needs at least 3 times");
    std::vector<Eigen::VectorXcd> corners;
    for (double x : {grid.x0, grid.x1})
        for (double a : {grid.t20, grid.t21})
            for (double b : {grid.t30, grid.t31}) {
                Eigen::VectorXcd t = Eigen::VectorXcd::Zero(M);
                t(0) = x;
                t(1) = a;
                t(2) = b;
                corners.push_back(t);
            }
    try {
        return kp_residual(tau_sum(data, corners), grid);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::TauZeroOnGrid)
            fail(ErrorKind::ThetaZero, e.what());
        throw;
    }
}

RealityReport reality_check(const TauData& data, const std::vector<Eigen::VectorXcd>& samples)
{
    RealityReport rep;
    if (!samples.empty()) {
        const ExponentialSum sum = tau_sum(data, samples);
        for (const auto& t : samples) {
            const ExponentialSum::Scaled s = sum.scaled(t);
            rep.max_rel_imag_tau = std::max(rep.max_rel_imag_tau, std::abs(s.mantissa.imag()) / std::abs(s.mantissa));
        }
    }
    const int g = data.genus();
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const cplx p = std::exp(2.0 * kPi * kI * data.Z(i, j));
            rep.max_rel_imag_period = std::max(rep.max_rel_imag_period, std::abs(p.imag()) / std::abs(p));
        }
        const cplx h = std::exp(kPi * kI * data.Z(i, i));
        rep.half_periods.push_back(h);
        if (!(h.real() > 0.0 && h.real() < 1.0 && std::abs(h.imag()) <= 1e-7 * std::abs(h)))
            rep.half_periods_in_unit_interval = false;
    }
    return rep;
}

} // namespace schottky
