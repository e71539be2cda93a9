#include "schottky/differentials.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx finite_point(const SpherePoint& p, const char* what)
{
    if (p.is_infinite())
        fail(ErrorKind::InvalidParams, std::string(what) + " at infinity is not supported");
    return p.value();
}

// Fixed points of all generators and inverses, finite ones only.
std::vector<cplx> finite_fixed_points(const SchottkyGroup& group)
{
    std::vector<cplx> out;
    for (int i = 1; i <= group.rank(); ++i)
        for (int s : {i, -i})
            if (group.fixed_point(s).is_finite())
                out.push_back(group.fixed_point(s).value());
    return out;
}

} // namespace

DifferentialSpec DifferentialSpec::first_kind(int i)
{
    DifferentialSpec s;
    s.kind = DifferentialKind::FirstKind;
    s.index = i;
    return s;
}

DifferentialSpec DifferentialSpec::second_kind(const SpherePoint& x_t, int k)
{
    if (k < 2)
        fail(ErrorKind::InvalidInput, "second-kind order must be > 1");
    DifferentialSpec s;
    s.kind = DifferentialKind::SecondKind;
    s.index = k;
    s.p1 = x_t;
    return s;
}

DifferentialSpec DifferentialSpec::third_kind(const SpherePoint& p1, const SpherePoint& p2)
{
    if (p1 == p2)
        fail(ErrorKind::InvalidInput, "third-kind poles must differ");
    DifferentialSpec s;
    s.kind = DifferentialKind::ThirdKind;
    s.p1 = p1;
    s.p2 = p2;
    return s;
}

Differential::Differential(const SchottkyGroup& group, const DifferentialSpec& spec, const TruncationPolicy& policy)
    : spec_(spec)
{
    switch (spec.kind) {
    case DifferentialKind::FirstKind: {
        const int i = spec.index;
        if (i < 1 || i > group.rank())
            fail(ErrorKind::IndexOutOfRange, "first-kind index " + std::to_string(i));
        series_ = PolePairSeries::build(group, finite_point(group.fixed_point(i), "fixed point"),
                                        finite_point(group.fixed_point(-i), "fixed point"), i, policy);
        break;
    }
    case DifferentialKind::SecondKind:
        if (spec.index < 2)
            fail(ErrorKind::InvalidInput, "second-kind order must be > 1");
        series_ = MapSeries::build(group, finite_point(spec.p1, "second-kind pole"), true, policy);
        break;
    case DifferentialKind::ThirdKind:
        if (spec.p1 == spec.p2)
            fail(ErrorKind::InvalidInput, "third-kind poles must differ");
        series_ = PolePairSeries::build(group, finite_point(spec.p1, "third-kind pole"),
                                        finite_point(spec.p2, "third-kind pole"), 0, policy);
        break;
    }
}

cplx Differential::density(cplx z) const
{
    if (const auto* pairs = std::get_if<PolePairSeries>(&series_))
        return pairs->density(z);
    return std::get<MapSeries>(series_).density(z, spec_.index);
}

cplx Differential::integrate_segment(cplx a, cplx b) const
{
    if (const auto* pairs = std::get_if<PolePairSeries>(&series_))
        return pairs->integrate_segment(a, b);
    return std::get<MapSeries>(series_).integrate_segment(a, b, spec_.index);
}

const TailReport& Differential::tail() const noexcept
{
    if (const auto* pairs = std::get_if<PolePairSeries>(&series_))
        return pairs->tail();
    return std::get<MapSeries>(series_).tail();
}

std::vector<cplx> Differential::poles() const
{
    std::vector<cplx> out;
    if (const auto* pairs = std::get_if<PolePairSeries>(&series_)) {
        for (const auto& pr : pairs->pairs()) {
            out.push_back(pr.p);
            out.push_back(pr.q);
        }
    } else {
        for (const auto& t : std::get<MapSeries>(series_).terms())
            out.push_back(t.pole);
    }
    return out;
}

void require_converged(const TailReport& tail, const char* what)
{
    if (!tail.converged)
        fail(ErrorKind::TruncationNotConverged,
             std::string(what) + ": tail estimate " + std::to_string(tail.tail) + " after depth " +
                 std::to_string(tail.depth) + " (" + std::to_string(tail.terms) + " terms)");
}

cplx eval_density(const SchottkyGroup& group, const DifferentialSpec& spec, const SpherePoint& z,
                  const TruncationPolicy& policy)
{
    const Differential d(group, spec, policy);
    require_converged(d.tail(), "eval_density");
    return d.density(finite_point(z, "evaluation point"));
}

Circle a_cycle(const SchottkyGroup& group, int i)
{
    if (i < 1 || i > group.rank())
        fail(ErrorKind::IndexOutOfRange, "cycle index " + std::to_string(i));
    const cplx c = finite_point(group.fixed_point(i), "fixed point");
    double dmin = std::numeric_limits<double>::infinity();
    for (cplx f : finite_fixed_points(group))
        if (f != c)
            dmin = std::min(dmin, std::abs(f - c));
    if (!std::isfinite(dmin))
        dmin = 1.0;
    return {c, 0.25 * dmin};
}

cplx circle_integral(const Differential& diff, const Circle& circle, double tol)
{
    for (cplx p : diff.poles())
        if (std::abs(std::abs(p - circle.center) - circle.radius) < 1e-6 * circle.radius)
            fail(ErrorKind::PoleOnContour, "pole within 1e-6 radius of the contour");
    auto sample = [&](int n, int k) {
        const double th = 2.0 * kPi * k / n;
        const cplx e = std::polar(1.0, th);
        return diff.density(circle.center + circle.radius * e) * kI * circle.radius * e;
    };
    int n = 256;
    cplx sum(0.0);
    for (int k = 0; k < n; ++k)
        sum += sample(n, k);
    cplx value = sum * (2.0 * kPi / n);
    while (n < 65536) {
        cplx odd(0.0);
        for (int k = 1; k < 2 * n; k += 2)
            odd += sample(2 * n, k);
        sum += odd;
        n *= 2;
        const cplx refined = sum * (2.0 * kPi / n);
        const bool stable = std::abs(refined - value) <= tol * std::max(1.0, std::abs(refined));
        value = refined;
        if (stable)
            return value;
    }
    fail(ErrorKind::PoleOnContour, "contour quadrature did not stabilize");
}

cplx a_period(const Differential& diff, const SchottkyGroup& group, int i, const TruncationPolicy& policy)
{
    require_converged(diff.tail(), "a_period");
    return circle_integral(diff, a_cycle(group, i), std::max(policy.tail_tol, 1e-14));
}

cplx a_period(const SchottkyGroup& group, const DifferentialSpec& spec, int i, const TruncationPolicy& policy)
{
    return a_period(Differential(group, spec, policy), group, i, policy);
}

std::vector<cplx> b_path(const SchottkyGroup& group, int i, cplx z0, const std::vector<cplx>& poles)
{
    const SpherePoint end = group.generator(i)(SpherePoint(z0));
    if (end.is_infinite())
        fail(ErrorKind::PathBlocked, "gamma_i(z0) is infinite");
    // Rounding margin, shrunk with the local contraction of gamma_i so endpoints deep inside
    // a small isometric circle are not rejected.
    const double eps = 1e-9 * group.scale() * std::min(1.0, std::abs(group.generator(i).derivative(z0)));
    std::vector<cplx> path{z0, end.value()};
    for (cplx p : {path.front(), path.back()})
        for (cplx q : poles)
            if (std::abs(p - q) < eps)
                fail(ErrorKind::PathBlocked, "path endpoint on a pole");
    for (int pass = 0; pass < 16; ++pass) {
        bool changed = false;
        std::vector<cplx> next{path.front()};
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            const cplx a = path[s], b = path[s + 1];
            double dmin = std::numeric_limits<double>::infinity();
            cplx worst{};
            for (cplx q : poles) {
                const double d = segment_distance(q, a, b);
                if (d < dmin) {
                    dmin = d;
                    worst = q;
                }
            }
            if (dmin < eps) {
                // Bow the midpoint away from the offending pole.
                const cplx m = 0.5 * (a + b);
                cplx n = (b - a) * kI;
                n /= std::abs(n);
                if (((worst - m) * std::conj(n)).real() > 0.0)
                    n = -n;
                next.push_back(m + 0.1 * std::abs(b - a) * n);
                changed = true;
            }
            next.push_back(b);
        }
        path = std::move(next);
        if (!changed)
            return path;
    }
    fail(ErrorKind::PathBlocked, "no admissible path found");
}

cplx integrate_path(const Differential& diff, const std::vector<cplx>& path)
{
    cplx sum(0.0);
    for (std::size_t s = 0; s + 1 < path.size(); ++s)
        sum += diff.integrate_segment(path[s], path[s + 1]);
    return sum;
}

cplx b_period_integral(const Differential& omega_j, const SchottkyGroup& group, int i, cplx z0)
{
    require_converged(omega_j.tail(), "b_period_integral");
    return integrate_path(omega_j, b_path(group, i, z0, omega_j.poles()));
}

cplx b_period_integral(const SchottkyGroup& group, int i, int j, cplx z0, const TruncationPolicy& policy)
{
    return b_period_integral(Differential(group, DifferentialSpec::first_kind(j), policy), group, i, z0);
}

cplx residue(const SchottkyGroup& group, const DifferentialSpec& spec, const SpherePoint& at,
             const TruncationPolicy& policy, double radius_factor)
{
    if (spec.kind != DifferentialKind::ThirdKind)
        fail(ErrorKind::InvalidInput, "residue is defined here for third-kind differentials");
    if (!(at == spec.p1) && !(at == spec.p2))
        fail(ErrorKind::InvalidInput, "residue point must be one of the poles");
    const Differential d(group, spec, policy);
    require_converged(d.tail(), "residue");
    const cplx c = finite_point(at, "residue point");
    double dmin = std::numeric_limits<double>::infinity();
    for (cplx p : d.poles())
        if (std::abs(p - c) > 0.0)
            dmin = std::min(dmin, std::abs(p - c));
    for (cplx f : finite_fixed_points(group))
        dmin = std::min(dmin, std::abs(f - c));
    if (!(dmin > 1e-8))
        fail(ErrorKind::PoleProximity, "another pole lies on top of the residue point");
    const Circle circle{c, 0.25 * radius_factor * dmin};
    return circle_integral(d, circle, std::max(policy.tail_tol, 1e-14)) / (2.0 * kPi * kI);
}

std::vector<Differential> first_kind_differentials(const SchottkyGroup& group, const TruncationPolicy& policy)
{
    std::vector<Differential> out;
    for (int j = 1; j <= group.rank(); ++j) {
        out.emplace_back(group, DifferentialSpec::first_kind(j), policy);
        require_converged(out.back().tail(), "first-kind differential");
    }
    return out;
}

namespace {

// Taylor coefficients c_0..c_{count-1} of f about x_t from n samples on a circle.
std::vector<cplx> fourier_coefficients(const std::vector<cplx>& samples, double radius, int count)
{
    const int n = static_cast<int>(samples.size());
    std::vector<cplx> c(static_cast<std::size_t>(count), cplx(0.0));
    for (int m = 0; m < count; ++m) {
        cplx s(0.0);
        for (int k = 0; k < n; ++k)
            s += samples[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * kPi * m * k / n);
        c[static_cast<std::size_t>(m)] = s / (static_cast<double>(n) * std::pow(radius, m));
    }
    return c;
}

} // namespace

LaurentData laurent_data(const SchottkyGroup& group, const std::vector<Differential>& first_kind,
                         const SpherePoint& x_t_point, int M, const TruncationPolicy& policy)
{
    if (M < 0)
        fail(ErrorKind::InvalidInput, "number of times must be >= 0");
    const int g = group.rank();
    LaurentData out;
    out.r = Eigen::MatrixXcd::Zero(g, M);
    out.q = Eigen::MatrixXcd::Zero(M, M);
    out.x_t = finite_point(x_t_point, "marked point");
    if (M == 0)
        return out;
    const cplx x_t = out.x_t;
    if (g == 0) {
        // Second-kind differentials on the sphere are exactly du / u^{n+1}.
        out.radius = 1.0;
        return out;
    }

    // Radius: half the distance to the nearest isometric circle or fixed point.
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= g; ++i) {
        for (int s : {i, -i}) {
            const MoebiusMap m = group.generator(s).unit_det();
            if (std::abs(m.c()) > 0.0) {
                const cplx center = -m.d() / m.c();
                dmin = std::min(dmin, std::abs(std::abs(x_t - center) - 1.0 / std::abs(m.c())));
            }
        }
    }
    for (cplx f : finite_fixed_points(group))
        dmin = std::min(dmin, std::abs(f - x_t));
    if (!(dmin > 0.0) || !std::isfinite(dmin))
        fail(ErrorKind::PoleProximity, "marked point touches an isometric circle");
    out.radius = 0.5 * dmin;

    const MapSeries second = MapSeries::build(group, x_t, false, policy);
    require_converged(second.tail(), "second-kind differential");

    // rows 0..g-1: first kind; rows g..g+M-1: second kind of order n+1.
    auto sample_all = [&](int n) {
        std::vector<std::vector<cplx>> s(static_cast<std::size_t>(g + M), std::vector<cplx>(static_cast<std::size_t>(n)));
        std::vector<cplx> dens;
        for (int k = 0; k < n; ++k) {
            const cplx z = x_t + out.radius * std::polar(1.0, 2.0 * kPi * k / n);
            for (int j = 0; j < g; ++j)
                s[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = first_kind[static_cast<std::size_t>(j)].density(z);
            second.densities(z, M + 1, dens);
            for (int nn = 1; nn <= M; ++nn)
                s[static_cast<std::size_t>(g + nn - 1)][static_cast<std::size_t>(k)] = dens[static_cast<std::size_t>(nn - 1)];
        }
        return s;
    };
    auto coefficients = [&](int n) {
        const auto s = sample_all(n);
        std::vector<std::vector<cplx>> c;
        for (const auto& row : s)
            c.push_back(fourier_coefficients(row, out.radius, M));
        return c;
    };

    const double tol = std::max(policy.tail_tol, 1e-13);
    int n = 64;
    auto prev = coefficients(n);
    while (true) {
        const auto cur = coefficients(2 * n);
        bool stable = true;
        for (std::size_t row = 0; row < cur.size() && stable; ++row) {
            double scale = 0.0;
            for (int m = 0; m < M; ++m)
                scale = std::max(scale, std::abs(cur[row][static_cast<std::size_t>(m)]) * std::pow(out.radius, m));
            for (int m = 0; m < M; ++m) {
                const double diff = std::abs(cur[row][static_cast<std::size_t>(m)] - prev[row][static_cast<std::size_t>(m)]) *
                                    std::pow(out.radius, m);
                if (diff > tol * std::max(scale, 1e-300))
                    stable = false;
            }
        }
        n *= 2;
        prev = cur;
        if (stable)
            break;
        if (n >= 2048)
            fail(ErrorKind::FourierNotConverged, "Laurent coefficients unstable under refinement");
    }
    out.fourier_points = n;
    for (int j = 0; j < g; ++j)
        for (int m = 1; m <= M; ++m)
            out.r(j, m - 1) = prev[static_cast<std::size_t>(j)][static_cast<std::size_t>(m - 1)];
    for (int nn = 1; nn <= M; ++nn)
        for (int m = 1; m <= M; ++m)
            out.q(nn - 1, m - 1) = static_cast<double>(nn) * prev[static_cast<std::size_t>(g + nn - 1)][static_cast<std::size_t>(m - 1)];
    return out;
}

std::vector<cplx> taylor_coefficients(const Differential& diff, cplx center, double radius, int count, double tol)
{
    if (count < 0 || !(radius > 0.0))
        fail(ErrorKind::InvalidInput, "need count >= 0 and radius > 0");
    auto coefficients = [&](int n) {
        std::vector<cplx> s(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            s[static_cast<std::size_t>(k)] = diff.density(center + radius * std::polar(1.0, 2.0 * kPi * k / n));
        return fourier_coefficients(s, radius, count);
    };
    int n = 64;
    std::vector<cplx> prev = coefficients(n);
    for (;;) {
        const std::vector<cplx> cur = coefficients(2 * n);
        n *= 2;
        double scale = 0.0, diffmax = 0.0;
        for (int m = 0; m < count; ++m) {
            const double w = std::pow(radius, m);
            scale = std::max(scale, std::abs(cur[static_cast<std::size_t>(m)]) * w);
            diffmax = std::max(diffmax, std::abs(cur[static_cast<std::size_t>(m)] - prev[static_cast<std::size_t>(m)]) * w);
        }
        prev = cur;
        if (diffmax <= tol * std::max(scale, 1e-300))
            return prev;
        if (n >= 2048)
            fail(ErrorKind::FourierNotConverged, "Taylor coefficients unstable under refinement");
    }
}

LaurentData laurent_data(const SchottkyGroup& group, const SpherePoint& x_t, int M, const TruncationPolicy& policy)
{
    return laurent_data(group, first_kind_differentials(group, policy), x_t, M, policy);
}

} // namespace schottky
