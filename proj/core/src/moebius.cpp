#include "schottky/moebius.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace schottky {

namespace {

double max_entry(cplx a, cplx b, cplx c, cplx d) noexcept
{
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

bool finite(cplx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Projective point from homogeneous coordinates (u : v).
SpherePoint from_homogeneous(cplx u, cplx v) noexcept
{
    if (v == cplx(0.0))
        return SpherePoint::infinity();
    const cplx z = u / v;
    if (!finite(z))
        return SpherePoint::infinity();
    return SpherePoint(z);
}

} // namespace

SpherePoint::SpherePoint(cplx z) : z_(z)
{
    if (!finite(z))
        fail(ErrorKind::InvalidInput, "finite sphere point with non-finite coordinates");
}

SpherePoint SpherePoint::infinity() noexcept
{
    SpherePoint p;
    p.inf_ = true;
    return p;
}

cplx SpherePoint::value() const
{
    if (inf_)
        fail(ErrorKind::InvalidInput, "value() of the point at infinity");
    return z_;
}

std::string SpherePoint::to_string() const
{
    if (inf_)
        return "inf";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z_.real(), z_.imag());
    return buf;
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) noexcept
{
    if (p.inf_ && q.inf_)
        return 0.0;
    if (p.inf_)
        return 2.0 / std::sqrt(1.0 + std::norm(q.z_));
    if (q.inf_)
        return 2.0 / std::sqrt(1.0 + std::norm(p.z_));
    return 2.0 * std::abs(p.z_ - q.z_) / std::sqrt((1.0 + std::norm(p.z_)) * (1.0 + std::norm(q.z_)));
}

MoebiusMap::MoebiusMap(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d)
{
    if (!finite(a) || !finite(b) || !finite(c) || !finite(d))
        fail(ErrorKind::InvalidInput, "non-finite matrix entry");
    if (is_singular())
        fail(ErrorKind::InvalidInput, "singular matrix");
}

MoebiusMap MoebiusMap::unchecked(cplx a, cplx b, cplx c, cplx d) noexcept
{
    MoebiusMap m;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
}

bool MoebiusMap::is_singular() const noexcept
{
    const double s = max_entry(a_, b_, c_, d_);
    return !(std::abs(det()) > 1e-14 * s * s);
}

SpherePoint MoebiusMap::operator()(const SpherePoint& z) const noexcept
{
    if (z.is_infinite())
        return from_homogeneous(a_, c_);
    const cplx w = z.value();
    return from_homogeneous(a_ * w + b_, c_ * w + d_);
}

cplx MoebiusMap::derivative(cplx z) const noexcept
{
    const cplx den = c_ * z + d_;
    return det() / (den * den);
}

MoebiusMap MoebiusMap::inverse() const
{
    if (is_singular())
        fail(ErrorKind::InvalidInput, "inverse of a singular matrix");
    return MoebiusMap::unchecked(d_, -b_, -c_, a_);
}

MoebiusMap MoebiusMap::normalized() const noexcept
{
    const double s = max_entry(a_, b_, c_, d_);
    if (!(s > 0.0))
        return *this;
    return MoebiusMap::unchecked(a_ / s, b_ / s, c_ / s, d_ / s);
}

MoebiusMap MoebiusMap::unit_det() const
{
    if (is_singular())
        fail(ErrorKind::InvalidInput, "unit_det of a singular matrix");
    const cplx r = std::sqrt(det());
    return MoebiusMap::unchecked(a_ / r, b_ / r, c_ / r, d_ / r);
}

bool MoebiusMap::projectively_equal(const MoebiusMap& other, double tol) const noexcept
{
    const std::array<cplx, 4> x{a_, b_, c_, d_};
    const std::array<cplx, 4> y{other.a_, other.b_, other.c_, other.d_};
    std::size_t k = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (std::abs(x[i]) > std::abs(x[k]))
            k = i;
    if (y[k] == cplx(0.0))
        return false;
    const cplx s = x[k] / y[k];
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        err = std::max(err, std::abs(x[i] - s * y[i]));
    return err <= tol * std::abs(x[k]);
}

SpherePoint apply(const MoebiusMap& map, const SpherePoint& z) noexcept { return map(z); }

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) noexcept
{
    return MoebiusMap::unchecked(m1.a() * m2.a() + m1.b() * m2.c(), m1.a() * m2.b() + m1.b() * m2.d(),
                                 m1.c() * m2.a() + m1.d() * m2.c(), m1.c() * m2.b() + m1.d() * m2.d())
        .normalized();
}

FixedPointData fixed_points_and_multiplier(const MoebiusMap& map)
{
    const MoebiusMap m = map.normalized();
    const cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
    const cplx tr = a + d;
    const cplx det = m.det();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx big = 0.5 * (tr + disc);
    const cplx other = 0.5 * (tr - disc);
    if (std::abs(other) > std::abs(big))
        big = other;
    if (big == cplx(0.0))
        fail(ErrorKind::ParabolicOrEllipticMap, "degenerate matrix");
    const cplx small = det / big;
    const cplx beta = small / big;
    if (!(std::abs(beta) < 1.0 - 1e-10))
        fail(ErrorKind::ParabolicOrEllipticMap, "|multiplier| = 1");

    auto eigenpoint = [&](cplx lambda) {
        const cplx u1 = b, v1 = lambda - a;
        const cplx u2 = lambda - d, v2 = c;
        if (std::norm(u1) + std::norm(v1) >= std::norm(u2) + std::norm(v2))
            return from_homogeneous(u1, v1);
        return from_homogeneous(u2, v2);
    };
    return {eigenpoint(big), eigenpoint(small), beta};
}

MoebiusMap map_from_fixed_points(const SpherePoint& attr, const SpherePoint& rep, cplx y)
{
    if (attr == rep)
        fail(ErrorKind::CoincidentFixedPoints, "attractive and repulsive fixed points coincide");
    // Columns of F are homogeneous coordinates of the fixed points.
    const cplx f11 = attr.is_infinite() ? cplx(1.0) : attr.value();
    const cplx f21 = attr.is_infinite() ? cplx(0.0) : cplx(1.0);
    const cplx f12 = rep.is_infinite() ? cplx(1.0) : rep.value();
    const cplx f22 = rep.is_infinite() ? cplx(0.0) : cplx(1.0);
    // F diag(1, y) adj(F), adj(F) = [[f22, -f12], [-f21, f11]].
    const cplx a = f11 * f22 - y * f12 * f21;
    const cplx b = -f11 * f12 + y * f12 * f11;
    const cplx c = f21 * f22 - y * f22 * f21;
    const cplx d = -f21 * f12 + y * f22 * f11;
    return MoebiusMap::unchecked(a, b, c, d).normalized();
}

} // namespace schottky
