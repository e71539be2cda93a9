#pragma once

#include <complex>
#include <string>

namespace schottky {

using cplx = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or infinity.
class SpherePoint {
public:
    SpherePoint() = default;
    SpherePoint(cplx z); // NOLINT(google-explicit-constructor)
    SpherePoint(double x) : SpherePoint(cplx(x, 0.0)) {} // NOLINT(google-explicit-constructor)

    static SpherePoint infinity() noexcept;

    bool is_infinite() const noexcept { return inf_; }
    bool is_finite() const noexcept { return !inf_; }
    /// Finite value; throws InvalidInput at infinity.
    cplx value() const;

    /// Chordal distance on the unit sphere, in [0, 2].
    friend double chordal_distance(const SpherePoint& p, const SpherePoint& q) noexcept;
    friend bool operator==(const SpherePoint& p, const SpherePoint& q) noexcept
    {
        return p.inf_ == q.inf_ && (p.inf_ || p.z_ == q.z_);
    }

    std::string to_string() const;

private:
    cplx z_{0.0, 0.0};
    bool inf_ = false;
};

double chordal_distance(const SpherePoint& p, const SpherePoint& q) noexcept;

/// 2x2 complex matrix acting by linear fractional transformation, up to scale.
class MoebiusMap {
public:
    /// Identity map.
    MoebiusMap() = default;
    /// Checked: throws InvalidInput when the determinant is numerically zero.
    MoebiusMap(cplx a, cplx b, cplx c, cplx d);

    static MoebiusMap identity() noexcept { return {}; }
    /// No determinant check. Singular matrices act as constant maps.
    static MoebiusMap unchecked(cplx a, cplx b, cplx c, cplx d) noexcept;

    cplx a() const noexcept { return a_; }
    cplx b() const noexcept { return b_; }
    cplx c() const noexcept { return c_; }
    cplx d() const noexcept { return d_; }
    cplx det() const noexcept { return a_ * d_ - b_ * c_; }
    bool is_singular() const noexcept;

    SpherePoint operator()(const SpherePoint& z) const noexcept;
    /// Finite-argument fast path; returns inf components when cz+d = 0.
    cplx apply_finite(cplx z) const noexcept { return (a_ * z + b_) / (c_ * z + d_); }
    /// Derivative at a finite point.
    cplx derivative(cplx z) const noexcept;

    MoebiusMap inverse() const;
    /// Largest-magnitude entry scaled to modulus one.
    MoebiusMap normalized() const noexcept;
    /// Representative with determinant one (defined up to sign).
    MoebiusMap unit_det() const;

    bool projectively_equal(const MoebiusMap& other, double tol = 1e-12) const noexcept;

private:
    cplx a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

SpherePoint apply(const MoebiusMap& map, const SpherePoint& z) noexcept;

/// Matrix product m1*m2, renormalized so the largest entry has modulus one.
MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) noexcept;

struct FixedPointData {
    SpherePoint attractive;
    SpherePoint repulsive;
    cplx multiplier;
};

/// Attractive and repulsive fixed points and the multiplier of a loxodromic map.
FixedPointData fixed_points_and_multiplier(const MoebiusMap& map);

/// The map with attractive fixed point `attr`, repulsive fixed point `rep` and multiplier y.
/// y = 0 is allowed and gives the constant map onto `attr`.
MoebiusMap map_from_fixed_points(const SpherePoint& attr, const SpherePoint& rep, cplx y);

} // namespace schottky
