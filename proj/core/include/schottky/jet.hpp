#pragma once

#include "schottky/moebius.hpp"

#include <array>
#include <vector>

namespace schottky {

/// Truncated power series in up to three variables, total degree <= degree().
class Jet {
public:
    Jet() = default;
    Jet(int nvars, int degree);

    int nvars() const noexcept { return nvars_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return coef_.size(); }

    /// Coefficient of s0^i s1^j s2^k.
    cplx coeff(int i, int j = 0, int k = 0) const;
    void set(int i, int j, int k, cplx v);
    /// Partial derivative d^{i+j+k} / ds0^i ds1^j ds2^k at the origin.
    cplx partial(int i, int j = 0, int k = 0) const;

    cplx& operator[](std::size_t idx) noexcept { return coef_[idx]; }
    cplx operator[](std::size_t idx) const noexcept { return coef_[idx]; }
    const std::array<int, 3>& exponent(std::size_t idx) const noexcept { return exps_[idx]; }

    Jet& operator+=(const Jet& o);
    Jet& operator*=(cplx s);
    friend Jet operator*(const Jet& a, const Jet& b);

    /// log of a series with nonzero constant term. Throws InvalidInput otherwise.
    Jet log() const;

private:
    std::size_t index(int i, int j, int k) const;

    int nvars_ = 0;
    int degree_ = 0;
    std::vector<std::array<int, 3>> exps_;
    std::vector<cplx> coef_;
};

} // namespace schottky
