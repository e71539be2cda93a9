#include "schottky/jet.hpp"

#include "schottky/error.hpp"

namespace schottky {

namespace {

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace

Jet::Jet(int nvars, int degree) : nvars_(nvars), degree_(degree)
{
    if (nvars < 1 || nvars > 3 || degree < 0)
        fail(ErrorKind::InvalidInput, "jet needs 1..3 variables and degree >= 0");
    // Graded order: total degree first, then lexicographic.
    for (int d = 0; d <= degree; ++d)
        for (int i = d; i >= 0; --i)
            for (int j = d - i; j >= 0; --j) {
                const int k = d - i - j;
                if ((nvars < 2 && j != 0) || (nvars < 3 && k != 0))
                    continue;
                exps_.push_back({i, j, k});
            }
    coef_.assign(exps_.size(), cplx(0.0));
}

std::size_t Jet::index(int i, int j, int k) const
{
    const int d = i + j + k;
    if (i < 0 || j < 0 || k < 0 || d > degree_ || (nvars_ < 2 && j) || (nvars_ < 3 && k))
        fail(ErrorKind::IndexOutOfRange, "jet exponent out of range");
    // Offset of degree d block plus position inside it.
    std::size_t off = 0;
    for (int e = 0; e < d; ++e)
        off += nvars_ == 1 ? 1 : nvars_ == 2 ? static_cast<std::size_t>(e + 1)
                                             : static_cast<std::size_t>((e + 1) * (e + 2) / 2);
    if (nvars_ == 1)
        return off;
    if (nvars_ == 2)
        return off + static_cast<std::size_t>(d - i);
    // i runs from d down; each i contributes (d - i + 1) entries.
    const int skip_i = d - i;
    return off + static_cast<std::size_t>(skip_i * (skip_i + 1) / 2 + (d - i - j));
}

cplx Jet::coeff(int i, int j, int k) const
{
    return coef_[index(i, j, k)];
}

void Jet::set(int i, int j, int k, cplx v)
{
    coef_[index(i, j, k)] = v;
}

cplx Jet::partial(int i, int j, int k) const
{
    return coeff(i, j, k) * (factorial(i) * factorial(j) * factorial(k));
}

Jet& Jet::operator+=(const Jet& o)
{
    if (o.nvars_ != nvars_ || o.degree_ != degree_)
        fail(ErrorKind::InvalidInput, "jet shape mismatch");
    for (std::size_t n = 0; n < coef_.size(); ++n)
        coef_[n] += o.coef_[n];
    return *this;
}

Jet& Jet::operator*=(cplx s)
{
    for (cplx& c : coef_)
        c *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b)
{
    if (a.nvars_ != b.nvars_ || a.degree_ != b.degree_)
        fail(ErrorKind::InvalidInput, "jet shape mismatch");
    Jet out(a.nvars_, a.degree_);
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (a.coef_[p] == cplx(0.0))
            continue;
        const auto& ea = a.exps_[p];
        const int da = ea[0] + ea[1] + ea[2];
        for (std::size_t q = 0; q < b.size(); ++q) {
            const auto& eb = b.exps_[q];
            if (da + eb[0] + eb[1] + eb[2] > a.degree_)
                break; // graded order: later entries have higher degree
            out.coef_[out.index(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])] += a.coef_[p] * b.coef_[q];
        }
    }
    return out;
}

Jet Jet::log() const
{
    const cplx c0 = coef_[0];
    if (c0 == cplx(0.0))
        fail(ErrorKind::InvalidInput, "log of a jet with zero constant term");
    // log(c0 (1 + g)) = log c0 + sum (-1)^{n+1} g^n / n, g has no constant term.
    Jet g = *this;
    g *= 1.0 / c0;
    g.coef_[0] = 0.0;
    Jet out(nvars_, degree_);
    Jet power = g;
    for (int n = 1; n <= degree_; ++n) {
        Jet term = power;
        term *= ((n % 2 == 1) ? 1.0 : -1.0) / n;
        out += term;
        if (n < degree_)
            power = power * g;
    }
    out.coef_[0] = std::log(c0);
    return out;
}

} // namespace schottky
