#include "schottky/expsum.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace schottky {

ExponentialSum::ExponentialSum(int M) : Q_(Eigen::MatrixXcd::Zero(M, M)) {}

ExponentialSum::ExponentialSum(Eigen::MatrixXcd Q, std::vector<Term> terms) : terms_(std::move(terms))
{
    if (Q.rows() != Q.cols())
        fail(ErrorKind::InvalidInput, "quadratic form must be square");
    Q_ = 0.5 * (Q + Q.transpose()); // only the symmetric part enters t^T Q t
    for (const Term& t : terms_)
        if (t.K.size() != Q_.rows())
            fail(ErrorKind::InvalidInput, "exponent vector length differs from the number of times");
}

void ExponentialSum::add_term(cplx logc, Eigen::VectorXcd K)
{
    if (K.size() != Q_.rows())
        fail(ErrorKind::InvalidInput, "exponent vector length differs from the number of times");
    terms_.push_back({logc, std::move(K)});
}

void ExponentialSum::append(const ExponentialSum& other)
{
    if (other.Q_.rows() != Q_.rows() || (other.Q_ - Q_).cwiseAbs().maxCoeff() > 0.0)
        fail(ErrorKind::InvalidInput, "appended sum has a different quadratic form");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

void ExponentialSum::multiply_exp(cplx a, const Eigen::VectorXcd& b)
{
    if (b.size() != Q_.rows())
        fail(ErrorKind::InvalidInput, "exponent vector length differs from the number of times");
    for (Term& t : terms_) {
        t.logc += a;
        t.K += b;
    }
}

ExponentialSum::Scaled ExponentialSum::scaled(const Eigen::VectorXcd& t) const
{
    if (t.size() != Q_.rows())
        fail(ErrorKind::InvalidInput, "time vector length differs from the number of times");
    const cplx quad = 0.5 * (t.transpose() * Q_ * t)(0, 0);
    std::vector<cplx> e(terms_.size());
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        e[n] = terms_[n].logc + (terms_[n].K.transpose() * t)(0, 0);
        emax = std::max(emax, e[n].real());
    }
    Scaled out{cplx(0.0), 0.0};
    if (terms_.empty())
        return out;
    for (const cplx& x : e)
        out.mantissa += std::exp(x - emax);
    out.mantissa *= std::exp(cplx(0.0, quad.imag()));
    out.log_scale = emax + quad.real();
    return out;
}

cplx ExponentialSum::ratio(const Eigen::VectorXcd& t1, const Eigen::VectorXcd& t2) const
{
    const Scaled a = scaled(t1), b = scaled(t2);
    return a.mantissa / b.mantissa * std::exp(a.log_scale - b.log_scale);
}

double ExponentialSum::magnitude(const Eigen::VectorXcd& t) const
{
    double emax = -std::numeric_limits<double>::infinity();
    std::vector<double> re(terms_.size());
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        re[n] = (terms_[n].logc + (terms_[n].K.transpose() * t)(0, 0)).real();
        emax = std::max(emax, re[n]);
    }
    double s = 0.0;
    for (double r : re)
        s += std::exp(r - emax);
    return s; // relative to the largest term
}

Jet ExponentialSum::log_jet(const Eigen::VectorXcd& t0, const std::vector<Eigen::VectorXcd>& dirs, int degree) const
{
    const int nv = static_cast<int>(dirs.size());
    if (nv < 1 || nv > 3)
        fail(ErrorKind::InvalidInput, "log jet needs 1..3 directions");
    for (const auto& d : dirs)
        if (d.size() != Q_.rows())
            fail(ErrorKind::InvalidInput, "direction length differs from the number of times");
    if (terms_.empty())
        fail(ErrorKind::TauZeroOnGrid, "tau is identically zero");

    std::vector<cplx> e(terms_.size());
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        e[n] = terms_[n].logc + (terms_[n].K.transpose() * t0)(0, 0);
        emax = std::max(emax, e[n].real());
    }

    Jet sum(nv, degree);
    double abs_sum = 0.0;
    std::vector<cplx> pw0(static_cast<std::size_t>(degree) + 1), pw1(pw0.size()), pw2(pw0.size());
    std::vector<double> inv_fact(pw0.size());
    inv_fact[0] = 1.0;
    for (int k = 1; k <= degree; ++k)
        inv_fact[static_cast<std::size_t>(k)] = inv_fact[static_cast<std::size_t>(k - 1)] / k;
    for (std::size_t n = 0; n < terms_.size(); ++n) {
        const cplx w = std::exp(e[n] - emax);
        abs_sum += std::abs(w);
        std::array<cplx, 3> a{0.0, 0.0, 0.0};
        for (int k = 0; k < nv; ++k)
            a[static_cast<std::size_t>(k)] = (terms_[n].K.transpose() * dirs[static_cast<std::size_t>(k)])(0, 0);
        pw0[0] = pw1[0] = pw2[0] = 1.0;
        for (int k = 1; k <= degree; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            pw0[uk] = pw0[uk - 1] * a[0];
            pw1[uk] = pw1[uk - 1] * a[1];
            pw2[uk] = pw2[uk - 1] * a[2];
        }
        for (std::size_t idx = 0; idx < sum.size(); ++idx) {
            const auto& ex = sum.exponent(idx);
            const auto i = static_cast<std::size_t>(ex[0]), j = static_cast<std::size_t>(ex[1]),
                       k = static_cast<std::size_t>(ex[2]);
            sum[idx] += w * pw0[i] * pw1[j] * pw2[k] * (inv_fact[i] * inv_fact[j] * inv_fact[k]);
        }
    }
    if (std::abs(sum[0]) <= 1e-12 * abs_sum)
        fail(ErrorKind::TauZeroOnGrid, "tau vanishes to working precision at a grid point");

    Jet out = sum.log();
    out[0] += emax;
    // Quadratic part: 1/2 (t0 + D s)^T Q (t0 + D s).
    const Eigen::VectorXcd Qt0 = Q_ * t0;
    out[0] += 0.5 * (t0.transpose() * Qt0)(0, 0);
    if (degree >= 1) {
        for (int k = 0; k < nv; ++k) {
            int ex[3] = {0, 0, 0};
            ex[k] = 1;
            const cplx lin = (dirs[static_cast<std::size_t>(k)].transpose() * Qt0)(0, 0);
            out.set(ex[0], ex[1], ex[2], out.coeff(ex[0], ex[1], ex[2]) + lin);
        }
    }
    if (degree >= 2) {
        for (int k = 0; k < nv; ++k)
            for (int l = k; l < nv; ++l) {
                int ex[3] = {0, 0, 0};
                ++ex[k];
                ++ex[l];
                const cplx qkl = (dirs[static_cast<std::size_t>(k)].transpose() * Q_ * dirs[static_cast<std::size_t>(l)])(0, 0);
                const cplx c = k == l ? 0.5 * qkl : qkl;
                out.set(ex[0], ex[1], ex[2], out.coeff(ex[0], ex[1], ex[2]) + c);
            }
    }
    return out;
}

} // namespace schottky
