#include "schottky/hierarchy.hpp"

#include "schottky/error.hpp"
#include "schottky/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> roots_of_unity(int N, double radius)
{
    std::vector<cplx> z(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
        z[static_cast<std::size_t>(j)] = std::polar(radius, 2.0 * kPi * j / N);
    return z;
}

// Cauchy coefficients c_0..c_K from samples f(rho e^{2 pi i j / N}).
std::vector<cplx> cauchy(const std::vector<cplx>& f, double rho, int K)
{
    const int N = static_cast<int>(f.size());
    std::vector<cplx> c(static_cast<std::size_t>(K) + 1, cplx(0.0));
    for (int k = 0; k <= K; ++k) {
        cplx s(0.0);
        for (int j = 0; j < N; ++j)
            s += f[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * kPi * (static_cast<double>(j) * k / N));
        c[static_cast<std::size_t>(k)] = s / (static_cast<double>(N) * std::pow(rho, k));
    }
    return c;
}

Eigen::VectorXcd bracket(int M, cplx alpha)
{
    Eigen::VectorXcd b(M);
    cplx p = 1.0;
    for (int m = 1; m <= M; ++m) {
        p *= alpha;
        b(m - 1) = p / static_cast<double>(m);
    }
    return b;
}

Eigen::VectorXcd unit(int M, int k)
{
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(M);
    e(k) = 1.0;
    return e;
}

void require_nonzero(const ExponentialSum& tau, const Eigen::VectorXcd& t)
{
    if (std::abs(tau.scaled(t).mantissa) <= 1e-12 * tau.magnitude(t))
        fail(ErrorKind::TauZeroOnGrid, "tau vanishes at the base time");
}

// w_1..w_K at t with a fixed circle; no refinement check.
std::vector<cplx> wave_fast(const ExponentialSum& tau, const Eigen::VectorXcd& t, int K, int N, double rho)
{
    const int M = tau.times();
    const ExponentialSum::Scaled base = tau.scaled(t);
    std::vector<cplx> f(static_cast<std::size_t>(N));
    const auto alphas = roots_of_unity(N, rho);
    for (int j = 0; j < N; ++j) {
        const ExponentialSum::Scaled s = tau.scaled(t - bracket(M, alphas[static_cast<std::size_t>(j)]));
        const cplx v = s.mantissa / base.mantissa * std::exp(s.log_scale - base.log_scale);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail(ErrorKind::RatioPoleOnCircle, "tau ratio not finite on the alpha circle");
        f[static_cast<std::size_t>(j)] = v;
    }
    std::vector<cplx> c = cauchy(f, rho, K);
    c.erase(c.begin());
    return c;
}

int winding(const std::vector<cplx>& f)
{
    double total = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        total += std::arg(f[(j + 1) % f.size()] / f[j]);
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double binom(int i, int l)
{
    double b = 1.0;
    for (int m = 0; m < l; ++m)
        b = b * (i - m) / (m + 1);
    return b;
}

using XJet = PseudoDiff::XJet;

XJet jet_mul(const XJet& a, const XJet& b)
{
    XJet out(a.size(), cplx(0.0));
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (a[p] == cplx(0.0))
            continue;
        for (std::size_t q = 0; p + q < a.size(); ++q)
            out[p + q] += a[p] * b[q];
    }
    return out;
}

XJet jet_diff(const XJet& a)
{
    XJet out(a.size(), cplx(0.0));
    for (std::size_t p = 0; p + 1 < a.size(); ++p)
        out[p] = a[p + 1] * static_cast<double>(p + 1);
    return out;
}

void jet_axpy(XJet& y, cplx s, const XJet& x)
{
    for (std::size_t p = 0; p < y.size(); ++p)
        y[p] += s * x[p];
}

} // namespace

double nearest_zero(const std::function<cplx(cplx)>& f, double r0, double r_max)
{
    if (!(r0 > 0.0) || !(r_max > r0))
        fail(ErrorKind::InvalidInput, "zero search needs 0 < r0 < r_max");
    double prev = r0 / 1.5;
    for (double r = r0; r <= r_max; r *= 1.5) {
        int N = 64;
        int w = 0;
        for (;;) {
            std::vector<cplx> v(static_cast<std::size_t>(N));
            bool hit = false;
            for (int j = 0; j < N; ++j) {
                v[static_cast<std::size_t>(j)] = f(std::polar(r, 2.0 * kPi * j / N));
                if (v[static_cast<std::size_t>(j)] == cplx(0.0))
                    hit = true;
            }
            if (hit)
                return prev;
            double worst = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j)
                worst = std::max(worst, std::abs(std::arg(v[(j + 1) % v.size()] / v[j])));
            if (worst < kPi / 2.0 || N >= 4096) {
                w = winding(v);
                break;
            }
            N *= 2;
        }
        if (w != 0)
            return prev;
        prev = r;
    }
    return r_max;
}

std::vector<cplx> wave_coefficients(const ExponentialSum& tau, const Eigen::VectorXcd& t, int K,
                                    const WavePolicy& policy)
{
    const int M = tau.times();
    if (K < 0 || K > M)
        fail(ErrorKind::InvalidInput, "wave coefficient order must lie in [0, M]");
    if (t.size() != M)
        fail(ErrorKind::InvalidInput, "time vector length differs from M");
    if (K == 0)
        return {};
    if (policy.alpha_points < 2 * K + 2)
        fail(ErrorKind::InvalidInput, "too few alpha sample points for the requested order");
    require_nonzero(tau, t);
    double rho = policy.alpha_radius;
    if (rho <= 0.0) {
        const double R = nearest_zero([&](cplx a) { return tau.ratio(t - bracket(M, a), t); }, 1e-3, 4.0);
        rho = std::min(1.0, 0.3 * R);
    }
    for (int attempt = 0;; ++attempt) {
        try {
            const std::vector<cplx> w1 = wave_fast(tau, t, K, policy.alpha_points, rho);
            const std::vector<cplx> w2 = wave_fast(tau, t, K, 2 * policy.alpha_points, rho);
            double scale = 1.0;
            for (int k = 0; k < K; ++k)
                scale = std::max(scale, std::abs(w2[static_cast<std::size_t>(k)]) * std::pow(rho, k + 1));
            for (int k = 0; k < K; ++k)
                if (std::abs(w1[static_cast<std::size_t>(k)] - w2[static_cast<std::size_t>(k)]) * std::pow(rho, k + 1) >
                    1e-10 * scale)
                    fail(ErrorKind::FourierNotConverged, "wave coefficients unstable under N -> 2N");
            return w2;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::RatioPoleOnCircle || attempt >= 4)
                throw;
            rho *= 0.5;
        }
    }
}

std::vector<cplx> wave_coefficients(const TauData& data, const Eigen::VectorXcd& t, int K, const WavePolicy& policy)
{
    return wave_coefficients(tau_sum(data, std::vector<Eigen::VectorXcd>{t}), t, K, policy);
}

PseudoDiff::PseudoDiff(int jet_degree, int min_order) : P_(jet_degree), min_order_(min_order)
{
    if (jet_degree < 0)
        fail(ErrorKind::InvalidInput, "jet degree must be >= 0");
}

XJet PseudoDiff::coeff(int o) const
{
    const auto it = terms_.find(o);
    return it == terms_.end() ? XJet(static_cast<std::size_t>(P_) + 1, cplx(0.0)) : it->second;
}

void PseudoDiff::set(int o, XJet c)
{
    if (c.size() != static_cast<std::size_t>(P_) + 1)
        fail(ErrorKind::InvalidInput, "coefficient jet has the wrong degree");
    if (o >= min_order_)
        terms_[o] = std::move(c);
}

cplx PseudoDiff::at_origin(int o) const
{
    const auto it = terms_.find(o);
    return it == terms_.end() ? cplx(0.0) : it->second[0];
}

PseudoDiff PseudoDiff::identity(int P, int min_order)
{
    PseudoDiff out(P, min_order);
    XJet one(static_cast<std::size_t>(P) + 1, cplx(0.0));
    one[0] = 1.0;
    out.set(0, one);
    return out;
}

PseudoDiff PseudoDiff::d(int P, int min_order)
{
    PseudoDiff out(P, min_order);
    XJet one(static_cast<std::size_t>(P) + 1, cplx(0.0));
    one[0] = 1.0;
    out.set(1, one);
    return out;
}

PseudoDiff PseudoDiff::operator+(const PseudoDiff& o) const
{
    PseudoDiff out = *this;
    for (const auto& [k, c] : o.terms_) {
        XJet cur = out.coeff(k);
        jet_axpy(cur, 1.0, c);
        out.set(k, cur);
    }
    return out;
}

PseudoDiff PseudoDiff::operator-(const PseudoDiff& o) const
{
    return *this + o * cplx(-1.0);
}

PseudoDiff PseudoDiff::operator*(cplx s) const
{
    PseudoDiff out = *this;
    for (auto& [k, c] : out.terms_)
        for (cplx& v : c)
            v *= s;
    return out;
}

PseudoDiff PseudoDiff::operator*(const PseudoDiff& o) const
{
    if (o.P_ != P_)
        fail(ErrorKind::InvalidInput, "operators with different jet degrees");
    const int lo = std::max(min_order_, o.min_order_);
    PseudoDiff out(P_, lo);
    std::map<int, XJet> acc;
    for (const auto& [i, a] : terms_) {
        for (const auto& [j, b] : o.terms_) {
            XJet db = b;
            for (int l = 0;; ++l) {
                const int ord = i + j - l;
                if (ord < lo)
                    break;
                if (i >= 0 && l > i)
                    break;
                const double bc = binom(i, l);
                auto it = acc.find(ord);
                if (it == acc.end())
                    it = acc.emplace(ord, XJet(static_cast<std::size_t>(P_) + 1, cplx(0.0))).first;
                jet_axpy(it->second, bc, jet_mul(a, db));
                db = jet_diff(db);
            }
        }
    }
    for (auto& [k, c] : acc)
        out.set(k, std::move(c));
    return out;
}

PseudoDiff PseudoDiff::plus_part() const
{
    PseudoDiff out(P_, min_order_);
    for (const auto& [k, c] : terms_)
        if (k >= 0)
            out.set(k, c);
    return out;
}

PseudoDiff PseudoDiff::inverse_unipotent() const
{
    const PseudoDiff N = *this - identity(P_, min_order_);
    for (const auto& [k, c] : N.terms_)
        if (k >= 0 && std::any_of(c.begin(), c.end(), [](cplx v) { return v != cplx(0.0); }))
            fail(ErrorKind::InvalidInput, "operator is not of the form 1 + lower order");
    const PseudoDiff minus_n = N * cplx(-1.0);
    PseudoDiff out = identity(P_, min_order_);
    PseudoDiff power = identity(P_, min_order_);
    for (int m = 1; m <= -min_order_; ++m) {
        power = power * minus_n;
        if (power.terms_.empty())
            break;
        out = out + power;
    }
    return out;
}

namespace {

struct Radii {
    double x = 0.0, alpha = 0.0;
};

// Taylor jets in x (degree P) of w_1..w_K at time t.
std::vector<XJet> wave_jets(const ExponentialSum& tau, const Eigen::VectorXcd& t, int K, int P, const HierarchyPolicy& pol,
                            const Radii& radii)
{
    const int M = tau.times();
    const int Nx = pol.x_points;
    const auto xs = roots_of_unity(Nx, radii.x);
    std::vector<std::vector<cplx>> w(static_cast<std::size_t>(Nx));
    std::vector<cplx> denom(static_cast<std::size_t>(Nx));
    parallel_for(static_cast<std::size_t>(Nx), [&](std::size_t j) {
        const Eigen::VectorXcd tx = t + xs[j] * unit(M, 0);
        denom[j] = tau.ratio(tx, t);
        w[j] = wave_fast(tau, tx, K, pol.wave.alpha_points, radii.alpha);
    });
    if (winding(denom) != 0)
        fail(ErrorKind::RatioPoleOnCircle, "tau has a zero inside the x sampling disc");
    std::vector<XJet> jets(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        std::vector<cplx> f(static_cast<std::size_t>(Nx));
        for (int j = 0; j < Nx; ++j)
            f[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        jets[static_cast<std::size_t>(k)] = cauchy(f, radii.x, P);
    }
    return jets;
}

PseudoDiff lax_operator(const std::vector<XJet>& w, int D, int P, int min_order)
{
    PseudoDiff W = PseudoDiff::identity(P, min_order);
    for (int k = 1; k <= D; ++k)
        W.set(-k, w[static_cast<std::size_t>(k - 1)]);
    return W * PseudoDiff::d(P, min_order) * W.inverse_unipotent();
}

PseudoDiff power(const PseudoDiff& L, int n)
{
    PseudoDiff out = L;
    for (int m = 1; m < n; ++m)
        out = out * L;
    return out;
}

} // namespace

std::vector<HierarchyReport> hierarchy_check(const ExponentialSum& tau, const Eigen::VectorXcd& t,
                                             const std::vector<int>& orders, const HierarchyPolicy& pol)
{
    const int M = tau.times();
    const int D = pol.depth, Dmax = pol.depth + 2;
    if (D < 1)
        fail(ErrorKind::InvalidInput, "hierarchy depth must be >= 1");
    if (M < Dmax)
        fail(ErrorKind::InvalidInput, "hierarchy check needs at least depth + 2 times");
    if (t.size() != M)
        fail(ErrorKind::InvalidInput, "time vector length differs from M");
    int nmax = 1;
    for (int n : orders) {
        if (n < 1 || n > M)
            fail(ErrorKind::InvalidInput, "hierarchy order must lie in [1, M]");
        nmax = std::max(nmax, n);
    }
    const int P = Dmax + 2 * nmax + 4;
    if (pol.x_points < 2 * P + 2 || pol.s_points < 4)
        fail(ErrorKind::InvalidInput, "too few sample points for the requested depth");
    require_nonzero(tau, t);

    auto ratio_along = [&](const Eigen::VectorXcd& dir) {
        return [&tau, &t, dir](cplx s) { return tau.ratio(t + s * dir, t); };
    };
    const double Rx = nearest_zero(ratio_along(unit(M, 0)), 1e-3, 4.0);
    const double Ra = nearest_zero([&](cplx a) { return tau.ratio(t - bracket(M, a), t); }, 1e-3, 4.0);
    Radii radii;
    radii.x = std::min(1.0, 0.35 * Rx);
    radii.alpha = pol.wave.alpha_radius > 0.0 ? pol.wave.alpha_radius : std::min(1.0, 0.3 * std::min(Ra, Rx));

    const int min_order = -(Dmax + nmax + 2);
    const std::vector<XJet> w0 = wave_jets(tau, t, Dmax, P, pol, radii);

    std::vector<HierarchyReport> out;
    for (int n : orders) {
        const double Rs = nearest_zero(ratio_along(unit(M, n - 1)), 1e-3, 4.0);
        const double rho_s = std::min(0.5, 0.2 * Rs);
        const auto ss = roots_of_unity(pol.s_points, rho_s);
        std::vector<std::vector<XJet>> ws;
        for (cplx s : ss)
            ws.push_back(wave_jets(tau, t + s * unit(M, n - 1), Dmax, P, pol, radii));

        auto residual_at = [&](int depth, double& abs_res) {
            const int lowest = -(depth - 1 - n);
            const PseudoDiff L0 = lax_operator(w0, depth, P, min_order);
            const PseudoDiff B = power(L0, n).plus_part();
            const PseudoDiff comm = B * L0 - L0 * B;
            std::vector<PseudoDiff> Ls;
            for (const auto& wj : ws)
                Ls.push_back(lax_operator(wj, depth, P, min_order));
            double worst = 0.0, scale = 0.0;
            for (int o = n - 1; o >= lowest; --o) {
                cplx dl(0.0);
                for (std::size_t j = 0; j < ss.size(); ++j)
                    dl += Ls[j].at_origin(o) / ss[j];
                dl /= static_cast<double>(ss.size());
                const cplx cm = comm.at_origin(o);
                worst = std::max(worst, std::abs(dl - cm));
                scale = std::max({scale, std::abs(dl), std::abs(cm)});
            }
            abs_res = worst;
            return scale > 0.0 ? worst / scale : 0.0;
        };

        HierarchyReport rep;
        rep.n = n;
        rep.depth = D;
        rep.lowest_order = -(D - 1 - n);
        rep.rho_x = radii.x;
        rep.rho_s = rho_s;
        rep.rho_alpha = radii.alpha;
        double abs_deep = 0.0;
        rep.residual = residual_at(D, rep.abs_residual);
        rep.residual_deeper = residual_at(Dmax, abs_deep);
        if (rep.residual > pol.tol && rep.residual_deeper <= pol.tol)
            fail(ErrorKind::TruncationTooShallow, "hierarchy residual is dominated by the depth truncation");
        out.push_back(rep);
    }
    return out;
}

std::vector<HierarchyReport> hierarchy_check(const TauData& data, const Eigen::VectorXcd& t,
                                             const std::vector<int>& orders, const HierarchyPolicy& policy)
{
    // Complex sample times stay within distance ~2 of t; cover that box in the lattice radius.
    std::vector<Eigen::VectorXcd> ts{t};
    for (int m = 0; m < data.times(); ++m)
        for (double s : {-2.0, 2.0}) {
            Eigen::VectorXcd tt = t;
            tt(m) += s;
            ts.push_back(tt);
        }
    return hierarchy_check(tau_sum(data, ts), t, orders, policy);
}

} // namespace schottky
