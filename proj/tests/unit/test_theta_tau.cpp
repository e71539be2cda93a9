#include "schottky/error.hpp"
#include "schottky/hierarchy.hpp"
#include "schottky/tau.hpp"
#include "schottky/theta.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace schottky;

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd random_period_matrix(int g, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::MatrixXd X(g, g), A(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            X(i, j) = u(rng);
            A(i, j) = u(rng);
        }
    X = 0.5 * (X + X.transpose()).eval();
    const Eigen::MatrixXd Y = A * A.transpose() + 0.8 * Eigen::MatrixXd::Identity(g, g);
    return X.cast<cplx>() + kI * Y.cast<cplx>();
}

Eigen::VectorXcd vec(std::initializer_list<cplx> xs)
{
    Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (cplx x : xs)
        v(i++) = x;
    return v;
}

Eigen::VectorXcd times(int M, std::initializer_list<double> xs)
{
    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(M);
    int i = 0;
    for (double x : xs)
        t(i++) = x;
    return t;
}

const CurveTau& genus_one(int M)
{
    static std::map<int, CurveTau> cache;
    auto it = cache.find(M);
    if (it == cache.end())
        it = cache.emplace(M, curve_tau(mcurve_params(1, 1, 2.0, 0.01), M, Characteristic::zero(1))).first;
    return it->second;
}

const CurveTau& genus_two()
{
    static const CurveTau ct = curve_tau(mcurve_params(2, 1, 2.0, 0.01), 3, Characteristic::zero(2));
    return ct;
}

// 1 + exp(a + xi(p) - xi(q)) with xi(k) = sum k^m t_m.
ExponentialSum one_soliton(int M, double p, double q, double a)
{
    ExponentialSum es(M);
    Eigen::VectorXcd K(M);
    for (int m = 1; m <= M; ++m)
        K(m - 1) = std::pow(p, m) - std::pow(q, m);
    es.add_term(0.0, Eigen::VectorXcd::Zero(M));
    es.add_term(a, K);
    return es;
}

} // namespace

TEST(Theta, GenusOneScalarOracle)
{
    Eigen::MatrixXcd Z(1, 1);
    Z(0, 0) = std::log(0.01) / (2.0 * kPi * kI);
    long double expect = 0.0L;
    for (int n = -4; n <= 4; ++n)
        expect += std::pow(0.1L, n * n);
    const cplx th = theta(Z, vec({0.0}), 4);
    EXPECT_NEAR(th.real(), static_cast<double>(expect), 1e-15);
    EXPECT_NEAR(th.imag(), 0.0, 1e-15);
    EXPECT_NEAR(th.real(), 1.2002, 1e-4);
}

TEST(Theta, Evenness)
{
    const Eigen::MatrixXcd Z = random_period_matrix(2, 7);
    const Eigen::VectorXcd z = vec({{0.4, -0.3}, {-0.2, 0.9}});
    const cplx a = theta(Z, z), b = theta(Z, Eigen::VectorXcd(-z));
    EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));
}

TEST(Theta, IntegerShiftInvisible)
{
    const Eigen::MatrixXcd Z = random_period_matrix(2, 11);
    const Eigen::VectorXcd z = vec({{0.1, 0.2}, {-0.3, 0.05}});
    const cplx base = theta(Z, z);
    for (int k = 0; k < 2; ++k) {
        Eigen::VectorXcd zs = z;
        zs(k) += 2.0 * kPi * kI;
        EXPECT_LT(std::abs(theta(Z, zs) - base), 1e-12 * std::abs(base));
    }
}

TEST(Theta, QuasiPeriodicity)
{
    const Eigen::MatrixXcd Z = random_period_matrix(2, 3);
    const Eigen::VectorXcd z = vec({{0.3, -0.1}, {0.2, 0.4}});
    const cplx base = theta(Z, z);
    for (int k = 0; k < 2; ++k) {
        const Eigen::VectorXcd zs = z + 2.0 * kPi * kI * Z.col(k);
        const cplx expect = std::exp(-kPi * kI * Z(k, k) - z(k)) * base;
        EXPECT_LT(std::abs(theta(Z, zs) - expect), 1e-9 * std::abs(expect));
    }
}

TEST(Theta, AutomaticRadiusMatchesLargeBox)
{
    const Eigen::MatrixXcd Z = random_period_matrix(3, 5);
    const Eigen::VectorXcd z = vec({0.5, {-0.2, 0.3}, 1.1});
    const cplx ref = theta(Z, z, 12);
    EXPECT_LT(std::abs(theta(Z, z) - ref), 1e-13 * std::abs(ref));
}

TEST(Theta, RejectsIndefiniteImaginaryPart)
{
    Eigen::MatrixXcd Z(2, 2);
    Z << cplx(0, 1), cplx(0, 2), cplx(0, 2), cplx(0, 1);
    try {
        (void)theta(Z, vec({0.0, 0.0}));
        FAIL() << "expected InvalidInput";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(ThetaDerivative, OrderZeroIsTheta)
{
    const Eigen::MatrixXcd Z = random_period_matrix(2, 9);
    const Eigen::VectorXcd z = vec({0.2, -0.7});
    const cplx a = theta_directional_derivative(Z, z, {vec({1.0, 0.5})}, {0}, 8);
    EXPECT_LT(std::abs(a - theta(Z, z, 8)), 1e-15 * std::abs(a));
}

TEST(ThetaDerivative, OddOrderVanishesAtOrigin)
{
    Eigen::MatrixXcd Z(1, 1);
    Z(0, 0) = cplx(0.1, 0.9);
    EXPECT_LT(std::abs(theta_directional_derivative(Z, vec({0.0}), {vec({1.0})}, {1}, 6)), 1e-15);
    EXPECT_LT(std::abs(theta_directional_derivative(Z, vec({0.0}), {vec({1.0})}, {3}, 6)), 1e-14);
}

TEST(ThetaDerivative, SecondOrderMatchesFiniteDifference)
{
    const Eigen::MatrixXcd Z = random_period_matrix(2, 13);
    const Eigen::VectorXcd z = vec({{0.3, 0.1}, -0.4});
    const Eigen::VectorXcd d1 = vec({1.0, -0.6}), d2 = vec({0.2, 0.9});
    const double h = 1e-4;
    const int R = 10;
    auto th = [&](double a, double b) { return theta(Z, Eigen::VectorXcd(z + a * d1 + b * d2), R); };
    const cplx fd = (th(h, h) - th(h, -h) - th(-h, h) + th(-h, -h)) / (4.0 * h * h);
    const cplx exact = theta_directional_derivative(Z, z, {d1, d2}, {1, 1}, R);
    EXPECT_LT(std::abs(fd - exact), 1e-6 * std::abs(exact));
    const cplx fd2 = (th(h, 0) - 2.0 * th(0, 0) + th(-h, 0)) / (h * h);
    const cplx exact2 = theta_directional_derivative(Z, z, {d1}, {2}, R);
    EXPECT_LT(std::abs(fd2 - exact2), 1e-6 * std::abs(exact2));
}

TEST(Characteristic, ZeroGivesZeroShift)
{
    const Eigen::MatrixXcd Z = random_period_matrix(2, 1);
    EXPECT_EQ(Characteristic::zero(2).c(Z).norm(), 0.0);
    Characteristic chi{vec({0.5, 0.0}), Eigen::Vector2d(0.0, 1.0)};
    const Eigen::VectorXcd c = chi.c(Z);
    EXPECT_LT(std::abs(c(0) - 2.0 * kPi * kI * (0.5 + Z(0, 1))), 1e-14);
}

TEST(Tau, AtZeroIsThetaOfC)
{
    const TauData& d = genus_two().tau;
    const cplx t0 = tau(d, Eigen::VectorXcd::Zero(3));
    const cplx th = theta(d.Z, d.c);
    EXPECT_LT(std::abs(t0 - th), 1e-14 * std::abs(th));
}

TEST(Tau, QuadraticFactorIdentity)
{
    TauData d = genus_two().tau;
    d.c = vec({0.2, -0.1});
    const Eigen::VectorXcd t = times(3, {0.3, -0.5, 0.7});
    const Eigen::VectorXcd rt = d.r * t;
    const cplx lhs = tau(d, t) * tau(d, Eigen::VectorXcd(-t)) /
                     (theta(d.Z, Eigen::VectorXcd(d.c + rt)) * theta(d.Z, Eigen::VectorXcd(d.c - rt)));
    const cplx rhs = std::exp((t.transpose() * d.q * t)(0, 0));
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
}

TEST(Tau, LatticeSumMatchesDirectEvaluation)
{
    const TauData& d = genus_two().tau;
    const std::vector<Eigen::VectorXcd> ts{times(3, {0.5, 0.2, -0.3}), times(3, {-1.0, 1.0, 1.0})};
    const ExponentialSum es = tau_sum(d, ts);
    for (const auto& t : ts) {
        const cplx a = tau(d, t);
        EXPECT_LT(std::abs(es(t) - a), 1e-12 * std::abs(a));
    }
}

TEST(Tau, RealOnMcurveGenusOne)
{
    const TauData& d = genus_one(3).tau;
    for (double x : {-1.0, 0.0, 0.37, 2.0}) {
        const cplx v = tau(d, times(3, {x, -0.4, 0.8}));
        EXPECT_LT(std::abs(v.imag()), 1e-9 * std::abs(v));
    }
}

TEST(Tau, ValidateFlagsVanishingTheta)
{
    // Theta vanishes at the odd half period pi i (1 + Z).
    TauData d = genus_one(3).tau;
    d.c = vec({kPi * kI * (1.0 + d.Z(0, 0))});
    try {
        d.validate();
        FAIL() << "expected ThetaZero";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ThetaZero);
    }
}

TEST(U1, ZeroFirstFlowGivesConstant)
{
    TauData d = genus_two().tau;
    d.r.col(0).setZero();
    for (double x : {-0.5, 0.0, 0.9})
        EXPECT_LT(std::abs(u1(d, x, 0.3, -0.2) - d.q(0, 0)), 1e-15);
}

TEST(U1, TranslationCovariance)
{
    const TauData& d = genus_two().tau;
    const double delta = 0.37;
    TauData shifted = d;
    shifted.c = d.c + delta * d.r.col(0);
    const cplx a = u1(d, 0.2 + delta, -0.1, 0.4);
    const cplx b = u1(shifted, 0.2, -0.1, 0.4);
    EXPECT_LT(std::abs(a - b), 1e-10 * std::abs(a));
}

TEST(U1, RealForMcurveAndMatchesResidualGrid)
{
    const TauData& d = genus_one(3).tau;
    KpGrid grid;
    grid.nx = 3;
    grid.n2 = 2;
    grid.n3 = 2;
    const KpReport rep = kp_residual(d, grid);
    for (const KpPoint& p : rep.points) {
        const cplx u = u1(d, p.x, p.t2, p.t3);
        EXPECT_LT(std::abs(u.imag()), 1e-9 * std::abs(u));
        EXPECT_LT(std::abs(u - p.u), 1e-9 * std::abs(u));
    }
}

TEST(KpResidual, ConstantSolutionIsExact)
{
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(3, 3);
    Q(0, 0) = 0.7;
    const ExponentialSum es(Q, {{0.0, Eigen::VectorXcd::Zero(3)}});
    const KpReport rep = kp_residual(es, KpGrid{});
    EXPECT_EQ(rep.max_abs_residual, 0.0);
    for (const KpPoint& p : rep.points)
        EXPECT_NEAR(p.u.real(), 0.7, 1e-15);
}

TEST(KpResidual, GenusOneAtFloor)
{
    const KpReport rep = kp_residual(genus_one(3).tau, KpGrid{});
    EXPECT_EQ(rep.points.size(), 125u);
    EXPECT_LT(rep.max_residual, 1e-8);
    EXPECT_LE(rep.rms_residual, rep.max_residual);
}

TEST(KpResidual, GenusTwoAtFloor)
{
    EXPECT_LT(kp_residual(genus_two().tau, KpGrid{}).max_residual, 1e-6);
}

TEST(KpResidual, ShiftedQ11LeavesFloor)
{
    TauData d = genus_two().tau;
    const double floor = kp_residual(d, KpGrid{}).max_residual;
    d.q(0, 0) += 0.1;
    const double off = kp_residual(d, KpGrid{}).max_residual;
    EXPECT_GT(off, 1e4 * floor);
    EXPECT_GT(off, 1e-4);
}

TEST(KpResidual, TwoSolitonExact)
{
    const int M = 3;
    ExponentialSum es(M);
    const double p1 = 0.6, q1 = -0.3, p2 = 0.2, q2 = 0.9;
    auto K = [&](double p, double q) {
        Eigen::VectorXcd k(M);
        for (int m = 1; m <= M; ++m)
            k(m - 1) = std::pow(p, m) - std::pow(q, m);
        return k;
    };
    const double A = (p1 - p2) * (q1 - q2) / ((p1 - q2) * (q1 - p2));
    es.add_term(0.0, Eigen::VectorXcd::Zero(M));
    es.add_term(0.1, K(p1, q1));
    es.add_term(-0.2, K(p2, q2));
    es.add_term(0.1 - 0.2 + std::log(A), Eigen::VectorXcd(K(p1, q1) + K(p2, q2)));
    EXPECT_LT(kp_residual(es, KpGrid{}).max_residual, 1e-12);
}

TEST(Reality, GenusTwoMcurve)
{
    const TauData& d = genus_two().tau;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<Eigen::VectorXcd> ts;
    for (int n = 0; n < 20; ++n)
        ts.push_back(times(3, {u(rng), u(rng), u(rng)}));
    const RealityReport rep = reality_check(d, ts);
    EXPECT_LT(rep.max_rel_imag_tau, 1e-8);
    EXPECT_LT(rep.max_rel_imag_period, 1e-7);
    EXPECT_TRUE(rep.half_periods_in_unit_interval);
    ASSERT_EQ(rep.half_periods.size(), 2u);
}

TEST(Reality, ComplexDataFlagged)
{
    TauData d = genus_two().tau;
    d.Z(0, 1) += cplx(0.13, 0.0);
    d.Z(1, 0) = d.Z(0, 1);
    d.c = vec({{0.0, 0.7}, 0.2});
    const RealityReport rep = reality_check(d, {times(3, {0.4, 0.1, -0.2})});
    EXPECT_GT(rep.max_rel_imag_tau, 1e-3);
    EXPECT_GT(rep.max_rel_imag_period, 1e-3);
}

TEST(Wave, ConstantTauGivesZero)
{
    const ExponentialSum es(Eigen::MatrixXcd::Zero(4, 4), {{0.3, Eigen::VectorXcd::Zero(4)}});
    for (cplx w : wave_coefficients(es, times(4, {0.5}), 4))
        EXPECT_LT(std::abs(w), 1e-15);
}

TEST(Wave, PureExponential)
{
    const int M = 6;
    const double a = 0.8;
    const ExponentialSum es(Eigen::MatrixXcd::Zero(M, M), {{0.0, times(M, {a})}});
    const std::vector<cplx> w = wave_coefficients(es, times(M, {0.2, -0.3}), 5);
    double fact = 1.0;
    for (int k = 1; k <= 5; ++k) {
        fact *= k;
        EXPECT_LT(std::abs(w[k - 1] - std::pow(-a, k) / fact), 1e-13) << "k=" << k;
    }
}

TEST(Wave, FirstCoefficientIsLogDerivative)
{
    const TauData& d = genus_one(4).tau;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-4;
    for (int n = 0; n < 4; ++n) {
        const Eigen::VectorXcd t = times(4, {u(rng), u(rng), u(rng), u(rng)});
        Eigen::VectorXcd tp = t, tm = t;
        tp(0) += h;
        tm(0) -= h;
        const cplx dlog = (std::log(tau(d, tp)) - std::log(tau(d, tm))) / (2.0 * h);
        const cplx w1 = wave_coefficients(d, t, 3)[0];
        EXPECT_LT(std::abs(w1 + dlog), 1e-6 * std::max(1.0, std::abs(dlog)));
    }
}

TEST(Wave, RejectsTooFewTimes)
{
    const ExponentialSum es(Eigen::MatrixXcd::Zero(2, 2), {{0.0, times(2, {1.0})}});
    EXPECT_THROW((void)wave_coefficients(es, times(2, {}), 3), Error);
}

TEST(PseudoDiffOps, InverseOfUnipotent)
{
    const int P = 6, lo = -8;
    PseudoDiff W = PseudoDiff::identity(P, lo);
    PseudoDiff::XJet a(P + 1), b(P + 1);
    for (int i = 0; i <= P; ++i) {
        a[i] = 0.3 / (i + 1);
        b[i] = cplx(-0.1, 0.05 * i);
    }
    W.set(-1, a);
    W.set(-2, b);
    const PseudoDiff E = W * W.inverse_unipotent() - PseudoDiff::identity(P, lo);
    for (const auto& [o, c] : E.terms())
        for (int i = 0; i <= P - (o < 0 ? -o : 0) - 2; ++i)
            EXPECT_LT(std::abs(c[i]), 1e-13) << "order " << o << " x^" << i;
}

TEST(PseudoDiffOps, CommutatorWithD)
{
    // [d, f] = f' for a multiplication operator f.
    const int P = 5;
    PseudoDiff f(P, -4);
    PseudoDiff::XJet c(P + 1);
    for (int i = 0; i <= P; ++i)
        c[i] = 1.0 / (i + 2.0);
    f.set(0, c);
    const PseudoDiff D = PseudoDiff::d(P, -4);
    const PseudoDiff comm = D * f - f * D;
    const PseudoDiff::XJet got = comm.coeff(0);
    for (int i = 0; i < P; ++i)
        EXPECT_LT(std::abs(got[i] - (i + 1.0) * c[i + 1]), 1e-15);
    EXPECT_LT(std::abs(comm.at_origin(1)), 1e-15);
}

TEST(Hierarchy, TrivialTau)
{
    const ExponentialSum es(Eigen::MatrixXcd::Zero(8, 8), {{0.0, Eigen::VectorXcd::Zero(8)}});
    for (const HierarchyReport& r : hierarchy_check(es, times(8, {0.1}), {2, 3}))
        EXPECT_LT(r.abs_residual, 1e-15);
}

TEST(Hierarchy, OneSoliton)
{
    const ExponentialSum es = one_soliton(10, 0.25, 0.5, 0.3);
    const auto reps = hierarchy_check(es, times(10, {0.2, -0.1}), {2, 3});
    ASSERT_EQ(reps.size(), 2u);
    for (const HierarchyReport& r : reps) {
        EXPECT_LT(r.residual, 1e-6) << "n=" << r.n;
        EXPECT_LT(r.residual_deeper, 1e-6) << "n=" << r.n;
        EXPECT_EQ(r.depth, 6);
    }
}

TEST(Hierarchy, GenusOne)
{
    const auto reps = hierarchy_check(genus_one(8).tau, times(8, {0.3}), {2, 3});
    for (const HierarchyReport& r : reps) {
        EXPECT_LT(r.residual, 1e-5) << "n=" << r.n;
        EXPECT_LT(r.residual_deeper, 1e-5) << "n=" << r.n;
    }
}

TEST(Hierarchy, NonSolutionFails)
{
    // Flows not of the form p^m - q^m.
    const int M = 10;
    ExponentialSum es(M);
    es.add_term(0.0, Eigen::VectorXcd::Zero(M));
    Eigen::VectorXcd K = Eigen::VectorXcd::Zero(M);
    K(0) = 0.5;
    K(1) = 0.4;
    K(2) = -0.3;
    es.add_term(0.2, K);
    const auto reps = hierarchy_check(es, times(M, {0.1}), {2, 3});
    for (const HierarchyReport& r : reps)
        EXPECT_GT(r.residual, 1e-3) << "n=" << r.n;
}
