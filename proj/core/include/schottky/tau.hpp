#pragma once

#include "schottky/differentials.hpp"
#include "schottky/expsum.hpp"
#include "schottky/graph.hpp"
#include "schottky/periods.hpp"
#include "schottky/theta.hpp"

#include <Eigen/Dense>

#include <vector>

namespace schottky {

/// tau(t) = exp(1/2 t^T q t) Theta(c + r t).
struct TauData {
    Eigen::MatrixXcd Z; // g x g
    Eigen::VectorXcd c; // g
    Eigen::MatrixXcd r; // g x M
    Eigen::MatrixXcd q; // M x M
    ThetaPolicy theta;

    int genus() const noexcept { return static_cast<int>(Z.rows()); }
    int times() const noexcept { return static_cast<int>(q.rows()); }
    /// Shapes, Im Z > 0, and Theta(c) != 0.
    void validate() const;
    /// Theta argument c + r t.
    Eigen::VectorXcd argument(const Eigen::VectorXcd& t) const;
};

/// Everything computed for one curve: periods, Laurent data and the tau data.
struct CurveTau {
    PeriodData periods;
    LaurentData laurent;
    TauData tau;
};

/// Builds periods and Laurent data at x_t with M times.
CurveTau curve_tau(const SchottkyGroup& group, const SpherePoint& x_t, int M, const Characteristic& chi,
                   const TruncationPolicy& policy = {}, const ThetaPolicy& theta = {});
/// Uses the marked point of the configuration (tail numbered 1).
CurveTau curve_tau(const CurveConfig& config, int M, const Characteristic& chi, const TruncationPolicy& policy = {},
                   const ThetaPolicy& theta = {});

cplx tau(const TauData& data, const Eigen::VectorXcd& t);

/// Lattice sum of tau as an exponential sum with box radius R.
ExponentialSum tau_sum(const TauData& data, int R);
/// Radius from the lattice rule over the given times, checked by R -> R+2 at each of them.
ExponentialSum tau_sum(const TauData& data, const std::vector<Eigen::VectorXcd>& ts);

/// u1 = d^2/dx^2 log Theta(c + x r_1 + t2 r_2 + t3 r_3) + q_11. Throws ThetaZero.
cplx u1(const TauData& data, double x, double t2, double t3);

/// Regular grid over (x, t2, t3).
struct KpGrid {
    double x0 = -1.0, x1 = 1.0;
    int nx = 5;
    double t20 = -1.0, t21 = 1.0;
    int n2 = 5;
    double t30 = -1.0, t31 = 1.0;
    int n3 = 5;

    /// Points in row order: x outermost, t3 innermost.
    std::vector<Eigen::Vector3d> points() const;
};

struct KpPoint {
    double x = 0.0, t2 = 0.0, t3 = 0.0;
    cplx u;
    cplx residual;
    /// Largest of the four terms of the equation at this point.
    double term_scale = 0.0;
};

struct KpReport {
    std::vector<KpPoint> points;
    /// max |residual| / max term magnitude over the grid.
    double max_residual = 0.0;
    /// RMS residual / max term magnitude.
    double rms_residual = 0.0;
    double max_abs_residual = 0.0;
    double term_scale = 0.0;
};

/// (3/4) u_{t2t2} - d_x (u_{t3} - u_xxx / 4 - 3 u u_x) with u = d_x^2 log tau, from exact jets.
/// Times beyond t3 are held at zero. Needs at least 3 times.
KpReport kp_residual(const ExponentialSum& tau, const KpGrid& grid);
KpReport kp_residual(const TauData& data, const KpGrid& grid);

struct RealityReport {
    double max_rel_imag_tau = 0.0;
    /// max |Im exp(2 pi i Z_ij)| / |exp(2 pi i Z_ij)|.
    double max_rel_imag_period = 0.0;
    /// exp(pi i Z_ii).
    std::vector<cplx> half_periods;
    bool half_periods_in_unit_interval = true;
};

RealityReport reality_check(const TauData& data, const std::vector<Eigen::VectorXcd>& samples);

} // namespace schottky
