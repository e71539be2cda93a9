#pragma once

#include "schottky/group.hpp"
#include "schottky/series.hpp"

#include <Eigen/Dense>

#include <optional>
#include <variant>
#include <vector>

namespace schottky {

enum class DifferentialKind { FirstKind, SecondKind, ThirdKind };

/// Which abelian differential: omega_i, omega_{t,k} with pole of order k at x_t, or
/// omega_{p1,p2} with simple poles of residue +1 at p1 and -1 at p2.
struct DifferentialSpec {
    DifferentialKind kind = DifferentialKind::FirstKind;
    int index = 1; // i for the first kind, k for the second kind
    SpherePoint p1;
    SpherePoint p2;

    static DifferentialSpec first_kind(int i);
    static DifferentialSpec second_kind(const SpherePoint& x_t, int k);
    static DifferentialSpec third_kind(const SpherePoint& p1, const SpherePoint& p2);
};

/// A differential f(z) dz with its truncated series built once.
class Differential {
public:
    Differential(const SchottkyGroup& group, const DifferentialSpec& spec, const TruncationPolicy& policy);

    const DifferentialSpec& spec() const noexcept { return spec_; }
    /// Throws PoleProximity near a pole.
    cplx density(cplx z) const;
    /// Exact integral along the segment a -> b.
    cplx integrate_segment(cplx a, cplx b) const;
    const TailReport& tail() const noexcept;
    /// Enumerated pole positions.
    std::vector<cplx> poles() const;
    /// Underlying pole-pair series, null for the second kind.
    const PolePairSeries* pair_series() const noexcept { return std::get_if<PolePairSeries>(&series_); }

private:
    DifferentialSpec spec_;
    std::variant<PolePairSeries, MapSeries> series_;
};

/// Throws TruncationNotConverged when the series tail exceeds the tolerance.
void require_converged(const TailReport& tail, const char* what);

cplx eval_density(const SchottkyGroup& group, const DifferentialSpec& spec, const SpherePoint& z,
                  const TruncationPolicy& policy);

/// Circle about alpha_i used as the a_i cycle.
struct Circle {
    cplx center;
    double radius;
};
Circle a_cycle(const SchottkyGroup& group, int i);

/// Counterclockwise trapezoid integral over a circle, N doubled from 256 until stable.
cplx circle_integral(const Differential& diff, const Circle& circle, double tol);

cplx a_period(const SchottkyGroup& group, const DifferentialSpec& spec, int i, const TruncationPolicy& policy);
cplx a_period(const Differential& diff, const SchottkyGroup& group, int i, const TruncationPolicy& policy);

/// Integral of omega_j along the straight path z0 -> gamma_i(z0), bowed around nearby poles.
cplx b_period_integral(const SchottkyGroup& group, int i, int j, cplx z0, const TruncationPolicy& policy);
cplx b_period_integral(const Differential& omega_j, const SchottkyGroup& group, int i, cplx z0);

/// Sum of exact segment integrals along a broken line.
cplx integrate_path(const Differential& diff, const std::vector<cplx>& path);

/// Broken line from z0 to gamma_i(z0) that keeps clear of the given poles.
std::vector<cplx> b_path(const SchottkyGroup& group, int i, cplx z0, const std::vector<cplx>& poles);

cplx residue(const SchottkyGroup& group, const DifferentialSpec& spec, const SpherePoint& at,
             const TruncationPolicy& policy, double radius_factor = 1.0);

/// Taylor data at the marked point: r is g x M, q is M x M.
struct LaurentData {
    Eigen::MatrixXcd r;
    Eigen::MatrixXcd q;
    cplx x_t{0.0};
    double radius = 0.0;
    int fourier_points = 0;
};

LaurentData laurent_data(const SchottkyGroup& group, const SpherePoint& x_t, int M, const TruncationPolicy& policy);
/// Reuses first-kind series, one per generator in order.
LaurentData laurent_data(const SchottkyGroup& group, const std::vector<Differential>& first_kind,
                         const SpherePoint& x_t, int M, const TruncationPolicy& policy);

/// Coefficients c_0..c_{count-1} of density(center + u) = sum c_m u^m, by sampling a circle
/// of the given radius with the point count doubled until stable to tol.
std::vector<cplx> taylor_coefficients(const Differential& diff, cplx center, double radius, int count, double tol);

/// First-kind series omega_1..omega_g.
std::vector<Differential> first_kind_differentials(const SchottkyGroup& group, const TruncationPolicy& policy);

} // namespace schottky
