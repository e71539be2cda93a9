#pragma once

#include "schottky/expsum.hpp"
#include "schottky/tau.hpp"

#include <functional>
#include <map>
#include <vector>

namespace schottky {

/// Smallest |z| at which f has a zero, bracketed by winding numbers on circles
/// r0 * 1.5^j up to r_max. Returns a lower bound on that radius, or r_max if none.
double nearest_zero(const std::function<cplx(cplx)>& f, double r0, double r_max);

struct WavePolicy {
    int alpha_points = 64;
    /// Circle radius for alpha; 0 selects 0.3 x nearest zero of alpha -> tau(t - [alpha]), at most 1.
    double alpha_radius = 0.0;
};

/// Coefficients w_1..w_K of tau(t - [alpha]) / tau(t) = 1 + sum w_k alpha^k, where
/// [alpha] = (alpha, alpha^2/2, ..., alpha^M/M). Needs K <= M.
std::vector<cplx> wave_coefficients(const ExponentialSum& tau, const Eigen::VectorXcd& t, int K,
                                    const WavePolicy& policy = {});
std::vector<cplx> wave_coefficients(const TauData& data, const Eigen::VectorXcd& t, int K,
                                    const WavePolicy& policy = {});

/// Pseudo-differential operator sum_o a_o(x) d^o with coefficients as Taylor jets in x.
class PseudoDiff {
public:
    using XJet = std::vector<cplx>;

    PseudoDiff(int jet_degree, int min_order);

    int jet_degree() const noexcept { return P_; }
    int min_order() const noexcept { return min_order_; }
    const std::map<int, XJet>& terms() const noexcept { return terms_; }

    /// Coefficient jet at order o (zeros if absent).
    XJet coeff(int o) const;
    void set(int o, XJet c);
    /// Value of the order-o coefficient at x = 0.
    cplx at_origin(int o) const;

    static PseudoDiff identity(int P, int min_order);
    static PseudoDiff d(int P, int min_order);

    PseudoDiff operator+(const PseudoDiff& o) const;
    PseudoDiff operator-(const PseudoDiff& o) const;
    PseudoDiff operator*(cplx s) const;
    /// Composition with the Leibniz rule, truncated below min_order.
    PseudoDiff operator*(const PseudoDiff& o) const;
    /// Terms of order >= 0.
    PseudoDiff plus_part() const;
    /// Inverse of 1 + N with N of order <= -1.
    PseudoDiff inverse_unipotent() const;

private:
    int P_;
    int min_order_;
    std::map<int, XJet> terms_;
};

struct HierarchyPolicy {
    int depth = 6;
    double tol = 1e-5;
    int x_points = 48;
    int s_points = 16;
    WavePolicy wave;
};

struct HierarchyReport {
    int n = 0;
    int depth = 0;
    /// max |d_{t_n} L - [(L^n)_+, L]| over the trustworthy orders, relative to the largest entry.
    double residual = 0.0;
    double abs_residual = 0.0;
    /// Same at depth + 2.
    double residual_deeper = 0.0;
    /// Orders compared: from n-1 down to lowest_order.
    int lowest_order = 0;
    double rho_x = 0.0, rho_s = 0.0, rho_alpha = 0.0;
};

/// Lax-form check of the KP hierarchy at t for each n, using W = 1 + sum_{k<=D} w_k d^{-k},
/// L = W d W^{-1}. Needs M >= depth + 2 times. Throws TruncationTooShallow when the residual
/// exceeds tol at depth D but not at D + 2.
std::vector<HierarchyReport> hierarchy_check(const ExponentialSum& tau, const Eigen::VectorXcd& t,
                                             const std::vector<int>& orders, const HierarchyPolicy& policy = {});
std::vector<HierarchyReport> hierarchy_check(const TauData& data, const Eigen::VectorXcd& t,
                                             const std::vector<int>& orders, const HierarchyPolicy& policy = {});

} // namespace schottky
