#pragma once

#include "schottky/jet.hpp"

#include <Eigen/Dense>

#include <vector>

namespace schottky {

/// exp(1/2 t^T Q t) * sum_n exp(logc_n + K_n . t), the common shape of every tau
/// function here (theta lattice sums, modified taus, solitons).
class ExponentialSum {
public:
    struct Term {
        cplx logc;
        Eigen::VectorXcd K;
    };

    ExponentialSum() = default;
    explicit ExponentialSum(int M);
    ExponentialSum(Eigen::MatrixXcd Q, std::vector<Term> terms);

    int times() const noexcept { return static_cast<int>(Q_.rows()); }
    const Eigen::MatrixXcd& Q() const noexcept { return Q_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    void add_term(cplx logc, Eigen::VectorXcd K);
    /// Sum of two expressions with the same quadratic form.
    void append(const ExponentialSum& other);
    /// Multiply by exp(a + b . t).
    void multiply_exp(cplx a, const Eigen::VectorXcd& b);

    /// Value as mantissa * exp(log_scale); never overflows.
    struct Scaled {
        cplx mantissa;
        double log_scale = 0.0;
        cplx value() const { return mantissa * std::exp(log_scale); }
    };
    Scaled scaled(const Eigen::VectorXcd& t) const;
    cplx operator()(const Eigen::VectorXcd& t) const { return scaled(t).value(); }
    /// tau(t1) / tau(t2) without overflow.
    cplx ratio(const Eigen::VectorXcd& t1, const Eigen::VectorXcd& t2) const;

    /// Jet of log tau(t0 + sum_k s_k d_k) in the variables s_k, up to total degree `degree`.
    /// Throws TauZeroOnGrid when tau(t0) vanishes to working precision.
    Jet log_jet(const Eigen::VectorXcd& t0, const std::vector<Eigen::VectorXcd>& dirs, int degree) const;

    /// Sum of |terms| at t, relative to which tau(t) is judged to vanish.
    double magnitude(const Eigen::VectorXcd& t) const;

private:
    Eigen::MatrixXcd Q_;
    std::vector<Term> terms_;
};

} // namespace schottky
