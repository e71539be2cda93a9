#pragma once

#include "schottky/moebius.hpp"

#include <Eigen/Dense>

#include <vector>

namespace schottky {

/// Lattice truncation for theta sums. radius = 0 selects the automatic rule.
struct ThetaPolicy {
    double tol = 1e-14;
    int radius = 0;
};

/// Box radius: ceil(sqrt(-log tol / (pi lambda_min(Im Z)))) + ceil(|center|_inf) + 2, where
/// center = (2 pi Im Z)^{-1} Re z is the peak of the Gaussian terms.
int lattice_radius(const Eigen::MatrixXcd& Z, double tol, const Eigen::VectorXcd& z);
/// Same, covering every argument in the list.
int lattice_radius(const Eigen::MatrixXcd& Z, double tol, const std::vector<Eigen::VectorXcd>& zs);

/// Lattice points of the box [-R, R]^g in lexicographic order.
std::vector<Eigen::VectorXi> lattice_box(int g, int R);

/// sum over |v_i| <= R of exp(pi i v^T Z v + v . z).
cplx theta(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z, int R);

/// Theta with the automatic radius and the R -> R+2 stability test.
/// Throws LatticeNotConverged when the two differ by more than tol relative to sum |terms|.
cplx theta(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z, const ThetaPolicy& policy = {});

/// Lattice sum with each term weighted by prod_k (v . d_k)^{orders_k}. Total order <= 6.
cplx theta_directional_derivative(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z,
                                  const std::vector<Eigen::VectorXcd>& dirs, const std::vector<int>& orders, int R);

/// Checks shape and positive definiteness of Im Z; throws InvalidInput.
void check_period_matrix(const Eigen::MatrixXcd& Z);

/// Theta characteristic: c = 2 pi i (alpha + Z beta).
struct Characteristic {
    Eigen::VectorXcd alpha;
    Eigen::VectorXd beta;

    static Characteristic zero(int g);
    Eigen::VectorXcd c(const Eigen::MatrixXcd& Z) const;
};

} // namespace schottky
