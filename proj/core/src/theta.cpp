#include "schottky/theta.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx exponent(const Eigen::MatrixXcd& Z, const Eigen::VectorXi& v, const Eigen::VectorXcd& z)
{
    const Eigen::VectorXcd vc = v.cast<cplx>();
    return kI * kPi * (vc.transpose() * Z * vc)(0, 0) + (vc.transpose() * z)(0, 0);
}

double min_im_eig(const Eigen::MatrixXcd& Z)
{
    const Eigen::MatrixXd im = Z.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (im + im.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

} // namespace

void check_period_matrix(const Eigen::MatrixXcd& Z)
{
    if (Z.rows() != Z.cols())
        fail(ErrorKind::InvalidInput, "period matrix must be square");
    if (Z.rows() > 0 && !(min_im_eig(Z) > 0.0))
        fail(ErrorKind::InvalidInput, "Im Z must be positive definite");
}

int lattice_radius(const Eigen::MatrixXcd& Z, double tol, const Eigen::VectorXcd& z)
{
    return lattice_radius(Z, tol, std::vector<Eigen::VectorXcd>{z});
}

int lattice_radius(const Eigen::MatrixXcd& Z, double tol, const std::vector<Eigen::VectorXcd>& zs)
{
    check_period_matrix(Z);
    if (Z.rows() == 0)
        return 0;
    if (!(tol > 0.0 && tol < 1.0))
        fail(ErrorKind::InvalidInput, "lattice tolerance must lie in (0, 1)");
    const double lam = min_im_eig(Z);
    const Eigen::MatrixXd Y = 0.5 * (Z.imag() + Z.imag().transpose());
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(Y);
    double shift = 0.0;
    for (const auto& z : zs) {
        if (z.size() != Z.rows())
            fail(ErrorKind::InvalidInput, "theta argument length differs from genus");
        const Eigen::VectorXd center = ldlt.solve(z.real()) / (2.0 * kPi);
        shift = std::max(shift, center.cwiseAbs().maxCoeff());
    }
    const double base = std::ceil(std::sqrt(-std::log(tol) / (kPi * lam)));
    const double R = base + std::ceil(shift) + 2.0;
    if (!(R < 1e4))
        fail(ErrorKind::LatticeNotConverged, "theta argument too far from the lattice peak");
    return static_cast<int>(R);
}

std::vector<Eigen::VectorXi> lattice_box(int g, int R)
{
    std::vector<Eigen::VectorXi> out;
    if (g == 0) {
        out.emplace_back(0);
        return out;
    }
    Eigen::VectorXi v = Eigen::VectorXi::Constant(g, -R);
    for (;;) {
        out.push_back(v);
        int k = g - 1;
        while (k >= 0 && v(k) == R) {
            v(k) = -R;
            --k;
        }
        if (k < 0)
            break;
        ++v(k);
    }
    return out;
}

cplx theta(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z, int R)
{
    if (z.size() != Z.rows())
        fail(ErrorKind::InvalidInput, "theta argument length differs from genus");
    if (R < 0)
        fail(ErrorKind::InvalidInput, "lattice radius must be >= 0");
    cplx sum(0.0);
    for (const auto& v : lattice_box(static_cast<int>(Z.rows()), R))
        sum += std::exp(exponent(Z, v, z));
    return sum;
}

cplx theta(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z, const ThetaPolicy& policy)
{
    check_period_matrix(Z);
    const int g = static_cast<int>(Z.rows());
    const int R = policy.radius > 0 ? policy.radius : lattice_radius(Z, policy.tol, z);
    cplx inner(0.0), outer(0.0);
    double mass = 0.0;
    for (const auto& v : lattice_box(g, R + 2)) {
        const cplx term = std::exp(exponent(Z, v, z));
        outer += term;
        mass += std::abs(term);
        if (v.size() == 0 || v.cwiseAbs().maxCoeff() <= R)
            inner += term;
    }
    if (std::abs(outer - inner) > policy.tol * mass)
        fail(ErrorKind::LatticeNotConverged, "theta changes under R -> R+2 beyond tolerance");
    return inner;
}

cplx theta_directional_derivative(const Eigen::MatrixXcd& Z, const Eigen::VectorXcd& z,
                                  const std::vector<Eigen::VectorXcd>& dirs, const std::vector<int>& orders, int R)
{
    if (dirs.size() != orders.size())
        fail(ErrorKind::InvalidInput, "one order per direction required");
    int total = 0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        if (orders[k] < 0 || dirs[k].size() != Z.rows())
            fail(ErrorKind::InvalidInput, "bad derivative direction or order");
        total += orders[k];
    }
    if (total > 6)
        fail(ErrorKind::InvalidInput, "derivative order above 6");
    cplx sum(0.0);
    for (const auto& v : lattice_box(static_cast<int>(Z.rows()), R)) {
        cplx w = std::exp(exponent(Z, v, z));
        const Eigen::VectorXcd vc = v.cast<cplx>();
        for (std::size_t k = 0; k < dirs.size(); ++k)
            w *= std::pow((vc.transpose() * dirs[k])(0, 0), orders[k]);
        sum += w;
    }
    return sum;
}

Characteristic Characteristic::zero(int g)
{
    return {Eigen::VectorXcd::Zero(g), Eigen::VectorXd::Zero(g)};
}

Eigen::VectorXcd Characteristic::c(const Eigen::MatrixXcd& Z) const
{
    if (alpha.size() != Z.rows() || beta.size() != Z.rows())
        fail(ErrorKind::InvalidInput, "characteristic length differs from genus");
    return 2.0 * kPi * kI * (alpha + Z * beta.cast<cplx>());
}

} // namespace schottky
