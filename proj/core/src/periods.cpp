#include "schottky/periods.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace schottky {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx cross_ratio(cplx ai, cplx ami, cplx p, cplx q)
{
    const cplx den = (ami - p) * (ai - q);
    if (std::abs(den) < 1e-14)
        fail(ErrorKind::DegenerateCrossRatio, "cross-ratio denominator below 1e-14");
    return (ai - p) * (ami - q) / den;
}

} // namespace

cplx psi_factor(const SchottkyGroup& group, int i, int j, const GroupWord& word)
{
    const int g = group.rank();
    if (i < 1 || i > g || j < 1 || j > g)
        fail(ErrorKind::IndexOutOfRange, "period index out of range");
    if (i == j && word.empty())
        return group.multiplier(i);
    const MoebiusMap m = group.evaluate_word(word);
    const SpherePoint p = m(group.fixed_point(j));
    const SpherePoint q = m(group.fixed_point(-j));
    const SpherePoint ai = group.fixed_point(i), ami = group.fixed_point(-i);
    if (p.is_infinite() || q.is_infinite() || ai.is_infinite() || ami.is_infinite())
        fail(ErrorKind::InvalidParams, "cross-ratio with a point at infinity");
    return cross_ratio(ai.value(), ami.value(), p.value(), q.value());
}

cplx multiplicative_period(const SchottkyGroup& group, int i, const Differential& omega_j)
{
    const PolePairSeries* series = omega_j.pair_series();
    if (series == nullptr || omega_j.spec().kind != DifferentialKind::FirstKind)
        fail(ErrorKind::InvalidInput, "multiplicative period needs a first-kind series");
    require_converged(omega_j.tail(), "multiplicative_period");
    const int j = omega_j.spec().index;
    if (i < 1 || i > group.rank())
        fail(ErrorKind::IndexOutOfRange, "period index out of range");
    const cplx ai = group.fixed_point(i).value(), ami = group.fixed_point(-i).value();
    cplx prod(1.0);
    for (const auto& pr : series->pairs()) {
        if (pr.first == 0 && i == j) {
            prod *= group.multiplier(i);
        } else if (pr.first == 0 || std::abs(pr.first) != i) {
            // psi = 1 + delta (alpha_i - alpha_{-i}) / ((alpha_{-i} - p)(alpha_i - q))
            const cplx den = (ami - pr.p) * (ai - pr.q);
            if (std::abs(den) < 1e-14)
                fail(ErrorKind::DegenerateCrossRatio, "cross-ratio denominator below 1e-14");
            prod *= 1.0 + pr.delta * (ai - ami) / den;
        }
    }
    return prod;
}

cplx multiplicative_period(const SchottkyGroup& group, int i, int j, const TruncationPolicy& policy)
{
    return multiplicative_period(group, i, Differential(group, DifferentialSpec::first_kind(j), policy));
}

bool has_real_data(const SchottkyGroup& group, double tol)
{
    for (int i = 1; i <= group.rank(); ++i) {
        for (int s : {i, -i}) {
            const SpherePoint& p = group.fixed_point(s);
            if (p.is_infinite() || std::abs(p.value().imag()) > tol * group.scale())
                return false;
        }
        if (std::abs(group.multiplier(i).imag()) > tol)
            return false;
    }
    return true;
}

std::vector<cplx> base_point_candidates(const SchottkyGroup& group)
{
    const double r0 = 1.0 + group.scale();
    std::vector<cplx> ring;
    for (int k = 0; k < 16; ++k)
        ring.push_back(r0 * std::polar(1.0, kPi / 2.0 + 2.0 * kPi * k / 16.0));
    if (has_real_data(group))
        return ring;

    // Pole images under words of length <= 2.
    std::vector<cplx> images;
    for (const GroupWord& w : enumerate_reduced_words(group.rank(), 2)) {
        const MoebiusMap m = group.evaluate_word(w);
        for (int i = 1; i <= group.rank(); ++i)
            for (int s : {i, -i}) {
                const SpherePoint p = m(group.fixed_point(s));
                if (p.is_finite())
                    images.push_back(p.value());
            }
    }
    std::vector<std::pair<double, int>> score;
    for (int k = 0; k < 16; ++k) {
        double d = std::numeric_limits<double>::infinity();
        for (cplx p : images)
            d = std::min(d, std::abs(ring[static_cast<std::size_t>(k)] - p));
        score.emplace_back(-d, k);
    }
    std::stable_sort(score.begin(), score.end());
    std::vector<cplx> out;
    for (const auto& [s, k] : score)
        out.push_back(ring[static_cast<std::size_t>(k)]);
    return out;
}

namespace {

// Points at twice the isometric radius of gamma_i, upper half plane first, outside every circle.
std::vector<cplx> local_base_points(const SchottkyGroup& group, int i)
{
    const MoebiusMap m = group.generator(i).unit_det();
    std::vector<cplx> out;
    if (std::abs(m.c()) == 0.0)
        return out;
    const cplx center = -m.d() / m.c();
    const double radius = 1.0 / std::abs(m.c());
    for (double angle : {0.5, 0.25, 0.75, -0.5, -0.25, -0.75, 0.0, 1.0}) {
        const cplx z = center + 2.0 * radius * std::polar(1.0, kPi * angle);
        bool outside = true;
        for (int k = 1; k <= group.rank() && outside; ++k)
            for (int s : {k, -k}) {
                const MoebiusMap n = group.generator(s).unit_det();
                if (std::abs(n.c()) > 0.0 && std::abs(z + n.d() / n.c()) <= 1.0 / std::abs(n.c()))
                    outside = false;
            }
        if (outside)
            out.push_back(z);
    }
    return out;
}

} // namespace

PeriodData period_matrix(const SchottkyGroup& group, const std::vector<Differential>& first_kind, std::optional<cplx> z0)
{
    const int g = group.rank();
    PeriodData out;
    out.P = Eigen::MatrixXcd::Zero(g, g);
    out.Z = Eigen::MatrixXcd::Zero(g, g);
    if (g == 0)
        return out;

    std::vector<cplx> poles;
    for (const Differential& d : first_kind) {
        require_converged(d.tail(), "period_matrix");
        const auto p = d.poles();
        poles.insert(poles.end(), p.begin(), p.end());
    }

    const std::vector<cplx> candidates = z0 ? std::vector<cplx>{*z0} : base_point_candidates(group);
    double best_defect = std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd best_z;
    cplx best_z0{};
    bool any = false;
    auto b_row = [&](int i, cplx base, Eigen::MatrixXcd& Z) {
        const std::vector<cplx> path = b_path(group, i, base, poles);
        for (int j = 1; j <= g; ++j)
            Z(i - 1, j - 1) = integrate_path(first_kind[static_cast<std::size_t>(j - 1)], path) / (2.0 * kPi * kI);
    };
    for (cplx base : candidates) {
        Eigen::MatrixXcd Z(g, g);
        try {
            for (int i = 1; i <= g; ++i) {
                try {
                    b_row(i, base, Z);
                } catch (const Error& e) {
                    // The period does not depend on the base point; a generator whose circles are
                    // tiny is integrated from just outside its own isometric circle instead.
                    if (e.kind() != ErrorKind::PathBlocked || z0)
                        throw;
                    bool done = false;
                    for (cplx local : local_base_points(group, i)) {
                        try {
                            b_row(i, local, Z);
                            done = true;
                            break;
                        } catch (const Error& e2) {
                            if (e2.kind() != ErrorKind::PathBlocked)
                                throw;
                        }
                    }
                    if (!done)
                        throw;
                }
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PathBlocked || candidates.size() == 1)
                throw;
            continue;
        }
        const double defect = (Z - Z.transpose()).cwiseAbs().maxCoeff();
        any = true;
        if (defect < best_defect) {
            best_defect = defect;
            best_z = Z;
            best_z0 = base;
        }
        const double norm = Z.cwiseAbs().rowwise().sum().maxCoeff();
        if (defect <= 1e-7 * (1.0 + norm))
            break;
    }
    if (!any)
        fail(ErrorKind::PathBlocked, "no admissible base point");

    out.z0 = best_z0;
    out.symmetry_defect = best_defect;
    out.Z = 0.5 * (best_z + best_z.transpose());

    for (int i = 1; i <= g; ++i)
        for (int j = 1; j <= g; ++j)
            out.P(i - 1, j - 1) = multiplicative_period(group, i, first_kind[static_cast<std::size_t>(j - 1)]);

    double cons = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            cons = std::max(cons, std::abs(std::exp(2.0 * kPi * kI * out.Z(i, j)) - out.P(i, j)) / std::abs(out.P(i, j)));
    out.consistency_defect = cons;

    const Eigen::MatrixXd im = out.Z.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (im + im.transpose()), Eigen::EigenvaluesOnly);
    out.min_im_eig = eig.eigenvalues().minCoeff();
    if (!(out.min_im_eig > 0.0))
        fail(ErrorKind::RiemannRelationViolated, "Im Z is not positive definite (min eigenvalue " +
                                                     std::to_string(out.min_im_eig) + ")");
    return out;
}

PeriodData period_matrix(const SchottkyGroup& group, const TruncationPolicy& policy, std::optional<cplx> z0)
{
    return period_matrix(group, first_kind_differentials(group, policy), z0);
}

json matrix_to_json(const Eigen::MatrixXcd& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json to_json(const PeriodData& data)
{
    json j;
    j["P"] = matrix_to_json(data.P);
    j["Z"] = matrix_to_json(data.Z);
    j["symmetry_defect"] = data.symmetry_defect;
    j["min_im_eig"] = data.min_im_eig;
    j["consistency_defect"] = data.consistency_defect;
    return j;
}

} // namespace schottky
