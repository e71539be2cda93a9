#pragma once

#include "schottky/config_io.hpp"
#include "schottky/differentials.hpp"
#include "schottky/group.hpp"

#include <Eigen/Dense>

#include <optional>

namespace schottky {

/// Cross-ratio factor of a double-coset representative in the product for P_ij.
cplx psi_factor(const SchottkyGroup& group, int i, int j, const GroupWord& word);

/// Product of psi factors over double cosets, truncated per the policy.
cplx multiplicative_period(const SchottkyGroup& group, int i, int j, const TruncationPolicy& policy);
/// Same, reusing the first-kind series of omega_j.
cplx multiplicative_period(const SchottkyGroup& group, int i, const Differential& omega_j);

struct PeriodData {
    Eigen::MatrixXcd P;
    Eigen::MatrixXcd Z;
    /// max |Z_ij - Z_ji| before symmetrization.
    double symmetry_defect = 0.0;
    /// Smallest eigenvalue of Im Z.
    double min_im_eig = 0.0;
    /// max |exp(2 pi i Z_ij) - P_ij| / |P_ij|.
    double consistency_defect = 0.0;
    /// Base point of the b-cycle paths.
    cplx z0{0.0};
};

/// True when all fixed points and multipliers are real.
bool has_real_data(const SchottkyGroup& group, double tol = 1e-14);

/// Candidate base points, best first.
std::vector<cplx> base_point_candidates(const SchottkyGroup& group);

/// Z from b-cycle integrals, P from the double-coset product, with diagnostics.
/// Throws RiemannRelationViolated if Im Z is not positive definite.
PeriodData period_matrix(const SchottkyGroup& group, const TruncationPolicy& policy,
                         std::optional<cplx> z0 = std::nullopt);
PeriodData period_matrix(const SchottkyGroup& group, const std::vector<Differential>& first_kind,
                         std::optional<cplx> z0 = std::nullopt);

json to_json(const PeriodData& data);
json matrix_to_json(const Eigen::MatrixXcd& m);

} // namespace schottky
