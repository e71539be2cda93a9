#pragma once

#include "schottky/config_io.hpp"
#include "schottky/expsum.hpp"
#include "schottky/tau.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace schottky {

/// Pole of a stable-limit differential on one component, in that component's coordinate.
struct LimitPole {
    std::string key; // oriented edge key, e.g. "2" or "-2"
    SpherePoint point;
    int residue = 0;
};

/// Restriction of omega_i to the component P_v at y = 0: simple fractions from the
/// cycle's edge word, +1 at x_h for edges arriving at v and -1 at x_{-h} for edges leaving v.
/// Cancelling pairs are dropped.
std::vector<LimitPole> stable_limit_first_kind(const StableGraph& graph, const SchottkyParams& params, int cycle,
                                               int vertex);

enum class PinchKind { Irreducible, Reducible };

/// One edge parameter of a base curve sent to 0 along y_sequence.
struct DegenerationScenario {
    CurveConfig base;
    std::string pinch;
    std::vector<double> y_sequence{1e-2, 1e-3, 1e-4};
    Eigen::VectorXcd alpha;
    Eigen::VectorXd beta;
    int times = 3;
    TruncationPolicy policy;
    ThetaPolicy theta;

    /// Reducible when removing the edge disconnects the graph.
    PinchKind kind() const;
    /// Family member with the pinched parameter set to y.
    CurveConfig at(double y) const;
    /// Checks the graph, edge and characteristic lengths; throws InvalidInput.
    void validate() const;
};

json to_json(const DegenerationScenario& s);
DegenerationScenario scenario_from_json(const json& j);

/// Branch of the pinched characteristic entry.
enum class CharacteristicBranch { Generic, HalfInteger };
CharacteristicBranch classify_characteristic(double beta_g);
/// Unique integer with |b + beta_g| < 1/2. Throws HalfIntegerCharacteristic.
int beta_bar(double beta_g);

/// Objects on the limit curve.
struct LimitData {
    PinchKind kind = PinchKind::Irreducible;
    /// Family generator indices (0-based) kept by the limit curve, in order. For the reducible
    /// case these form the marked block.
    std::vector<int> kept;
    /// Irreducible: index of the pinched generator.
    int pinched = -1;
    /// Reducible: indices of the other block.
    std::vector<int> other;

    SchottkyGroup group;
    /// Reducible: group of the unmarked component in its own coordinate.
    SchottkyGroup second;
    /// Irreducible: poles of the third-kind limit of the pinched differential.
    SpherePoint p1, p2;
    cplx x_t{0.0};
    int times = 0;

    PeriodData periods;
    LaurentData laurent;
    /// Irreducible: lim Z_{i,g} for the kept i.
    Eigen::VectorXcd Zbar;
    /// Irreducible: Taylor coefficients of the third-kind limit at the marked point.
    Eigen::VectorXcd rbar_g;
    /// Reducible: period matrix of the unmarked component.
    PeriodData second_periods;
};

LimitData limit_data_irreducible(const DegenerationScenario& s);
LimitData limit_data_reducible(const DegenerationScenario& s);
LimitData limit_data(const DegenerationScenario& s);

/// Modified tau functions as exponential sums with lattice radius covering ts.
ExponentialSum modified_tau_generic_sum(const LimitData& limit, const DegenerationScenario& s,
                                        const std::vector<Eigen::VectorXcd>& ts);
ExponentialSum modified_tau_halfint_sum(const LimitData& limit, const DegenerationScenario& s,
                                        const std::vector<Eigen::VectorXcd>& ts);
ExponentialSum modified_tau_reducible_sum(const LimitData& limit, const DegenerationScenario& s,
                                          const std::vector<Eigen::VectorXcd>& ts);
/// Dispatches on the scenario kind and characteristic branch.
ExponentialSum modified_tau_sum(const LimitData& limit, const DegenerationScenario& s,
                                const std::vector<Eigen::VectorXcd>& ts);

cplx modified_tau_generic(const LimitData& limit, const DegenerationScenario& s, const Eigen::VectorXcd& t);
cplx modified_tau_halfint(const LimitData& limit, const DegenerationScenario& s, const Eigen::VectorXcd& t);
cplx modified_tau_reducible(const LimitData& limit, const DegenerationScenario& s, const Eigen::VectorXcd& t);

/// Log of the factor that keeps the family tau finite: -pi i (b + 2 beta_g) b Z_gg (generic),
/// pi i (beta_g^2 - 1/4) Z_gg (half-integer), 0 (reducible).
cplx scaling_log(const DegenerationScenario& s, cplx Z_gg);

struct FamilyTau {
    double y = 0.0;
    CurveTau curve;
    cplx log_scale{0.0};
    /// Scaled tau as an exponential sum over the sample times.
    ExponentialSum scaled;
};
FamilyTau family_tau(const DegenerationScenario& s, double y, const std::vector<Eigen::VectorXcd>& ts);

struct DegenerationStep {
    double y = 0.0;
    /// max over samples of |scaled - modified| / |modified|.
    double deviation = 0.0;
    /// max over samples of |log |unscaled tau||.
    double log_unscaled = 0.0;
};

struct DegenerationReport {
    PinchKind kind = PinchKind::Irreducible;
    CharacteristicBranch branch = CharacteristicBranch::Generic;
    std::vector<DegenerationStep> steps;
    bool monotone = false;
    double final_deviation = 0.0;
};

/// Compares the scaled family tau to the modified tau at each y of the scenario.
DegenerationReport degeneration_check(const DegenerationScenario& s, const std::vector<Eigen::VectorXcd>& ts);
/// Real sample times in [-1, 1]^3, fixed seed.
std::vector<Eigen::VectorXcd> default_time_samples(int M, int count);

json to_json(const DegenerationReport& r);

struct DifferentialLimitStep {
    double y = 0.0;
    /// Irreducible: pinched first-kind differential vs the third-kind limit.
    double pinched = 0.0;
    /// Kept first-kind differentials vs those of the limit curve (marked block when reducible).
    double kept = 0.0;
    /// Reducible: marked-block differentials pulled back to the other component.
    double block_vanishing = 0.0;
    /// Reducible: other-block differentials pulled back vs the other component's.
    double other_block = 0.0;
};

struct DifferentialLimitReport {
    PinchKind kind = PinchKind::Irreducible;
    std::vector<DifferentialLimitStep> steps;
    bool monotone = false;
};

/// Deviations are max |f_y - f_0| / max |f_0| over the sample points. Samples for the other
/// component are in its own coordinate.
DifferentialLimitReport differential_limit_check(const DegenerationScenario& s, const std::vector<cplx>& samples,
                                                 const std::vector<cplx>& other_samples = {});

json to_json(const DifferentialLimitReport& r);

/// Data of the rational limit: points x_{+-i}, marked point, offsets n_i, free alpha'_i.
struct SolitonData {
    std::vector<cplx> x_plus;
    std::vector<cplx> x_minus;
    cplx x_t{0.0};
    std::vector<int> n;
    std::vector<cplx> alpha_prime;
    int times = 3;

    int genus() const noexcept { return static_cast<int>(x_plus.size()); }
    /// Throws InvalidInput for inconsistent lengths or coincident points.
    void validate() const;
};

/// (x_i - x_j)(x_{-i} - x_{-j}) / ((x_{-i} - x_j)(x_i - x_{-j})). Throws DegenerateCrossRatio.
cplx soliton_cross_ratio(const SolitonData& s, int i, int j);
/// -(1/(x_i - x_t)^m - 1/(x_{-i} - x_t)^m), the flow of the i-th exponent.
Eigen::MatrixXcd soliton_flows(const SolitonData& s);
/// alpha'_i = 2 pi i (alpha_i + sum_{j != i} Zbar_ij beta_j).
Eigen::VectorXcd soliton_alpha_prime(const Eigen::VectorXcd& alpha, const Eigen::VectorXd& beta,
                                     const Eigen::MatrixXcd& Zbar);
/// Soliton data read off a one-vertex configuration with tail 1 as the marked point.
SolitonData soliton_from_config(const CurveConfig& cfg, std::vector<int> n, std::vector<cplx> alpha_prime, int M);

ExponentialSum soliton_sum(const SolitonData& s);
cplx soliton_tau(const SolitonData& s, const Eigen::VectorXcd& t);
KpReport soliton_kp_residual(const SolitonData& s, const KpGrid& grid);

} // namespace schottky
