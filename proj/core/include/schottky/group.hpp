#pragma once

#include "schottky/moebius.hpp"
#include "schottky/words.hpp"

#include <vector>

namespace schottky {

/// Free group on g loxodromic generators with their fixed points and multipliers.
class SchottkyGroup {
public:
    SchottkyGroup() = default;
    /// Throws NotLoxodromic if some generator has |multiplier| >= 1.
    explicit SchottkyGroup(std::vector<MoebiusMap> generators);

    int rank() const noexcept { return static_cast<int>(gens_.size()); }

    /// Generator for letter k in +-1..+-g; negative letters give inverses.
    const MoebiusMap& generator(int letter) const;
    /// alpha_i for i > 0 (attractive), alpha_{-i} for i < 0 (repulsive).
    const SpherePoint& fixed_point(int letter) const;
    cplx multiplier(int i) const;

    MoebiusMap evaluate_word(const GroupWord& word) const;

    /// max modulus over finite fixed points, at least one.
    double scale() const noexcept { return scale_; }

private:
    std::vector<MoebiusMap> gens_;
    std::vector<MoebiusMap> invs_;
    std::vector<SpherePoint> attr_;
    std::vector<SpherePoint> rep_;
    std::vector<cplx> mult_;
    double scale_ = 1.0;
};

MoebiusMap evaluate_word(const SchottkyGroup& group, const GroupWord& word);

} // namespace schottky
