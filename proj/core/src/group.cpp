#include "schottky/group.hpp"

#include "schottky/error.hpp"

#include <algorithm>
#include <cstdlib>

namespace schottky {

SchottkyGroup::SchottkyGroup(std::vector<MoebiusMap> generators) : gens_(std::move(generators))
{
    for (std::size_t k = 0; k < gens_.size(); ++k) {
        const MoebiusMap& g = gens_[k];
        if (g.is_singular())
            fail(ErrorKind::NotLoxodromic, "generator " + std::to_string(k + 1) + " is singular");
        FixedPointData fp;
        try {
            fp = fixed_points_and_multiplier(g);
        } catch (const Error&) {
            fail(ErrorKind::NotLoxodromic, "generator " + std::to_string(k + 1) + " has |multiplier| >= 1");
        }
        invs_.push_back(g.inverse().normalized());
        attr_.push_back(fp.attractive);
        rep_.push_back(fp.repulsive);
        mult_.push_back(fp.multiplier);
        for (const SpherePoint* p : {&fp.attractive, &fp.repulsive})
            if (p->is_finite())
                scale_ = std::max(scale_, std::abs(p->value()));
    }
}

const MoebiusMap& SchottkyGroup::generator(int letter) const
{
    const int i = std::abs(letter);
    if (letter == 0 || i > rank())
        fail(ErrorKind::IndexOutOfRange, "letter " + std::to_string(letter));
    return letter > 0 ? gens_[i - 1] : invs_[i - 1];
}

const SpherePoint& SchottkyGroup::fixed_point(int letter) const
{
    const int i = std::abs(letter);
    if (letter == 0 || i > rank())
        fail(ErrorKind::IndexOutOfRange, "letter " + std::to_string(letter));
    return letter > 0 ? attr_[i - 1] : rep_[i - 1];
}

cplx SchottkyGroup::multiplier(int i) const
{
    if (i < 1 || i > rank())
        fail(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(i));
    return mult_[i - 1];
}

MoebiusMap SchottkyGroup::evaluate_word(const GroupWord& word) const
{
    MoebiusMap m;
    for (int l : word.letters())
        m = compose(m, generator(l));
    return m;
}

MoebiusMap evaluate_word(const SchottkyGroup& group, const GroupWord& word) { return group.evaluate_word(word); }

} // namespace schottky
