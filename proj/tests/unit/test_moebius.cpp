#include "schottky/error.hpp"
#include "schottky/graph.hpp"
#include "schottky/group.hpp"
#include "schottky/moebius.hpp"
#include "schottky/words.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace schottky;

namespace {

double dist(const SpherePoint& p, cplx z) { return std::abs(p.value() - z); }

// Free reduction of a letter sequence.
std::vector<int> reduce(const std::vector<int>& w)
{
    std::vector<int> out;
    for (int l : w) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::vector<int> power(int letter, int k)
{
    return std::vector<int>(static_cast<std::size_t>(std::abs(k)), k >= 0 ? letter : -letter);
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b, const std::vector<int>& c)
{
    a.insert(a.end(), b.begin(), b.end());
    a.insert(a.end(), c.begin(), c.end());
    return reduce(a);
}

// Number of classes of gamma_i^a w gamma_j^b among reduced words up to max_len;
// i = 0 means no left factor.
std::size_t brute_force_classes(int rank, int i, int j, int max_len)
{
    const auto words = enumerate_reduced_words(rank, max_len);
    std::vector<int> cls(words.size(), -1);
    int next = 0;
    for (std::size_t a = 0; a < words.size(); ++a) {
        if (cls[a] >= 0)
            continue;
        cls[a] = next;
        for (std::size_t b = a + 1; b < words.size(); ++b) {
            if (cls[b] >= 0)
                continue;
            for (int p = -4; p <= 4 && cls[b] < 0; ++p) {
                if (i == 0 && p != 0)
                    continue;
                for (int q = -4; q <= 4; ++q) {
                    if (concat(power(i, p), words[a].letters(), power(j, q)) == words[b].letters()) {
                        cls[b] = next;
                        break;
                    }
                }
            }
        }
        ++next;
    }
    return static_cast<std::size_t>(next);
}

} // namespace

TEST(SpherePoint, RejectsNonFiniteCoordinates)
{
    EXPECT_THROW(SpherePoint(cplx(std::nan(""), 0.0)), Error);
    EXPECT_TRUE(SpherePoint::infinity().is_infinite());
}

TEST(Moebius, IdentityAndInversionAtInfinity)
{
    EXPECT_EQ(schottky::apply(MoebiusMap::identity(), cplx(3, 4)), SpherePoint(cplx(3, 4)));
    const MoebiusMap inv(0.0, 1.0, 1.0, 0.0);
    EXPECT_EQ(schottky::apply(inv, SpherePoint::infinity()), SpherePoint(0.0));
    EXPECT_TRUE(schottky::apply(inv, 0.0).is_infinite());
}

TEST(Moebius, PhiFixesItsFixedPoints)
{
    const MoebiusMap phi = build_phi(1.0, -1.0, 0.1);
    EXPECT_LT(dist(schottky::apply(phi, 1.0), 1.0), 1e-15);
    EXPECT_LT(dist(schottky::apply(phi, -1.0), -1.0), 1e-15);
}

TEST(Moebius, ProjectiveScalingIsExact)
{
    const MoebiusMap m(cplx(1, 2), cplx(0.5, -1), cplx(0.25, 0), cplx(2, 1));
    const MoebiusMap m2 = MoebiusMap::unchecked(4.0 * m.a(), 4.0 * m.b(), 4.0 * m.c(), 4.0 * m.d());
    for (cplx z : {cplx(0.3, 0.1), cplx(-2, 5)})
        EXPECT_EQ(schottky::apply(m, z), schottky::apply(m2, z));
}

TEST(Moebius, ComposeWithIdentityAndInverse)
{
    const MoebiusMap m(cplx(1, 2), cplx(0.5, -1), cplx(0.25, 0), cplx(2, 1));
    EXPECT_TRUE(compose(m, MoebiusMap::identity()).projectively_equal(m));
    EXPECT_TRUE(compose(m, m.inverse()).projectively_equal(MoebiusMap::identity()));
    const cplx z(0.7, -0.2);
    const cplx direct = m.apply_finite(m.apply_finite(z));
    EXPECT_LT(std::abs(compose(m, m).apply_finite(z) - direct), 1e-14);
}

TEST(Moebius, SquareHasSquaredMultiplier)
{
    const MoebiusMap phi = build_phi(1.0, -1.0, cplx(0.1, 0.05));
    // Explicit 2x2 product, no renormalization.
    const MoebiusMap sq = MoebiusMap::unchecked(phi.a() * phi.a() + phi.b() * phi.c(), phi.a() * phi.b() + phi.b() * phi.d(),
                                                phi.c() * phi.a() + phi.d() * phi.c(), phi.c() * phi.b() + phi.d() * phi.d());
    const auto fp = fixed_points_and_multiplier(sq);
    EXPECT_LT(std::abs(fp.multiplier - cplx(0.1, 0.05) * cplx(0.1, 0.05)), 1e-14);
}

TEST(FixedPoints, DiagonalMap)
{
    const auto fp = fixed_points_and_multiplier(MoebiusMap(1.0, 0.0, 0.0, 0.25));
    EXPECT_TRUE(fp.attractive.is_infinite());
    EXPECT_EQ(fp.repulsive, SpherePoint(0.0));
    EXPECT_LT(std::abs(fp.multiplier - 0.25), 1e-15);
}

TEST(FixedPoints, PhiRecoversItsData)
{
    const auto fp = fixed_points_and_multiplier(build_phi(1.0, -1.0, 0.1));
    EXPECT_LT(dist(fp.attractive, 1.0), 1e-14);
    EXPECT_LT(dist(fp.repulsive, -1.0), 1e-14);
    EXPECT_LT(std::abs(fp.multiplier - 0.1), 1e-14);
}

TEST(FixedPoints, CrossRatioRelation)
{
    const MoebiusMap g = build_phi(cplx(0.3, 1.0), cplx(-2.0, 0.5), cplx(0.05, -0.02));
    const auto fp = fixed_points_and_multiplier(g);
    const cplx a = fp.attractive.value(), ap = fp.repulsive.value();
    for (cplx z : {cplx(0.1, 0.2), cplx(4, -3), cplx(-1, -1)}) {
        const cplx gz = g.apply_finite(z);
        EXPECT_LT(std::abs((gz - a) / (z - a) - fp.multiplier * (gz - ap) / (z - ap)), 1e-12);
    }
}

TEST(FixedPoints, ConjugationInvariance)
{
    const MoebiusMap g = build_phi(cplx(0.3, 1.0), cplx(-2.0, 0.5), cplx(0.05, -0.02));
    const MoebiusMap m(cplx(1, 1), cplx(2, 0), cplx(0.5, -0.5), cplx(3, 1));
    const auto f0 = fixed_points_and_multiplier(g);
    const auto f1 = fixed_points_and_multiplier(compose(compose(m, g), m.inverse()));
    EXPECT_LT(std::abs(f0.multiplier - f1.multiplier), 1e-13);
    EXPECT_LT(dist(f1.attractive, schottky::apply(m, f0.attractive).value()), 1e-12);
    EXPECT_LT(dist(f1.repulsive, schottky::apply(m, f0.repulsive).value()), 1e-12);
}

TEST(FixedPoints, EllipticRejected)
{
    // Rotation z -> i z.
    EXPECT_THROW(fixed_points_and_multiplier(MoebiusMap(cplx(0, 1), 0.0, 0.0, 1.0)), Error);
}

TEST(Words, ReducedCounts)
{
    EXPECT_EQ(enumerate_reduced_words(2, 1).size(), 5u);
    EXPECT_EQ(enumerate_reduced_words(2, 2).size(), 17u);
    EXPECT_EQ(enumerate_reduced_words(1, 3).size(), 7u);
    for (int g = 1; g <= 3; ++g) {
        const auto words = enumerate_reduced_words(g, 4);
        std::set<std::vector<int>> uniq;
        std::vector<std::size_t> per_len(5, 0);
        for (const auto& w : words) {
            uniq.insert(w.letters());
            ++per_len[w.size()];
        }
        EXPECT_EQ(uniq.size(), words.size());
        for (int l = 1; l <= 4; ++l)
            EXPECT_EQ(per_len[static_cast<std::size_t>(l)],
                      static_cast<std::size_t>(2 * g * std::pow(2 * g - 1, l - 1)));
    }
}

TEST(Words, LexicographicOrder)
{
    const auto w = enumerate_reduced_words(2, 1);
    ASSERT_EQ(w.size(), 5u);
    EXPECT_TRUE(w[0].empty());
    EXPECT_EQ(w[1], GroupWord({1}));
    EXPECT_EQ(w[2], GroupWord({-1}));
    EXPECT_EQ(w[3], GroupWord({2}));
    EXPECT_EQ(w[4], GroupWord({-2}));
}

TEST(Words, NonReducedRejected) { EXPECT_THROW(GroupWord({1, -1}), Error); }

TEST(Words, CosetRepresentatives)
{
    EXPECT_EQ(coset_representatives(1, 1, 5).size(), 1u);
    const auto r = coset_representatives(2, 1, 1);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[1], GroupWord({2}));
    EXPECT_EQ(r[2], GroupWord({-2}));
    EXPECT_EQ(coset_representatives(2, 2, 2).size(), 9u);
    EXPECT_EQ(brute_force_classes(2, 0, 2, 2), 9u);
    EXPECT_EQ(coset_representatives(3, 2, 3).size(), brute_force_classes(3, 0, 2, 3));
}

TEST(Words, DoubleCosetRepresentatives)
{
    EXPECT_EQ(double_coset_representatives(1, 1, 1, 4).size(), 1u);
    EXPECT_EQ(double_coset_representatives(2, 1, 1, 1).size(), 3u);
    EXPECT_EQ(double_coset_representatives(2, 1, 2, 2).size(), 5u);
    EXPECT_EQ(brute_force_classes(2, 1, 2, 2), 5u);
    EXPECT_EQ(double_coset_representatives(2, 1, 1, 3).size(), brute_force_classes(2, 1, 1, 3));
}

TEST(Group, EvaluateWordIsMatrixProduct)
{
    const SchottkyGroup g({build_phi(1.0, -1.0, 0.01), build_phi(5.0, 3.0, 0.01)});
    EXPECT_TRUE(g.evaluate_word(GroupWord{}).projectively_equal(MoebiusMap::identity()));
    const MoebiusMap& a = g.generator(1);
    const MoebiusMap& b = g.generator(2);
    const MoebiusMap prod = MoebiusMap::unchecked(a.a() * b.a() + a.b() * b.c(), a.a() * b.b() + a.b() * b.d(),
                                                  a.c() * b.a() + a.d() * b.c(), a.c() * b.b() + a.d() * b.d());
    EXPECT_TRUE(g.evaluate_word(GroupWord{1, 2}).projectively_equal(prod, 1e-14));
    EXPECT_THROW(g.evaluate_word(GroupWord{3}), Error);
}

TEST(Group, WordsAreLoxodromicAndCyclicInvariant)
{
    const SchottkyGroup g({build_phi(1.0, -1.0, 0.2), build_phi(5.0, 3.0, cplx(0.1, 0.15))});
    for (const auto& w : enumerate_reduced_words(2, 4)) {
        if (w.empty())
            continue;
        const auto fp = fixed_points_and_multiplier(g.evaluate_word(w));
        EXPECT_LT(std::abs(fp.multiplier), 1.0);
        // Cyclic conjugates of cyclically reduced words.
        if (w.size() > 1 && w.front() != -w.back()) {
            std::vector<int> rot(w.letters().begin() + 1, w.letters().end());
            rot.push_back(w.front());
            const auto fr = fixed_points_and_multiplier(g.evaluate_word(GroupWord(rot)));
            EXPECT_LT(std::abs(fr.multiplier - fp.multiplier), 1e-9 * std::abs(fp.multiplier));
        }
    }
}
