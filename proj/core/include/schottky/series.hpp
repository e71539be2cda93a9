#pragma once

#include "schottky/group.hpp"

#include <cstddef>
#include <vector>

namespace schottky {

/// Truncation controls for the group series.
struct TruncationPolicy {
    /// Hard limit on word length.
    int max_word_len = 24;
    /// Relative tail tolerance.
    double tail_tol = 1e-10;
    /// Hard cap on the number of retained terms.
    std::size_t max_terms = 4'000'000;
};

struct TailReport {
    int depth = 0;
    std::size_t terms = 0;
    /// Estimated remainder relative to the reference scale.
    double tail = 0.0;
    double shell_ratio = 0.0;
    bool converged = false;
};

/// Sum over a pruned word tree of 1/(z - p_w) - 1/(z - q_w).
class PolePairSeries {
public:
    struct Pair {
        cplx p, q;
        cplx delta;    // p - q, carried without cancellation
        int first = 0; // first letter of the word, 0 for the identity
    };

    PolePairSeries() = default;

    /// Pairs (gamma p0, gamma q0) over words whose last letter is not +-excluded
    /// (excluded = 0: all reduced words).
    static PolePairSeries build(const SchottkyGroup& group, cplx p0, cplx q0, int excluded,
                                const TruncationPolicy& policy);

    /// Throws PoleProximity within 1e-8 of a pole.
    cplx density(cplx z) const;
    /// Exact integral along the straight segment a -> b.
    cplx integrate_segment(cplx a, cplx b) const;

    const std::vector<Pair>& pairs() const noexcept { return pairs_; }
    const TailReport& tail() const noexcept { return tail_; }

private:
    std::vector<Pair> pairs_;
    TailReport tail_;
};

/// Sum over a pruned word tree of gamma'(z) / (gamma(z) - x_t)^k for several k at once.
class MapSeries {
public:
    struct Term {
        cplx a, b, c, d; // unit determinant
        cplx pole;       // gamma^{-1}(x_t)
    };

    MapSeries() = default;

    static MapSeries build(const SchottkyGroup& group, cplx x_t, bool include_identity,
                           const TruncationPolicy& policy);

    /// Value for exponent k >= 2.
    cplx density(cplx z, int k) const;
    /// Values for k = 2..k_max, written to out[k-2].
    void densities(cplx z, int k_max, std::vector<cplx>& out) const;
    /// Exact integral along a -> b for exponent k.
    cplx integrate_segment(cplx a, cplx b, int k) const;

    const std::vector<Term>& terms() const noexcept { return terms_; }
    const TailReport& tail() const noexcept { return tail_; }
    cplx marked() const noexcept { return x_t_; }

private:
    std::vector<Term> terms_;
    TailReport tail_;
    cplx x_t_{0.0};
};

/// log(1 + u) accurate for small |u|.
cplx log1p(cplx u) noexcept;

/// Distance from z to the segment [a, b].
double segment_distance(cplx z, cplx a, cplx b) noexcept;

} // namespace schottky
