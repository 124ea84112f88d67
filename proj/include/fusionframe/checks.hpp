#ifndef FUSIONFRAME_CHECKS_HPP
#define FUSIONFRAME_CHECKS_HPP

// Reproducible checks of two closed-form examples: the diagonal frame operator
// of the {e_1}⊥ / span{e_1, e_k} family and the Parseval obstruction for the
// three-member family in C^4.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "fusionframe/construct.hpp"
#include "fusionframe/examples.hpp"
#include "fusionframe/fusion.hpp"
#include "fusionframe/random.hpp"

namespace fusionframe {

/// ‖S − I‖ for the family G·W_w with W the C^4 example.
inline double parseval_distance_7_6(const Mat& g, const std::vector<double>& weights)
{
    const auto [family, analysis] = invertible_image(examples::ex7_6(weights), g);
    const Mat s = fusion_frame_operator(family);
    return op_norm(s - Mat::Identity(s.rows(), s.cols()));
}

struct ParsevalImpossibility {
    std::size_t samples = 0;
    std::size_t parseval_hits = 0;
    double min_distance = std::numeric_limits<double>::infinity();
    double max_distance = 0.0;
};

/// Random invertible G (Gaussian, resampled when nearly singular) and random
/// positive weights; counts how often G·W_w comes out Parseval.
inline ParsevalImpossibility parseval_impossibility_7_6(std::size_t samples, std::uint64_t seed)
{
    if (samples == 0)
        throw PreconditionError("parseval_impossibility_7_6: samples must be at least 1");
    random::Engine rng(seed);
    ParsevalImpossibility r;
    r.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        Mat g;
        do
            g = random::gaussian(4, 4, rng);
        while (gamma(g) < 1e-6);
        const auto w = random::positive_weights(3, rng);
        const auto [family, analysis] = invertible_image(examples::ex7_6(w), g);
        if (analysis.is_parseval)
            ++r.parseval_hits;
        const Mat sop = fusion_frame_operator(family);
        const double d = op_norm(sop - Mat::Identity(4, 4));
        r.min_distance = std::min(r.min_distance, d);
        r.max_distance = std::max(r.max_distance, d);
    }
    return r;
}

struct DiagonalCheck {
    Mat s;
    RealVec expected;
    double max_diagonal_error = 0.0;
    double max_off_diagonal = 0.0;
    /// S^{-1/2} W_i = W_i for every member.
    bool preserves_subspaces = false;
    bool is_tight = false;
};

/// S e_1 = (Σ_{k≥2} w_k²) e_1 and S e_j = (w_1² + w_j²) e_j; throws
/// InvariantError when S departs from that by more than 1e-10.
inline DiagonalCheck diagonal_check_7_5(std::size_t n, const std::vector<double>& weights)
{
    const WeightedFamily fam = examples::ex7_5(n, weights);
    DiagonalCheck r;
    r.s = fusion_frame_operator(fam);
    const auto dim = static_cast<Eigen::Index>(n);
    r.expected = RealVec::Zero(dim);
    for (std::size_t k = 1; k < n; ++k)
        r.expected(0) += weights[k] * weights[k];
    for (Eigen::Index j = 1; j < dim; ++j)
        r.expected(j) = weights[0] * weights[0] + weights[static_cast<std::size_t>(j)] * weights[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (i == j)
                r.max_diagonal_error = std::max(r.max_diagonal_error, std::abs(r.s(i, i) - r.expected(i)));
            else
                r.max_off_diagonal = std::max(r.max_off_diagonal, std::abs(r.s(i, j)));
        }
    if (r.max_diagonal_error > 1e-10 || r.max_off_diagonal > 1e-10)
        throw InvariantError("diagonal_check_7_5: frame operator departs from the diagonal law");

    Eigen::SelfAdjointEigenSolver<Mat> es(r.s);
    const Mat inv_root = es.operatorInverseSqrt();
    r.preserves_subspaces = true;
    for (const auto& m : fam.members())
        r.preserves_subspaces = r.preserves_subspaces && subspace_distance(image(inv_root, m.subspace), m.subspace) <= 1e-8;
    r.is_tight = analyze_fusion(fam).is_tight;
    return r;
}

} // namespace fusionframe

#endif // FUSIONFRAME_CHECKS_HPP
