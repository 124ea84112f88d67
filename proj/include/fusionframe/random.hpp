#ifndef FUSIONFRAME_RANDOM_HPP
#define FUSIONFRAME_RANDOM_HPP

// Seeded random matrices, subspaces and families for property tests and
// statistical checks. Every generator takes the engine explicitly.

#include <cstdint>
#include <random>
#include <vector>

#include "fusionframe/fusion.hpp"
#include "fusionframe/linalg.hpp"

namespace fusionframe::random {

using Engine = std::mt19937_64;

inline Mat gaussian(Eigen::Index rows, Eigen::Index cols, Engine& rng)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = Complex(nd(rng), nd(rng)) / std::sqrt(2.0);
    return m;
}

/// Haar-distributed unitary: QR of a Gaussian matrix with R's diagonal made positive.
inline Mat unitary(Eigen::Index n, Engine& rng)
{
    const Mat g = gaussian(n, n, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double a = std::abs(r(k, k));
        if (a > 0.0)
            q.col(k) *= r(k, k) / a;
    }
    return q;
}

/// U diag(s) Vᴴ with singular values drawn from [lo, hi].
inline Mat invertible(Eigen::Index n, Engine& rng, double lo = 0.25, double hi = 2.0)
{
    std::uniform_real_distribution<double> ud(lo, hi);
    RealVec s(n);
    for (Eigen::Index k = 0; k < n; ++k)
        s(k) = ud(rng);
    return unitary(n, rng) * s.cast<Complex>().asDiagonal() * unitary(n, rng).adjoint();
}

inline Subspace subspace(Eigen::Index n, Eigen::Index d, Engine& rng)
{
    return orthonormal_basis(gaussian(n, d, rng));
}

struct FamilyOptions {
    std::size_t max_dim = 6;
    std::size_t max_members = 5;
    double min_weight = 0.3;
    double max_weight = 2.0;
    /// Chance that a member reuses directions of an earlier member.
    double overlap_probability = 0.4;
};

/// Random family that is a fusion frame: ambient dimension in [1, max_dim],
/// 1..max_members members, some sharing directions so that intersections
/// and excess inside a single member occur.
inline WeightedFamily fusion_frame(Engine& rng, const FamilyOptions& opt = {})
{
    std::uniform_int_distribution<std::size_t> nd(1, opt.max_dim);
    std::uniform_real_distribution<double> wd(opt.min_weight, opt.max_weight);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (;;) {
        const std::size_t n = nd(rng);
        std::uniform_int_distribution<std::size_t> md(1, opt.max_members);
        const std::size_t members = md(rng);
        std::uniform_int_distribution<std::size_t> dd(1, n);
        std::vector<Member> ms;
        for (std::size_t i = 0; i < members; ++i) {
            const auto d = static_cast<Eigen::Index>(dd(rng));
            Mat cols = gaussian(static_cast<Eigen::Index>(n), d, rng);
            if (!ms.empty() && coin(rng) < opt.overlap_probability) {
                std::uniform_int_distribution<std::size_t> pick(0, ms.size() - 1);
                const Subspace& prev = ms[pick(rng)].subspace;
                const Eigen::Index shared = std::min<Eigen::Index>(d, static_cast<Eigen::Index>(prev.dim()));
                cols.leftCols(shared) = prev.basis().leftCols(shared);
            }
            ms.push_back({wd(rng), orthonormal_basis(cols)});
        }
        WeightedFamily w(n, std::move(ms));
        if (numeric_rank(fusion_synthesis(w).matrix) == n)
            return w;
    }
}

inline std::vector<double> positive_weights(std::size_t count, Engine& rng, double lo = 0.2, double hi = 3.0)
{
    std::uniform_real_distribution<double> wd(lo, hi);
    std::vector<double> w(count);
    for (auto& x : w)
        x = wd(rng);
    return w;
}

} // namespace fusionframe::random

#endif // FUSIONFRAME_RANDOM_HPP
