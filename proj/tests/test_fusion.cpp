#include <gtest/gtest.h>

#include <random>

#include "fusionframe/construct.hpp"
#include "fusionframe/examples.hpp"
#include "fusionframe/fusion.hpp"
#include "fusionframe/random.hpp"
#include "oracles.hpp"

using namespace fusionframe;
using oracle::cols;
using oracle::e;

namespace {

Subspace span(std::initializer_list<Vec> vs) { return orthonormal_basis(cols(vs)); }

double dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

WeightedFamily four_space(std::vector<double> w = {1, 1, 1}) { return examples::ex7_6(w); }

/// {span e1, span e2, C²} with equal weights 1/√2.
WeightedFamily split_parseval()
{
    const double w = 1.0 / std::sqrt(2.0);
    return WeightedFamily(2, {{w, span({e(2, 1)})}, {w, span({e(2, 2)})}, {w, span({e(2, 1), e(2, 2)})}});
}

/// OBS of C^n from a random partition of a random unitary's columns.
std::vector<Subspace> random_obs(random::Engine& rng, Eigen::Index n)
{
    const Mat u = random::unitary(n, rng);
    std::vector<Subspace> out;
    Eigen::Index at = 0;
    while (at < n) {
        const Eigen::Index d = std::uniform_int_distribution<Eigen::Index>(1, n - at)(rng);
        out.push_back(Subspace::from_orthonormal(u.middleCols(at, d)));
        at += d;
    }
    return out;
}

std::vector<Mat> oracle_projectors(const WeightedFamily& w)
{
    std::vector<Mat> ps;
    for (const auto& m : w.members())
        ps.push_back(oracle::projector_from_span(m.subspace.basis()));
    return ps;
}

} // namespace

TEST(WeightedFamily, Validation)
{
    const Subspace line = span({e(2, 1)});
    EXPECT_THROW(WeightedFamily(2, {}), PreconditionError);
    EXPECT_THROW(WeightedFamily(2, {{0.0, line}}), PreconditionError);
    EXPECT_THROW(WeightedFamily(2, {{-1.0, line}}), PreconditionError);
    EXPECT_THROW(WeightedFamily(2, {{INFINITY, line}}), PreconditionError);
    EXPECT_THROW(WeightedFamily(3, {{1.0, line}}), PreconditionError);
    EXPECT_THROW(WeightedFamily(2, {{1.0, Subspace::zero(2)}}), PreconditionError);
}

TEST(FusionSynthesis, SingleFullMember)
{
    const WeightedFamily w(3, {{1.0, orthonormal_basis(Mat::Identity(3, 3))}});
    const Mat t = fusion_synthesis(w).matrix;
    EXPECT_LT(dist(t * t.adjoint(), Mat::Identity(3, 3)), 1e-14);
    EXPECT_TRUE(analyze_fusion(w).is_obs);
}

TEST(FusionSynthesis, ObsPartitionIsPermutation)
{
    const WeightedFamily w(3, {{1.0, span({e(3, 3)})}, {1.0, span({e(3, 1), e(3, 2)})}});
    const Mat t = fusion_synthesis(w).matrix;
    for (Eigen::Index j = 0; j < 3; ++j) {
        Eigen::Index hits = 0;
        for (Eigen::Index i = 0; i < 3; ++i)
            hits += std::abs(std::abs(t(i, j)) - 1.0) < 1e-14 ? 1 : 0;
        EXPECT_EQ(hits, 1);
    }
    EXPECT_LT(dist(t.adjoint() * t, Mat::Identity(3, 3)), 1e-14);
}

TEST(FusionSynthesis, FourSpaceBlocks)
{
    const FusionSynthesis syn = fusion_synthesis(four_space());
    ASSERT_EQ(syn.matrix.rows(), 4);
    ASSERT_EQ(syn.matrix.cols(), 5);
    ASSERT_EQ(syn.blocks.size(), 3u);
    EXPECT_EQ(syn.blocks[2].offset, 4);
    // columns span e1,e2 | e1,e3 | e4 block by block
    EXPECT_LT(subspace_distance(orthonormal_basis(syn.matrix.leftCols(2)), span({e(4, 1), e(4, 2)})), 1e-14);
    EXPECT_LT(subspace_distance(orthonormal_basis(syn.matrix.middleCols(2, 2)), span({e(4, 1), e(4, 3)})), 1e-14);
    EXPECT_LT(subspace_distance(orthonormal_basis(syn.matrix.rightCols(1)), span({e(4, 4)})), 1e-14);
}

TEST(FusionFrameOperator, Examples)
{
    const WeightedFamily obs(2, {{1.0, span({e(2, 1)})}, {1.0, span({e(2, 2)})}});
    EXPECT_LT(dist(fusion_frame_operator(obs), Mat::Identity(2, 2)), 1e-15);

    const WeightedFamily w = four_space();
    const Mat expected = oracle::weighted_projector_sum({1, 1, 1}, oracle_projectors(w));
    EXPECT_LT(dist(expected, oracle::diag({2, 1, 1, 1})), 1e-14);
    EXPECT_LT(dist(fusion_frame_operator(w), expected), 1e-14);

    EXPECT_LT(dist(fusion_frame_operator(split_parseval()), Mat::Identity(2, 2)), 1e-14);
}

TEST(AnalyzeFusion, ObsPartition)
{
    const FusionAnalysis a = analyze_fusion(WeightedFamily(3, {{1.0, span({e(3, 1)})}, {1.0, span({e(3, 2), e(3, 3)})}}));
    EXPECT_TRUE(a.is_fusion_frame);
    EXPECT_NEAR(a.lower_A, 1.0, 1e-14);
    EXPECT_NEAR(a.upper_B, 1.0, 1e-14);
    EXPECT_TRUE(a.is_parseval);
    EXPECT_TRUE(a.is_obs);
    EXPECT_TRUE(a.is_rbs);
    EXPECT_TRUE(a.is_minimal);
    EXPECT_EQ(a.excess, 0u);
}

TEST(AnalyzeFusion, FourSpace)
{
    const FusionAnalysis a = analyze_fusion(four_space());
    EXPECT_TRUE(a.is_bessel);
    EXPECT_TRUE(a.is_fusion_frame);
    EXPECT_NEAR(a.lower_A, 1.0, 1e-9);
    EXPECT_NEAR(a.upper_B, 2.0, 1e-9);
    EXPECT_EQ(a.excess, 5u - 4u);
    EXPECT_FALSE(a.is_tight);
    EXPECT_FALSE(a.is_minimal);
    EXPECT_FALSE(a.is_rbs);
}

TEST(AnalyzeFusion, SplitParseval)
{
    const FusionAnalysis a = analyze_fusion(split_parseval());
    EXPECT_TRUE(a.is_parseval);
    EXPECT_TRUE(a.is_tight);
    // dim K_W = 1 + 1 + 2 = 4, rank 2
    EXPECT_EQ(a.excess, 2u);
    EXPECT_FALSE(a.is_obs);
}

TEST(AnalyzeFusion, NotAFusionFrame)
{
    const FusionAnalysis a = analyze_fusion(WeightedFamily(3, {{1.0, span({e(3, 1)})}, {2.0, span({e(3, 2)})}}));
    EXPECT_TRUE(a.is_bessel);
    EXPECT_FALSE(a.is_fusion_frame);
    EXPECT_EQ(a.lower_A, 0.0);
    EXPECT_NEAR(a.upper_B, 4.0, 1e-12);
    EXPECT_FALSE(a.is_rbs);
}

TEST(AnalyzeFusion, MatchesEigenOracle)
{
    random::Engine rng(100);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const FusionAnalysis a = analyze_fusion(w);
        const Mat s = oracle::weighted_projector_sum(w.weights(), oracle_projectors(w));
        const RealVec ev = oracle::hermitian_eigenvalues(s);
        ASSERT_TRUE(a.is_fusion_frame);
        EXPECT_NEAR(a.lower_A, ev.minCoeff(), 1e-8);
        EXPECT_NEAR(a.upper_B, ev.maxCoeff(), 1e-8);
        EXPECT_EQ(a.excess, w.total_dim() - oracle::rank(fusion_synthesis(w).matrix));
        EXPECT_EQ(a.is_rbs, a.excess == 0);
        if (a.is_obs) {
            EXPECT_TRUE(a.is_parseval);
            for (double x : w.weights())
                EXPECT_NEAR(x, 1.0, 1e-12);
        }
    }
}

TEST(FusionProperties, AnalysisOperatorBlocks)
{
    random::Engine rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const FusionSynthesis syn = fusion_synthesis(w);
        const Vec f = random::gaussian(static_cast<Eigen::Index>(w.ambient_dim()), 1, rng).col(0);
        const Vec coeffs = syn.matrix.adjoint() * f;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Vec pf = oracle::projector_from_span(w[i].subspace.basis()) * f;
            EXPECT_NEAR(coeffs.segment(syn.blocks[i].offset, syn.blocks[i].size).norm(), w[i].weight * pf.norm(), 1e-10);
        }
    }
}

TEST(FusionProperties, BoundSandwich)
{
    random::Engine rng(102);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const FusionAnalysis a = analyze_fusion(w);
        const Mat s = fusion_frame_operator(w);
        for (int k = 0; k < 5; ++k) {
            const Vec f = random::gaussian(static_cast<Eigen::Index>(w.ambient_dim()), 1, rng).col(0);
            const double q = f.dot(s * f).real();
            EXPECT_LE(a.lower_A * f.squaredNorm(), q + 1e-8);
            EXPECT_LE(q, a.upper_B * f.squaredNorm() + 1e-8);
        }
    }
}

TEST(FusionProperties, BlockNormsEqualWeights)
{
    random::Engine rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const FusionSynthesis syn = fusion_synthesis(w);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Mat tp = syn.matrix * syn.block_projector(i);
            EXPECT_NEAR(gamma(tp), w[i].weight, 1e-10);
            EXPECT_NEAR(op_norm(tp), w[i].weight, 1e-10);
        }
    }
}

TEST(FusionProperties, InvertibleImagePreservesExcess)
{
    random::Engine rng(104);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const Mat g = random::invertible(static_cast<Eigen::Index>(w.ambient_dim()), rng);
        const auto [gw, ga] = invertible_image(w, g);
        const FusionAnalysis a = analyze_fusion(w);
        const double cond = op_norm(g) * op_norm(g.inverse());
        EXPECT_EQ(ga.is_fusion_frame, a.is_fusion_frame);
        EXPECT_EQ(ga.excess, a.excess);
        EXPECT_LE(a.lower_A / (cond * cond), ga.lower_A + 1e-8);
        EXPECT_LE(ga.upper_B, cond * cond * a.upper_B + 1e-8);
    }
}

TEST(FusionProperties, ExcessIndependentOfWeights)
{
    random::Engine rng(105);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const WeightedFamily v = rescale(w, random::positive_weights(w.size(), rng));
        EXPECT_EQ(analyze_fusion(v).excess, analyze_fusion(w).excess);
        EXPECT_TRUE(analyze_fusion(v).is_fusion_frame);
    }
}

TEST(FusionProperties, CanonicalImageOfRieszBasisIsOrthonormal)
{
    random::Engine rng(106);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 6;
        const auto obs = random_obs(rng, n);
        const Mat g = random::invertible(n, rng);
        std::vector<Subspace> rbs;
        for (const auto& s : obs)
            rbs.push_back(image(g, s));
        const WeightedFamily w = WeightedFamily::uniform(static_cast<std::size_t>(n), rbs);
        ASSERT_TRUE(analyze_fusion(w).is_rbs);
        Eigen::SelfAdjointEigenSolver<Mat> es(fusion_frame_operator(w));
        std::vector<Subspace> moved;
        for (const auto& s : rbs)
            moved.push_back(image(es.operatorInverseSqrt(), s));
        const WeightedFamily u = WeightedFamily::uniform(static_cast<std::size_t>(n), moved);
        const FusionAnalysis a = analyze_fusion(u);
        EXPECT_TRUE(a.is_parseval);
        EXPECT_TRUE(a.is_obs);
        for (std::size_t i = 0; i < moved.size(); ++i)
            for (std::size_t j = i + 1; j < moved.size(); ++j)
                EXPECT_LE(angle(moved[i], moved[j]).cosine, 1e-8);
    }
}

TEST(Rescale, Examples)
{
    const WeightedFamily w = four_space();
    const WeightedFamily same = rescale(w, {1, 1, 1});
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(same[i].weight, w[i].weight);
        EXPECT_EQ(dist(same[i].subspace.basis(), w[i].subspace.basis()), 0.0);
    }
    const WeightedFamily r = rescale(w, {2, 3, 5});
    EXPECT_EQ(r[2].weight, 5.0);
    EXPECT_EQ(analyze_fusion(r).excess, 1u);
    EXPECT_EQ(5u - oracle::rank(fusion_synthesis(r).matrix), 1u);
}

TEST(Rescale, Errors)
{
    EXPECT_THROW(rescale(four_space(), {1, 1}), PreconditionError);
    EXPECT_THROW(rescale(four_space(), {1, 0, 1}), PreconditionError);
}

TEST(SpanBounds, NonGeneratingFamily)
{
    const SpanBounds b = span_bounds(WeightedFamily(3, {{1.0, span({e(3, 1)})}, {2.0, span({e(3, 2)})}}));
    EXPECT_EQ(b.span_dim, 2u);
    EXPECT_NEAR(b.lower, 1.0, 1e-14);
    EXPECT_NEAR(b.upper, 4.0, 1e-14);
}

TEST(LocalToGlobal, OrthonormalLocalFramesGiveEquality)
{
    const WeightedFamily w = four_space();
    std::vector<VectorFrame> local;
    for (const auto& m : w.members())
        local.push_back(VectorFrame::from_columns(m.subspace.basis()));
    const LocalToGlobal r = local_to_global(w, local);
    EXPECT_NEAR(r.fusion_analysis.lower_A, r.onb_analysis.lower_bound_A, 1e-12);
    EXPECT_NEAR(r.global_analysis.lower_bound_A, 1.0, 1e-9);
    EXPECT_NEAR(r.global_analysis.upper_bound_B, 2.0, 1e-9);
    EXPECT_EQ(r.global.size(), 5u);
    const RealVec ev = oracle::hermitian_eigenvalues(oracle::frame_operator(synthesis(r.global)));
    EXPECT_NEAR(ev.minCoeff(), 1.0, 1e-12);
    EXPECT_NEAR(ev.maxCoeff(), 2.0, 1e-12);
}

TEST(LocalToGlobal, WholeSpaceIsParseval)
{
    const WeightedFamily w(3, {{1.0, orthonormal_basis(Mat::Identity(3, 3))}});
    const LocalToGlobal r = local_to_global(w, {VectorFrame::from_columns(Mat::Identity(3, 3))});
    EXPECT_TRUE(r.global_analysis.is_parseval);
}

TEST(LocalToGlobal, RejectsFramesOutsideTheirSubspace)
{
    const WeightedFamily w(2, {{1.0, span({e(2, 1)})}, {1.0, span({e(2, 2)})}});
    EXPECT_THROW(local_to_global(w, {VectorFrame(2, {e(2, 2)}), VectorFrame(2, {e(2, 2)})}), PreconditionError);
    EXPECT_THROW(local_to_global(w, {VectorFrame(2, {e(2, 1)})}), PreconditionError);
}

TEST(LocalToGlobal, RandomLocalFrames)
{
    random::Engine rng(107);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        std::vector<VectorFrame> local;
        for (const auto& m : w.members()) {
            const auto d = static_cast<Eigen::Index>(m.subspace.dim());
            const Eigen::Index count = d + std::uniform_int_distribution<Eigen::Index>(0, 2)(rng);
            local.push_back(VectorFrame::from_columns(m.subspace.basis() * random::gaussian(d, count, rng)));
        }
        const LocalToGlobal r = local_to_global(w, local);
        EXPECT_EQ(r.global_analysis.is_frame, r.fusion_analysis.is_fusion_frame);
        EXPECT_LE(r.global_analysis.lower_bound_A / r.local_B, r.fusion_analysis.lower_A + 1e-8);
        EXPECT_LE(r.fusion_analysis.upper_B, r.global_analysis.upper_bound_B / r.local_A + 1e-8);
    }
}
