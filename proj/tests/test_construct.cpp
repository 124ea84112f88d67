#include <gtest/gtest.h>

#include <random>

#include "dilation_checks.hpp"
#include "fusionframe/construct.hpp"
#include "fusionframe/examples.hpp"
#include "fusionframe/random.hpp"
#include "oracles.hpp"

using namespace fusionframe;
using oracle::cols;
using oracle::e;

namespace {

Subspace span(std::initializer_list<Vec> vs) { return orthonormal_basis(cols(vs)); }

double dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

WeightedFamily split_parseval(double w = 1.0 / std::sqrt(2.0))
{
    return WeightedFamily(2, {{w, span({e(2, 1)})}, {w, span({e(2, 2)})}, {w, span({e(2, 1), e(2, 2)})}});
}

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

/// Rescale so that A >= 1.
WeightedFamily lift(const WeightedFamily& w)
{
    const double a = analyze_fusion(w).lower_A;
    const double s = a < 1.0 ? 1.0 / std::sqrt(a) * (1.0 + 1e-9) : 1.0;
    return rescale(w, std::vector<double>(w.size(), s));
}

} // namespace

TEST(WeightWindow, InvertibleOperatorIsFeasible)
{
    random::Engine rng(200);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 1 + trial % 5;
        const auto obs = random_obs(rng, n);
        const Mat g = random::invertible(n, rng);
        const double A = gamma(g) * gamma(g), B = op_norm(g) * op_norm(g);
        const ImageFamily r = image_fusion_frame(obs, g, A, B);
        EXPECT_TRUE(r.window.feasible);
        EXPECT_TRUE(r.analysis.is_rbs);
        for (std::size_t i = 0; i < obs.size(); ++i) {
            EXPECT_LE(r.window.lo[i], r.window.chosen_weight[i] * (1 + 1e-12));
            EXPECT_LE(r.window.chosen_weight[i], r.window.hi[i] * (1 + 1e-12));
        }
    }
}

TEST(WeightWindow, TwoScaleTruncationFeasibleUpToThree)
{
    const examples::ObsImage img = examples::ex7_2(4);
    const WeightWindow win = weight_window(img.obs, img.t, 1.0, 4.0);
    ASSERT_EQ(win.gammas.size(), 3u);
    for (std::size_t k = 1; k <= 3; ++k) {
        EXPECT_NEAR(win.gammas[k - 1], 1.0 / std::sqrt(k + 1.0), 1e-12);
        EXPECT_NEAR(win.norms[k - 1], 1.0, 1e-12);
        EXPECT_NEAR(win.lo[k - 1], 0.5, 1e-12);
        EXPECT_NEAR(win.hi[k - 1], 1.0 / std::sqrt(k + 1.0), 1e-12);
    }
    EXPECT_TRUE(win.feasible);

    const ImageFamily r = image_fusion_frame(img.obs, img.t, 1.0, 4.0);
    EXPECT_TRUE(r.analysis.is_fusion_frame);
    const double g = gamma(img.t), t = op_norm(img.t);
    EXPECT_LE(g * g / 4.0, r.analysis.lower_A + 1e-8);
    EXPECT_LE(r.analysis.upper_B, t * t / 1.0 + 1e-8);
}

TEST(WeightWindow, TwoScaleTruncationInfeasibleAtFour)
{
    const examples::ObsImage img = examples::ex7_2(5);
    const WeightWindow win = weight_window(img.obs, img.t, 1.0, 4.0);
    EXPECT_FALSE(win.feasible);
    ASSERT_TRUE(win.first_violation.has_value());
    EXPECT_EQ(*win.first_violation, 3u);
    try {
        image_fusion_frame(img.obs, img.t, 1.0, 4.0);
        FAIL() << "expected InfeasibleWindow";
    } catch (const InfeasibleWindow& ex) {
        EXPECT_EQ(ex.index(), 3u);
        EXPECT_NEAR(ex.ratio(), 1.0 / std::sqrt(5.0), 1e-12);
    }
}

TEST(WeightWindow, DyadicRatios)
{
    for (std::size_t n : {3u, 5u, 8u}) {
        const examples::ObsImage img = examples::ex7_1(n);
        const WeightWindow win = weight_window(img.obs, img.t);
        const double r = std::pow(2.0, -static_cast<double>(n - 1));
        EXPECT_NEAR(win.ratio_inf, r, 1e-12);
        EXPECT_TRUE(win.feasible);
        // A/B just above ratio_inf² fails, just below succeeds
        EXPECT_FALSE(weight_window(img.obs, img.t, 2.0 * r * r, 1.0).feasible);
        EXPECT_TRUE(weight_window(img.obs, img.t, 0.5 * r * r, 1.0).feasible);
    }
}

TEST(ImageFusionFrame, Errors)
{
    const examples::ObsImage img = examples::ex7_2(4);
    Mat singular = img.t;
    singular.row(3).setZero();
    EXPECT_THROW(image_fusion_frame(img.obs, singular, 1.0, 4.0), PreconditionError);
    EXPECT_THROW(image_fusion_frame(img.obs, img.t, -1.0, 4.0), PreconditionError);
    std::vector<Subspace> overlapping = img.obs;
    overlapping[1] = overlapping[0];
    EXPECT_THROW(image_fusion_frame(overlapping, img.t), PreconditionError);
}

TEST(ImageFusionFrame, ExcessEqualsKernelDimension)
{
    random::Engine rng(201);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index k = 2 + trial % 5;
        const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(1, k)(rng);
        const auto obs = random_obs(rng, k);
        const Mat t = random::gaussian(n, k, rng);
        bool trivial = true;
        for (const auto& s : obs)
            trivial = trivial && numeric_rank(t * s.basis()) == s.dim();
        const ImageFamily r = image_fusion_frame(obs, t);
        EXPECT_LE(gamma(t) * gamma(t) / r.window.B, r.analysis.lower_A + 1e-8);
        EXPECT_LE(r.analysis.upper_B, op_norm(t) * op_norm(t) / r.window.A + 1e-8);
        if (trivial) {
            EXPECT_EQ(r.analysis.excess, static_cast<std::size_t>(k - n));
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(InvertibleImage, UnitaryKeepsBounds)
{
    random::Engine rng(202);
    const WeightedFamily w = examples::ex7_6({1, 1, 1});
    const auto [gw, ga] = invertible_image(w, random::unitary(4, rng));
    EXPECT_NEAR(ga.lower_A, 1.0, 1e-9);
    EXPECT_NEAR(ga.upper_B, 2.0, 1e-9);
}

TEST(InvertibleImage, DoublingLeavesSubspacesFixed)
{
    // 2·W_i = W_i, so the family and its bounds are unchanged; only the
    // composed operator 2·T has its bounds scaled by 4.
    const WeightedFamily w = examples::ex7_6({1, 1, 1});
    const auto [gw, ga] = invertible_image(w, 2.0 * Mat::Identity(4, 4));
    EXPECT_NEAR(ga.lower_A, 1.0, 1e-9);
    EXPECT_NEAR(ga.upper_B, 2.0, 1e-9);
    const Mat t2 = 2.0 * fusion_synthesis(w).matrix;
    EXPECT_NEAR(oracle::gamma(t2) * oracle::gamma(t2), 4.0, 1e-9);
    EXPECT_NEAR(oracle::norm(t2) * oracle::norm(t2), 8.0, 1e-9);
}

TEST(InvertibleImage, RandomKeepsExcess)
{
    random::Engine rng(203);
    const WeightedFamily w = examples::ex7_6({1, 1, 1});
    for (int trial = 0; trial < 20; ++trial) {
        const Mat g = random::invertible(4, rng);
        const auto [gw, ga] = invertible_image(w, g);
        EXPECT_EQ(ga.excess, 1u);
        EXPECT_EQ(5u - oracle::rank(g * fusion_synthesis(w).matrix), 1u);
    }
}

TEST(InvertibleImage, RejectsSingular)
{
    EXPECT_THROW(invertible_image(examples::ex7_6({1, 1, 1}), oracle::diag({1, 1, 1, 0})), PreconditionError);
}

TEST(RieszDilation, RieszBasisNeedsNoExtraRoom)
{
    const WeightedFamily w(3, {{2.0, span({e(3, 1), e(3, 2) + e(3, 1)})}, {0.5, span({e(3, 3) + e(3, 1)})}});
    const Dilation d = riesz_dilation(w);
    EXPECT_EQ(d.big_dim, 3u);
    EXPECT_TRUE(dilation_check::ok(dilation_check::riesz(w, d)));
    for (std::size_t i = 0; i < w.size(); ++i)
        EXPECT_LT(subspace_distance(d.pieces[i], w[i].subspace), 1e-10);
}

TEST(RieszDilation, SplitParseval)
{
    const WeightedFamily w = split_parseval();
    const Dilation d = riesz_dilation(w);
    // dim K_W = 4, rank 2
    EXPECT_EQ(d.big_dim, 4u);
    EXPECT_TRUE(dilation_check::ok(dilation_check::riesz(w, d)));
}

TEST(RieszDilation, FourSpace)
{
    const WeightedFamily w = examples::ex7_6({1, 1, 1});
    const Dilation d = riesz_dilation(w);
    EXPECT_EQ(d.big_dim, 5u);
    const auto r = dilation_check::riesz(w, d);
    EXPECT_TRUE(dilation_check::ok(r));
    EXPECT_LT(r.gamma_error, 1e-10);
    EXPECT_LT(r.norm_error, 1e-10);
    EXPECT_EQ(d.kind, DilationKind::riesz);
}

TEST(RieszDilation, RejectsNonFrames)
{
    EXPECT_THROW(riesz_dilation(WeightedFamily(2, {{1.0, span({e(2, 1)})}})), PreconditionError);
}

TEST(RieszDilation, RandomFamilies)
{
    random::Engine rng(204);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = random::fusion_frame(rng);
        const Dilation d = riesz_dilation(w);
        const auto r = dilation_check::riesz(w, d);
        EXPECT_TRUE(dilation_check::ok(r)) << "trial " << trial << " recovery " << r.recovery << " gamma "
                                           << r.gamma_error << " norm " << r.norm_error;
    }
}

TEST(ParsevalDilation, OrthonormalBasisOfSubspaces)
{
    const WeightedFamily w(3, {{1.0, span({e(3, 2)})}, {1.0, span({e(3, 1), e(3, 3)})}});
    const Dilation d = parseval_dilation(w);
    EXPECT_EQ(d.big_dim, 3u);
    EXPECT_EQ(d.kind, DilationKind::orthonormal_basis);
    for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_LT(subspace_distance(d.pieces[i], w[i].subspace), 1e-12);
        EXPECT_TRUE(angle(Subspace::from_orthonormal(d.embed), d.pieces[i]).inclusion_case);
    }
}

TEST(ParsevalDilation, SplitParseval)
{
    const WeightedFamily w = split_parseval();
    const Dilation d = parseval_dilation(w);
    EXPECT_EQ(d.big_dim, 4u);
    EXPECT_LT(oracle::unitary_defect(d.carrier_map), 1e-12);
    const Subspace h = Subspace::from_orthonormal(d.embed);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(angle(h, d.pieces[i]).cosine, 1.0 / std::sqrt(2.0), 1e-10);
        for (std::size_t j = i + 1; j < 3; ++j)
            EXPECT_LT(oracle::norm(d.pieces[i].basis().adjoint() * d.pieces[j].basis()), 1e-10);
    }
    EXPECT_TRUE(dilation_check::ok(dilation_check::riesz(w, d)));
}

TEST(ParsevalDilation, RandomParsevalFamilies)
{
    random::Engine rng(205);
    for (int trial = 0; trial < 50; ++trial) {
        // S^{-1/2} image of a random family with unit weights is Parseval when the
        // members are pairwise orthogonal; use split ONB pieces with equal weights.
        const Eigen::Index n = 1 + trial % 5;
        const auto obs = random_obs(rng, n);
        const auto obs2 = random_obs(rng, n);
        std::vector<Member> ms;
        for (const auto& s : obs)
            ms.push_back({1.0 / std::sqrt(2.0), s});
        for (const auto& s : obs2)
            ms.push_back({1.0 / std::sqrt(2.0), s});
        const WeightedFamily w(static_cast<std::size_t>(n), ms);
        ASSERT_TRUE(analyze_fusion(w).is_parseval);
        const Dilation d = parseval_dilation(w);
        EXPECT_EQ(d.big_dim, 2 * static_cast<std::size_t>(n));
        EXPECT_LT(oracle::unitary_defect(d.carrier_map), 1e-10);
        EXPECT_TRUE(dilation_check::ok(dilation_check::riesz(w, d)));
    }
}

TEST(ParsevalDilation, RejectsNonParseval)
{
    EXPECT_THROW(parseval_dilation(examples::ex7_6({1, 1, 1})), PreconditionError);
}

TEST(ObliqueDilation, WholeSpace)
{
    const WeightedFamily w(3, {{1.0, orthonormal_basis(Mat::Identity(3, 3))}});
    const Dilation d = oblique_dilation(w);
    EXPECT_LT(d.defect_root.norm(), 1e-12);
    EXPECT_LT(dist(d.projection, d.projection.adjoint()), 1e-12);
    EXPECT_TRUE(dilation_check::ok(dilation_check::oblique(w, d)));
}

TEST(ObliqueDilation, FourSpace)
{
    const WeightedFamily w = examples::ex7_6({1, 1, 1});
    const Dilation d = oblique_dilation(w);
    EXPECT_EQ(d.big_dim, 9u);
    EXPECT_LT(dist(d.defect_root, oracle::diag({1, 0, 0, 0})), 1e-10);
    const auto r = dilation_check::oblique(w, d);
    EXPECT_TRUE(dilation_check::ok(r)) << r.recovery << ' ' << r.norm_error << ' ' << r.gamma_error;
    EXPECT_EQ(d.kind, DilationKind::orthonormal_system);
}

TEST(ObliqueDilation, RescaledSplitParseval)
{
    const WeightedFamily w = rescale(split_parseval(), {std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0)});
    EXPECT_NEAR(analyze_fusion(w).lower_A, 2.0, 1e-12);
    const Dilation d = oblique_dilation(w);
    EXPECT_TRUE(dilation_check::ok(dilation_check::oblique(w, d)));
}

TEST(ObliqueDilation, RejectsSmallLowerBound)
{
    try {
        oblique_dilation(split_parseval(0.5));
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError& ex) {
        EXPECT_STREQ(ex.what(), "lower bound A < 1; rescale weights");
    }
}

TEST(ObliqueDilation, RandomFamilies)
{
    random::Engine rng(206);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedFamily w = lift(random::fusion_frame(rng));
        const Dilation d = oblique_dilation(w);
        EXPECT_EQ(d.big_dim, w.ambient_dim() + w.total_dim());
        const auto r = dilation_check::oblique(w, d);
        EXPECT_TRUE(dilation_check::ok(r)) << "trial " << trial << " idem " << r.idempotence << " range " << r.range
                                           << " recovery " << r.recovery << " norm " << r.norm_error << " gamma "
                                           << r.gamma_error << " orth " << r.orthonormality;
    }
}

TEST(ParsevalDilation, PieceInsideHMeansUnitWeight)
{
    const double h = 1.0 / std::sqrt(2.0);
    const Subspace plane = span({e(3, 2), e(3, 3)});
    const WeightedFamily w(3, {{1.0, span({e(3, 1)})}, {h, plane}, {h, plane}});
    const Dilation d = parseval_dilation(w);
    const Subspace embedded_h = Subspace::from_orthonormal(d.embed);
    EXPECT_TRUE(contains(embedded_h, d.pieces[0], 1e-8));
    EXPECT_TRUE(angle(embedded_h, d.pieces[0]).inclusion_case);
    EXPECT_NEAR(w[0].weight, 1.0, 1e-8);
    EXPECT_NEAR(oracle::norm(d.projection * d.pieces[0].basis()), 1.0, 1e-8);
    EXPECT_FALSE(contains(embedded_h, d.pieces[1], 1e-8));
}
