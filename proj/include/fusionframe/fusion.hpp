#ifndef FUSIONFRAME_FUSION_HPP
#define FUSIONFRAME_FUSION_HPP

//
// Weighted subspace families (w_i, W_i) and their synthesis / frame
// operators, optimal bounds, excess and classification.
//
// The synthesis operator acts on K_W = ⊕ W_i. We realize K_W in
// coordinates: block i of C^{Σ d_i} is identified with W_i through the
// orthonormal basis of W_i, so the block of T is w_i · basis(W_i).
//

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fusionframe/frames.hpp"
#include "fusionframe/linalg.hpp"

namespace fusionframe {

namespace tol {
/// |A − B| <= tight * max(A, 1) for tight families; Parseval also needs |A − 1|, |B − 1| below it.
inline constexpr double tight = 1e-8;
/// Pairwise ‖B_iᴴ B_j‖ admitted between members of an orthonormal basis of subspaces.
inline constexpr double obs = 1e-8;
/// Weights within this of 1 count as unit weights.
inline constexpr double unit_weight = 1e-12;
} // namespace tol

struct Member {
    double weight = 1.0;
    Subspace subspace;
};

/// The family W_w = (w_i, W_i): positive finite weights, nonzero subspaces of C^n.
class WeightedFamily {
public:
    WeightedFamily(std::size_t ambient_dim, std::vector<Member> members)
        : ambient_dim_(ambient_dim), members_(std::move(members))
    {
        if (members_.empty())
            throw PreconditionError("WeightedFamily: no members");
        for (std::size_t i = 0; i < members_.size(); ++i) {
            const auto& m = members_[i];
            if (!(m.weight > 0.0) || !std::isfinite(m.weight))
                throw PreconditionError("WeightedFamily: member " + std::to_string(i) +
                                        " has a non-positive or non-finite weight");
            if (m.subspace.ambient_dim() != ambient_dim_)
                throw PreconditionError("WeightedFamily: member " + std::to_string(i) +
                                        " lives in a different ambient space");
            if (m.subspace.is_zero())
                throw PreconditionError("WeightedFamily: member " + std::to_string(i) +
                                        " is the zero subspace");
        }
    }

    /// Same weight for every subspace.
    static WeightedFamily uniform(std::size_t ambient_dim, const std::vector<Subspace>& subspaces,
                                  double weight = 1.0)
    {
        std::vector<Member> ms;
        ms.reserve(subspaces.size());
        for (const auto& s : subspaces)
            ms.push_back({weight, s});
        return WeightedFamily(ambient_dim, std::move(ms));
    }

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t size() const { return members_.size(); }
    const std::vector<Member>& members() const { return members_; }
    const Member& operator[](std::size_t i) const { return members_[i]; }

    std::vector<double> weights() const
    {
        std::vector<double> w;
        w.reserve(members_.size());
        for (const auto& m : members_)
            w.push_back(m.weight);
        return w;
    }

    std::vector<Subspace> subspaces() const
    {
        std::vector<Subspace> s;
        s.reserve(members_.size());
        for (const auto& m : members_)
            s.push_back(m.subspace);
        return s;
    }

    /// dim K_W = Σ dim W_i.
    std::size_t total_dim() const
    {
        std::size_t d = 0;
        for (const auto& m : members_)
            d += m.subspace.dim();
        return d;
    }

private:
    std::size_t ambient_dim_;
    std::vector<Member> members_;
};

struct BlockRange {
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
};

struct FusionSynthesis {
    std::vector<BlockRange> blocks;
    Mat matrix;  ///< ambient_dim × Σ d_i

    /// P_{E_i} as a matrix on K_W.
    Mat block_projector(std::size_t i) const
    {
        const auto total = matrix.cols();
        Mat p = Mat::Zero(total, total);
        p.block(blocks[i].offset, blocks[i].offset, blocks[i].size, blocks[i].size).setIdentity();
        return p;
    }

    /// Orthonormal basis of E_i (the copy of W_i inside K_W).
    Subspace block_subspace(std::size_t i) const
    {
        const auto total = matrix.cols();
        Mat b = Mat::Zero(total, blocks[i].size);
        b.block(blocks[i].offset, 0, blocks[i].size, blocks[i].size).setIdentity();
        return Subspace::from_orthonormal(std::move(b));
    }
};

/// T(g) = Σ w_i g_i, in block coordinates.
inline FusionSynthesis fusion_synthesis(const WeightedFamily& w)
{
    FusionSynthesis out;
    const auto n = static_cast<Eigen::Index>(w.ambient_dim());
    out.matrix = Mat(n, static_cast<Eigen::Index>(w.total_dim()));
    Eigen::Index at = 0;
    for (const auto& m : w.members()) {
        const auto d = static_cast<Eigen::Index>(m.subspace.dim());
        out.blocks.push_back({at, d});
        out.matrix.middleCols(at, d) = m.weight * m.subspace.basis();
        at += d;
    }
    return out;
}

/// S = Σ w_i² P_{W_i}.
inline Mat fusion_frame_operator(const WeightedFamily& w)
{
    const auto n = static_cast<Eigen::Index>(w.ambient_dim());
    Mat s = Mat::Zero(n, n);
    for (const auto& m : w.members())
        s += (m.weight * m.weight) * projector(m.subspace);
    return s;
}

struct FusionAnalysis {
    /// Always true: a finite family is Bessel.
    bool is_bessel = true;
    bool is_fusion_frame = false;
    double lower_A = 0.0;
    double upper_B = 0.0;
    /// dim N(T_{W_w}).
    std::size_t excess = 0;
    bool is_tight = false;
    bool is_parseval = false;
    bool is_minimal = false;
    bool is_rbs = false;
    bool is_obs = false;
};

/// W_i ∩ span{W_j : j ≠ i} = {0} for every i.
inline bool is_minimal_sequence(const WeightedFamily& w)
{
    const auto subs = w.subspaces();
    for (std::size_t i = 0; i < subs.size(); ++i) {
        std::vector<Subspace> others;
        for (std::size_t j = 0; j < subs.size(); ++j)
            if (j != i)
                others.push_back(subs[j]);
        const Subspace rest = others.empty() ? Subspace::zero(w.ambient_dim())
                                             : span_of(others, w.ambient_dim());
        if (!intersect(subs[i], rest).is_zero())
            return false;
    }
    return true;
}

inline FusionAnalysis analyze_fusion(const WeightedFamily& w)
{
    const FusionSynthesis syn = fusion_synthesis(w);
    const Svd d = svd(syn.matrix);
    FusionAnalysis a;
    a.is_fusion_frame = d.rank == w.ambient_dim();
    a.upper_B = d.s.size() > 0 ? d.s(0) * d.s(0) : 0.0;
    if (a.is_fusion_frame) {
        const double g = d.s(static_cast<Eigen::Index>(d.rank) - 1);
        a.lower_A = g * g;
    }
    a.excess = w.total_dim() - d.rank;
    if (a.is_fusion_frame) {
        a.is_tight = std::abs(a.lower_A - a.upper_B) <= tol::tight * std::max(a.lower_A, 1.0);
        a.is_parseval = a.is_tight && std::abs(a.lower_A - 1.0) <= tol::tight &&
                        std::abs(a.upper_B - 1.0) <= tol::tight;
    }
    a.is_minimal = is_minimal_sequence(w);
    a.is_rbs = a.is_fusion_frame && a.is_minimal;

    bool unit = true;
    for (const auto& m : w.members())
        unit = unit && std::abs(m.weight - 1.0) <= tol::unit_weight;
    bool orthogonal = true;
    for (std::size_t i = 0; i < w.size() && orthogonal; ++i)
        for (std::size_t j = i + 1; j < w.size() && orthogonal; ++j)
            orthogonal = op_norm(w[i].subspace.basis().adjoint() * w[j].subspace.basis()) <= tol::obs;
    a.is_obs = a.is_fusion_frame && unit && orthogonal;
    return a;
}

/// Weight-wise rescaling w_i ↦ a_i w_i (the synthesis operator composed with D_a).
inline WeightedFamily rescale(const WeightedFamily& w, const std::vector<double>& a)
{
    if (a.size() != w.size())
        throw PreconditionError("rescale: one factor per member is required");
    std::vector<Member> ms = w.members();
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (!(a[i] > 0.0) || !std::isfinite(a[i]))
            throw PreconditionError("rescale: factor " + std::to_string(i) + " is not positive");
        ms[i].weight *= a[i];
    }
    return WeightedFamily(w.ambient_dim(), std::move(ms));
}

/// Bounds on the closed span of the family (a fusion frame sequence):
/// lower = γ(T)², upper = ‖T‖². Coincides with analyze_fusion when generating.
struct SpanBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t span_dim = 0;
};

inline SpanBounds span_bounds(const WeightedFamily& w)
{
    const Mat t = fusion_synthesis(w).matrix;
    const double g = gamma(t);
    const double b = op_norm(t);
    return {g * g, b * b, numeric_rank(t)};
}

struct LocalToGlobal {
    VectorFrame global;          ///< {w_i f_ij}
    FrameAnalysis global_analysis;
    FrameAnalysis onb_analysis;  ///< {w_i e_ik} for orthonormal bases e_ik of W_i
    FusionAnalysis fusion_analysis;
    double local_A = 0.0;        ///< min_i A_{G_i}
    double local_B = 0.0;        ///< max_i B_{G_i}
};

/// Assemble local frames G_i of W_i into {w_i f_ij} and relate its bounds to the
/// family's: A_F / B <= A_W = A_E and B_E = B_W <= B_F / A.
inline LocalToGlobal local_to_global(const WeightedFamily& w, const std::vector<VectorFrame>& local_frames)
{
    if (local_frames.size() != w.size())
        throw PreconditionError("local_to_global: one local frame per member is required");

    LocalToGlobal out{VectorFrame(w.ambient_dim(), {}), {}, {}, {}, 0.0, 0.0};
    std::vector<Vec> assembled;
    bool first = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& g = local_frames[i];
        const auto& sub = w[i].subspace;
        if (g.ambient_dim() != w.ambient_dim() || g.size() == 0)
            throw PreconditionError("local_to_global: local frame " + std::to_string(i) + " is empty or misdimensioned");
        const Mat tg = synthesis(g);
        const Mat outside = tg - sub.basis() * (sub.basis().adjoint() * tg);
        if (op_norm(outside) > tol::num * std::max(1.0, op_norm(tg)) || numeric_rank(tg) != sub.dim())
            throw PreconditionError("local_to_global: local frame " + std::to_string(i) +
                                    " does not span its subspace");
        const double a = gamma(tg) * gamma(tg);
        const double b = op_norm(tg) * op_norm(tg);
        out.local_A = first ? a : std::min(out.local_A, a);
        out.local_B = first ? b : std::max(out.local_B, b);
        first = false;
        for (const auto& f : g.vectors())
            assembled.push_back(w[i].weight * f);
    }
    out.global = VectorFrame(w.ambient_dim(), std::move(assembled));
    out.global_analysis = analyze_frame(out.global);
    out.onb_analysis = analyze_frame(VectorFrame::from_columns(fusion_synthesis(w).matrix));
    out.fusion_analysis = analyze_fusion(w);

    const bool f_ok = out.global_analysis.is_frame;
    const bool e_ok = out.onb_analysis.is_frame;
    const bool w_ok = out.fusion_analysis.is_fusion_frame;
    if (f_ok != e_ok || e_ok != w_ok)
        throw InvariantError("local_to_global: frame / ONB-frame / fusion-frame status disagree");
    if (w_ok) {
        const auto& fa = out.fusion_analysis;
        const double slack = 1e-8;
        if (out.global_analysis.lower_bound_A / out.local_B > fa.lower_A + slack ||
            fa.upper_B > out.global_analysis.upper_bound_B / out.local_A + slack ||
            std::abs(fa.lower_A - out.onb_analysis.lower_bound_A) > slack ||
            std::abs(fa.upper_B - out.onb_analysis.upper_bound_B) > slack)
            throw InvariantError("local_to_global: bound inequalities violated");
    }
    return out;
}

} // namespace fusionframe

#endif // FUSIONFRAME_FUSION_HPP
