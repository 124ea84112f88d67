#ifndef FUSIONFRAME_REFINE_HPP
#define FUSIONFRAME_REFINE_HPP

//
// Refinements V = {V_i}_{i∈J} of a family W (J ⊆ I, {0} ≠ V_i ⊆ W_i), the
// excess E[W,V] of W over V, and the reduction of a fusion frame to a
// Riesz basis of subspaces by removing one kernel direction at a time.
//

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fusionframe/fusion.hpp"
#include "fusionframe/linalg.hpp"

namespace fusionframe {

namespace tol {
/// Relative gap under which two kernel-block norms count as a tie.
inline constexpr double tie = 1e-10;
} // namespace tol

struct PlanEntry {
    std::size_t index = 0;  ///< member index in the refined family W
    Subspace subspace;      ///< V_i ⊆ W_i
};

/// The pair (J, {V_i}); entries are kept sorted by index.
class RefinementPlan {
public:
    RefinementPlan() = default;
    explicit RefinementPlan(std::vector<PlanEntry> entries) : entries_(std::move(entries))
    {
        std::sort(entries_.begin(), entries_.end(),
                  [](const PlanEntry& a, const PlanEntry& b) { return a.index < b.index; });
    }

    /// V = W.
    static RefinementPlan identity(const WeightedFamily& w)
    {
        std::vector<PlanEntry> es;
        for (std::size_t i = 0; i < w.size(); ++i)
            es.push_back({i, w[i].subspace});
        return RefinementPlan(std::move(es));
    }

    const std::vector<PlanEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    std::vector<std::size_t> kept_indices() const
    {
        std::vector<std::size_t> j;
        for (const auto& e : entries_)
            j.push_back(e.index);
        return j;
    }

    /// Throws PreconditionError unless this is a refinement of w.
    void validate(const WeightedFamily& w) const
    {
        if (entries_.empty())
            throw PreconditionError("refinement plan: no kept members");
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const auto& e = entries_[k];
            if (e.index >= w.size())
                throw PreconditionError("refinement plan: index " + std::to_string(e.index) + " out of range");
            if (k > 0 && entries_[k - 1].index == e.index)
                throw PreconditionError("refinement plan: index " + std::to_string(e.index) + " repeated");
            if (e.subspace.is_zero())
                throw PreconditionError("refinement plan: zero sub-subspace at index " + std::to_string(e.index));
            if (!contains(w[e.index].subspace, e.subspace))
                throw PreconditionError("refinement plan: V_i is not contained in W_i at index " +
                                        std::to_string(e.index));
        }
    }

private:
    std::vector<PlanEntry> entries_;
};

/// The refined family V_w = (w_i, V_i)_{i∈J}, members ordered as in the plan.
inline WeightedFamily refined_family(const WeightedFamily& w, const RefinementPlan& plan)
{
    plan.validate(w);
    std::vector<Member> ms;
    for (const auto& e : plan.entries())
        ms.push_back({w[e.index].weight, e.subspace});
    return WeightedFamily(w.ambient_dim(), std::move(ms));
}

/// E[W,V] = Σ_{i∈J} dim(W_i ⊖ V_i) + Σ_{i∉J} dim W_i.
inline std::size_t excess_over(const WeightedFamily& w, const RefinementPlan& plan)
{
    plan.validate(w);
    std::size_t kept = 0;
    for (const auto& e : plan.entries())
        kept += e.subspace.dim();
    return w.total_dim() - kept;
}

/// Express `inner` (a plan on refined_family(w, outer)) as a plan on w.
inline RefinementPlan compose(const RefinementPlan& outer, const RefinementPlan& inner)
{
    std::vector<PlanEntry> es;
    for (const auto& e : inner.entries()) {
        if (e.index >= outer.size())
            throw PreconditionError("compose: inner plan index out of range");
        es.push_back({outer.entries()[e.index].index, e.subspace});
    }
    return RefinementPlan(std::move(es));
}

struct RefinementReport {
    std::size_t excess_over = 0;
    bool is_fsr = false;
    /// E(V_w); set only for fusion-frame refinements.
    std::optional<std::size_t> refined_excess;
};

/// Decide whether V_w is a fusion frame (T_W P_{K_V} onto H) and check the
/// excess arithmetic E(V_w) = E(W_w) − E[W,V].
inline RefinementReport test_fsr(const WeightedFamily& w, const RefinementPlan& plan)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_fusion_frame)
        throw PreconditionError("test_fsr: family is not a fusion frame");
    RefinementReport r;
    r.excess_over = excess_over(w, plan);
    const WeightedFamily v = refined_family(w, plan);
    const Mat tv = fusion_synthesis(v).matrix;
    const std::size_t rank = numeric_rank(tv);
    r.is_fsr = rank == w.ambient_dim();
    if (r.is_fsr) {
        r.refined_excess = v.total_dim() - rank;
        if (r.excess_over > an.excess)
            throw InvariantError("test_fsr: E[W,V] exceeds E(W_w)");
        if (*r.refined_excess + r.excess_over != an.excess)
            throw InvariantError("test_fsr: E(V_w) != E(W_w) - E[W,V]");
    }
    return r;
}

struct StripResult {
    RefinementPlan plan;
    RefinementReport report;
    std::size_t member = 0;  ///< member whose subspace lost a direction
    Vec direction;           ///< unit vector e ∈ W_member removed
};

/// A fusion-frame refinement with E[W,V] = 1: take z ≠ 0 in ker T, the block
/// i where ‖P_{E_i} z‖ is largest (lowest index on ties), e = P_{E_i} z / ‖·‖,
/// and V_i = W_i ⊖ span{e}; member i is dropped when dim W_i = 1.
inline StripResult strip_one(const WeightedFamily& w)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_fusion_frame)
        throw PreconditionError("strip_one: family is not a fusion frame");
    if (an.excess == 0)
        throw PreconditionError("strip_one: excess is 0");

    const FusionSynthesis syn = fusion_synthesis(w);
    const Svd d = svd(syn.matrix);
    const Vec z = d.null_space().col(0);

    double best = 0.0;
    for (const auto& b : syn.blocks)
        best = std::max(best, z.segment(b.offset, b.size).norm());
    std::size_t pick = 0;
    while (z.segment(syn.blocks[pick].offset, syn.blocks[pick].size).norm() < best * (1.0 - tol::tie))
        ++pick;

    const Vec coords = z.segment(syn.blocks[pick].offset, syn.blocks[pick].size).normalized();
    const Subspace& wi = w[pick].subspace;

    std::vector<PlanEntry> es;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i != pick) {
            es.push_back({i, w[i].subspace});
            continue;
        }
        if (wi.dim() == 1)
            continue;
        // Orthonormal complement of `coords` inside C^{d_i}, mapped into W_i.
        const Subspace line = Subspace::from_orthonormal(Mat(coords));
        const Subspace rest = orthogonal_complement(line);
        es.push_back({i, Subspace::from_orthonormal(wi.basis() * rest.basis())});
    }
    StripResult out{RefinementPlan(std::move(es)), {}, pick, wi.basis() * coords};
    out.report = test_fsr(w, out.plan);
    if (!out.report.is_fsr || out.report.excess_over != 1)
        throw InvariantError("strip_one: removal of the kernel direction lost surjectivity");
    return out;
}

struct RefineStep {
    std::size_t member = 0;
    std::size_t cumulative_excess_over = 0;  ///< E[W, V_k] after this step
    std::size_t refined_excess = 0;          ///< E(V_k)
};

struct RefineToRbs {
    RefinementPlan plan;
    RefinementReport report;
    std::vector<RefineStep> steps;
};

/// Iterate strip_one exactly E(W_w) times; the result is a Riesz basis of
/// subspaces with E[W,V] = E(W_w).
inline RefineToRbs refine_to_rbs(const WeightedFamily& w)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_fusion_frame)
        throw PreconditionError("refine_to_rbs: family is not a fusion frame");

    RefineToRbs out{RefinementPlan::identity(w), {}, {}};
    for (std::size_t k = 0; k < an.excess; ++k) {
        const WeightedFamily current = refined_family(w, out.plan);
        const StripResult s = strip_one(current);
        const std::size_t before = excess_over(w, out.plan);
        const std::size_t original = out.plan.entries()[s.member].index;
        out.plan = compose(out.plan, s.plan);
        const RefinementReport r = test_fsr(w, out.plan);
        if (!r.is_fsr || r.excess_over != before + s.report.excess_over)
            throw InvariantError("refine_to_rbs: excess over refinements is not additive");
        out.steps.push_back({original, r.excess_over, *r.refined_excess});
    }
    out.report = test_fsr(w, out.plan);
    const FusionAnalysis fin = analyze_fusion(refined_family(w, out.plan));
    if (out.report.excess_over != an.excess || fin.excess != 0 || !fin.is_minimal || !fin.is_rbs)
        throw InvariantError("refine_to_rbs: final refinement is not a Riesz basis of subspaces");
    return out;
}

/// sup{E[W,V] : V_w a fusion-frame refinement}, certified by the achieving plan
/// of refine_to_rbs together with the upper bound E[W,V] <= E(W_w).
inline std::size_t excess_sup_check(const WeightedFamily& w)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_fusion_frame)
        throw PreconditionError("excess_sup_check: family is not a fusion frame");
    const RefineToRbs r = refine_to_rbs(w);
    for (const auto& s : r.steps)
        if (s.cumulative_excess_over > an.excess)
            throw InvariantError("excess_sup_check: a refinement exceeds E(W_w)");
    if (r.report.excess_over != an.excess)
        throw InvariantError("excess_sup_check: supremum not attained");
    return r.report.excess_over;
}

} // namespace fusionframe

#endif // FUSIONFRAME_REFINE_HPP
