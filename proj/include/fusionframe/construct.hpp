#ifndef FUSIONFRAME_CONSTRUCT_HPP
#define FUSIONFRAME_CONSTRUCT_HPP

//
// Constructions relating fusion frames and operators:
//   - images T(E_i) of an orthonormal basis of subspaces with a weight window,
//   - images under invertible operators,
//   - dilation to a Riesz basis of subspaces (and to an orthonormal basis of
//     subspaces for Parseval families),
//   - dilation to an orthonormal system through an oblique projection.
//
// Each construction verifies its own postconditions and raises
// InvariantError when one fails.
//

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fusionframe/fusion.hpp"
#include "fusionframe/linalg.hpp"

namespace fusionframe {

namespace tol {
/// Budget for the postconditions checked by the constructions.
inline constexpr double construct = 1e-8;
/// Relative slack when comparing the two ends of a weight interval.
inline constexpr double window = 1e-10;
/// Lower bound admitted below 1 by the oblique dilation.
inline constexpr double oblique_lower = 1e-10;
/// r in the default pair A = min γ²/r, B = max ‖·‖² r.
inline constexpr double default_bounds_ratio = 1.0 + 1e-12;
} // namespace tol

/// Raised when ‖T P_{E_i}‖² / B <= w_i² <= γ(T P_{E_i})² / A has no solution at some i.
class InfeasibleWindow : public PreconditionError {
public:
    InfeasibleWindow(std::size_t index, double ratio, double bound_ratio)
        : PreconditionError(describe(index, ratio, bound_ratio)), index_(index), ratio_(ratio)
    {
    }

    /// Zero-based member index of the first violation.
    std::size_t index() const { return index_; }
    /// γ(T P_{E_i}) / ‖T P_{E_i}‖ at that index.
    double ratio() const { return ratio_; }

private:
    static std::string describe(std::size_t index, double ratio, double bound_ratio)
    {
        std::ostringstream os;
        os.precision(17);
        os << "infeasible weight window at member " << index << ": gamma/norm ratio " << ratio
           << " squared is below A/B = " << bound_ratio;
        return os.str();
    }

    std::size_t index_;
    double ratio_;
};

struct WeightWindow {
    double A = 0.0;
    double B = 0.0;
    std::vector<double> gammas;  ///< γ(T P_{E_i})
    std::vector<double> norms;   ///< ‖T P_{E_i}‖
    std::vector<double> lo;      ///< ‖T P_{E_i}‖ / √B
    std::vector<double> hi;      ///< γ(T P_{E_i}) / √A
    std::vector<double> chosen_weight;
    std::vector<double> ratios;  ///< γ / ‖·‖ per member
    double ratio_inf = 0.0;
    bool feasible = false;
    std::optional<std::size_t> first_violation;
};

namespace detail {

inline void require_obs(const std::vector<Subspace>& obs, Eigen::Index k)
{
    if (obs.empty())
        throw PreconditionError("orthonormal basis of subspaces is empty");
    std::size_t total = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].ambient_dim() != static_cast<std::size_t>(k))
            throw PreconditionError("orthonormal basis of subspaces: ambient dimension differs from the operator domain");
        total += obs[i].dim();
        for (std::size_t j = i + 1; j < obs.size(); ++j)
            if (op_norm(obs[i].basis().adjoint() * obs[j].basis()) > tol::obs)
                throw PreconditionError("orthonormal basis of subspaces: members are not pairwise orthogonal");
    }
    if (total != static_cast<std::size_t>(k))
        throw PreconditionError("orthonormal basis of subspaces does not span the domain");
}

inline bool within(double lhs, double rhs, double slack = tol::construct)
{
    return lhs <= rhs + slack * std::max(1.0, std::abs(rhs));
}

} // namespace detail

/// Weight window for the family T(E_i). When A or B is omitted the tightest
/// pair that is always feasible is used. Does not throw on infeasibility.
inline WeightWindow weight_window(const std::vector<Subspace>& obs, const Mat& t,
                                  std::optional<double> A = std::nullopt,
                                  std::optional<double> B = std::nullopt)
{
    detail::require_obs(obs, t.cols());
    WeightWindow win;
    for (const auto& e : obs) {
        const Mat te = t * e.basis();
        win.gammas.push_back(gamma(te));
        win.norms.push_back(op_norm(te));
    }
    double gmin = 0.0;
    double nmax = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double r = win.norms[i] > 0.0 ? win.gammas[i] / win.norms[i] : 0.0;
        win.ratios.push_back(r);
        win.ratio_inf = i == 0 ? r : std::min(win.ratio_inf, r);
        gmin = i == 0 ? win.gammas[i] : std::min(gmin, win.gammas[i]);
        nmax = std::max(nmax, win.norms[i]);
    }
    win.A = A.value_or(gmin * gmin / tol::default_bounds_ratio);
    win.B = B.value_or(nmax * nmax * tol::default_bounds_ratio);
    if (!(win.A > 0.0) || !(win.B > 0.0) || !std::isfinite(win.A) || !std::isfinite(win.B))
        throw PreconditionError("weight_window: bounds A, B must be positive and finite");

    win.feasible = true;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double lo = win.norms[i] / std::sqrt(win.B);
        const double hi = win.gammas[i] / std::sqrt(win.A);
        win.lo.push_back(lo);
        win.hi.push_back(hi);
        const bool ok = win.gammas[i] > 0.0 && lo <= hi * (1.0 + tol::window);
        win.chosen_weight.push_back(std::sqrt(lo * hi));
        if (!ok && win.feasible) {
            win.feasible = false;
            win.first_violation = i;
        }
    }
    return win;
}

struct ImageFamily {
    WeightWindow window;
    WeightedFamily family;
    FusionAnalysis analysis;
};

/// The family (w_i, T(E_i)) with weights picked inside the window.
inline ImageFamily image_fusion_frame(const std::vector<Subspace>& obs, const Mat& t,
                                      std::optional<double> A = std::nullopt,
                                      std::optional<double> B = std::nullopt)
{
    require_finite(t, "image_fusion_frame");
    const Svd dt = svd(t);
    if (dt.rank != static_cast<std::size_t>(t.rows()))
        throw PreconditionError("image_fusion_frame: operator is not surjective");
    WeightWindow win = weight_window(obs, t, A, B);
    if (!win.feasible) {
        const std::size_t i = *win.first_violation;
        throw InfeasibleWindow(i, win.ratios[i], win.A / win.B);
    }

    std::vector<Member> ms;
    bool injective_on_blocks = true;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const Mat te = t * obs[i].basis();
        injective_on_blocks = injective_on_blocks && numeric_rank(te) == obs[i].dim();
        ms.push_back({win.chosen_weight[i], orthonormal_basis(te)});
    }
    WeightedFamily fam(static_cast<std::size_t>(t.rows()), std::move(ms));
    FusionAnalysis an = analyze_fusion(fam);

    const double g = dt.s(static_cast<Eigen::Index>(dt.rank) - 1);
    const double nt = dt.s(0);
    if (!an.is_fusion_frame)
        throw InvariantError("image_fusion_frame: produced family is not a fusion frame");
    if (!detail::within(g * g / win.B, an.lower_A) || !detail::within(an.upper_B, nt * nt / win.A))
        throw InvariantError("image_fusion_frame: bounds γ(T)²/B <= A_W, B_W <= ‖T‖²/A violated");
    if (injective_on_blocks && an.excess != static_cast<std::size_t>(t.cols()) - dt.rank)
        throw InvariantError("image_fusion_frame: excess differs from dim ker T");
    return {std::move(win), std::move(fam), an};
}

/// The family (w_i, G W_i) for invertible G.
inline std::pair<WeightedFamily, FusionAnalysis> invertible_image(const WeightedFamily& w, const Mat& g)
{
    require_finite(g, "invertible_image");
    const auto n = static_cast<Eigen::Index>(w.ambient_dim());
    if (g.rows() != n || g.cols() != n || numeric_rank(g) != w.ambient_dim())
        throw PreconditionError("invertible_image: operator is singular or misdimensioned");
    const FusionAnalysis before = analyze_fusion(w);
    if (!before.is_fusion_frame)
        throw PreconditionError("invertible_image: family is not a fusion frame");

    std::vector<Member> ms;
    for (const auto& m : w.members())
        ms.push_back({m.weight, image(g, m.subspace)});
    WeightedFamily out(w.ambient_dim(), std::move(ms));
    const FusionAnalysis after = analyze_fusion(out);

    const double cond = op_norm(g) / gamma(g);
    if (!after.is_fusion_frame || after.excess != before.excess)
        throw InvariantError("invertible_image: fusion-frame status or excess not preserved");
    if (!detail::within(before.lower_A / (cond * cond), after.lower_A) ||
        !detail::within(after.upper_B, cond * cond * before.upper_B))
        throw InvariantError("invertible_image: condition-number bound sandwich violated");
    return {std::move(out), after};
}

enum class DilationKind { riesz, orthonormal_system, orthonormal_basis };

inline const char* to_string(DilationKind k)
{
    switch (k) {
    case DilationKind::riesz: return "riesz";
    case DilationKind::orthonormal_system: return "orthonormal_system";
    case DilationKind::orthonormal_basis: return "orthonormal_basis";
    }
    return "unknown";
}

/// H embedded in a larger space V, with pieces whose projections recover the W_i.
struct Dilation {
    std::size_t big_dim = 0;
    Mat embed;                     ///< isometry H → V, the first ambient_dim coordinates
    Mat carrier_map;               ///< U (Riesz / Parseval) or Wᴴ U (oblique), K_W → V
    std::vector<Subspace> pieces;  ///< B_i or F_i in V
    DilationKind kind = DilationKind::riesz;
    Mat projection;                ///< P_H or the oblique projection Q
    Mat defect_root;               ///< X = (T Tᴴ − I)^{1/2}, oblique only
};

namespace detail {

inline Mat embedding(Eigen::Index n, Eigen::Index big)
{
    Mat e = Mat::Zero(big, n);
    e.topRows(n).setIdentity();
    return e;
}

/// Riesz dilation data shared with the Parseval case.
inline Dilation dilate_through_kernel(const WeightedFamily& w, const FusionAnalysis& an)
{
    const FusionSynthesis syn = fusion_synthesis(w);
    const Svd d = svd(syn.matrix);
    const Mat kernel = d.null_space();  // D × excess
    const auto n = static_cast<Eigen::Index>(w.ambient_dim());
    const auto e = kernel.cols();
    const auto total = syn.matrix.cols();

    Dilation out;
    out.big_dim = static_cast<std::size_t>(n + e);
    out.embed = embedding(n, n + e);
    out.carrier_map = Mat(n + e, total);
    out.carrier_map.topRows(n) = syn.matrix;
    out.carrier_map.bottomRows(e) = std::sqrt(an.lower_A) * kernel.adjoint();
    out.projection = out.embed * out.embed.adjoint();
    for (std::size_t i = 0; i < w.size(); ++i)
        out.pieces.push_back(orthonormal_basis(out.carrier_map.middleCols(syn.blocks[i].offset, syn.blocks[i].size)));
    return out;
}

inline void check_projection_recovers(const Dilation& dil, const WeightedFamily& w, const Mat& proj, const char* who)
{
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Subspace target = Subspace::from_orthonormal(dil.embed * w[i].subspace.basis());
        const Subspace got = image(proj, dil.pieces[i]);
        if (subspace_distance(target, got) > tol::construct)
            throw InvariantError(std::string(who) + ": projected piece " + std::to_string(i) +
                                 " does not recover its subspace");
    }
}

} // namespace detail

/// Riesz basis of subspaces {B_i = U(E_i)} of V = H ⊕ N(T) with
/// U(x) = T x ⊕ γ(T) P_N x and P_H(B_i) = W_i.
inline Dilation riesz_dilation(const WeightedFamily& w)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_fusion_frame)
        throw PreconditionError("riesz_dilation: family is not a fusion frame");
    Dilation dil = detail::dilate_through_kernel(w, an);
    dil.kind = DilationKind::riesz;

    if (dil.big_dim - w.ambient_dim() != an.excess)
        throw InvariantError("riesz_dilation: dim V ⊖ H differs from the excess");
    const double sa = std::sqrt(an.lower_A);
    const double sb = std::sqrt(an.upper_B);
    if (std::abs(gamma(dil.carrier_map) - sa) > tol::construct ||
        std::abs(op_norm(dil.carrier_map) - sb) > tol::construct)
        throw InvariantError("riesz_dilation: γ(U) = √A or ‖U‖ = √B fails");
    if (numeric_rank(dil.carrier_map) != static_cast<std::size_t>(dil.carrier_map.cols()))
        throw InvariantError("riesz_dilation: U is not invertible");
    detail::check_projection_recovers(dil, w, dil.projection, "riesz_dilation");
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double c = op_norm(dil.projection * dil.pieces[i].basis());
        if (!detail::within(sa * c, w[i].weight) || !detail::within(w[i].weight, sb * c))
            throw InvariantError("riesz_dilation: weight sandwich fails at member " + std::to_string(i));
    }
    return dil;
}

/// For a Parseval family U is unitary and {F_i = U(E_i)} is an orthonormal
/// basis of subspaces of V with w_i = ‖P_H P_{F_i}‖.
inline Dilation parseval_dilation(const WeightedFamily& w)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_parseval)
        throw PreconditionError("parseval_dilation: family is not a Parseval fusion frame");
    Dilation dil = detail::dilate_through_kernel(w, an);
    dil.kind = DilationKind::orthonormal_basis;

    const auto big = static_cast<Eigen::Index>(dil.big_dim);
    const Mat& u = dil.carrier_map;
    if (u.rows() != u.cols() || (u.adjoint() * u - Mat::Identity(big, big)).norm() > tol::construct)
        throw InvariantError("parseval_dilation: U is not unitary");
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j)
            if (op_norm(dil.pieces[i].basis().adjoint() * dil.pieces[j].basis()) > tol::construct)
                throw InvariantError("parseval_dilation: pieces are not orthogonal");
    detail::check_projection_recovers(dil, w, dil.projection, "parseval_dilation");

    const Subspace h = Subspace::from_orthonormal(dil.embed);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double c = op_norm(dil.projection * dil.pieces[i].basis());
        if (std::abs(c - w[i].weight) > tol::construct)
            throw InvariantError("parseval_dilation: w_i differs from ‖P_H P_{F_i}‖");
        const AngleReport ang = angle(h, dil.pieces[i]);
        // Under inclusion F_i ⊆ H the angle convention gives 0 while w_i = 1.
        const double expected = ang.inclusion_case ? 1.0 : ang.cosine;
        if (std::abs(w[i].weight - expected) > tol::construct)
            throw InvariantError("parseval_dilation: w_i differs from the angle cosine");
    }
    return dil;
}

/// Orthonormal system {B_i} of V = H ⊕ K_W and an oblique projection Q onto
/// H ⊕ 0 with Q(B_i) = W_i ⊕ 0 and ‖Q P_{B_i}‖ = γ(Q P_{B_i}) = w_i.
/// Requires A_W >= 1.
inline Dilation oblique_dilation(const WeightedFamily& w)
{
    const FusionAnalysis an = analyze_fusion(w);
    if (!an.is_fusion_frame)
        throw PreconditionError("oblique_dilation: family is not a fusion frame");
    if (an.lower_A < 1.0 - tol::oblique_lower)
        throw PreconditionError("lower bound A < 1; rescale weights");

    const FusionSynthesis syn = fusion_synthesis(w);
    const Mat& t = syn.matrix;
    const auto n = t.rows();
    const auto total = t.cols();
    const auto big = n + total;

    const Mat x = psd_sqrt(t * t.adjoint() - Mat::Identity(n, n));
    const Polar pt = polar_right(t);
    const Svd dt = svd(t);
    const Mat kernel = dt.null_space();

    Mat q = Mat::Zero(big, big);
    q.topLeftCorner(n, n).setIdentity();
    q.topRightCorner(n, total) = x * pt.partial;

    Mat u(big, total);
    u.topRows(n) = pt.partial;
    u.bottomRows(total) = kernel * kernel.adjoint();

    const Polar pq = polar_right(q);
    const Mat wq = unitary_completion(pq.partial);

    Dilation dil;
    dil.kind = DilationKind::orthonormal_system;
    dil.big_dim = static_cast<std::size_t>(big);
    dil.embed = detail::embedding(n, big);
    dil.carrier_map = wq.adjoint() * u;
    dil.projection = q;
    dil.defect_root = x;
    for (std::size_t i = 0; i < w.size(); ++i)
        dil.pieces.push_back(Subspace::from_orthonormal(
            dil.carrier_map.middleCols(syn.blocks[i].offset, syn.blocks[i].size)));

    if ((q * q - q).norm() > tol::construct)
        throw InvariantError("oblique_dilation: Q is not idempotent");
    if (subspace_distance(orthonormal_basis(q), Subspace::from_orthonormal(dil.embed)) > tol::construct)
        throw InvariantError("oblique_dilation: range of Q is not H ⊕ 0");
    if ((dil.carrier_map.adjoint() * dil.carrier_map - Mat::Identity(total, total)).norm() > tol::construct)
        throw InvariantError("oblique_dilation: pieces do not form an orthonormal system");
    detail::check_projection_recovers(dil, w, q, "oblique_dilation");
    for (std::size_t i = 0; i < w.size(); ++i) {
        const RealVec s = singular_values(q * dil.pieces[i].basis());
        for (Eigen::Index k = 0; k < s.size(); ++k)
            if (std::abs(s(k) - w[i].weight) > tol::construct)
                throw InvariantError("oblique_dilation: ‖Q P_B‖ = γ(Q P_B) = w_i fails at member " +
                                     std::to_string(i));
    }
    return dil;
}

} // namespace fusionframe

#endif // FUSIONFRAME_CONSTRUCT_HPP
