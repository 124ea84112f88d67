#ifndef FUSIONFRAME_LINALG_HPP
#define FUSIONFRAME_LINALG_HPP

//
// Dense complex linear algebra kernel: numerical rank, reduced minimum
// modulus, subspaces with orthonormal bases, principal vectors, angles,
// polar decomposition, PSD square roots and unitary completion.
//
// Every routine is a pure function of its arguments. Matrix decompositions
// are delegated to Eigen; the subspace geometry on top of them is ours.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fusionframe/errors.hpp"

namespace fusionframe {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

namespace tol {
/// sigma is numerically zero when sigma <= max(rows, cols) * sigma_max * rank_relative.
inline constexpr double rank_relative = 1e-12;
/// Orthonormality defect admitted in a Subspace basis.
inline constexpr double orth = 1e-10;
/// Eigenvalues of P_M P_N within this distance of 1 span M ∩ N.
inline constexpr double intersect = 1e-8;
/// Generic round-off budget for identities at double precision.
inline constexpr double num = 1e-9;
/// Eigenvalues below -psd * max(1, |lambda|_max) reject a PSD input.
inline constexpr double psd = 1e-8;
/// Singular values within this of 0 or 1 qualify a partial isometry.
inline constexpr double isometry = 1e-8;
/// Components smaller than this are skipped when fixing phases.
inline constexpr double phase = 1e-8;
} // namespace tol

inline bool all_finite(const Mat& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

inline void require_finite(const Mat& m, const char* what)
{
    if (!all_finite(m))
        throw PreconditionError(std::string(what) + ": non-finite entries");
}

/// Multiply v by a unit phase so that its first non-negligible entry is real positive.
/// Returns the phase that was applied.
inline Complex canonicalize_phase(Eigen::Ref<Vec> v)
{
    const double scale = v.norm();
    if (scale == 0.0)
        return {1.0, 0.0};
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > tol::phase * scale) {
            const Complex ph = std::conj(v(i)) / a;
            v *= ph;
            return ph;
        }
    }
    return {1.0, 0.0};
}

inline double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max)
{
    return static_cast<double>(std::max(rows, cols)) * sigma_max * tol::rank_relative;
}

/// Full singular value decomposition a = u * diag(s) * vᴴ with deterministic phases.
///
/// Singular values are descending. For the first `rank` pairs the phase is
/// fixed through u; the remaining columns of u and v (left and right null
/// directions) are fixed independently.
struct Svd {
    Mat u;
    RealVec s;
    Mat v;
    std::size_t rank = 0;
    double rank_tol = 0.0;

    Mat null_space() const { return v.rightCols(v.cols() - static_cast<Eigen::Index>(rank)); }
    Mat range() const { return u.leftCols(static_cast<Eigen::Index>(rank)); }
    Mat row_space() const { return v.leftCols(static_cast<Eigen::Index>(rank)); }
};

inline Svd svd(const Mat& a)
{
    require_finite(a, "svd");
    Svd out;
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (m == 0 || n == 0) {
        out.u = Mat::Identity(m, m);
        out.v = Mat::Identity(n, n);
        out.s = RealVec::Zero(0);
        return out;
    }
    Eigen::JacobiSVD<Mat> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.u = dec.matrixU();
    out.v = dec.matrixV();
    out.s = dec.singularValues();
    const double smax = out.s.size() > 0 ? out.s(0) : 0.0;
    out.rank_tol = rank_tolerance(m, n, smax);
    for (Eigen::Index k = 0; k < out.s.size(); ++k)
        if (out.s(k) > out.rank_tol)
            ++out.rank;

    const auto r = static_cast<Eigen::Index>(out.rank);
    for (Eigen::Index k = 0; k < r; ++k) {
        const Complex ph = canonicalize_phase(out.u.col(k));
        out.v.col(k) *= ph;
    }
    for (Eigen::Index k = r; k < m; ++k)
        canonicalize_phase(out.u.col(k));
    for (Eigen::Index k = r; k < n; ++k)
        canonicalize_phase(out.v.col(k));
    return out;
}

inline RealVec singular_values(const Mat& a)
{
    require_finite(a, "singular_values");
    if (a.rows() == 0 || a.cols() == 0)
        return RealVec::Zero(0);
    return Eigen::JacobiSVD<Mat>(a).singularValues();
}

/// Spectral norm.
inline double op_norm(const Mat& a)
{
    const RealVec s = singular_values(a);
    return s.size() > 0 ? s(0) : 0.0;
}

inline std::size_t numeric_rank(const Mat& a)
{
    const RealVec s = singular_values(a);
    if (s.size() == 0)
        return 0;
    const double t = rank_tolerance(a.rows(), a.cols(), s(0));
    return static_cast<std::size_t>((s.array() > t).count());
}

/// Reduced minimum modulus: inf ‖Tx‖ over unit x ⊥ ker T, i.e. the smallest
/// singular value above the rank tolerance. Zero for T = 0.
inline double gamma(const Mat& t)
{
    const RealVec s = singular_values(t);
    if (s.size() == 0 || s(0) == 0.0)
        return 0.0;
    const double cut = rank_tolerance(t.rows(), t.cols(), s(0));
    double g = s(0);
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > cut)
            g = s(k);
    return g;
}

/// Closed subspace of C^n carried by an orthonormal column basis (n × d, d may be 0).
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(std::size_t ambient_dim)
    {
        Subspace s;
        s.basis_ = Mat(static_cast<Eigen::Index>(ambient_dim), 0);
        return s;
    }

    /// Adopt `basis` as is; its columns must already be orthonormal.
    static Subspace from_orthonormal(Mat basis)
    {
        require_finite(basis, "Subspace");
        if (basis.cols() > basis.rows())
            throw PreconditionError("Subspace: more basis vectors than ambient dimension");
        if (basis.cols() > 0) {
            const Mat gram = basis.adjoint() * basis;
            const double defect = (gram - Mat::Identity(basis.cols(), basis.cols())).norm();
            if (defect > tol::orth)
                throw PreconditionError("Subspace: basis is not orthonormal (defect " +
                                        std::to_string(defect) + ")");
        }
        Subspace s;
        s.basis_ = std::move(basis);
        return s;
    }

    std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
    bool is_zero() const { return basis_.cols() == 0; }
    const Mat& basis() const { return basis_; }

private:
    Mat basis_;
};

/// Orthonormal basis of the column space of m; singular values <= rank_tol count as zero.
inline Subspace orthonormal_basis(const Mat& m, double rank_tol)
{
    require_finite(m, "orthonormal_basis");
    if (m.cols() == 0 || m.rows() == 0)
        return Subspace::zero(static_cast<std::size_t>(m.rows()));
    const Svd d = svd(m);
    Eigen::Index r = 0;
    while (r < d.s.size() && d.s(r) > rank_tol)
        ++r;
    return Subspace::from_orthonormal(d.u.leftCols(r));
}

/// Same, with the default numerical-rank rule.
inline Subspace orthonormal_basis(const Mat& m)
{
    require_finite(m, "orthonormal_basis");
    if (m.cols() == 0 || m.rows() == 0)
        return Subspace::zero(static_cast<std::size_t>(m.rows()));
    const Svd d = svd(m);
    return Subspace::from_orthonormal(d.range());
}

inline Mat projector(const Subspace& s)
{
    const auto n = static_cast<Eigen::Index>(s.ambient_dim());
    if (s.is_zero())
        return Mat::Zero(n, n);
    return s.basis() * s.basis().adjoint();
}

inline Subspace orthogonal_complement(const Subspace& s)
{
    const auto n = static_cast<Eigen::Index>(s.ambient_dim());
    if (s.is_zero())
        return Subspace::from_orthonormal(Mat::Identity(n, n));
    const Svd d = svd(s.basis());
    return Subspace::from_orthonormal(d.u.rightCols(n - static_cast<Eigen::Index>(s.dim())));
}

/// Image T(S) of a subspace.
inline Subspace image(const Mat& t, const Subspace& s)
{
    if (static_cast<std::size_t>(t.cols()) != s.ambient_dim())
        throw PreconditionError("image: operator/subspace dimension mismatch");
    if (s.is_zero())
        return Subspace::zero(static_cast<std::size_t>(t.rows()));
    return orthonormal_basis(t * s.basis());
}

/// Span of the union of several subspaces of the same ambient space.
inline Subspace span_of(const std::vector<Subspace>& parts, std::size_t ambient_dim)
{
    Eigen::Index cols = 0;
    for (const auto& p : parts) {
        if (p.ambient_dim() != ambient_dim)
            throw PreconditionError("span_of: ambient dimension mismatch");
        cols += static_cast<Eigen::Index>(p.dim());
    }
    Mat all(static_cast<Eigen::Index>(ambient_dim), cols);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        all.middleCols(at, static_cast<Eigen::Index>(p.dim())) = p.basis();
        at += static_cast<Eigen::Index>(p.dim());
    }
    return orthonormal_basis(all);
}

/// ‖P_M − P_N‖, a metric on subspaces.
inline double subspace_distance(const Subspace& m, const Subspace& n)
{
    if (m.ambient_dim() != n.ambient_dim())
        throw PreconditionError("subspace_distance: ambient dimension mismatch");
    return op_norm(projector(m) - projector(n));
}

/// True when ‖P_outer P_inner − P_inner‖ <= tolerance.
inline bool contains(const Subspace& outer, const Subspace& inner, double tolerance = tol::orth)
{
    if (outer.ambient_dim() != inner.ambient_dim())
        throw PreconditionError("contains: ambient dimension mismatch");
    if (inner.is_zero())
        return true;
    const Mat resid = inner.basis() - outer.basis() * (outer.basis().adjoint() * inner.basis());
    return op_norm(resid) <= tolerance;
}

namespace detail {

/// Principal-vector split of two subspaces: the common part M ∩ N and the
/// remainders M ⊖ N, N ⊖ M, from one SVD of B_Mᴴ B_N. The squared singular
/// values are the nonzero eigenvalues of P_M P_N.
struct PrincipalSplit {
    Subspace common;
    Subspace m_rest;
    Subspace n_rest;
};

inline PrincipalSplit principal_split(const Subspace& m, const Subspace& n, double tolerance)
{
    if (m.ambient_dim() != n.ambient_dim())
        throw PreconditionError("subspace operation: ambient dimension mismatch");
    const std::size_t amb = m.ambient_dim();
    if (m.is_zero() || n.is_zero())
        return {Subspace::zero(amb), m, n};

    const Svd d = svd(m.basis().adjoint() * n.basis());
    Eigen::Index common = 0;
    while (common < d.s.size() && d.s(common) * d.s(common) >= 1.0 - tolerance)
        ++common;

    const auto dm = static_cast<Eigen::Index>(m.dim());
    const auto dn = static_cast<Eigen::Index>(n.dim());
    Mat shared = m.basis() * d.u.leftCols(common);
    Mat m_rest = m.basis() * d.u.rightCols(dm - common);
    Mat n_rest = n.basis() * d.v.rightCols(dn - common);
    for (Eigen::Index k = 0; k < shared.cols(); ++k)
        canonicalize_phase(shared.col(k));
    for (Eigen::Index k = 0; k < m_rest.cols(); ++k)
        canonicalize_phase(m_rest.col(k));
    for (Eigen::Index k = 0; k < n_rest.cols(); ++k)
        canonicalize_phase(n_rest.col(k));
    return {Subspace::from_orthonormal(std::move(shared)),
            Subspace::from_orthonormal(std::move(m_rest)),
            Subspace::from_orthonormal(std::move(n_rest))};
}

} // namespace detail

/// Numerical M ∩ N.
inline Subspace intersect(const Subspace& m, const Subspace& n, double tolerance = tol::intersect)
{
    return detail::principal_split(m, n, tolerance).common;
}

/// M ⊖ N = M ∩ (M ∩ N)⊥.
inline Subspace ominus(const Subspace& m, const Subspace& n)
{
    return detail::principal_split(m, n, tol::intersect).m_rest;
}

struct AngleReport {
    double cosine = 0.0;
    double sine = 1.0;
    /// M ⊆ N or N ⊆ M (this includes a zero argument); the cosine is then 0.
    bool inclusion_case = false;
};

/// Angle between closed subspaces: cosine = ‖P_{M⊖N} P_{N⊖M}‖, zero under inclusion.
inline AngleReport angle(const Subspace& m, const Subspace& n)
{
    const auto split = detail::principal_split(m, n, tol::intersect);
    AngleReport r;
    r.inclusion_case = split.m_rest.is_zero() || split.n_rest.is_zero();
    if (!r.inclusion_case) {
        r.cosine = std::min(1.0, op_norm(split.m_rest.basis().adjoint() * split.n_rest.basis()));
    }
    r.sine = std::sqrt(std::max(0.0, 1.0 - r.cosine * r.cosine));
    return r;
}

/// Right polar decomposition T = |T*| V.
struct Polar {
    Mat abs_t_star;  ///< (T Tᴴ)^{1/2}, rows × rows
    Mat partial;     ///< partial isometry with initial space N(T)⊥, rows × cols
};

inline Polar polar_right(const Mat& t)
{
    const Svd d = svd(t);
    const auto r = static_cast<Eigen::Index>(d.rank);
    Polar p;
    const Mat ur = d.u.leftCols(r);
    p.abs_t_star = ur * d.s.head(r).cast<Complex>().asDiagonal() * ur.adjoint();
    p.partial = ur * d.v.leftCols(r).adjoint();
    if (r == 0) {
        p.abs_t_star = Mat::Zero(t.rows(), t.rows());
        p.partial = Mat::Zero(t.rows(), t.cols());
    }
    return p;
}

/// Hermitian PSD square root; eigenvalues slightly below zero are clamped.
inline Mat psd_sqrt(const Mat& p)
{
    require_finite(p, "psd_sqrt");
    if (p.rows() != p.cols())
        throw PreconditionError("psd_sqrt: matrix is not square");
    if (p.rows() == 0)
        return p;
    const Mat h = 0.5 * (p + p.adjoint());
    if ((p - h).norm() > tol::psd * std::max(1.0, p.norm()))
        throw PreconditionError("psd_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    RealVec lambda = es.eigenvalues();
    const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    if (lambda.minCoeff() < -tol::psd * scale)
        throw PreconditionError("psd_sqrt: negative eigenvalue " + std::to_string(lambda.minCoeff()));
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lambda.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Extend a square partial isometry to a unitary that agrees with it on its initial space.
inline Mat unitary_completion(const Mat& v)
{
    if (v.rows() != v.cols())
        throw PreconditionError("unitary_completion: defect spaces differ in dimension (non-square)");
    const Svd d = svd(v);
    for (Eigen::Index k = 0; k < d.s.size(); ++k) {
        const double s = d.s(k);
        if (std::abs(s - 1.0) > tol::isometry && s > tol::isometry)
            throw PreconditionError("unitary_completion: input is not a partial isometry");
    }
    Eigen::Index r = 0;
    while (r < d.s.size() && d.s(r) > 0.5)
        ++r;
    const std::size_t n = static_cast<std::size_t>(v.rows());
    if (r == v.rows())
        return v;
    const Subspace initial = Subspace::from_orthonormal(d.v.leftCols(r));
    const Subspace final_space = Subspace::from_orthonormal(d.u.leftCols(r));
    const Subspace in_defect = r == 0 ? Subspace::from_orthonormal(Mat::Identity(v.rows(), v.rows()))
                                      : orthogonal_complement(initial);
    const Subspace out_defect = r == 0 ? Subspace::from_orthonormal(Mat::Identity(v.rows(), v.rows()))
                                       : orthogonal_complement(final_space);
    if (in_defect.dim() != out_defect.dim() || in_defect.ambient_dim() != n)
        throw PreconditionError("unitary_completion: defect spaces differ in dimension");
    return v + out_defect.basis() * in_defect.basis().adjoint();
}

} // namespace fusionframe

#endif // FUSIONFRAME_LINALG_HPP
