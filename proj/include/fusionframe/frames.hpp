#ifndef FUSIONFRAME_FRAMES_HPP
#define FUSIONFRAME_FRAMES_HPP

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "fusionframe/linalg.hpp"

namespace fusionframe {

/// Finite list of vectors in C^n, a frame candidate.
class VectorFrame {
public:
    VectorFrame(std::size_t ambient_dim, std::vector<Vec> vectors)
        : ambient_dim_(ambient_dim), vectors_(std::move(vectors))
    {
        for (const auto& v : vectors_) {
            if (static_cast<std::size_t>(v.size()) != ambient_dim_)
                throw PreconditionError("VectorFrame: vector length differs from ambient dimension");
            require_finite(v, "VectorFrame");
        }
    }

    /// Columns of m become the frame vectors.
    static VectorFrame from_columns(const Mat& m)
    {
        std::vector<Vec> vs;
        vs.reserve(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            vs.emplace_back(m.col(j));
        return VectorFrame(static_cast<std::size_t>(m.rows()), std::move(vs));
    }

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<Vec>& vectors() const { return vectors_; }

private:
    std::size_t ambient_dim_;
    std::vector<Vec> vectors_;
};

struct FrameAnalysis {
    bool is_frame = false;
    double lower_bound_A = 0.0;
    double upper_bound_B = 0.0;
    /// dim ker T_F.
    std::size_t excess = 0;
    bool is_parseval = false;
};

namespace tol {
/// ‖S − I‖ admitted for a Parseval frame.
inline constexpr double parseval = 1e-8;
} // namespace tol

/// Synthesis operator: the frame vectors as columns.
inline Mat synthesis(const VectorFrame& f)
{
    if (f.size() == 0)
        throw PreconditionError("synthesis: empty vector list");
    Mat t(static_cast<Eigen::Index>(f.ambient_dim()), static_cast<Eigen::Index>(f.size()));
    for (std::size_t j = 0; j < f.size(); ++j)
        t.col(static_cast<Eigen::Index>(j)) = f.vectors()[j];
    return t;
}

/// S = T Tᴴ = Σ ⟨·, f_n⟩ f_n.
inline Mat frame_operator(const VectorFrame& f)
{
    const Mat t = synthesis(f);
    return t * t.adjoint();
}

/// Optimal bounds A = γ(T)², B = ‖T‖², excess dim ker T.
inline FrameAnalysis analyze_frame(const VectorFrame& f)
{
    const Mat t = synthesis(f);
    const Svd d = svd(t);
    FrameAnalysis a;
    a.is_frame = d.rank == f.ambient_dim();
    a.upper_bound_B = d.s.size() > 0 ? d.s(0) * d.s(0) : 0.0;
    if (a.is_frame) {
        const double g = d.s(static_cast<Eigen::Index>(d.rank) - 1);
        a.lower_bound_A = g * g;
    }
    a.excess = f.size() - d.rank;
    if (a.is_frame) {
        const auto n = static_cast<Eigen::Index>(f.ambient_dim());
        a.is_parseval = op_norm(t * t.adjoint() - Mat::Identity(n, n)) <= tol::parseval;
    }
    return a;
}

inline constexpr std::size_t max_deletion_search = 12;

/// Largest number of vectors that can be erased while leaving a frame, by
/// exhaustive search over subsets (largest first).
inline std::size_t excess_by_deletion(const VectorFrame& f)
{
    const std::size_t count = f.size();
    if (count > max_deletion_search)
        throw PreconditionError("excess_by_deletion: more than 12 vectors");
    const Mat t = synthesis(f);
    if (numeric_rank(t) != f.ambient_dim())
        throw PreconditionError("excess_by_deletion: input is not a frame");

    const std::uint32_t full = (std::uint32_t{1} << count) - 1;
    for (std::size_t removed = count; removed > 0; --removed) {
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != removed)
                continue;
            Mat kept(t.rows(), static_cast<Eigen::Index>(count - removed));
            Eigen::Index c = 0;
            for (std::size_t j = 0; j < count; ++j)
                if (!(mask & (std::uint32_t{1} << j)))
                    kept.col(c++) = t.col(static_cast<Eigen::Index>(j));
            if (numeric_rank(kept) == f.ambient_dim())
                return removed;
        }
    }
    return 0;
}

} // namespace fusionframe

#endif // FUSIONFRAME_FRAMES_HPP
