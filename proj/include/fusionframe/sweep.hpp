#ifndef FUSIONFRAME_SWEEP_HPP
#define FUSIONFRAME_SWEEP_HPP

// Dimension sweeps over the truncated examples. Each row carries the optimal
// bounds of the truncation (restricted to the closed span when the family does
// not generate C^n) plus example-specific auxiliary quantities; facts that hold
// at every truncation are asserted row by row, trends across the sweep are
// reported as evidence only.

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusionframe/construct.hpp"
#include "fusionframe/examples.hpp"
#include "fusionframe/fusion.hpp"

namespace fusionframe {

struct SweepRow {
    std::size_t n = 0;
    double lower_A = 0.0;
    double upper_B = 0.0;
    std::size_t excess = 0;
    double min_weight_sq = 0.0;
    std::vector<std::pair<std::string, double>> aux;

    double aux_value(std::string_view name) const
    {
        for (const auto& [k, v] : aux)
            if (k == name)
                return v;
        throw PreconditionError("SweepRow: no auxiliary value '" + std::string(name) + "'");
    }
};

namespace detail {

inline void require_row(bool ok, std::string_view name, std::size_t n, std::string_view what)
{
    if (!ok)
        throw InvariantError(std::string(name) + " at n=" + std::to_string(n) + ": " + std::string(what));
}

inline bool at_most(double lhs, double rhs) { return lhs <= rhs + 1e-10 * std::max(1.0, std::abs(rhs)); }

inline SweepRow sweep_row(std::string_view name, std::size_t n, const examples::WeightRule& rule)
{
    const WeightedFamily fam = examples::generate_family(name, n, rule);
    const FusionAnalysis an = analyze_fusion(fam);
    const SpanBounds sb = span_bounds(fam);

    SweepRow row;
    row.n = n;
    row.lower_A = sb.lower;
    row.upper_B = sb.upper;
    row.excess = an.excess;
    double sum_w_sq = 0.0;
    row.min_weight_sq = fam[0].weight * fam[0].weight;
    for (const auto& m : fam.members()) {
        sum_w_sq += m.weight * m.weight;
        row.min_weight_sq = std::min(row.min_weight_sq, m.weight * m.weight);
    }
    row.aux.emplace_back("span_dim", static_cast<double>(sb.span_dim));
    row.aux.emplace_back("sum_w_sq", sum_w_sq);

    if (name == "ex7_1") {
        // e_{k+1} meets only W_k and e_1 lies in every W_k.
        require_row(an.is_fusion_frame, name, n, "family is not a fusion frame");
        require_row(at_most(row.lower_A, row.min_weight_sq), name, n, "lower_A exceeds min w_k^2");
        require_row(at_most(sum_w_sq, row.upper_B), name, n, "upper_B below sum w_k^2");
        const examples::ObsImage img = examples::ex7_1(n);
        const WeightWindow win = weight_window(img.obs, img.t);
        double worst = 0.0;
        for (std::size_t k = 0; k < win.ratios.size(); ++k)
            worst = std::max(worst, std::abs(win.ratios[k] - std::pow(2.0, -static_cast<double>(k + 1))));
        require_row(worst <= 1e-12, name, n, "gamma/norm ratio differs from 2^-k");
        row.aux.emplace_back("ratio_inf", win.ratio_inf);
        row.aux.emplace_back("ratio_error", worst);
    } else if (name == "ex7_2") {
        const examples::ObsImage img = examples::ex7_2(n);
        const WeightWindow win = weight_window(img.obs, img.t, 1.0, 4.0);
        row.aux.emplace_back("ratio_inf", win.ratio_inf);
        row.aux.emplace_back("window_feasible", win.feasible ? 1.0 : 0.0);
    } else if (name == "ex7_3") {
        require_row(an.is_minimal, name, n, "family is not minimal");
        require_row(an.is_fusion_frame, name, n, "family is not a fusion frame");
        double tail = 0.0;
        for (std::size_t k = 1; k <= fam.size(); ++k)
            tail += fam[k - 1].weight * fam[k - 1].weight * (1.0 - std::pow(2.0, -static_cast<double>(k)));
        require_row(at_most(row.lower_A, row.min_weight_sq), name, n, "lower_A exceeds min w_k^2");
        require_row(at_most(tail, row.upper_B), name, n, "upper_B below sum w_k^2 (1 - 2^-k)");
        row.aux.emplace_back("sum_w_sq_defect", tail);
        double min_sine = 1.0;
        double min_cosine_gap = 1.0;
        for (std::size_t k = 0; k + 1 < fam.size(); ++k) {
            const AngleReport a = angle(fam[k].subspace, fam[k + 1].subspace);
            min_sine = std::min(min_sine, a.sine);
            min_cosine_gap = std::min(min_cosine_gap, 1.0 - a.cosine);
        }
        row.aux.emplace_back("min_adjacent_sine", min_sine);
        row.aux.emplace_back("min_adjacent_cosine_gap", min_cosine_gap);
    } else if (name == "ex7_4") {
        const Vec g = examples::ex7_4_vector(n);
        double residual = 0.0;
        for (const auto& m : fam.members()) {
            const Vec r = g - m.subspace.basis() * (m.subspace.basis().adjoint() * g);
            residual = std::max(residual, r.norm());
        }
        require_row(residual <= 1e-10, name, n, "g is not in every W_k");
        require_row(at_most(row.lower_A, row.min_weight_sq), name, n, "lower_A exceeds min w_k^2");
        require_row(at_most(sum_w_sq, row.upper_B), name, n, "upper_B below sum w_k^2");
        row.aux.emplace_back("g_residual", residual);
    } else if (name == "ex7_5") {
        require_row(an.is_fusion_frame && an.lower_A > 0.0, name, n, "family is not a fusion frame");
        std::vector<Member> tail(fam.members().begin() + 1, fam.members().end());
        const WeightedFamily sub(n, std::move(tail));
        double tail_sum = 0.0;
        double tail_min = sub[0].weight * sub[0].weight;
        for (const auto& m : sub.members()) {
            tail_sum += m.weight * m.weight;
            tail_min = std::min(tail_min, m.weight * m.weight);
        }
        const SpanBounds tb = span_bounds(sub);
        require_row(at_most(tb.lower, tail_min), name, n, "subfamily lower bound exceeds min_{k>1} w_k^2");
        require_row(at_most(tail_sum, row.upper_B), name, n, "upper_B below sum_{k>=2} w_k^2");
        row.aux.emplace_back("sum_tail_w_sq", tail_sum);
        row.aux.emplace_back("tail_lower_A", tb.lower);
    } else if (name == "ex7_6") {
        require_row(an.is_fusion_frame, name, n, "family is not a fusion frame");
    }
    return row;
}

inline bool strictly_decreasing(const std::vector<SweepRow>& rows, std::string_view aux)
{
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].aux_value(aux) < rows[i - 1].aux_value(aux)))
            return false;
    return true;
}

} // namespace detail

/// One row per dimension, computed concurrently and assembled in order.
inline std::vector<SweepRow> sweep(std::string_view name, const std::vector<std::size_t>& dims,
                                   const examples::WeightRule& rule = {})
{
    if (!examples::known(name))
        throw PreconditionError("unknown example '" + std::string(name) + "'");
    if (dims.empty())
        throw PreconditionError("sweep: no dimensions");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1])
            throw PreconditionError("sweep: dimensions must be strictly increasing");

    const std::string key(name);
    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(dims.size());
    for (const std::size_t n : dims)
        jobs.push_back(std::async(std::launch::async, [key, n, rule] { return detail::sweep_row(key, n, rule); }));
    std::vector<SweepRow> rows;
    rows.reserve(dims.size());
    for (auto& j : jobs)
        rows.push_back(j.get());

    if (rows.size() > 1) {
        if (name == "ex7_3" && !detail::strictly_decreasing(rows, "min_adjacent_sine"))
            throw InvariantError("ex7_3: adjacent angles do not shrink across the sweep");
        if (name == "ex7_5" && rule.decays() && !detail::strictly_decreasing(rows, "tail_lower_A"))
            throw InvariantError("ex7_5: subfamily lower bound does not decay across the sweep");
    }
    return rows;
}

/// Trends from the first to the last row.
struct SweepEvidence {
    double lower_decay = 1.0;   ///< lower_A(first) / lower_A(last)
    double upper_growth = 1.0;  ///< upper_B(last) / upper_B(first)
    bool lower_monotone = true; ///< lower_A non-increasing
    bool upper_monotone = true; ///< upper_B non-decreasing
};

inline SweepEvidence evidence(const std::vector<SweepRow>& rows)
{
    SweepEvidence ev;
    if (rows.empty())
        return ev;
    const auto& first = rows.front();
    const auto& last = rows.back();
    ev.lower_decay = last.lower_A > 0.0 ? first.lower_A / last.lower_A : INFINITY;
    ev.upper_growth = first.upper_B > 0.0 ? last.upper_B / first.upper_B : INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ev.lower_monotone = ev.lower_monotone && detail::at_most(rows[i].lower_A, rows[i - 1].lower_A);
        ev.upper_monotone = ev.upper_monotone && detail::at_most(rows[i - 1].upper_B, rows[i].upper_B);
    }
    return ev;
}

} // namespace fusionframe

#endif // FUSIONFRAME_SWEEP_HPP
