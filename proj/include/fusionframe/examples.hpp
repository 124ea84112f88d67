#ifndef FUSIONFRAME_EXAMPLES_HPP
#define FUSIONFRAME_EXAMPLES_HPP

//
// Finite truncations of the classical fusion-frame (counter)examples.
//
// Truncation convention: "dimension n" keeps e_1..e_n of the space where the
// family lives and every subspace fully contained in it.
//
//   ex7_1  T e_{2k-1} = 2^{-k} e_1, T e_{2k} = e_{k+1} on E_k = span{b_{2k-1}, b_{2k}};
//          n - 1 blocks, W_k = T(E_k) = span{e_1, e_{k+1}}.            (OBS + operator)
//   ex7_2  synthesis of f_{2k-1} = e_k, f_{2k} = e_{k+1}/√(k+1);
//          n - 1 blocks, W_k = span{e_k, e_{k+1}}.                      (OBS + operator)
//   ex7_3  g = Σ e_{2k}/2^{k/2}, W_k = span{P_{2k} g, e_{2k-1}}, n even, n/2 members.
//   ex7_4  g = Σ e_{2k-1}/2^{k/2} truncated, W_k = span{g, e_{2k}}, n even, n/2 members.
//   ex7_5  W_1 = {e_1}⊥, W_k = span{e_1, e_k} for k = 2..n.
//   ex7_6  W_1 = span{e_1, e_2}, W_2 = span{e_1, e_3}, W_3 = span{e_4} in C^4.
//

#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fusionframe/fusion.hpp"
#include "fusionframe/linalg.hpp"

namespace fusionframe::examples {

/// Weight sequences indexed from k = 1: `const:c`, `geometric:r` (r^k),
/// `harmonic` (1/k) and `l2geometric` (2^{-k/2}).
struct WeightRule {
    enum class Kind { constant, geometric, harmonic, l2_geometric };

    Kind kind = Kind::constant;
    double param = 1.0;

    double operator()(std::size_t k) const
    {
        const auto kk = static_cast<double>(k);
        switch (kind) {
        case Kind::constant: return param;
        case Kind::geometric: return std::pow(param, kk);
        case Kind::harmonic: return 1.0 / kk;
        case Kind::l2_geometric: return std::pow(2.0, -kk / 2.0);
        }
        return param;
    }

    std::vector<double> first(std::size_t count) const
    {
        std::vector<double> w;
        for (std::size_t k = 1; k <= count; ++k)
            w.push_back((*this)(k));
        return w;
    }

    static WeightRule parse(std::string_view text)
    {
        const auto colon = text.find(':');
        const std::string_view head = text.substr(0, colon);
        auto number = [&]() {
            if (colon == std::string_view::npos)
                throw PreconditionError("weight rule '" + std::string(text) + "' needs a parameter");
            const std::string tail(text.substr(colon + 1));
            char* end = nullptr;
            const double v = std::strtod(tail.c_str(), &end);
            if (end == tail.c_str() || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
                throw PreconditionError("weight rule '" + std::string(text) + "' has a bad parameter");
            return v;
        };
        if (head == "const")
            return {Kind::constant, number()};
        if (head == "geometric")
            return {Kind::geometric, number()};
        if (colon == std::string_view::npos && head == "harmonic")
            return {Kind::harmonic, 1.0};
        if (colon == std::string_view::npos && head == "l2geometric")
            return {Kind::l2_geometric, 1.0};
        throw PreconditionError("unknown weight rule '" + std::string(text) + "'");
    }

    /// Square-summable rules (the weight decays to zero).
    bool decays() const
    {
        return kind == Kind::harmonic || kind == Kind::l2_geometric ||
               (kind == Kind::geometric && param < 1.0);
    }
};

/// An orthonormal basis of subspaces {E_k} of C^K and T: C^K → C^n.
struct ObsImage {
    std::vector<Subspace> obs;
    Mat t;

    /// The family (w_k, T(E_k)).
    WeightedFamily family(const std::vector<double>& weights) const
    {
        if (weights.size() != obs.size())
            throw PreconditionError("ObsImage::family: one weight per block is required");
        std::vector<Member> ms;
        for (std::size_t k = 0; k < obs.size(); ++k)
            ms.push_back({weights[k], image(t, obs[k])});
        return WeightedFamily(static_cast<std::size_t>(t.rows()), std::move(ms));
    }
};

using Generated = std::variant<WeightedFamily, ObsImage>;

inline Vec unit(Eigen::Index n, Eigen::Index one_based)
{
    Vec e = Vec::Zero(n);
    e(one_based - 1) = 1.0;
    return e;
}

namespace detail {

inline Subspace span_columns(std::initializer_list<Vec> cols)
{
    Mat m(cols.begin()->size(), static_cast<Eigen::Index>(cols.size()));
    Eigen::Index j = 0;
    for (const auto& c : cols)
        m.col(j++) = c;
    return orthonormal_basis(m);
}

inline std::vector<Subspace> pair_blocks(Eigen::Index blocks)
{
    std::vector<Subspace> obs;
    for (Eigen::Index k = 1; k <= blocks; ++k)
        obs.push_back(span_columns({unit(2 * blocks, 2 * k - 1), unit(2 * blocks, 2 * k)}));
    return obs;
}

inline void require_min(std::string_view name, std::size_t n, std::size_t min)
{
    if (n < min)
        throw PreconditionError(std::string(name) + ": dimension " + std::to_string(n) +
                                " is below the minimum " + std::to_string(min));
}

inline void require_even(std::string_view name, std::size_t n)
{
    if (n % 2 != 0)
        throw PreconditionError(std::string(name) + ": dimension must be even");
}

inline WeightedFamily make_family(std::size_t n, const std::vector<Subspace>& subs, const WeightRule& rule)
{
    const auto w = rule.first(subs.size());
    std::vector<Member> ms;
    for (std::size_t k = 0; k < subs.size(); ++k)
        ms.push_back({w[k], subs[k]});
    return WeightedFamily(n, std::move(ms));
}

} // namespace detail

inline ObsImage ex7_1(std::size_t n)
{
    detail::require_min("ex7_1", n, 2);
    const auto dim = static_cast<Eigen::Index>(n);
    const Eigen::Index blocks = dim - 1;
    Mat t = Mat::Zero(dim, 2 * blocks);
    for (Eigen::Index k = 1; k <= blocks; ++k) {
        t(0, 2 * k - 2) = std::pow(2.0, -static_cast<double>(k));
        t(k, 2 * k - 1) = 1.0;
    }
    return {detail::pair_blocks(blocks), t};
}

inline ObsImage ex7_2(std::size_t n)
{
    detail::require_min("ex7_2", n, 2);
    const auto dim = static_cast<Eigen::Index>(n);
    const Eigen::Index blocks = dim - 1;
    Mat t = Mat::Zero(dim, 2 * blocks);
    for (Eigen::Index k = 1; k <= blocks; ++k) {
        t(k - 1, 2 * k - 2) = 1.0;
        t(k, 2 * k - 1) = 1.0 / std::sqrt(static_cast<double>(k + 1));
    }
    return {detail::pair_blocks(blocks), t};
}

/// P_n g for g = Σ_k e_{2k} / 2^{k/2}.
inline Vec ex7_3_vector(std::size_t n)
{
    const auto dim = static_cast<Eigen::Index>(n);
    Vec g = Vec::Zero(dim);
    for (Eigen::Index k = 1; 2 * k <= dim; ++k)
        g(2 * k - 1) = std::pow(2.0, -static_cast<double>(k) / 2.0);
    return g;
}

inline WeightedFamily ex7_3(std::size_t n, const WeightRule& rule)
{
    detail::require_min("ex7_3", n, 2);
    detail::require_even("ex7_3", n);
    const auto dim = static_cast<Eigen::Index>(n);
    const Vec g = ex7_3_vector(n);
    std::vector<Subspace> subs;
    for (Eigen::Index k = 1; 2 * k <= dim; ++k) {
        Vec head = Vec::Zero(dim);
        head.head(2 * k) = g.head(2 * k);
        subs.push_back(detail::span_columns({head, unit(dim, 2 * k - 1)}));
    }
    return detail::make_family(n, subs, rule);
}

/// P_n g for g = Σ_k e_{2k-1} / 2^{k/2}.
inline Vec ex7_4_vector(std::size_t n)
{
    const auto dim = static_cast<Eigen::Index>(n);
    Vec g = Vec::Zero(dim);
    for (Eigen::Index k = 1; 2 * k - 1 <= dim; ++k)
        g(2 * k - 2) = std::pow(2.0, -static_cast<double>(k) / 2.0);
    return g;
}

inline WeightedFamily ex7_4(std::size_t n, const WeightRule& rule)
{
    detail::require_min("ex7_4", n, 2);
    detail::require_even("ex7_4", n);
    const auto dim = static_cast<Eigen::Index>(n);
    const Vec g = ex7_4_vector(n);
    std::vector<Subspace> subs;
    for (Eigen::Index k = 1; 2 * k <= dim; ++k)
        subs.push_back(detail::span_columns({g, unit(dim, 2 * k)}));
    return detail::make_family(n, subs, rule);
}

inline WeightedFamily ex7_5(std::size_t n, const std::vector<double>& weights)
{
    detail::require_min("ex7_5", n, 3);
    if (weights.size() != n)
        throw PreconditionError("ex7_5: one weight per member (n) is required");
    const auto dim = static_cast<Eigen::Index>(n);
    std::vector<Subspace> subs;
    Mat tail = Mat::Zero(dim, dim - 1);
    tail.bottomRows(dim - 1).setIdentity();
    subs.push_back(Subspace::from_orthonormal(tail));
    for (Eigen::Index k = 2; k <= dim; ++k)
        subs.push_back(detail::span_columns({unit(dim, 1), unit(dim, k)}));
    std::vector<Member> ms;
    for (std::size_t k = 0; k < n; ++k)
        ms.push_back({weights[k], subs[k]});
    return WeightedFamily(n, std::move(ms));
}

inline WeightedFamily ex7_5(std::size_t n, const WeightRule& rule)
{
    return ex7_5(n, rule.first(n));
}

inline WeightedFamily ex7_6(const std::vector<double>& weights)
{
    if (weights.size() != 3)
        throw PreconditionError("ex7_6: three weights are required");
    const Subspace w1 = detail::span_columns({unit(4, 1), unit(4, 2)});
    const Subspace w2 = detail::span_columns({unit(4, 1), unit(4, 3)});
    const Subspace w3 = detail::span_columns({unit(4, 4)});
    return WeightedFamily(4, {{weights[0], w1}, {weights[1], w2}, {weights[2], w3}});
}

inline WeightedFamily ex7_6(std::size_t n, const WeightRule& rule)
{
    if (n != 4)
        throw PreconditionError("ex7_6: the example lives in dimension 4 only");
    return ex7_6(rule.first(3));
}

/// Smallest admissible dimension per example.
inline std::size_t min_dimension(std::string_view name)
{
    if (name == "ex7_5")
        return 3;
    if (name == "ex7_6")
        return 4;
    return 2;
}

inline bool known(std::string_view name)
{
    return name == "ex7_1" || name == "ex7_2" || name == "ex7_3" || name == "ex7_4" || name == "ex7_5" ||
           name == "ex7_6";
}

/// OBS-plus-operator pair for ex7_1 / ex7_2, a weighted family otherwise.
inline Generated generate(std::string_view name, std::size_t n, const WeightRule& rule = {})
{
    if (name == "ex7_1")
        return ex7_1(n);
    if (name == "ex7_2")
        return ex7_2(n);
    if (name == "ex7_3")
        return ex7_3(n, rule);
    if (name == "ex7_4")
        return ex7_4(n, rule);
    if (name == "ex7_5")
        return ex7_5(n, rule);
    if (name == "ex7_6")
        return ex7_6(n, rule);
    throw PreconditionError("unknown example '" + std::string(name) + "'");
}

/// The weighted family of any example; ex7_1 / ex7_2 use (w_k, T(E_k)).
inline WeightedFamily generate_family(std::string_view name, std::size_t n, const WeightRule& rule = {})
{
    Generated g = generate(name, n, rule);
    if (auto* img = std::get_if<ObsImage>(&g))
        return img->family(rule.first(img->obs.size()));
    return std::get<WeightedFamily>(std::move(g));
}

} // namespace fusionframe::examples

#endif // FUSIONFRAME_EXAMPLES_HPP
