#pragma once
// Daisies and the counting machinery around them. A daisy is the canonical
// cluster shape: all strings that determine the core cheaply (C(core|x) <= d)
// and are cheap to produce from it (C(x|core) <= m+d). In the set model the
// triangle inequality is exact, so a daisy's diameter never exceeds m + 2d:
// x1\x2 is covered by (x1\core) and (core\x2). Path counting is model-free:
// if 2^u two-step paths lead from x to each of T targets and there are at
// most 2^{v+w} paths total, then T <= 2^{v+w-u}. Description systems supply
// the total-path bound through (code, condition) uniqueness.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "infoclust/cluster.hpp"
#include "infoclust/core.hpp"
#include "infoclust/matrix.hpp"

namespace infoclust {

struct DaisyParams {
    std::size_t core = 0;  // model item index
    std::int64_t m = 0;
    std::int64_t d = 0;
};

/// Exactly {x : C(core|x) <= d and C(x|core) <= m+d}.
template <typename Model>
std::vector<std::size_t> daisy_members(const DaisyParams& p, const Model& model) {
    if (p.m < 0 || p.d < 0)
        throw model_error("daisy parameters must be nonnegative");
    if (p.core >= model.size())
        throw model_error("daisy core unknown to the model");
    const ComplexityValue dmax = ComplexityValue::finite(p.d);
    const ComplexityValue mmax = ComplexityValue::finite(p.m + p.d);
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < model.size(); ++x)
        if (model.cond(p.core, x) <= dmax && model.cond(x, p.core) <= mmax)
            out.push_back(x);
    return out;
}

struct DaisyClusterReport {
    std::size_t member_count = 0;
    ComplexityValue diameter = ComplexityValue::finite(0);
    std::int64_t bound = 0;  // m + 2d + slack
    bool pass = false;
};

/// Measures the daisy's diameter against m + 2d + slack. The set model needs
/// slack 0; table models pass their declared triangle slack.
template <typename Model>
DaisyClusterReport daisy_cluster_check(const DaisyParams& p, const Model& model,
                                       std::int64_t slack = 0) {
    auto members = daisy_members(p, model);
    DaisyClusterReport rep;
    rep.member_count = members.size();
    rep.bound = p.m + 2 * p.d + slack;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
            rep.diameter = std::max(rep.diameter, model.dist(members[a], members[b]));
    rep.pass = !rep.diameter.is_infinite() && rep.diameter.bits() <= rep.bound;
    return rep;
}

/// Number of intermediate y with C(y|x) < v and C(z|y) < w.
template <typename Model>
std::uint64_t count_paths(std::size_t x, std::size_t z, std::int64_t v, std::int64_t w,
                          const Model& model) {
    if (x >= model.size() || z >= model.size())
        throw model_error("path endpoints unknown to the model");
    std::uint64_t n = 0;
    for (std::size_t y = 0; y < model.size(); ++y) {
        ComplexityValue cyx = model.cond(y, x);
        if (cyx.is_infinite() || cyx.bits() >= v)
            continue;
        ComplexityValue czy = model.cond(z, y);
        if (!czy.is_infinite() && czy.bits() < w)
            ++n;
    }
    return n;
}

struct PathLemmaReport {
    std::uint64_t targets = 0;      // #{z : count_paths(x,z,v,w) >= 2^u}
    std::uint64_t target_bound = 0; // 2^{v+w-u}
    bool pass = false;
};

/// The counting half of the many-paths argument, measured directly. The
/// bound is guaranteed whenever the model reaches at most 2^v - 1 strings
/// with codes shorter than v from any condition (true for every description
/// system); it is reported, not assumed, so other models can be probed too.
template <typename Model>
PathLemmaReport path_lemma_check(std::size_t x, std::int64_t v, std::int64_t w, std::int64_t u,
                                 const Model& model) {
    if (v < 0 || w < 0 || u < 0)
        throw model_error("path lemma parameters must be nonnegative");
    if (u > v + w)
        throw model_error("path lemma requires u <= v + w");
    PathLemmaReport rep;
    const std::int64_t bexp = v + w - u;
    rep.target_bound = bexp >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << bexp);
    for (std::size_t z = 0; z < model.size(); ++z)
        if (count_at_least_pow2(count_paths(x, z, v, w, model), u))
            ++rep.targets;
    rep.pass = rep.targets <= rep.target_bound;
    return rep;
}

enum class MergeMode {
    exact_triangle,    // set model: assert diameter(S ∪ S') <= m + d
    path_certificate,  // table models: verify the two-step path counts instead
};

struct MergeReport {
    std::uint64_t shared = 0;            // |S ∩ S'|
    double union_diameter = 0.0;
    std::int64_t bound = 0;              // m + d
    std::uint64_t min_cross_paths = 0;   // over pairs (x in S\S', x' in S'\S)
    bool pass = false;
};

/// Merge check for two validated diameter-m clusters sharing at least
/// 2^{m-d} members. exact_triangle measures the union's diameter against
/// m + d; path_certificate re-verifies that every cross pair is linked by
/// at least 2^{m-d} two-step paths through the shared part.
inline MergeReport merge_check(std::vector<std::size_t> s, std::vector<std::size_t> sp,
                               std::int64_t m, std::int64_t d, const DistanceMatrix& mat,
                               MergeMode mode = MergeMode::exact_triangle) {
    if (m < 0 || d < 0)
        throw model_error("merge parameters must be nonnegative");
    auto va = validate_cluster(s, static_cast<double>(m), 0, mat);
    auto vb = validate_cluster(sp, static_cast<double>(m), 0, mat);
    if (!va.ok || !vb.ok)
        throw model_error("merge_check requires validated diameter-m clusters");
    s = detail::canonical_members(std::move(s), mat.size());
    sp = detail::canonical_members(std::move(sp), mat.size());

    std::vector<std::size_t> shared;
    std::set_intersection(s.begin(), s.end(), sp.begin(), sp.end(), std::back_inserter(shared));
    MergeReport rep;
    rep.shared = shared.size();
    rep.bound = m + d;
    if (!count_at_least_pow2(rep.shared, m - d))
        throw model_error("merge_check: intersection below the 2^(m-d) threshold");

    std::vector<std::size_t> u;
    std::set_union(s.begin(), s.end(), sp.begin(), sp.end(), std::back_inserter(u));
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = a + 1; b < u.size(); ++b)
            rep.union_diameter = std::max(rep.union_diameter, mat.at(u[a], u[b]));

    if (mode == MergeMode::exact_triangle) {
        rep.pass = rep.union_diameter <= static_cast<double>(rep.bound);
    } else {
        rep.min_cross_paths = ~std::uint64_t{0};
        bool any_cross = false;
        for (std::size_t a : s) {
            if (std::binary_search(sp.begin(), sp.end(), a))
                continue;
            for (std::size_t b : sp) {
                if (std::binary_search(s.begin(), s.end(), b))
                    continue;
                any_cross = true;
                std::uint64_t paths = 0;
                for (std::size_t mid : shared)
                    if (mat.at(a, mid) <= static_cast<double>(m) &&
                        mat.at(mid, b) <= static_cast<double>(m))
                        ++paths;
                rep.min_cross_paths = std::min(rep.min_cross_paths, paths);
            }
        }
        if (!any_cross)
            rep.min_cross_paths = rep.shared;  // S ⊆ S' or S' ⊆ S
        rep.pass = count_at_least_pow2(rep.min_cross_paths, m - d);
    }
    return rep;
}

}  // namespace infoclust
