#pragma once
// Triple machinery in the set model: seven-component complexity profiles,
// delta-clones, triple mutual information, a non-Shannon information
// inequality, and extraction of the common core of a triple. The set model
// realizes the core with zero residue: w = x ∩ y ∩ z. One limitation to
// keep in mind: the triple information equals the central intersection
// cardinality here, so it can never go negative the way it can for general
// strings.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "infoclust/core.hpp"
#include "infoclust/set_model.hpp"

namespace infoclust {

/// (C(x), C(y), C(z), C(x,y), C(x,z), C(y,z), C(x,y,z)).
struct ComplexityProfile {
    std::int64_t cx, cy, cz, cxy, cxz, cyz, cxyz;

    std::array<std::int64_t, 7> as_array() const { return {cx, cy, cz, cxy, cxz, cyz, cxyz}; }
    friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

inline ComplexityProfile profile(const SetString& x, const SetString& y, const SetString& z) {
    return ComplexityProfile{
        set_complexity(x).bits(),         set_complexity(y).bits(),
        set_complexity(z).bits(),         set_complexity({x, y}).bits(),
        set_complexity({x, z}).bits(),    set_complexity({y, z}).bits(),
        set_complexity({x, y, z}).bits(),
    };
}

/// All z' whose profile with (x,y) stays within delta of the base profile,
/// componentwise. Exhaustive over the universe; refuses above 2^20
/// candidates.
struct CloneSet {
    SetString x, y, z;
    std::int64_t delta;
    std::vector<std::uint64_t> members;  // masks, ascending
};

inline CloneSet clones(const SetString& x, const SetString& y, const SetString& z,
                       std::int64_t delta) {
    if (delta < 0)
        throw model_error("clone precision must be nonnegative");
    Universe u = x.universe();
    if (y.universe() != u || z.universe() != u)
        throw model_error("universe mismatch between arguments");
    if (u.size() > 20)
        throw model_error("clone scan refused: more than 2^20 candidate strings");

    ComplexityProfile base = profile(x, y, z);
    CloneSet out{x, y, z, delta, {}};
    for (std::uint64_t m = 0; m < u.subset_count(); ++m) {
        ComplexityProfile p = profile(x, y, SetString(u, m));
        bool in_band = true;
        auto a = base.as_array(), b = p.as_array();
        for (int i = 0; i < 7 && in_band; ++i)
            in_band = (b[i] >= a[i] - delta) && (b[i] <= a[i] + delta);
        if (in_band)
            out.members.push_back(m);
    }
    return out;
}

struct TripleReport {
    std::int64_t eps = 0;          // max of the three conditional informations
    std::int64_t triple_info = 0;  // I(x:y:z), 7-term inclusion-exclusion
    ComplexityProfile prof{};
    std::optional<SetString> core;           // w, when extracted
    std::array<std::int64_t, 3> residuals{};  // C(w|x), C(w|y), C(w|z)
};

/// eps = max{I(x:y|z), I(x:z|y), I(y:z|x)} and
/// I(x:y:z) = C(x)+C(y)+C(z)-C(x,y)-C(x,z)-C(y,z)+C(x,y,z).
inline TripleReport triple_report(const SetString& x, const SetString& y, const SetString& z) {
    TripleReport rep;
    rep.prof = profile(x, y, z);
    rep.eps = std::max({set_information_given(x, y, z), set_information_given(x, z, y),
                        set_information_given(y, z, x)});
    rep.triple_info = rep.prof.cx + rep.prof.cy + rep.prof.cz - rep.prof.cxy - rep.prof.cxz -
                      rep.prof.cyz + rep.prof.cxyz;
    return rep;
}

/// The common core w = x ∩ y ∩ z. In this model C(w) equals I(x:y:z) and
/// all three residuals C(w|·) vanish.
inline TripleReport extract_triple_core(const SetString& x, const SetString& y,
                                        const SetString& z) {
    TripleReport rep = triple_report(x, y, z);
    SetString w(x.universe(), x.mask() & y.mask() & z.mask());
    rep.core = w;
    rep.residuals = {set_complexity_given(w, x).bits(), set_complexity_given(w, y).bits(),
                     set_complexity_given(w, z).bits()};
    return rep;
}

/// RHS - LHS of
///   I(x:y) <= I(x:y|z') + I(x:y|z'') + I(z':z'')
///           + I(x:y|z) + I(x:z|y) + I(y:z|x).
/// The set model is entropic (independent uniform bits per position), so the
/// slack is never negative: x∩y splits into (x∩y)\z' and x∩y∩z', and the
/// latter into pieces inside z'∩z'' and inside (x∩y)\z''.
inline std::int64_t nonshannon_slack(const SetString& x, const SetString& y, const SetString& z,
                                     const SetString& z1, const SetString& z2) {
    std::int64_t lhs = set_information(x, y);
    std::int64_t rhs = set_information_given(x, y, z1) + set_information_given(x, y, z2) +
                       set_information(z1, z2) + set_information_given(x, y, z) +
                       set_information_given(x, z, y) + set_information_given(y, z, x);
    return rhs - lhs;
}

struct CloneClusterReport {
    std::int64_t cond_z_xy = 0;      // C(z|x,y)
    std::int64_t eps = 0;
    std::int64_t delta = 0;
    std::size_t member_count = 0;
    std::int64_t diameter = 0;       // max pairwise set-model distance
    std::int64_t logsize = 0;        // floor(log2 member_count)
    std::int64_t diameter_bound = 0; // C(z|x,y) + 3 eps + 9 delta
    std::int64_t logsize_reference = 0;  // C(z|x,y) - delta, reported only
    bool pass = false;
};

/// Measures the clone set of z given (x,y) as a cluster. The asserted
/// diameter bound is exact set algebra: for clones z', z'',
///   |z''\z'| <= I(x:y|z') + I(x:z''|y) + I(y:z''|x) + C(z''|x,y)
/// and the four terms band to eps+4d, eps+2d, eps+2d, C(z|x,y)+d, giving
///   diameter <= C(z|x,y) + 3 eps + 9 delta.
inline CloneClusterReport clone_cluster_check(const SetString& x, const SetString& y,
                                              const SetString& z, std::int64_t delta) {
    CloneSet cs = clones(x, y, z, delta);
    TripleReport tr = triple_report(x, y, z);
    Universe u = x.universe();

    CloneClusterReport rep;
    rep.cond_z_xy = set_complexity_given(z, SetString(u, x.mask() | y.mask())).bits();
    rep.eps = tr.eps;
    rep.delta = delta;
    rep.member_count = cs.members.size();
    for (std::size_t i = 0; i < cs.members.size(); ++i)
        for (std::size_t j = i + 1; j < cs.members.size(); ++j) {
            std::int64_t d = std::max(
                std::popcount(cs.members[i] & ~cs.members[j]),
                std::popcount(cs.members[j] & ~cs.members[i]));
            rep.diameter = std::max(rep.diameter, d);
        }
    rep.logsize = 0;
    while ((std::uint64_t{2} << rep.logsize) <= rep.member_count)
        ++rep.logsize;
    rep.diameter_bound = rep.cond_z_xy + 3 * rep.eps + 9 * delta;
    rep.logsize_reference = rep.cond_z_xy - delta;
    rep.pass = rep.diameter <= rep.diameter_bound;
    return rep;
}

}  // namespace infoclust
