#pragma once
// Finite probability spaces with equiprobable points, and the bound they
// force on families of large, nearly disjoint events: if every event has
// probability greater than eps and every pairwise intersection has
// probability below eps^2/2, fewer than 2/eps events can coexist. All
// checks use exact rational arithmetic; eps must be a unit fraction 1/k.

#include <bit>
#include <cstdint>
#include <vector>

#include "infoclust/core.hpp"
#include "infoclust/rational.hpp"

namespace infoclust {

/// A probability space of `points` equiprobable points (bit positions) and
/// events given as point subsets.
struct EventSystem {
    int points = 1;                          // 1..64
    std::vector<std::uint64_t> events;       // masks over the points

    void validate() const {
        if (points < 1 || points > 64)
            throw model_error("event space must have 1..64 points");
        std::uint64_t full =
            points == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << points) - 1;
        for (std::uint64_t e : events)
            if (e & ~full)
                throw model_error("event outside the point space");
    }
};

struct ClaimReport {
    bool hypotheses_hold = false;   // all events > eps, all pairwise < eps^2/2
    std::size_t event_count = 0;
    std::int64_t count_limit = 0;   // 2/eps as an integer
    Rational union_lower_bound;     // sum p_i - sum_{i<j} p_ij
    bool pass = false;              // hypotheses imply event_count < 2/eps
    // first offending pair when hypotheses fail on an intersection
    int bad_i = -1, bad_j = -1;
};

/// Exact check of the bound for eps = 1/k. Also reports the
/// inclusion-exclusion lower bound on the probability of the union.
inline ClaimReport claim_check(const EventSystem& ev, std::int64_t k) {
    if (k < 1)
        throw model_error("epsilon must be the inverse of a positive integer");
    ev.validate();

    const std::int64_t n = ev.points;
    const Rational eps(1, k);
    const Rational half_eps_sq = eps * eps * Rational(1, 2);

    ClaimReport rep;
    rep.event_count = ev.events.size();
    rep.count_limit = 2 * k;  // 2/eps
    rep.hypotheses_hold = true;

    Rational sum_singles(0), sum_pairs(0);
    for (std::size_t i = 0; i < ev.events.size(); ++i) {
        Rational pi(std::popcount(ev.events[i]), n);
        sum_singles = sum_singles + pi;
        if (!(pi > eps))
            rep.hypotheses_hold = false;
        for (std::size_t j = i + 1; j < ev.events.size(); ++j) {
            Rational pij(std::popcount(ev.events[i] & ev.events[j]), n);
            sum_pairs = sum_pairs + pij;
            if (!(pij < half_eps_sq) && rep.bad_i < 0) {
                rep.hypotheses_hold = false;
                rep.bad_i = static_cast<int>(i);
                rep.bad_j = static_cast<int>(j);
            }
        }
    }
    rep.union_lower_bound = sum_singles - sum_pairs;
    rep.pass = !rep.hypotheses_hold ||
               static_cast<std::int64_t>(rep.event_count) < rep.count_limit;
    return rep;
}

/// The tight reference configuration: 1/eps pairwise disjoint events of
/// probability exactly eps (singletons over k points). The hypotheses fail
/// only on strictness of the single-event bound.
inline EventSystem disjoint_tightness_system(std::int64_t k) {
    if (k < 1 || k > 64)
        throw model_error("unit fraction denominator must be in 1..64");
    EventSystem ev;
    ev.points = static_cast<int>(k);
    for (std::int64_t i = 0; i < k; ++i)
        ev.events.push_back(std::uint64_t{1} << i);
    return ev;
}

struct ClaimSearchResult {
    std::uint64_t families_checked = 0;  // hypothesis-satisfying families seen
    bool counterexample_found = false;
    EventSystem counterexample;          // populated when found
    std::int64_t counterexample_k = 0;
};

namespace detail {

// Depth-first over event families in strictly increasing mask order. The
// hypotheses are inherited by prefixes, so pruning on the newest event is
// lossless: every satisfying family is visited exactly once.
inline void claim_dfs(int points, std::size_t max_events, std::int64_t k,
                      std::vector<std::uint64_t>& chosen, std::uint64_t first_candidate,
                      const std::vector<std::uint64_t>& candidates, ClaimSearchResult& out) {
    if (out.counterexample_found)
        return;
    ++out.families_checked;
    if (static_cast<std::int64_t>(chosen.size()) >= 2 * k) {  // N >= 2/eps
        out.counterexample_found = true;
        out.counterexample = EventSystem{points, chosen};
        out.counterexample_k = k;
        return;
    }
    if (chosen.size() == max_events)
        return;
    const std::int64_t n = points;
    for (std::size_t ci = first_candidate; ci < candidates.size(); ++ci) {
        std::uint64_t e = candidates[ci];
        bool ok = true;
        for (std::uint64_t prev : chosen) {
            // |prev & e| / n < 1/(2k^2)  <=>  |prev & e| * 2k^2 < n
            if (std::popcount(prev & e) * 2 * k * k >= n) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        chosen.push_back(e);
        claim_dfs(points, max_events, k, chosen, ci + 1, candidates, out);
        chosen.pop_back();
        if (out.counterexample_found)
            return;
    }
}

}  // namespace detail

/// Exhaustive search for a counterexample: a family of at most `max_events`
/// events over at most `max_points` points satisfying the hypotheses for
/// eps = 1/k yet containing at least 2/eps events. Families are enumerated
/// in canonical (strictly increasing mask) order; duplicate events never
/// satisfy the pairwise hypothesis, so the ordering loses nothing.
inline ClaimSearchResult search_claim_counterexamples(int max_points, std::size_t max_events,
                                                      const std::vector<std::int64_t>& ks) {
    ClaimSearchResult out;
    for (std::int64_t k : ks) {
        if (k < 1)
            throw model_error("epsilon must be the inverse of a positive integer");
        for (int n = 1; n <= max_points; ++n) {
            // candidate events: |e| / n > 1/k  <=>  |e| * k > n
            std::vector<std::uint64_t> candidates;
            for (std::uint64_t e = 1; e < (std::uint64_t{1} << n); ++e)
                if (std::popcount(e) * k > n)
                    candidates.push_back(e);
            std::vector<std::uint64_t> chosen;
            detail::claim_dfs(n, max_events, k, chosen, 0, candidates, out);
            if (out.counterexample_found)
                return out;
        }
    }
    return out;
}

}  // namespace infoclust
