#pragma once
// Clusters over a distance matrix: a member set whose pairwise distances all
// stay at or below m and whose cardinality reaches 2^l. Validation returns a
// concrete witness on failure. Mining enumerates maximal qualifying sets --
// exhaustively (Bron-Kerbosch) up to 24 items, by deterministic greedy
// expansion beyond that.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoclust/core.hpp"
#include "infoclust/matrix.hpp"

namespace infoclust {

constexpr int floor_log2(std::uint64_t n) {
    int l = 0;
    while (n >> (l + 1))
        ++l;
    return l;
}

struct Cluster {
    std::vector<std::size_t> members;  // sorted indices into the matrix
    double diameter = 0.0;
    int logsize = 0;
};

struct ClusterStats {
    double diameter = 0.0;
    int logsize = 0;
    double density_gap = 0.0;  // diameter - logsize
};

struct ValidationResult {
    bool ok = false;
    // set when the pairwise bound fails
    std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
    double pair_distance = 0.0;
    // set when the cardinality bound fails: (actual, floor(required))
    std::optional<std::pair<std::uint64_t, std::uint64_t>> shortfall;
};

namespace detail {

inline std::vector<std::size_t> canonical_members(std::vector<std::size_t> members,
                                                  std::size_t n) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty())
        throw model_error("cluster must have at least one member");
    if (members.back() >= n)
        throw model_error("unknown member id: " + std::to_string(members.back()));
    return members;
}

}  // namespace detail

inline ClusterStats cluster_stats(std::vector<std::size_t> members, const DistanceMatrix& m) {
    members = detail::canonical_members(std::move(members), m.size());
    ClusterStats st;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
            st.diameter = std::max(st.diameter, m.at(members[a], members[b]));
    st.logsize = floor_log2(members.size());
    st.density_gap = st.diameter - st.logsize;
    return st;
}

/// Both halves of the membership test, with a witness for whichever fails
/// first. `l` may be negative (any nonempty set meets 2^l then).
inline ValidationResult validate_cluster(std::vector<std::size_t> members, double m,
                                         std::int64_t l, const DistanceMatrix& mat) {
    members = detail::canonical_members(std::move(members), mat.size());
    ValidationResult res;
    if (!count_at_least_pow2(members.size(), l)) {
        res.shortfall = {members.size(), l >= 0 ? (std::uint64_t{1} << l) : 1};
        return res;
    }
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            double d = mat.at(members[a], members[b]);
            if (!(d <= m)) {  // infinities disqualify
                res.violating_pair = {members[a], members[b]};
                res.pair_distance = d;
                return res;
            }
        }
    res.ok = true;
    return res;
}

namespace detail {

// Bron-Kerbosch with pivoting over <= 24 items; bitmask state.
inline void bron_kerbosch(std::uint32_t r, std::uint32_t p, std::uint32_t x,
                          const std::vector<std::uint32_t>& adj,
                          std::vector<std::uint32_t>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    std::uint32_t px = p | x;
    int pivot = -1, best = -1;
    for (std::uint32_t t = px; t; t &= t - 1) {
        int v = std::countr_zero(t);
        int deg = std::popcount(p & adj[v]);
        if (deg > best) {
            best = deg;
            pivot = v;
        }
    }
    std::uint32_t cand = p & ~adj[pivot];
    for (std::uint32_t t = cand; t; t &= t - 1) {
        int v = std::countr_zero(t);
        std::uint32_t bit = std::uint32_t{1} << v;
        bron_kerbosch(r | bit, p & adj[v], x & adj[v], adj, out);
        p &= ~bit;
        x |= bit;
    }
}

inline std::vector<std::vector<std::size_t>> maximal_cliques_exact(
    const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::uint32_t> bits(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && adj[i][j])
                bits[i] |= std::uint32_t{1} << j;
    std::vector<std::uint32_t> found;
    std::uint32_t all = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    bron_kerbosch(0, all, 0, bits, found);
    std::vector<std::vector<std::size_t>> out;
    for (std::uint32_t c : found) {
        std::vector<std::size_t> mem;
        for (std::uint32_t t = c; t; t &= t - 1)
            mem.push_back(static_cast<std::size_t>(std::countr_zero(t)));
        out.push_back(std::move(mem));
    }
    return out;
}

inline std::vector<std::vector<std::size_t>> maximal_cliques_greedy(
    const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::vector<std::size_t>> found;
    for (std::size_t seed = 0; seed < n; ++seed) {
        std::vector<std::size_t> c{seed};
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < n; ++j) {  // lexicographic tie-break
                if (std::find(c.begin(), c.end(), j) != c.end())
                    continue;
                bool ok = true;
                for (std::size_t mbr : c)
                    if (!adj[j][mbr]) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    c.push_back(j);
                    grew = true;
                    break;
                }
            }
        }
        std::sort(c.begin(), c.end());
        found.push_back(std::move(c));
    }
    // drop duplicates and non-maximal results
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<std::vector<std::size_t>> out;
    for (const auto& c : found) {
        bool contained = false;
        for (const auto& other : found)
            if (&other != &c && other.size() > c.size() &&
                std::includes(other.begin(), other.end(), c.begin(), c.end())) {
                contained = true;
                break;
            }
        if (!contained)
            out.push_back(c);
    }
    return out;
}

}  // namespace detail

/// Maximal (m,l)-clusters of the matrix. Exact enumeration for <= 24 items
/// (every maximal qualifying set is a maximal clique of the threshold graph
/// with at least 2^l vertices), greedy seeding plus expansion beyond.
/// Output order: larger first, then lexicographic; deterministic.
inline std::vector<Cluster> mine_clusters(const DistanceMatrix& mat, double m, std::int64_t l) {
    if (m < 0 || l < 0)
        throw model_error("cluster thresholds must be nonnegative");
    const std::size_t n = mat.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            adj[i][j] = i == j || mat.at(i, j) <= m;  // infinities excluded

    auto cliques = n <= 24 ? detail::maximal_cliques_exact(adj) : detail::maximal_cliques_greedy(adj);

    std::vector<Cluster> out;
    for (auto& mem : cliques) {
        if (!count_at_least_pow2(mem.size(), l))
            continue;
        ClusterStats st = cluster_stats(mem, mat);
        out.push_back(Cluster{std::move(mem), st.diameter, st.logsize});
    }
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
        if (a.members.size() != b.members.size())
            return a.members.size() > b.members.size();
        return a.members < b.members;
    });
    return out;
}

// clusters.json: [{"members": [...], "m": ..., "l": ..., "diameter": ..., "logsize": ...}]
inline nlohmann::ordered_json clusters_json(const std::vector<Cluster>& clusters,
                                            const DistanceMatrix& mat, double m,
                                            std::int64_t l) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Cluster& c : clusters) {
        nlohmann::ordered_json e;
        auto& members = e["members"] = nlohmann::ordered_json::array();
        for (std::size_t i : c.members)
            members.push_back(mat.ids()[i]);
        e["m"] = m;
        e["l"] = l;
        e["diameter"] = c.diameter;
        e["logsize"] = c.logsize;
        arr.push_back(std::move(e));
    }
    return arr;
}

/// Single-linkage dendrogram in DOT form. Ties merge the lexicographically
/// smallest index pair, so output is reproducible byte for byte.
inline std::string dendrogram_dot(const DistanceMatrix& mat) {
    const std::size_t n = mat.size();
    std::ostringstream out;
    out << "digraph dendrogram {\n";
    for (std::size_t i = 0; i < n; ++i)
        out << "  l" << i << " [label=\"" << mat.ids()[i] << "\" shape=box];\n";

    struct Node {
        std::string name;
        std::vector<std::size_t> items;
    };
    std::vector<Node> active;
    for (std::size_t i = 0; i < n; ++i)
        active.push_back({"l" + std::to_string(i), {i}});

    std::size_t next_internal = 0;
    while (active.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                double d = std::numeric_limits<double>::infinity();
                for (std::size_t a : active[i].items)
                    for (std::size_t b : active[j].items)
                        d = std::min(d, mat.at(a, b));
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        std::string name = "n" + std::to_string(next_internal++);
        out << "  " << name << " [label=\"" << detail::format_value(best) << "\"];\n";
        out << "  " << name << " -> " << active[bi].name << ";\n";
        out << "  " << name << " -> " << active[bj].name << ";\n";
        Node merged{name, active[bi].items};
        merged.items.insert(merged.items.end(), active[bj].items.begin(), active[bj].items.end());
        active.erase(active.begin() + bj);
        active[bi] = std::move(merged);
    }
    out << "}\n";
    return out.str();
}

}  // namespace infoclust
