#pragma once
// Referential clusters and core certificates.
//
// A stream of validated (m, m-d)-clusters is filtered in arrival order:
// a cluster is kept only if its intersection with every earlier-kept
// cluster stays at or below 2^{m-d'}. Kept clusters receive ordinals.
//
// With d' > 2d+1 and the ball condition (at most 2^{m+1}-1 strings within
// conditional complexity m of any string, automatic for description
// systems), no string can sit in many kept clusters, and the ordinal of a
// kept cluster doubles as a core: each member is reconstructed from
// (ordinal, rank) and the ordinal is reconstructed from (member,
// covering_rank). certify_core materializes both directions as explicit
// fixed-width codes and reports their widths next to the guaranteed
// budgets.
//
// Members outside the certified cluster S_i are still reachable: they are
// ranked within the path enumeration E_i of all model items linked to S_i
// by more than 2^{m-d'} two-step paths. E_i always contains S_i and every
// stream cluster that overlaps S_i above the threshold, at the price of a
// wider rank code.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoclust/cluster.hpp"
#include "infoclust/core.hpp"
#include "infoclust/matrix.hpp"

namespace infoclust {

struct KeptCluster {
    std::size_t ordinal = 0;            // assignment order, 0-based
    std::vector<std::size_t> members;   // sorted model indices
};

struct ReferentialRegistry {
    std::int64_t m = 0;
    std::int64_t d = 0;
    std::int64_t dprime = 0;
    std::vector<KeptCluster> kept;
    std::vector<std::size_t> dropped_stream_positions;
};

namespace detail {

inline std::uint64_t intersection_size(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) {
    std::uint64_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

}  // namespace detail

/// Order-dependent filter. Every stream element must validate as an
/// (m, m-d)-cluster against the matrix; a violation is an error, not a drop.
inline ReferentialRegistry referential_filter(const std::vector<std::vector<std::size_t>>& stream,
                                              std::int64_t m, std::int64_t d, std::int64_t dprime,
                                              const DistanceMatrix& mat) {
    if (m < 0 || d < 0 || dprime < 0)
        throw model_error("filter parameters must be nonnegative");
    ReferentialRegistry reg{m, d, dprime, {}, {}};
    for (std::size_t pos = 0; pos < stream.size(); ++pos) {
        auto v = validate_cluster(stream[pos], static_cast<double>(m), m - d, mat);
        if (!v.ok)
            throw model_error("stream element " + std::to_string(pos) +
                              " is not a valid (m, m-d)-cluster");
        auto members = detail::canonical_members(stream[pos], mat.size());
        bool keep = true;
        for (const KeptCluster& k : reg.kept)
            if (count_exceeds_pow2(detail::intersection_size(members, k.members), m - dprime)) {
                keep = false;
                break;
            }
        if (keep)
            reg.kept.push_back(KeptCluster{reg.kept.size(), std::move(members)});
        else
            reg.dropped_stream_positions.push_back(pos);
    }
    return reg;
}

/// Re-verifies the registry invariant after the fact: all pairwise
/// intersections of kept clusters stay at or below 2^{m-d'}.
inline bool registry_invariant_holds(const ReferentialRegistry& reg, std::size_t* bad_i = nullptr,
                                     std::size_t* bad_j = nullptr) {
    for (std::size_t i = 0; i < reg.kept.size(); ++i)
        for (std::size_t j = i + 1; j < reg.kept.size(); ++j)
            if (count_exceeds_pow2(
                    detail::intersection_size(reg.kept[i].members, reg.kept[j].members),
                    reg.m - reg.dprime)) {
                if (bad_i)
                    *bad_i = i;
                if (bad_j)
                    *bad_j = j;
                return false;
            }
    return true;
}

struct MultiplicityReport {
    std::uint64_t max_multiplicity = 0;
    std::size_t worst_item = 0;
    std::uint64_t bound = 0;  // 2^{d+1}
    bool pass = false;
};

/// Checks that no model item lies in more than 2^{d+1} kept clusters.
/// Requires d' > 2d+1 and the ball condition; both are verified, not trusted.
template <typename Model>
MultiplicityReport multiplicity_check(const ReferentialRegistry& reg, const Model& model) {
    if (reg.dprime <= 2 * reg.d + 1)
        throw model_error("multiplicity bound needs d' > 2d+1; refusing to certify");
    const ComplexityValue mv = ComplexityValue::finite(reg.m);
    for (std::size_t x = 0; x < model.size(); ++x) {
        std::uint64_t ball = 0;
        for (std::size_t y = 0; y < model.size(); ++y)
            if (model.cond(y, x) <= mv)
                ++ball;
        if (reg.m < 62 && ball > (std::uint64_t{1} << (reg.m + 1)) - 1)
            throw model_error("ball condition violated at item " + model.label(x));
    }

    MultiplicityReport rep;
    rep.bound = reg.d + 1 >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << (reg.d + 1);
    std::vector<std::uint64_t> mult(model.size(), 0);
    for (const KeptCluster& k : reg.kept)
        for (std::size_t x : k.members)
            ++mult[x];
    for (std::size_t x = 0; x < mult.size(); ++x)
        if (mult[x] > rep.max_multiplicity) {
            rep.max_multiplicity = mult[x];
            rep.worst_item = x;
        }
    rep.pass = rep.max_multiplicity <= rep.bound;
    return rep;
}

/// Model items linked to the kept cluster by more than 2^{m-d'} two-step
/// paths (one step to a cluster member, one step onward). Contains the
/// cluster itself and every stream cluster that overlapped it heavily.
inline std::vector<std::size_t> path_enumeration(const std::vector<std::size_t>& kept_members,
                                                 std::int64_t m, std::int64_t dprime,
                                                 const DistanceMatrix& mat) {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < mat.size(); ++w) {
        std::uint64_t links = 0;
        for (std::size_t x : kept_members)
            if (mat.at(w, x) <= static_cast<double>(m))
                ++links;
        if (count_exceeds_pow2(links, m - dprime))
            out.push_back(w);
    }
    return out;
}

enum class CodeRoute { member, path };

struct MemberCode {
    std::size_t item = 0;           // model index of the encoded member
    CodeRoute route = CodeRoute::member;
    std::uint64_t rank = 0;         // member: index into sorted S_i;
                                    // path: |S_i| + index into sorted E_i \ S_i
    int rank_bits = 0;
    std::uint64_t covering_rank = 0;  // index of the ordinal among the kept
                                      // clusters covering the member
    int covering_bits = 0;
};

struct CoreCertificate {
    std::size_t ordinal = 0;
    std::int64_t m = 0, d = 0, dprime = 0;
    std::vector<MemberCode> records;  // one per member of the certified set
    // guaranteed widths
    int rank_budget_member_bits = 0;      // m + 1
    int covering_budget_member_bits = 0;  // d + 1
    int rank_budget_path_bits = 0;        // m + d' + 2
    int covering_budget_path_bits = 0;    // d + d' + 2
    // bits to transmit the parameters themselves alongside the codes
    int overhead_bits = 0;
};

namespace detail {

inline int bit_width_of(std::int64_t v) {
    int w = 1;
    while (v >> w)
        ++w;
    return w;
}

// Kept ordinals whose cluster contains x (member route) or whose path
// enumeration contains x (path route), in ordinal order.
inline std::vector<std::size_t> covering_ordinals(const ReferentialRegistry& reg,
                                                  const DistanceMatrix& mat, std::size_t x,
                                                  CodeRoute route) {
    std::vector<std::size_t> out;
    for (const KeptCluster& k : reg.kept) {
        bool covers;
        if (route == CodeRoute::member) {
            covers = std::binary_search(k.members.begin(), k.members.end(), x);
        } else {
            std::uint64_t links = 0;
            for (std::size_t mem : k.members)
                if (mat.at(x, mem) <= static_cast<double>(reg.m))
                    ++links;
            covers = count_exceeds_pow2(links, reg.m - reg.dprime);
        }
        if (covers)
            out.push_back(k.ordinal);
    }
    return out;
}

}  // namespace detail

/// Certifies a validated (m, m-d)-cluster S against a registry built with
/// d' = 2d+2: finds the first kept cluster S_i intersecting S above
/// 2^{m-d'} (S's own entry when it was kept) and emits, for every member
/// of S, the two-part code (ordinal, rank) plus the inverse covering code.
inline CoreCertificate certify_core(const std::vector<std::size_t>& s,
                                    const ReferentialRegistry& reg, const DistanceMatrix& mat) {
    if (reg.dprime != 2 * reg.d + 2)
        throw model_error("certification requires a registry built with d' = 2d+2");
    auto v = validate_cluster(s, static_cast<double>(reg.m), reg.m - reg.d, mat);
    if (!v.ok)
        throw model_error("certify_core: target is not a valid (m, m-d)-cluster");
    auto members = detail::canonical_members(s, mat.size());

    const KeptCluster* host = nullptr;
    for (const KeptCluster& k : reg.kept)
        if (count_exceeds_pow2(detail::intersection_size(members, k.members),
                               reg.m - reg.dprime)) {
            host = &k;
            break;
        }
    if (!host)
        throw model_error(
            "stream-coverage error: no kept cluster intersects the target above 2^(m-d')");

    CoreCertificate cert;
    cert.ordinal = host->ordinal;
    cert.m = reg.m;
    cert.d = reg.d;
    cert.dprime = reg.dprime;
    cert.rank_budget_member_bits = static_cast<int>(reg.m + 1);
    cert.covering_budget_member_bits = static_cast<int>(reg.d + 1);
    cert.rank_budget_path_bits = static_cast<int>(reg.m + reg.dprime + 2);
    cert.covering_budget_path_bits = static_cast<int>(reg.d + reg.dprime + 2);
    cert.overhead_bits = detail::bit_width_of(reg.m) + detail::bit_width_of(reg.d);

    std::vector<std::size_t> enumeration;  // built lazily, path route only
    for (std::size_t x : members) {
        MemberCode rec;
        rec.item = x;
        if (std::binary_search(host->members.begin(), host->members.end(), x)) {
            rec.route = CodeRoute::member;
            rec.rank = static_cast<std::uint64_t>(
                std::lower_bound(host->members.begin(), host->members.end(), x) -
                host->members.begin());
            rec.rank_bits = code_width(host->members.size());
        } else {
            if (enumeration.empty())
                enumeration = path_enumeration(host->members, reg.m, reg.dprime, mat);
            rec.route = CodeRoute::path;
            std::uint64_t offset = 0;
            bool found = false;
            for (std::size_t w : enumeration) {
                if (std::binary_search(host->members.begin(), host->members.end(), w))
                    continue;  // ranks below |S_i| are taken by members
                if (w == x) {
                    found = true;
                    break;
                }
                ++offset;
            }
            if (!found)
                throw model_error("certify_core: member missing from the path enumeration");
            // S_i occupies the low ranks and is always part of the
            // enumeration, so |E_i| addresses the whole code space
            rec.rank = host->members.size() + offset;
            rec.rank_bits = code_width(enumeration.size());
        }
        auto covering = detail::covering_ordinals(reg, mat, x, rec.route);
        auto it = std::find(covering.begin(), covering.end(), host->ordinal);
        if (it == covering.end())
            throw model_error("certify_core: host ordinal missing from the covering list");
        rec.covering_rank = static_cast<std::uint64_t>(it - covering.begin());
        rec.covering_bits = code_width(covering.size());
        cert.records.push_back(rec);
    }
    return cert;
}

/// Independent decoder for the (ordinal, rank) half of a code.
inline std::size_t decode_rank(const ReferentialRegistry& reg, const DistanceMatrix& mat,
                               std::size_t ordinal, std::uint64_t rank, CodeRoute route) {
    if (ordinal >= reg.kept.size())
        throw model_error("decode: unknown ordinal");
    const auto& host = reg.kept[ordinal].members;
    if (rank < host.size())
        return host[rank];
    if (route == CodeRoute::member)
        throw model_error("decode: member rank out of range");
    auto enumeration = path_enumeration(host, reg.m, reg.dprime, mat);
    std::uint64_t offset = rank - host.size();
    for (std::size_t w : enumeration) {
        if (std::binary_search(host.begin(), host.end(), w))
            continue;
        if (offset == 0)
            return w;
        --offset;
    }
    throw model_error("decode: path rank out of range");
}

/// Independent decoder for the (member, covering_rank) half.
inline std::size_t decode_covering(const ReferentialRegistry& reg, const DistanceMatrix& mat,
                                   std::size_t item, std::uint64_t covering_rank,
                                   CodeRoute route) {
    auto covering = detail::covering_ordinals(reg, mat, item, route);
    if (covering_rank >= covering.size())
        throw model_error("decode: covering rank out of range");
    return covering[covering_rank];
}

// --- JSON dumps ------------------------------------------------------------

inline nlohmann::ordered_json registry_json(const ReferentialRegistry& reg,
                                            const DistanceMatrix& mat) {
    nlohmann::ordered_json j;
    j["m"] = reg.m;
    j["d"] = reg.d;
    j["dprime"] = reg.dprime;
    j["kept"] = nlohmann::ordered_json::array();
    for (const KeptCluster& k : reg.kept) {
        nlohmann::ordered_json e;
        e["ordinal"] = k.ordinal;
        auto& mem = e["members"] = nlohmann::ordered_json::array();
        for (std::size_t x : k.members)
            mem.push_back(mat.ids()[x]);
        j["kept"].push_back(std::move(e));
    }
    j["dropped_stream_positions"] = reg.dropped_stream_positions;
    return j;
}

inline nlohmann::ordered_json certificate_json(const CoreCertificate& cert,
                                               const DistanceMatrix& mat) {
    nlohmann::ordered_json j;
    j["ordinal"] = cert.ordinal;
    j["m"] = cert.m;
    j["d"] = cert.d;
    j["dprime"] = cert.dprime;
    j["records"] = nlohmann::ordered_json::array();
    for (const MemberCode& r : cert.records) {
        nlohmann::ordered_json e;
        e["member"] = mat.ids()[r.item];
        e["route"] = r.route == CodeRoute::member ? "member" : "path";
        e["rank"] = r.rank;
        e["rank_bits"] = r.rank_bits;
        e["covering_rank"] = r.covering_rank;
        e["covering_bits"] = r.covering_bits;
        j["records"].push_back(std::move(e));
    }
    j["rank_budget_member_bits"] = cert.rank_budget_member_bits;
    j["covering_budget_member_bits"] = cert.covering_budget_member_bits;
    j["rank_budget_path_bits"] = cert.rank_budget_path_bits;
    j["covering_budget_path_bits"] = cert.covering_budget_path_bits;
    j["overhead_bits"] = cert.overhead_bits;
    return j;
}

// Registry dump as read back from disk; members are item id strings so the
// invariant can be re-checked without the original matrix.
struct RegistryDump {
    std::int64_t m = 0, d = 0, dprime = 0;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> kept;
};

inline RegistryDump load_registry_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw format_error("cannot open registry file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("bad registry JSON: " + std::string(e.what()));
    }
    RegistryDump dump;
    try {
        dump.m = j.at("m").get<std::int64_t>();
        dump.d = j.at("d").get<std::int64_t>();
        dump.dprime = j.at("dprime").get<std::int64_t>();
        for (const auto& e : j.at("kept")) {
            std::vector<std::string> members;
            for (const auto& s : e.at("members"))
                members.push_back(s.get<std::string>());
            std::sort(members.begin(), members.end());
            dump.kept.emplace_back(e.at("ordinal").get<std::size_t>(), std::move(members));
        }
    } catch (const nlohmann::json::exception& e) {
        throw format_error("bad registry JSON: " + std::string(e.what()));
    }
    return dump;
}

struct RegistryCheck {
    bool ok = true;
    std::size_t bad_i = 0, bad_j = 0;
    std::uint64_t intersection = 0;
};

inline RegistryCheck check_registry_dump(const RegistryDump& dump) {
    RegistryCheck res;
    for (std::size_t i = 0; i < dump.kept.size(); ++i)
        for (std::size_t j = i + 1; j < dump.kept.size(); ++j) {
            std::uint64_t inter = 0;
            const auto& a = dump.kept[i].second;
            const auto& b = dump.kept[j].second;
            std::size_t ia = 0, ib = 0;
            while (ia < a.size() && ib < b.size()) {
                if (a[ia] < b[ib])
                    ++ia;
                else if (b[ib] < a[ia])
                    ++ib;
                else {
                    ++inter;
                    ++ia;
                    ++ib;
                }
            }
            if (count_exceeds_pow2(inter, dump.m - dump.dprime)) {
                res.ok = false;
                res.bad_i = dump.kept[i].first;
                res.bad_j = dump.kept[j].first;
                res.intersection = inter;
                return res;
            }
        }
    return res;
}

}  // namespace infoclust
