#pragma once
// Seeded instance generators for the verification suites. Everything here is
// deterministic in the supplied engine; identical seeds produce identical
// systems, streams, matrices, and corpora on every platform (mt19937 output
// is pinned by the standard).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "infoclust/core.hpp"
#include "infoclust/matrix.hpp"
#include "infoclust/table_model.hpp"

namespace infoclust {

/// k-th code in the canonical length-then-value order: "", "0", "1", "00", ...
inline std::string canonical_code(std::uint64_t k) {
    int len = 0;
    while (k + 1 >= (std::uint64_t{2} << len))
        ++len;
    std::uint64_t offset = k + 1 - (std::uint64_t{1} << len);
    std::string code;
    for (int b = len - 1; b >= 0; --b)
        code.push_back((offset >> b) & 1 ? '1' : '0');
    return code;
}

/// Unstructured random description system: up to `max_strings` strings and a
/// few programs per string with codes up to `max_code_len` bits.
inline DescriptionSystem random_description_system(std::mt19937& rng, int max_strings = 64,
                                                   int max_code_len = 8) {
    int n = 2 + static_cast<int>(rng() % std::max(1, max_strings - 1));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i)
        ids.push_back("s" + std::to_string(i));
    std::vector<Program> progs;
    std::set<std::pair<std::string, std::string>> used;
    int pcount = n + static_cast<int>(rng() % (4 * n));
    for (int p = 0; p < pcount; ++p) {
        int len = static_cast<int>(rng() % (max_code_len + 1));
        std::string code;
        for (int b = 0; b < len; ++b)
            code.push_back(rng() % 2 ? '1' : '0');
        bool has_cond = rng() % 4 != 0;
        std::string cond = has_cond ? ids[rng() % n] : "\x01";
        if (!used.emplace(code, cond).second)
            continue;
        progs.push_back(
            Program{code, has_cond ? std::optional<std::string>(cond) : std::nullopt,
                    ids[rng() % n]});
    }
    return DescriptionSystem(ids, progs);
}

/// A description system with a planted stream of valid (m, m-d)-clusters.
/// Groups of strings are wired pairwise within distance m by canonical
/// codes; some groups overlap so the referential filter has decisions to
/// make. Every string keeps at most 2^{m+1}-2 mates, which pins the ball
/// condition and keeps all group codes within m bits.
struct ClusteredInstance {
    DescriptionSystem system;
    std::vector<std::vector<std::size_t>> stream;  // groups, model indices
    std::size_t target_pos = 0;                    // stream position of the target
    std::int64_t m = 0;
    std::int64_t d = 0;
    std::int64_t dprime = 0;
};

inline ClusteredInstance make_clustered_instance(std::mt19937& rng, std::int64_t m,
                                                 std::int64_t d, bool ensure_target_kept) {
    if (m < 2 || m > 5 || d < 0 || d >= m)
        throw model_error("generator supports 2 <= m <= 5 and 0 <= d < m");
    const std::int64_t dprime = 2 * d + 2;
    const std::size_t min_size = std::size_t{1} << (m - d);
    const std::size_t mate_cap = (std::size_t{1} << (m + 1)) - 2;
    const std::size_t n = 40 + rng() % 25;  // 40..64 strings
    const std::size_t overlap_cap = m - dprime >= 0 ? std::size_t{1} << (m - dprime) : 0;

    std::vector<std::vector<std::size_t>> groups;
    const std::size_t ngroups = 4 + rng() % 4;
    for (std::size_t g = 0; g < ngroups; ++g) {
        std::size_t size = min_size + rng() % 3;
        std::set<std::size_t> members;
        // sometimes seed with part of an earlier group to force overlaps
        if (!groups.empty() && rng() % 2) {
            const auto& prev = groups[rng() % groups.size()];
            std::size_t take = rng() % (overlap_cap + 3);  // below or above threshold
            for (std::size_t i = 0; i < take && i < prev.size() && members.size() < size; ++i)
                members.insert(prev[i]);
        }
        while (members.size() < size)
            members.insert(rng() % n);
        groups.emplace_back(members.begin(), members.end());
    }

    std::size_t target = rng() % groups.size();
    if (ensure_target_kept) {
        // trim earlier groups down to at most 2^{m-d'} shared members with
        // the target, replacing the excess with fresh strings
        std::set<std::size_t> tset(groups[target].begin(), groups[target].end());
        for (std::size_t g = 0; g < target; ++g) {
            std::set<std::size_t> mem(groups[g].begin(), groups[g].end());
            std::size_t shared = 0;
            for (auto it = mem.begin(); it != mem.end();) {
                if (tset.count(*it) && ++shared > overlap_cap) {
                    it = mem.erase(it);
                } else {
                    ++it;
                }
            }
            std::size_t probe = rng() % n;
            while (mem.size() < groups[g].size()) {
                if (!tset.count(probe))
                    mem.insert(probe);
                probe = (probe + 1) % n;
            }
            groups[g].assign(mem.begin(), mem.end());
        }
    }

    // enforce the mate cap by deleting offending non-target groups
    auto mate_count = [&](std::size_t y) {
        std::set<std::size_t> mates;
        for (const auto& g : groups)
            if (std::find(g.begin(), g.end(), y) != g.end())
                for (std::size_t x : g)
                    mates.insert(x);
        mates.erase(y);
        return mates.size();
    };
    for (bool repaired = true; repaired;) {
        repaired = false;
        for (std::size_t y = 0; y < n && !repaired; ++y) {
            if (mate_count(y) <= mate_cap)
                continue;
            for (std::size_t g = groups.size(); g-- > 0;) {
                if (g == target)
                    continue;
                if (std::find(groups[g].begin(), groups[g].end(), y) != groups[g].end()) {
                    groups.erase(groups.begin() + g);
                    if (g < target)
                        --target;
                    repaired = true;
                    break;
                }
            }
            if (!repaired)
                throw model_error("generator could not satisfy the ball condition");
        }
    }

    // wire the system: identity programs plus one code per (mate, condition)
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i)
        ids.push_back("s" + std::to_string(i));
    std::vector<Program> progs;
    for (std::size_t y = 0; y < n; ++y) {
        progs.push_back(Program{"", ids[y], ids[y]});
        std::set<std::size_t> mates;
        for (const auto& g : groups)
            if (std::find(g.begin(), g.end(), y) != g.end())
                for (std::size_t x : g)
                    if (x != y)
                        mates.insert(x);
        std::uint64_t slot = 1;  // slot 0 is the identity
        for (std::size_t x : mates)
            progs.push_back(Program{canonical_code(slot++), ids[y], ids[x]});
        progs.push_back(Program{canonical_code(y), std::nullopt, ids[y]});
    }

    ClusteredInstance inst{DescriptionSystem(ids, progs), std::move(groups), target, m, d,
                           dprime};
    return inst;
}

/// Random small symmetric integer matrix for mining-oracle comparisons.
inline DistanceMatrix random_small_matrix(std::mt19937& rng, std::size_t max_items = 10,
                                          int max_distance = 6) {
    std::size_t n = 4 + rng() % (max_items - 3);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i)
        ids.push_back("i" + std::to_string(i));
    DistanceMatrix mat(ids, DistanceUnits::bits);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            mat.set(i, j, static_cast<double>(rng() % (max_distance + 1)));
    return mat;
}

/// Synthetic byte corpus: `families` dictionary families with `files_each`
/// documents of roughly `target_bytes` built from a family-private word
/// list. Files land under dir/famN/doc_MM.txt. Returns the family index of
/// every file in corpus id order (ids sort lexicographically).
inline std::vector<int> write_synthetic_corpus(const std::filesystem::path& dir, int families,
                                               int files_each, std::size_t target_bytes,
                                               std::uint32_t seed) {
    std::filesystem::create_directories(dir);
    std::vector<int> truth;
    for (int f = 0; f < families; ++f) {
        std::mt19937 rng(seed + static_cast<std::uint32_t>(f) * 7919);
        std::vector<std::string> dict;
        for (int w = 0; w < 48; ++w) {
            std::size_t len = 4 + rng() % 6;
            std::string word;
            for (std::size_t c = 0; c < len; ++c)
                word.push_back(static_cast<char>('a' + rng() % 26));
            dict.push_back(std::move(word));
        }
        auto famdir = dir / ("fam" + std::to_string(f));
        std::filesystem::create_directories(famdir);
        for (int doc = 0; doc < files_each; ++doc) {
            std::string body;
            int since_break = 0;
            while (body.size() < target_bytes) {
                body += dict[rng() % dict.size()];
                body.push_back(++since_break % 12 == 0 ? '\n' : ' ');
            }
            char name[32];
            std::snprintf(name, sizeof name, "doc_%02d.txt", doc);
            std::ofstream out(famdir / name, std::ios::binary);
            out.write(body.data(), static_cast<std::streamsize>(body.size()));
            truth.push_back(f);
        }
    }
    return truth;
}

}  // namespace infoclust
