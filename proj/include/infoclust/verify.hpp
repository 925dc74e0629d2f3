#pragma once
// Deterministic verification suites behind the `verify` subcommand. Each
// suite measures one exact statement at desk scale and reports instance
// counts, wall time, and a counterexample payload when something fails.
// Randomized suites draw everything from the caller's seed.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoclust/claim.hpp"
#include "infoclust/cluster.hpp"
#include "infoclust/daisy.hpp"
#include "infoclust/generate.hpp"
#include "infoclust/referential.hpp"
#include "infoclust/set_model.hpp"
#include "infoclust/table_model.hpp"
#include "infoclust/triple.hpp"

namespace infoclust {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::uint64_t instances = 0;
    double wall_ms = 0.0;
    nlohmann::ordered_json counterexample;  // null when passing

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["pass"] = pass;
        j["instances"] = instances;
        j["wall_ms"] = wall_ms;
        j["counterexample"] = counterexample.is_null() ? nlohmann::ordered_json(nullptr)
                                                       : counterexample;
        return j;
    }
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<SuiteResult> suites;

    bool pass() const {
        for (const SuiteResult& s : suites)
            if (!s.pass)
                return false;
        return true;
    }
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["seed"] = seed;
        j["pass"] = pass();
        j["suites"] = nlohmann::ordered_json::array();
        for (const SuiteResult& s : suites)
            j["suites"].push_back(s.to_json());
        return j;
    }
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Chain rule defect is exactly zero on every pair of universe-5 subsets.
inline SuiteResult verify_chain_rule() {
    detail::Stopwatch timer;
    SuiteResult res{"chain", true, 0, 0, nullptr};
    Universe u(5);
    for (std::uint64_t x = 0; x < 32 && res.pass; ++x)
        for (std::uint64_t y = 0; y < 32; ++y) {
            ++res.instances;
            if (chain_rule_defect(SetString(u, x), SetString(u, y)) != 0) {
                res.pass = false;
                res.counterexample = {{"x", x}, {"y", y}};
                break;
            }
        }
    res.wall_ms = timer.ms();
    return res;
}

/// #{z : at least 2^u two-step paths from x} <= 2^{v+w-u} across seeded
/// random description systems, all x and v, w in [1,9], u up to 7. Path
/// counts never exceed the string count (< 2^7), so larger u hold vacuously.
inline SuiteResult verify_path_lemma(std::uint64_t seed, int systems = 1000) {
    detail::Stopwatch timer;
    SuiteResult res{"pathlemma", true, 0, 0, nullptr};
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    constexpr int kMaxLen = 10;  // complexities 0..8 plus one sentinel slot
    for (int s = 0; s < systems && res.pass; ++s) {
        auto sys = random_description_system(rng, 64, 8);
        TableModel model(sys);
        const std::size_t n = model.size();
        std::vector<std::array<std::array<std::uint16_t, kMaxLen>, kMaxLen>> hist(n);
        for (std::size_t x = 0; x < n && res.pass; ++x) {
            for (auto& h : hist)
                for (auto& row : h)
                    row.fill(0);
            for (std::size_t y = 0; y < n; ++y) {
                ComplexityValue cyx = model.cond(y, x);
                if (cyx.is_infinite() || cyx.bits() >= kMaxLen - 1)
                    continue;
                auto a = static_cast<std::size_t>(cyx.bits());
                for (std::size_t z = 0; z < n; ++z) {
                    ComplexityValue czy = model.cond(z, y);
                    if (czy.is_infinite() || czy.bits() >= kMaxLen - 1)
                        continue;
                    ++hist[z][a][static_cast<std::size_t>(czy.bits())];
                }
            }
            // prefix sums: paths with C(y|x) < v and C(z|y) < w
            for (std::size_t z = 0; z < n; ++z)
                for (int a = 0; a < kMaxLen; ++a)
                    for (int b = 0; b < kMaxLen; ++b) {
                        std::uint32_t v = hist[z][a][b];
                        if (a > 0)
                            v += hist[z][a - 1][b];
                        if (b > 0)
                            v += hist[z][a][b - 1];
                        if (a > 0 && b > 0)
                            v -= hist[z][a - 1][b - 1];
                        hist[z][a][b] = static_cast<std::uint16_t>(v);
                    }
            for (std::int64_t v = 1; v <= 9 && res.pass; ++v)
                for (std::int64_t w = 1; w <= 9 && res.pass; ++w) {
                    std::array<std::uint32_t, 8> targets{};
                    for (std::size_t z = 0; z < n; ++z) {
                        std::uint32_t paths = hist[z][v - 1][w - 1];
                        for (std::int64_t uu = 0; uu < 8; ++uu)
                            if (count_at_least_pow2(paths, uu))
                                ++targets[uu];
                    }
                    for (std::int64_t uu = 0; uu <= std::min<std::int64_t>(v + w, 7); ++uu) {
                        ++res.instances;
                        std::uint64_t bound = std::uint64_t{1} << (v + w - uu);
                        if (targets[uu] > bound) {
                            res.pass = false;
                            res.counterexample = {{"system", s}, {"x", x},   {"v", v},
                                                  {"w", w},      {"u", uu},  {"targets", targets[uu]},
                                                  {"bound", bound}};
                            break;
                        }
                    }
                }
        }
    }
    res.wall_ms = timer.ms();
    return res;
}

/// Exhaustive counterexample search for the event-count bound, plus the
/// disjoint tightness configuration reaching exactly 1/eps events.
inline SuiteResult verify_claim(int max_points = 10, int max_events = 6) {
    detail::Stopwatch timer;
    SuiteResult res{"claim", true, 0, 0, nullptr};
    auto search = search_claim_counterexamples(max_points, static_cast<std::size_t>(max_events),
                                               {1, 2, 3, 4});
    res.instances = search.families_checked;
    if (search.counterexample_found) {
        res.pass = false;
        res.counterexample = {{"points", search.counterexample.points},
                              {"events", search.counterexample.events},
                              {"k", search.counterexample_k}};
    }
    for (std::int64_t k : {1, 2, 3, 4}) {
        ++res.instances;
        auto tight = claim_check(disjoint_tightness_system(k), k);
        bool expected = !tight.hypotheses_hold && tight.bad_i == -1 &&
                        tight.event_count == static_cast<std::size_t>(k) &&
                        tight.union_lower_bound == Rational(1);
        if (!expected) {
            res.pass = false;
            res.counterexample = {{"tightness_k", k}};
        }
    }
    res.wall_ms = timer.ms();
    return res;
}

/// Max multiplicity of kept clusters stays within 2^{d+1} over seeded
/// filter runs with d' = 2d+2.
inline SuiteResult verify_multiplicity(std::uint64_t seed, int runs = 500) {
    detail::Stopwatch timer;
    SuiteResult res{"multiplicity", true, 0, 0, nullptr};
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    for (int r = 0; r < runs && res.pass; ++r) {
        std::int64_t d = r % 3;
        std::int64_t m = d + 2 + static_cast<std::int64_t>(rng() % 2);
        auto inst = make_clustered_instance(rng, m, d, false);
        TableModel model(inst.system);
        auto mat = distance_matrix(model);
        auto reg = referential_filter(inst.stream, inst.m, inst.d, inst.dprime, mat);
        if (!registry_invariant_holds(reg)) {
            res.pass = false;
            res.counterexample = {{"run", r}, {"failure", "registry invariant"}};
            break;
        }
        auto rep = multiplicity_check(reg, model);
        ++res.instances;
        if (!rep.pass) {
            res.pass = false;
            res.counterexample = {{"run", r},
                                  {"d", d},
                                  {"m", m},
                                  {"max_multiplicity", rep.max_multiplicity},
                                  {"bound", rep.bound},
                                  {"item", model.label(rep.worst_item)}};
        }
    }
    res.wall_ms = timer.ms();
    return res;
}

/// Certification round trip: every member of the target decodes back from
/// (ordinal, rank) and (member, covering_rank), within the member-route
/// width budgets m+1 and d+1.
inline SuiteResult verify_certify(std::uint64_t seed, int runs = 200) {
    detail::Stopwatch timer;
    SuiteResult res{"certify", true, 0, 0, nullptr};
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    for (int r = 0; r < runs && res.pass; ++r) {
        std::int64_t d = r % 3;
        std::int64_t m = d + 2 + static_cast<std::int64_t>(rng() % 2);
        auto inst = make_clustered_instance(rng, m, d, true);
        auto mat = distance_matrix(TableModel(inst.system));
        auto reg = referential_filter(inst.stream, inst.m, inst.d, inst.dprime, mat);
        auto target = detail::canonical_members(inst.stream[inst.target_pos], mat.size());

        auto fail = [&](const char* what, const nlohmann::ordered_json& extra) {
            res.pass = false;
            res.counterexample = {{"run", r}, {"failure", what}};
            for (auto it = extra.begin(); it != extra.end(); ++it)
                res.counterexample[it.key()] = it.value();
        };
        try {
            auto cert = certify_core(target, reg, mat);
            std::set<std::size_t> decoded;
            for (const auto& rec : cert.records) {
                if (rec.route != CodeRoute::member) {
                    fail("expected member route", {{"item", rec.item}});
                    break;
                }
                if (rec.rank_bits > m + 1 || rec.covering_bits > d + 1) {
                    fail("width budget exceeded",
                         {{"rank_bits", rec.rank_bits}, {"covering_bits", rec.covering_bits}});
                    break;
                }
                if (decode_rank(reg, mat, cert.ordinal, rec.rank, rec.route) != rec.item ||
                    decode_covering(reg, mat, rec.item, rec.covering_rank, rec.route) !=
                        cert.ordinal) {
                    fail("decode mismatch", {{"item", rec.item}});
                    break;
                }
                decoded.insert(rec.item);
            }
            if (res.pass && decoded != std::set<std::size_t>(target.begin(), target.end()))
                fail("decoded set differs from the target", {});
        } catch (const model_error& e) {
            fail("exception", {{"what", e.what()}});
        }
        ++res.instances;
    }
    res.wall_ms = timer.ms();
    return res;
}

/// Non-Shannon slack is nonnegative over all universe-4 five-tuples.
inline SuiteResult verify_nonshannon() {
    detail::Stopwatch timer;
    SuiteResult res{"nonshannon", true, 0, 0, nullptr};
    Universe u(4);
    for (std::uint64_t x = 0; x < 16 && res.pass; ++x)
        for (std::uint64_t y = 0; y < 16 && res.pass; ++y)
            for (std::uint64_t z = 0; z < 16 && res.pass; ++z)
                for (std::uint64_t z1 = 0; z1 < 16 && res.pass; ++z1)
                    for (std::uint64_t z2 = 0; z2 < 16; ++z2) {
                        ++res.instances;
                        std::int64_t slack =
                            nonshannon_slack(SetString(u, x), SetString(u, y), SetString(u, z),
                                             SetString(u, z1), SetString(u, z2));
                        if (slack < 0) {
                            res.pass = false;
                            res.counterexample = {{"x", x}, {"y", y},  {"z", z},
                                                  {"z1", z1}, {"z2", z2}, {"slack", slack}};
                            break;
                        }
                    }
    res.wall_ms = timer.ms();
    return res;
}

/// The triple core w = x∩y∩z has C(w) = I(x:y:z) and zero residuals on all
/// universe-5 triples.
inline SuiteResult verify_triple_core() {
    detail::Stopwatch timer;
    SuiteResult res{"triplecore", true, 0, 0, nullptr};
    Universe u(5);
    for (std::uint64_t x = 0; x < 32 && res.pass; ++x)
        for (std::uint64_t y = 0; y < 32 && res.pass; ++y)
            for (std::uint64_t z = 0; z < 32; ++z) {
                ++res.instances;
                auto rep = extract_triple_core(SetString(u, x), SetString(u, y), SetString(u, z));
                bool ok = set_complexity(*rep.core).bits() == rep.triple_info &&
                          rep.residuals[0] == 0 && rep.residuals[1] == 0 && rep.residuals[2] == 0;
                if (!ok) {
                    res.pass = false;
                    res.counterexample = {{"x", x}, {"y", y}, {"z", z}};
                    break;
                }
            }
    res.wall_ms = timer.ms();
    return res;
}

/// Daisy diameter <= m + 2d, exhaustively over universes up to 6.
inline SuiteResult verify_daisy() {
    detail::Stopwatch timer;
    SuiteResult res{"daisy", true, 0, 0, nullptr};
    for (int usz = 1; usz <= 6 && res.pass; ++usz) {
        SetModel model{Universe(usz)};
        for (std::size_t core = 0; core < model.size() && res.pass; ++core)
            for (std::int64_t d = 0; d <= 2 && res.pass; ++d)
                for (std::int64_t m = 0; m <= usz; ++m) {
                    ++res.instances;
                    auto rep = daisy_cluster_check(DaisyParams{core, m, d}, model);
                    if (!rep.pass) {
                        res.pass = false;
                        res.counterexample = {{"universe", usz},
                                              {"core", core},
                                              {"m", m},
                                              {"d", d},
                                              {"diameter", rep.diameter.bits()},
                                              {"bound", rep.bound}};
                        break;
                    }
                }
    }
    res.wall_ms = timer.ms();
    return res;
}

/// Registry dump invariant: pairwise kept intersections within 2^{m-d'}.
inline SuiteResult verify_registry_dump(const std::string& path) {
    detail::Stopwatch timer;
    SuiteResult res{"registry", true, 0, 0, nullptr};
    auto dump = load_registry_json(path);
    res.instances = dump.kept.size();
    auto check = check_registry_dump(dump);
    if (!check.ok) {
        res.pass = false;
        res.counterexample = {{"ordinal_i", check.bad_i},
                              {"ordinal_j", check.bad_j},
                              {"intersection", check.intersection}};
    }
    res.wall_ms = timer.ms();
    return res;
}

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::vector<std::string> suites;  // empty = all core suites
    int claim_points = 10;
    int claim_events = 6;
    int pathlemma_systems = 1000;
    int multiplicity_runs = 500;
    int certify_runs = 200;
    std::string registry_path;  // adds the registry suite when set
};

inline VerifyReport run_verify_suite(const VerifyOptions& opt) {
    auto wants = [&](const std::string& name) {
        if (!opt.suites.empty())
            return std::find(opt.suites.begin(), opt.suites.end(), name) != opt.suites.end();
        return true;
    };
    VerifyReport report;
    report.seed = opt.seed;
    if (wants("chain"))
        report.suites.push_back(verify_chain_rule());
    if (wants("pathlemma"))
        report.suites.push_back(verify_path_lemma(opt.seed, opt.pathlemma_systems));
    if (wants("claim"))
        report.suites.push_back(verify_claim(opt.claim_points, opt.claim_events));
    if (wants("multiplicity"))
        report.suites.push_back(verify_multiplicity(opt.seed, opt.multiplicity_runs));
    if (wants("certify"))
        report.suites.push_back(verify_certify(opt.seed, opt.certify_runs));
    if (wants("nonshannon"))
        report.suites.push_back(verify_nonshannon());
    if (wants("triplecore"))
        report.suites.push_back(verify_triple_core());
    if (wants("daisy"))
        report.suites.push_back(verify_daisy());
    if (!opt.registry_path.empty() && (opt.suites.empty() || wants("registry")))
        report.suites.push_back(verify_registry_dump(opt.registry_path));
    return report;
}

}  // namespace infoclust
