#include <doctest.h>

#include <random>
#include <set>

#include "infoclust/daisy.hpp"
#include "infoclust/set_model.hpp"
#include "infoclust/table_model.hpp"

using namespace infoclust;

namespace {

// seeded random description system for sweeps
DescriptionSystem random_system(std::mt19937& rng, int max_strings = 16, int max_len = 5) {
    int n = 2 + static_cast<int>(rng() % (max_strings - 1));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i)
        ids.push_back("s" + std::to_string(i));
    std::vector<Program> progs;
    std::set<std::pair<std::string, std::string>> used;
    int pcount = n + static_cast<int>(rng() % (5 * n));
    for (int p = 0; p < pcount; ++p) {
        int len = static_cast<int>(rng() % (max_len + 1));
        std::string code;
        for (int b = 0; b < len; ++b)
            code.push_back(rng() % 2 ? '1' : '0');
        bool has_cond = rng() % 4 != 0;
        std::string cond_key = has_cond ? ids[rng() % n] : "\x01";
        if (!used.emplace(code, cond_key).second)
            continue;
        progs.push_back(Program{code, has_cond ? std::optional<std::string>(cond_key) : std::nullopt,
                                ids[rng() % n]});
    }
    return DescriptionSystem(ids, progs);
}

}  // namespace

TEST_CASE("daisy_members in the set model unwinds the definition") {
    SetModel model(Universe(5));
    std::size_t core = 0b00001;  // {0}
    auto members = daisy_members(DaisyParams{core, 2, 0}, model);
    // d = 0 forces core ⊆ x; |x \ core| <= 2
    std::vector<std::size_t> expect;
    for (std::uint64_t x = 0; x < 32; ++x)
        if ((x & core) == core && std::popcount(x & ~std::uint64_t{core}) <= 2)
            expect.push_back(x);
    CHECK(members == expect);
    CHECK(std::count(members.begin(), members.end(), core) == 1);  // core is a member
}

TEST_CASE("daisy cardinality reaches 2^m with enough free positions") {
    // |universe \ core| >= m gives at least sum_{j<=m} C(free, j) >= 2^m members
    SetModel model(Universe(6));
    for (std::int64_t m = 0; m <= 3; ++m) {
        auto members = daisy_members(DaisyParams{0b1, m, 0}, model);
        CHECK(count_at_least_pow2(members.size(), m));
    }
}

TEST_CASE("daisy_members rejects bad input") {
    SetModel model(Universe(4));
    CHECK_THROWS_AS(daisy_members(DaisyParams{999, 1, 0}, model), model_error);
    CHECK_THROWS_AS(daisy_members(DaisyParams{0, -1, 0}, model), model_error);
}

TEST_CASE("daisy diameter bound m + 2d, exhaustive over universe <= 6") {
    for (int usz = 1; usz <= 6; ++usz) {
        SetModel model{Universe(usz)};
        for (std::size_t core = 0; core < model.size(); ++core)
            for (std::int64_t d = 0; d <= 2; ++d)
                for (std::int64_t m = 0; m <= usz; ++m) {
                    auto rep = daisy_cluster_check(DaisyParams{core, m, d}, model);
                    REQUIRE(rep.pass);
                }
    }
}

TEST_CASE("daisy_cluster_check: tight cases") {
    SetModel model(Universe(6));
    // d = 0: diameter <= m exactly
    auto rep = daisy_cluster_check(DaisyParams{0b000001, 2, 0}, model);
    CHECK(rep.bound == 2);
    CHECK(rep.diameter.bits() == 2);
    CHECK(rep.pass);

    // d = 1, m = 2: bound 4
    auto rep2 = daisy_cluster_check(DaisyParams{0b000011, 2, 1}, model);
    CHECK(rep2.bound == 4);
    CHECK(rep2.pass);

    // singleton daisy: core the full universe, m = d = 0
    auto rep3 = daisy_cluster_check(DaisyParams{0b111111, 0, 0}, model);
    CHECK(rep3.member_count == 1);
    CHECK(rep3.diameter.bits() == 0);
    CHECK(rep3.pass);
}

TEST_CASE("count_paths basics") {
    SetModel model(Universe(4));
    CHECK(count_paths(1, 2, 0, 3, model) == 0);  // no codes shorter than 0
    CHECK(count_paths(1, 2, 3, 0, model) == 0);

    // every reachable y has a 1-bit route to z, so the second condition is
    // vacuous and the count equals #{y : C(y|x) < v}
    std::vector<std::string> ids{"x", "y0", "y1", "z"};
    std::vector<Program> progs{
        {"0", "x", "y0"}, {"1", "x", "y1"}, {"0", "y0", "z"}, {"0", "y1", "z"}};
    DescriptionSystem sys(ids, progs);
    TableModel tm(sys);
    std::size_t x = sys.index_of("x"), z = sys.index_of("z");
    std::uint64_t reach = 0;
    for (std::size_t y = 0; y < tm.size(); ++y) {
        auto c = tm.cond(y, x);
        if (!c.is_infinite() && c.bits() < 2)
            ++reach;
    }
    CHECK(reach == 2);
    CHECK(count_paths(x, z, 2, 2, tm) == reach);
}

TEST_CASE("count_paths agrees with a direct double loop on random tables") {
    std::mt19937 rng(1123);
    for (int trial = 0; trial < 40; ++trial) {
        auto sys = random_system(rng);
        TableModel tm(sys);
        std::size_t x = rng() % tm.size(), z = rng() % tm.size();
        std::int64_t v = rng() % 6, w = rng() % 6;
        // independent oracle
        std::uint64_t expect = 0;
        for (std::size_t y = 0; y < tm.size(); ++y) {
            auto a = tm.cond(y, x);
            auto b = tm.cond(z, y);
            bool len_a = !a.is_infinite() && a.bits() < v;
            bool len_b = !b.is_infinite() && b.bits() < w;
            if (len_a && len_b)
                ++expect;
        }
        REQUIRE(count_paths(x, z, v, w, tm) == expect);
    }
}

TEST_CASE("path lemma bound at the u = v + w edge") {
    std::mt19937 rng(4001);
    auto sys = random_system(rng);
    TableModel tm(sys);
    auto rep = path_lemma_check(0, 2, 2, 4, tm);
    CHECK(rep.target_bound == 1);
    CHECK(rep.pass);
    CHECK_THROWS_AS(path_lemma_check(0, 2, 2, 5, tm), model_error);
    CHECK_THROWS_AS(path_lemma_check(0, -1, 2, 0, tm), model_error);
}

TEST_CASE("path lemma sweep over random description systems") {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 150; ++trial) {
        auto sys = random_system(rng);
        TableModel tm(sys);
        for (std::size_t x = 0; x < tm.size(); ++x)
            for (std::int64_t v = 1; v <= 5; ++v)
                for (std::int64_t w = 1; w <= 5; ++w)
                    for (std::int64_t u = 0; u <= std::min<std::int64_t>(v + w, 6); ++u) {
                        auto rep = path_lemma_check(x, v, w, u, tm);
                        REQUIRE(rep.pass);
                    }
    }
}

TEST_CASE("merge_check in the set model") {
    Universe u(6);
    SetModel model(u);
    // two daisies with overlapping cores {0,1} and {1,2}, m = 2, d = 1
    auto sa = daisy_members(DaisyParams{0b000011, 2, 0}, model);
    auto sb = daisy_members(DaisyParams{0b000110, 2, 0}, model);
    auto mat = distance_matrix(model);

    auto rep = merge_check(sa, sb, 2, 1, mat);
    CHECK(count_at_least_pow2(rep.shared, 1));  // 2^{m-d} = 2
    CHECK(rep.bound == 3);
    CHECK(rep.pass);  // measured exhaustively: union diameter 3

    // S = S': union diameter is the diameter of S itself
    auto self = merge_check(sa, sa, 2, 0, mat);
    CHECK(self.pass);
    CHECK(self.union_diameter <= 2);
}

TEST_CASE("merge_check threshold edge raises") {
    // m = 3, d = 0 needs 2^3 = 8 shared members; hand it 7
    std::vector<std::string> ids;
    for (int i = 0; i < 17; ++i)
        ids.push_back("i" + std::to_string(i));
    DistanceMatrix mat(ids, DistanceUnits::bits);  // all-zero distances
    std::vector<std::size_t> s, sp;
    for (std::size_t i = 0; i < 12; ++i)
        s.push_back(i);
    for (std::size_t i = 5; i < 17; ++i)
        sp.push_back(i);  // intersection {5..11} = 7 members
    CHECK_THROWS_AS(merge_check(s, sp, 3, 0, mat), model_error);
    // one more shared member clears the threshold
    sp.push_back(4);
    auto rep = merge_check(s, sp, 3, 0, mat);
    CHECK(rep.shared == 8);
    CHECK(rep.pass);
}

TEST_CASE("merge_check path certificate on a table-model matrix") {
    // clusters {a,b,c,d} and {c,d,e,f} over a system where all named pairs
    // sit within distance 2; certificate counts two-step paths through {c,d}
    std::vector<std::string> ids{"a", "b", "c", "d", "e", "f"};
    std::vector<Program> progs;
    std::set<std::pair<std::string, std::string>> used;
    auto link = [&](const std::string& from, const std::string& to) {
        for (int len = 1; len <= 2; ++len) {
            for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
                std::string code;
                for (int b = 0; b < len; ++b)
                    code.push_back((bits >> b) & 1 ? '1' : '0');
                if (used.emplace(code, from).second) {
                    progs.push_back(Program{code, from, to});
                    return;
                }
            }
        }
        FAIL("out of codes");
    };
    for (const auto& x : ids)
        for (const auto& y : ids)
            link(x, y);  // first come first served; everything within 2 bits
    DescriptionSystem sys(ids, progs);
    auto mat = distance_matrix(TableModel(sys));
    std::vector<std::size_t> s{0, 1, 2, 3}, sp{2, 3, 4, 5};
    auto rep = merge_check(s, sp, 2, 1, mat, MergeMode::path_certificate);
    CHECK(rep.shared == 2);
    CHECK(rep.min_cross_paths >= 2);  // both of c,d bridge every cross pair
    CHECK(rep.pass);
}
