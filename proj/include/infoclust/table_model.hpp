#pragma once
// Description systems: a finite table of (code, condition, output) programs
// standing in for a machine. The conditional description length of a string
// is the length of the shortest code that produces it under the matching
// condition, or INFINITE when no program does. Joint complexity does not
// exist here: the table model declares no encoding of tuples.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "infoclust/core.hpp"

namespace infoclust {

struct Program {
    std::string code;                  // finite binary word, possibly empty
    std::optional<std::string> cond;   // condition string id, or none
    std::string out;                   // output string id
};

class DescriptionSystem {
public:
    DescriptionSystem(std::vector<std::string> strings, std::vector<Program> programs)
        : strings_(std::move(strings)), programs_(std::move(programs)) {
        for (std::size_t i = 0; i < strings_.size(); ++i) {
            auto [it, fresh] = index_.emplace(strings_[i], i);
            if (!fresh)
                throw format_error("duplicate string id: " + strings_[i]);
        }
        std::map<std::pair<std::string, std::string>, bool> seen;
        for (const Program& p : programs_) {
            for (char c : p.code)
                if (c != '0' && c != '1')
                    throw format_error("program code must be a binary word");
            if (p.cond && !index_.contains(*p.cond))
                throw format_error("program condition not declared: " + *p.cond);
            if (!index_.contains(p.out))
                throw format_error("program output not declared: " + p.out);
            auto key = std::make_pair(p.code, p.cond.value_or("\x01<none>"));
            if (!seen.emplace(key, true).second)
                throw format_error("duplicate (code, condition) pair: \"" + p.code + "\"");
        }
        build_tables();
    }

    std::size_t string_count() const { return strings_.size(); }
    const std::vector<std::string>& strings() const { return strings_; }
    const std::vector<Program>& programs() const { return programs_; }

    std::size_t index_of(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end())
            throw model_error("string not declared in system: " + std::string(id));
        return it->second;
    }

    /// Shortest code length producing `out`, unconditionally.
    ComplexityValue plain(std::size_t out) const { return plain_.at(out); }
    /// Shortest code length producing `out` from condition `given`.
    ComplexityValue cond(std::size_t out, std::size_t given) const {
        return cond_.at(given).at(out);
    }

    // --- JSON file format -------------------------------------------------
    // {"strings": [ids...],
    //  "programs": [{"code": "0101", "cond": id|null, "out": id}, ...]}

    static DescriptionSystem from_json(const nlohmann::json& j) {
        std::vector<std::string> strings;
        std::vector<Program> programs;
        if (!j.contains("strings") || !j["strings"].is_array())
            throw format_error("description system: missing \"strings\" array");
        for (const auto& s : j["strings"])
            strings.push_back(s.get<std::string>());
        for (const auto& p : j.value("programs", nlohmann::json::array())) {
            Program prog;
            prog.code = p.at("code").get<std::string>();
            if (p.contains("cond") && !p["cond"].is_null())
                prog.cond = p["cond"].get<std::string>();
            prog.out = p.at("out").get<std::string>();
            programs.push_back(std::move(prog));
        }
        return DescriptionSystem(std::move(strings), std::move(programs));
    }

    static DescriptionSystem load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw format_error("cannot open description system file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw format_error("bad description system JSON: " + std::string(e.what()));
        }
        return from_json(j);
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["strings"] = strings_;
        j["programs"] = nlohmann::ordered_json::array();
        for (const Program& p : programs_) {
            nlohmann::ordered_json e;
            e["code"] = p.code;
            e["cond"] = p.cond ? nlohmann::ordered_json(*p.cond) : nlohmann::ordered_json(nullptr);
            e["out"] = p.out;
            j["programs"].push_back(std::move(e));
        }
        return j;
    }

private:
    void build_tables() {
        const std::size_t n = strings_.size();
        plain_.assign(n, ComplexityValue::infinite());
        cond_.assign(n, std::vector<ComplexityValue>(n, ComplexityValue::infinite()));
        for (const Program& p : programs_) {
            auto len = ComplexityValue::finite(static_cast<std::int64_t>(p.code.size()));
            std::size_t out = index_.at(p.out);
            if (p.cond) {
                ComplexityValue& slot = cond_[index_.at(*p.cond)][out];
                slot = std::min(slot, len);
            } else {
                plain_[out] = std::min(plain_[out], len);
            }
        }
    }

    std::vector<std::string> strings_;
    std::vector<Program> programs_;
    std::map<std::string, std::size_t> index_;
    std::vector<ComplexityValue> plain_;
    std::vector<std::vector<ComplexityValue>> cond_;
};

/// min |code| over programs with matching (condition, output = x).
inline ComplexityValue table_complexity(const DescriptionSystem& sys, std::string_view x,
                                        std::optional<std::string_view> condition = std::nullopt) {
    std::size_t out = sys.index_of(x);
    if (!condition)
        return sys.plain(out);
    return sys.cond(out, sys.index_of(*condition));
}

/// Indexed-model view of a description system, interchangeable with SetModel
/// wherever only size/plain/cond/dist/label are needed.
class TableModel {
public:
    explicit TableModel(const DescriptionSystem& sys) : sys_(&sys) {}

    std::size_t size() const { return sys_->string_count(); }
    ComplexityValue plain(std::size_t item) const { return sys_->plain(item); }
    ComplexityValue cond(std::size_t item, std::size_t given) const {
        return sys_->cond(item, given);
    }
    ComplexityValue dist(std::size_t a, std::size_t b) const {
        return std::max(cond(a, b), cond(b, a));
    }
    std::string label(std::size_t item) const { return sys_->strings()[item]; }

    const DescriptionSystem& system() const { return *sys_; }

private:
    const DescriptionSystem* sys_;
};

}  // namespace infoclust
