#pragma once
// The set (Venn) model: strings are subsets of a small labeled universe and
// every description length is a cardinality. Complexity of a tuple is the
// size of the union, conditioning removes the condition's positions, and
// mutual information is literal intersection. Everything is exact, so
// identities that hold only up to additive terms for real machines hold here
// with zero defect.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoclust/core.hpp"

namespace infoclust {

/// A labeled finite universe of bit positions. Capped at 64 so a SetString
/// always fits one machine word.
class Universe {
public:
    explicit constexpr Universe(int size) : size_(size) {
        if (size < 1 || size > 64)
            throw model_error("universe size must be in 1..64");
    }

    constexpr int size() const { return size_; }
    constexpr std::uint64_t full_mask() const {
        return size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size_) - 1;
    }
    constexpr std::uint64_t subset_count() const {
        return size_ == 64 ? 0 : std::uint64_t{1} << size_;  // 0 flags overflow
    }

    friend constexpr bool operator==(Universe a, Universe b) = default;

private:
    int size_;
};

/// A subset of universe positions with bit-vector semantics.
class SetString {
public:
    constexpr SetString(Universe u, std::uint64_t mask) : universe_(u), mask_(mask) {
        if (mask & ~u.full_mask())
            throw model_error("set string has members outside its universe");
    }

    static SetString of(Universe u, std::initializer_list<int> positions) {
        std::uint64_t m = 0;
        for (int p : positions) {
            if (p < 0 || p >= u.size())
                throw model_error("position outside universe");
            m |= std::uint64_t{1} << p;
        }
        return SetString(u, m);
    }

    static constexpr SetString empty(Universe u) { return SetString(u, 0); }

    constexpr Universe universe() const { return universe_; }
    constexpr std::uint64_t mask() const { return mask_; }
    constexpr int size() const { return std::popcount(mask_); }

    std::vector<int> members() const {
        std::vector<int> out;
        for (int p = 0; p < universe_.size(); ++p)
            if (mask_ & (std::uint64_t{1} << p))
                out.push_back(p);
        return out;
    }

    friend constexpr bool operator==(const SetString&, const SetString&) = default;

private:
    Universe universe_;
    std::uint64_t mask_;
};

namespace detail {

inline Universe common_universe(std::span<const SetString> items) {
    if (items.empty())
        throw model_error("at least one set string required");
    Universe u = items[0].universe();
    for (const SetString& s : items)
        if (s.universe() != u)
            throw model_error("universe mismatch between arguments");
    return u;
}

inline std::uint64_t union_mask(std::span<const SetString> items) {
    std::uint64_t m = 0;
    for (const SetString& s : items)
        m |= s.mask();
    return m;
}

}  // namespace detail

/// C(x1,...,xk) = |x1 ∪ ... ∪ xk|.
inline ComplexityValue set_complexity(std::span<const SetString> items) {
    detail::common_universe(items);
    return ComplexityValue::finite(std::popcount(detail::union_mask(items)));
}

/// C(x1,...,xk | z) = |(x1 ∪ ... ∪ xk) \ z|.
inline ComplexityValue set_complexity_given(std::span<const SetString> items, const SetString& condition) {
    Universe u = detail::common_universe(items);
    if (condition.universe() != u)
        throw model_error("universe mismatch between arguments");
    return ComplexityValue::finite(std::popcount(detail::union_mask(items) & ~condition.mask()));
}

inline ComplexityValue set_complexity(std::initializer_list<SetString> items) {
    return set_complexity(std::span<const SetString>(items.begin(), items.size()));
}
inline ComplexityValue set_complexity_given(std::initializer_list<SetString> items, const SetString& condition) {
    return set_complexity_given(std::span<const SetString>(items.begin(), items.size()), condition);
}
inline ComplexityValue set_complexity(const SetString& x) { return set_complexity({x}); }
inline ComplexityValue set_complexity_given(const SetString& x, const SetString& condition) {
    return set_complexity_given({x}, condition);
}

/// I(x:y) = C(y) - C(y|x), which in this model is exactly |x ∩ y|.
inline std::int64_t set_information(const SetString& x, const SetString& y) {
    if (x.universe() != y.universe())
        throw model_error("universe mismatch between arguments");
    return std::popcount(x.mask() & y.mask());
}

/// I(x:y|z) = C(y|z) - C(y|x,z), exactly |(x ∩ y) \ z|.
inline std::int64_t set_information_given(const SetString& x, const SetString& y, const SetString& z) {
    if (x.universe() != y.universe() || x.universe() != z.universe())
        throw model_error("universe mismatch between arguments");
    return std::popcount(x.mask() & y.mask() & ~z.mask());
}

/// C(x,y) - C(x) - C(y|x). Zero for every pair: |x∪y| = |x| + |y\x|.
inline std::int64_t chain_rule_defect(const SetString& x, const SetString& y) {
    return set_complexity({x, y}).bits() - set_complexity(x).bits() -
           set_complexity_given(y, x).bits();
}

/// The set model as an indexed family: item i is the subset of the universe
/// whose mask equals i. Provides the generic conditional-complexity surface
/// shared with description systems.
class SetModel {
public:
    explicit SetModel(Universe u) : universe_(u) {
        if (u.size() > 20)
            throw model_error("set model enumeration capped at universe 20");
    }

    Universe universe() const { return universe_; }
    std::size_t size() const { return std::size_t{1} << universe_.size(); }

    ComplexityValue plain(std::size_t item) const {
        return ComplexityValue::finite(std::popcount(static_cast<std::uint64_t>(item)));
    }
    // C(item | given) = |item \ given|
    ComplexityValue cond(std::size_t item, std::size_t given) const {
        return ComplexityValue::finite(
            std::popcount(static_cast<std::uint64_t>(item) & ~static_cast<std::uint64_t>(given)));
    }
    ComplexityValue dist(std::size_t a, std::size_t b) const {
        return std::max(cond(a, b), cond(b, a));
    }

    std::string label(std::size_t item) const { return std::to_string(item); }

    SetString item(std::size_t i) const { return SetString(universe_, i); }
    std::size_t index_of(const SetString& s) const {
        if (s.universe() != universe_)
            throw model_error("universe mismatch between arguments");
        return static_cast<std::size_t>(s.mask());
    }

private:
    Universe universe_;
};

}  // namespace infoclust
