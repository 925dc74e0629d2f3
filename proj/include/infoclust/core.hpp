#pragma once
// Shared value types and exact power-of-two comparisons.

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace infoclust {

// Raised when arguments violate a model contract (mixed universes,
// undeclared strings, unsupported operations).
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed files and unusable external inputs.
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

/// Description length in bits. INFINITE means no description exists; it is
/// a regular value (greater than every finite one), not an error.
class ComplexityValue {
public:
    static constexpr ComplexityValue finite(std::int64_t bits) {
        if (bits < 0)
            throw model_error("complexity cannot be negative");
        return ComplexityValue(bits);
    }
    static constexpr ComplexityValue infinite() { return ComplexityValue(kInfinite); }

    constexpr bool is_infinite() const { return bits_ == kInfinite; }
    constexpr std::int64_t bits() const {
        if (is_infinite())
            throw model_error("infinite complexity has no bit count");
        return bits_;
    }

    friend constexpr auto operator<=>(ComplexityValue a, ComplexityValue b) = default;

    std::string str() const { return is_infinite() ? "inf" : std::to_string(bits_); }

private:
    explicit constexpr ComplexityValue(std::int64_t bits) : bits_(bits) {}
    static constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();
    std::int64_t bits_;
};

// n >= 2^e, exact for negative e (any count of at least one qualifies).
constexpr bool count_at_least_pow2(std::uint64_t n, std::int64_t e) {
    if (e <= 0)
        return n >= 1;
    if (e >= 64)
        return false;
    return n >= (std::uint64_t{1} << e);
}

// n > 2^e, exact for negative e.
constexpr bool count_exceeds_pow2(std::uint64_t n, std::int64_t e) {
    if (e < 0)
        return n >= 1;
    if (e >= 64)
        return false;
    return n > (std::uint64_t{1} << e);
}

// Width in bits of a fixed-length code addressing `count` alternatives.
constexpr int code_width(std::uint64_t count) {
    int w = 0;
    while (count > (std::uint64_t{1} << w))
        ++w;
    return w;
}

}  // namespace infoclust
