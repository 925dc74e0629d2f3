#pragma once
// Minimal exact rational arithmetic. Desk-scale numerators and denominators
// only; every operation asserts against int64 overflow via 128-bit products.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace infoclust {

class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    constexpr Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0)
            throw std::invalid_argument("rational with zero denominator");
        normalize();
    }

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }

    friend constexpr Rational operator+(Rational a, Rational b) {
        return Rational(checked(static_cast<__int128>(a.num_) * b.den_ +
                                static_cast<__int128>(b.num_) * a.den_),
                        checked(static_cast<__int128>(a.den_) * b.den_));
    }
    friend constexpr Rational operator-(Rational a, Rational b) { return a + Rational(-b.num_, b.den_); }
    friend constexpr Rational operator*(Rational a, Rational b) {
        return Rational(checked(static_cast<__int128>(a.num_) * b.num_),
                        checked(static_cast<__int128>(a.den_) * b.den_));
    }
    friend constexpr Rational operator/(Rational a, Rational b) {
        if (b.num_ == 0)
            throw std::invalid_argument("rational division by zero");
        return Rational(checked(static_cast<__int128>(a.num_) * b.den_),
                        checked(static_cast<__int128>(a.den_) * b.num_));
    }

    friend constexpr bool operator==(Rational a, Rational b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr bool operator<(Rational a, Rational b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend constexpr bool operator>(Rational a, Rational b) { return b < a; }
    friend constexpr bool operator<=(Rational a, Rational b) { return !(b < a); }
    friend constexpr bool operator>=(Rational a, Rational b) { return !(a < b); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    constexpr void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    static constexpr std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("rational overflow");
        return static_cast<std::int64_t>(v);
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace infoclust
