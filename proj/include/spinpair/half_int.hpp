#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace spinpair {

/// Exact half-integer quantum number, stored as twice its value.
/// Used both for spin magnitudes j (twice >= 0) and projections m.
class HalfInt {
  public:
    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int twice_value) : twice_(twice_value) {}

    static constexpr HalfInt from_twice(int t) { return HalfInt(t); }
    static constexpr HalfInt from_int(int n) { return HalfInt(2 * n); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return twice_ / 2.0; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }

    constexpr bool valid_magnitude() const { return twice_ >= 0; }
    /// m is an allowed projection for magnitude j: |m| <= j and j-m integral.
    constexpr bool valid_projection_for(HalfInt j) const {
        return std::abs(twice_) <= j.twice_ && (j.twice_ - twice_) % 2 == 0;
    }

    constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
    constexpr HalfInt operator-() const { return HalfInt(-twice_); }
    constexpr auto operator<=>(const HalfInt&) const = default;

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

  private:
    int twice_ = 0;
};

/// Parse "3", "-1", "1/2", "-3/2", "0.5", "1.5" into a HalfInt.
inline std::optional<HalfInt> parse_half_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            if (s.substr(slash + 1) != "2") return std::nullopt;
            size_t used = 0;
            int num = std::stoi(s.substr(0, slash), &used);
            if (used != slash) return std::nullopt;
            return HalfInt(num);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) return std::nullopt;
            double tv = 2.0 * v;
            if (std::abs(tv - std::round(tv)) > 1e-9) return std::nullopt;
            return HalfInt(static_cast<int>(std::llround(tv)));
        }
        size_t used = 0;
        int n = std::stoi(s, &used);
        if (used != s.size()) return std::nullopt;
        return HalfInt(2 * n);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

namespace detail {

/// Factorial table. Entries through 22! are exactly representable doubles
/// (built from exact integer arithmetic); beyond that they are correctly
/// accumulated products, good to a few ulp, which is ample for the spins
/// this library handles (blocks up to 2j = 20 are exact).
inline const double* factorial_table() {
    static const auto table = [] {
        static double f[171];
        unsigned long long exact = 1;
        f[0] = 1.0;
        for (int n = 1; n <= 20; ++n) {
            exact *= static_cast<unsigned long long>(n);
            f[n] = static_cast<double>(exact);
        }
        for (int n = 21; n <= 170; ++n) f[n] = f[n - 1] * n;
        return +f;
    }();
    return table;
}

inline double factorial(int n) {
    if (n < 0 || n > 170) throw std::domain_error("factorial: argument out of range");
    return factorial_table()[n];
}

/// Factorial of a HalfInt sum that must be a non-negative integer.
inline double factorial_of(HalfInt h) {
    if (h.twice() < 0 || h.twice() % 2 != 0)
        throw std::domain_error("factorial: non-integer or negative half-integer argument");
    return factorial(h.twice() / 2);
}

}  // namespace detail

}  // namespace spinpair
