#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rtslice {

/// All times are integer microseconds.
using micros_t = std::int64_t;

/// Exact rational, used for utilizations and slice capacities so that
/// admission decisions at the U == capacity boundary are not at the mercy of
/// floating-point summation order.
class Ratio {
  public:
    constexpr Ratio() = default;
    Ratio(std::int64_t num, std::int64_t den);

    static Ratio of(std::int64_t whole) { return Ratio(whole, 1); }

    /// Parses "1", "0.5", "0.923", or "n/d". Exact; throws ParseError-free
    /// std::invalid_argument on malformed input.
    static Ratio from_decimal(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Ratio& operator+=(const Ratio& other);
    friend Ratio operator+(Ratio a, const Ratio& b) { return a += b; }

    std::strong_ordering operator<=>(const Ratio& other) const;
    bool operator==(const Ratio& other) const = default;

    /// "0.5" when the denominator divides a power of ten, else "n/d".
    std::string to_string() const;

  private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace rtslice
