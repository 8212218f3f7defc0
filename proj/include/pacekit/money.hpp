#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace pacekit {

// Fixed-point currency amount stored as integer micro-units so that ledger
// identities hold exactly.
class Money {
 public:
  static constexpr std::int64_t kMicrosPerUnit = 1'000'000;

  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }

  // Rounds to the nearest micro-unit.
  static Money from_units(double units) {
    return Money(static_cast<std::int64_t>(std::llround(units * kMicrosPerUnit)));
  }

  static constexpr Money zero() { return Money(); }

  [[nodiscard]] constexpr std::int64_t micros() const { return micros_; }
  [[nodiscard]] constexpr double units() const {
    return static_cast<double>(micros_) / static_cast<double>(kMicrosPerUnit);
  }
  [[nodiscard]] constexpr bool is_negative() const { return micros_ < 0; }

  constexpr Money& operator+=(Money other) {
    micros_ += other.micros_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    micros_ -= other.micros_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return Money(a.micros_ + b.micros_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.micros_ - b.micros_); }
  friend constexpr auto operator<=>(Money, Money) = default;

  // Ratio of two amounts; the denominator must be non-zero.
  friend constexpr double operator/(Money a, Money b) {
    return static_cast<double>(a.micros_) / static_cast<double>(b.micros_);
  }

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}

  std::int64_t micros_ = 0;
};

inline std::string to_string(Money m) { return std::to_string(m.micros()) + "u"; }

}  // namespace pacekit
