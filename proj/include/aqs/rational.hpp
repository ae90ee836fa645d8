#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace aqs {

// Exact rational arithmetic on int64, enough for penalty-function expansion
// where every coefficient is a small multiple of 1/8. Overflow throws.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(runtime/explicit)
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    reduce();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(checked(checked_mul(a.num_, b.den_),
                            checked_mul(b.num_, a.den_), /*add=*/true),
                    checked_mul(a.den_, b.den_));
  }
  friend Rational operator-(Rational a, Rational b) {
    return a + Rational(-b.num_, b.den_);
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
  }
  Rational& operator+=(Rational o) { return *this = *this + o; }
  Rational& operator-=(Rational o) { return *this = *this - o; }
  Rational& operator*=(Rational o) { return *this = *this * o; }
  friend bool operator==(Rational a, Rational b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
      throw std::overflow_error("rational multiply overflow");
    }
    return r;
  }
  static std::int64_t checked(std::int64_t a, std::int64_t b, bool add) {
    std::int64_t r;
    bool bad = add ? __builtin_add_overflow(a, b, &r)
                   : __builtin_sub_overflow(a, b, &r);
    if (bad) throw std::overflow_error("rational add overflow");
    return r;
  }
  void reduce() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace aqs
