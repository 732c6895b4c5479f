#pragma once

#include <Eigen/Core>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nlm/bigint.hpp"

namespace nlm {

/// Exact rational number. Always stored in lowest terms with a positive
/// denominator; equality is value equality. This is the universal scalar for
/// all polytope-side computations.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT
    Rational(int n) : num_(n), den_(1) {}        // NOLINT
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    /// Parses "p", "-p" or "p/q".
    static Rational from_string(std::string_view s) {
        size_t slash = s.find('/');
        if (slash == std::string_view::npos) return {BigInt::from_string(s), BigInt(1)};
        return {BigInt::from_string(s.substr(0, slash)),
                BigInt::from_string(s.substr(slash + 1))};
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }

    double to_double() const { return num_.to_double() / den_.to_double(); }

    friend Rational operator-(const Rational& a) { return raw(-a.num_, a.den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return {a.num_ - b.num_, a.den_};
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_.is_zero()) throw std::domain_error("Rational: division by zero");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// "p" when integral, "p/q" otherwise.
    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    /// Always "p/q", the fixed-layout form used by point CSV files and keys.
    std::string to_fraction_string() const {
        return num_.to_string() + "/" + den_.to_string();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& v) {
        return os << v.to_string();
    }

    friend Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

private:
    BigInt num_, den_;

    // bypasses normalization for values already in lowest terms
    static Rational raw(BigInt n, BigInt d) {
        Rational r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        if (!den_.is_one()) {
            BigInt g = BigInt::gcd(num_, den_);
            if (!g.is_one()) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
        }
    }
};

template <typename S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static double to_real(const Rational& v) { return v.to_double(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double to_real(double v) { return v; }
};

/// Conversion used when evaluating exact coefficient tables on real points.
template <typename S>
S scalar_cast(const Rational& v) {
    if constexpr (scalar_traits<S>::is_exact)
        return v;
    else
        return v.to_double();
}

}  // namespace nlm

namespace Eigen {

template <>
struct NumTraits<nlm::Rational> : GenericNumTraits<nlm::Rational> {
    typedef nlm::Rational Real;
    typedef nlm::Rational NonInteger;
    typedef nlm::Rational Nested;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 60,
        MulCost = 60,
    };
    static inline Real epsilon() { return nlm::Rational(0); }
    static inline Real dummy_precision() { return nlm::Rational(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
