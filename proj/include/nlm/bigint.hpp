#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nlm {

/// Arbitrary-precision signed integer, sign-magnitude over base 2^32 limbs.
/// Magnitude is little-endian with no leading zero limbs; sign() is 0 iff the
/// value is zero. Division truncates toward zero (remainder carries the sign
/// of the dividend), matching built-in integer semantics.
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) {  // NOLINT: implicit by design, mirrors built-in ints
        if (v == 0) return;
        sign_ = v < 0 ? -1 : 1;
        // avoid overflow on LLONG_MIN
        unsigned long long mag = v < 0 ? ~static_cast<unsigned long long>(v) + 1ULL
                                       : static_cast<unsigned long long>(v);
        mag_.push_back(static_cast<uint32_t>(mag & 0xffffffffULL));
        if (mag >> 32) mag_.push_back(static_cast<uint32_t>(mag >> 32));
    }

    BigInt(int v) : BigInt(static_cast<long long>(v)) {}  // NOLINT

    static BigInt from_string(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty string");
        bool neg = false;
        size_t pos = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            pos = 1;
        }
        if (pos == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r;
        const BigInt chunk_base(1000000000LL);
        while (pos < s.size()) {
            size_t take = std::min<size_t>(9, s.size() - pos);
            uint32_t chunk = 0;
            uint32_t power = 1;
            for (size_t k = 0; k < take; ++k) {
                char c = s[pos + k];
                if (c < '0' || c > '9') throw std::invalid_argument("BigInt: bad digit");
                chunk = chunk * 10 + static_cast<uint32_t>(c - '0');
            }
            for (size_t k = 0; k < take; ++k) power *= 10;
            r = r * BigInt(static_cast<long long>(power)) + BigInt(static_cast<long long>(chunk));
            pos += take;
        }
        if (neg) r.sign_ = -r.sign_;
        return r;
    }

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }
    bool is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

    bool fits_int64() const {
        if (mag_.size() > 2) return false;
        unsigned long long m = mag_u64();
        return sign_ >= 0 ? m <= 0x7fffffffffffffffULL : m <= 0x8000000000000000ULL;
    }

    long long to_int64() const {
        if (!fits_int64()) throw std::overflow_error("BigInt: does not fit int64");
        unsigned long long m = mag_u64();
        return sign_ < 0 ? -static_cast<long long>(m - 1) - 1 : static_cast<long long>(m);
    }

    double to_double() const {
        double d = 0.0;
        for (size_t i = mag_.size(); i-- > 0;) d = d * 4294967296.0 + static_cast<double>(mag_[i]);
        return sign_ < 0 ? -d : d;
    }

    friend BigInt operator-(const BigInt& a) {
        BigInt r = a;
        r.sign_ = -r.sign_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.mag_ = add_mag(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            int c = cmp_mag(a.mag_, b.mag_);
            if (c == 0) return BigInt();
            const BigInt& big = c > 0 ? a : b;
            const BigInt& small = c > 0 ? b : a;
            r.mag_ = sub_mag(big.mag_, small.mag_);
            r.sign_ = big.sign_;
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
        BigInt r;
        r.mag_ = mul_mag(a.mag_, b.mag_);
        r.sign_ = a.sign_ * b.sign_;
        return r;
    }

    /// Quotient truncated toward zero; remainder has the dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
        if (a.sign_ == 0) {
            q = BigInt();
            r = BigInt();
            return;
        }
        std::vector<uint32_t> qm, rm;
        divmod_mag(a.mag_, b.mag_, qm, rm);
        q.mag_ = std::move(qm);
        r.mag_ = std::move(rm);
        q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
        r.sign_ = r.mag_.empty() ? 0 : a.sign_;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }

    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }
    BigInt& operator/=(const BigInt& o) { return *this = *this / o; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.sign_ == b.sign_ && a.mag_ == b.mag_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
        int c = cmp_mag(a.mag_, b.mag_);
        return a.sign_ >= 0 ? c < 0 : c > 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    /// Greatest common divisor of |a| and |b| (binary algorithm, no division).
    static BigInt gcd(const BigInt& a, const BigInt& b) {
        if (a.sign_ == 0) return b.abs();
        if (b.sign_ == 0) return a.abs();
        if (a.is_one() || b.is_one() || (-a).is_one() || (-b).is_one()) return BigInt(1);
        std::vector<uint32_t> x = a.mag_, y = b.mag_;
        size_t shift = std::min(trailing_zero_bits(x), trailing_zero_bits(y));
        shr_bits(x, trailing_zero_bits(x));
        while (!y.empty()) {
            shr_bits(y, trailing_zero_bits(y));
            if (cmp_mag(x, y) > 0) std::swap(x, y);
            y = sub_mag(y, x);
            trim(y);
        }
        shl_bits(x, shift);
        BigInt r;
        r.mag_ = std::move(x);
        r.sign_ = 1;
        return r;
    }

    std::string to_string() const {
        if (sign_ == 0) return "0";
        std::vector<uint32_t> m = mag_;
        std::string digits;
        while (!m.empty()) {
            uint64_t rem = 0;
            for (size_t i = m.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | m[i];
                m[i] = static_cast<uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            trim(m);
            std::string group = std::to_string(rem);
            if (!m.empty()) group.insert(0, 9 - group.size(), '0');
            digits.insert(0, group);
        }
        return sign_ < 0 ? "-" + digits : digits;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigInt& v) {
        return os << v.to_string();
    }

private:
    int sign_ = 0;
    std::vector<uint32_t> mag_;

    unsigned long long mag_u64() const {
        unsigned long long m = 0;
        if (mag_.size() > 1) m = static_cast<unsigned long long>(mag_[1]) << 32;
        if (!mag_.empty()) m |= mag_[0];
        return m;
    }

    static void trim(std::vector<uint32_t>& m) {
        while (!m.empty() && m.back() == 0) m.pop_back();
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        const auto& lo = a.size() >= b.size() ? b : a;
        const auto& hi = a.size() >= b.size() ? a : b;
        std::vector<uint32_t> r(hi.size() + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < hi.size(); ++i) {
            uint64_t cur = carry + hi[i] + (i < lo.size() ? lo[i] : 0);
            r[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        r[hi.size()] = static_cast<uint32_t>(carry);
        trim(r);
        return r;
    }

    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(a.size(), 0);
        int64_t borrow = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            int64_t cur = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
            if (cur < 0) {
                cur += (1LL << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<uint32_t>(cur);
        }
        trim(r);
        return r;
    }

    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r(a.size() + b.size(), 0);
        for (size_t i = 0; i < a.size(); ++i) {
            uint64_t carry = 0;
            uint64_t ai = a[i];
            for (size_t j = 0; j < b.size(); ++j) {
                uint64_t cur = r[i + j] + ai * b[j] + carry;
                r[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            r[i + b.size()] = static_cast<uint32_t>(carry);
        }
        trim(r);
        return r;
    }

    static size_t bit_length(const std::vector<uint32_t>& a) {
        if (a.empty()) return 0;
        return (a.size() - 1) * 32 + static_cast<size_t>(std::bit_width(a.back()));
    }

    static bool get_bit(const std::vector<uint32_t>& a, size_t i) {
        return (a[i / 32] >> (i % 32)) & 1u;
    }

    static void set_bit(std::vector<uint32_t>& a, size_t i) {
        if (a.size() <= i / 32) a.resize(i / 32 + 1, 0);
        a[i / 32] |= (1u << (i % 32));
    }

    static size_t trailing_zero_bits(const std::vector<uint32_t>& a) {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != 0) return i * 32 + static_cast<size_t>(std::countr_zero(a[i]));
        return 0;
    }

    static void shr_bits(std::vector<uint32_t>& a, size_t k) {
        if (k == 0 || a.empty()) return;
        size_t limb = k / 32, bit = k % 32;
        if (limb >= a.size()) {
            a.clear();
            return;
        }
        a.erase(a.begin(), a.begin() + static_cast<ptrdiff_t>(limb));
        if (bit) {
            for (size_t i = 0; i < a.size(); ++i) {
                uint32_t hi = (i + 1 < a.size()) ? a[i + 1] : 0;
                a[i] = (a[i] >> bit) | (hi << (32 - bit));
            }
        }
        trim(a);
    }

    static void shl_bits(std::vector<uint32_t>& a, size_t k) {
        if (k == 0 || a.empty()) return;
        size_t limb = k / 32, bit = k % 32;
        if (bit) {
            a.push_back(0);
            for (size_t i = a.size(); i-- > 1;)
                a[i] = (a[i] << bit) | (a[i - 1] >> (32 - bit));
            a[0] <<= bit;
        }
        a.insert(a.begin(), limb, 0);
        trim(a);
    }

    // in-place r = (r << 1) | bit, used by the bitwise long division
    static void shl1_or(std::vector<uint32_t>& r, bool bit) {
        uint32_t carry = bit ? 1u : 0u;
        for (size_t i = 0; i < r.size(); ++i) {
            uint32_t nc = r[i] >> 31;
            r[i] = (r[i] << 1) | carry;
            carry = nc;
        }
        if (carry) r.push_back(carry);
    }

    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
        q.clear();
        r.clear();
        if (cmp_mag(a, b) < 0) {
            r = a;
            trim(r);
            return;
        }
        if (b.size() == 1) {  // schoolbook by single limb
            uint64_t d = b[0], rem = 0;
            q.assign(a.size(), 0);
            for (size_t i = a.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | a[i];
                q[i] = static_cast<uint32_t>(cur / d);
                rem = cur % d;
            }
            trim(q);
            if (rem) r.push_back(static_cast<uint32_t>(rem));
            return;
        }
        // bitwise long division; magnitudes in this codebase stay small
        size_t bits = bit_length(a);
        for (size_t i = bits; i-- > 0;) {
            shl1_or(r, get_bit(a, i));
            if (cmp_mag(r, b) >= 0) {
                r = sub_mag(r, b);
                trim(r);
                set_bit(q, i);
            }
        }
        trim(q);
        trim(r);
    }
};

}  // namespace nlm
