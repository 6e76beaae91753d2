#pragma once

/**
 * @file quad_ext.hpp
 * @brief Exact arithmetic in a real quadratic field Q[sqrt d].
 *
 * An element is a + b sqrt(d) with exact rationals a, b and a square-free
 * d >= 1 (d = 1 is plain Q, with b folded into a).  Elements with b = 0 are
 * field-neutral and combine with any d; mixing two genuinely different
 * fields throws error(errc::field_mismatch).
 */

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "sixcyl/error.hpp"

namespace sixcyl {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

/// Writes n = s^2 * d with d square-free; returns (s, d).
inline std::pair<bigint, bigint> square_free_split(bigint n) {
    if (n <= 0) throw error(errc::invalid_argument, "square_free_split needs n > 0");
    bigint s = 1, d = 1;
    for (bigint p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) s *= p;
        if (e % 2) d *= p;
    }
    d *= n;
    return {s, d};
}

inline rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (text.empty() || slash == 0 || slash + 1 == text.size())
        throw error(errc::invalid_argument, "not a rational: '" + text + "'");
    try {
        if (slash == std::string::npos) return rational(bigint(text));
        bigint num(text.substr(0, slash));
        bigint den(text.substr(slash + 1));
        if (den == 0) throw error(errc::invalid_argument, "zero denominator in '" + text + "'");
        if (den < 0) {  // boost's rational rejects negative cpp_int denominators
            num = -num;
            den = -den;
        }
        return rational(num, den);
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        throw error(errc::invalid_argument, "not a rational: '" + text + "'");
    }
}

inline std::string to_string(const rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

class quad_ext {
public:
    quad_ext() = default;
    quad_ext(int a) : a_(a) {}  // NOLINT(google-explicit-constructor): integers embed naturally
    quad_ext(const rational& a) : a_(a) {}  // NOLINT(google-explicit-constructor)

    /// a + b sqrt(d); d is reduced to its square-free part and b rescaled.
    quad_ext(const rational& a, const rational& b, std::int64_t d) : a_(a), b_(b), d_(1) {
        if (d <= 0) throw error(errc::invalid_argument, "quad_ext needs d > 0");
        const auto [s, sf] = square_free_split(bigint(d));
        b_ *= rational(s);
        d_ = static_cast<std::int64_t>(sf);
        canonicalize();
    }

    /// c * sqrt(r) for a positive rational r.
    static quad_ext sqrt_of(const rational& r, const rational& c = rational(1)) {
        if (r < 0) throw error(errc::invalid_argument, "sqrt of a negative rational");
        if (r == 0) return quad_ext();
        const bigint num = boost::multiprecision::numerator(r);
        const bigint den = boost::multiprecision::denominator(r);
        // sqrt(num/den) = sqrt(num*den)/den
        const auto [s, sf] = square_free_split(num * den);
        if (sf > bigint(INT64_MAX)) throw error(errc::invalid_argument, "radicand too large");
        quad_ext out;
        out.b_ = c * rational(s) / rational(den);
        out.d_ = static_cast<std::int64_t>(sf);
        out.canonicalize();
        return out;
    }

    const rational& a() const { return a_; }
    const rational& b() const { return b_; }
    std::int64_t d() const { return d_; }

    bool is_rational() const { return b_ == 0; }

    double value() const {
        return static_cast<double>(a_) + static_cast<double>(b_) * std::sqrt(static_cast<double>(d_));
    }

    long double value_ld() const {
        return static_cast<long double>(a_) +
               static_cast<long double>(b_) * std::sqrt(static_cast<long double>(d_));
    }

    quad_ext conjugate() const {
        quad_ext out = *this;
        out.b_ = -b_;
        return out;
    }

    /// a^2 - d b^2, the field norm.
    rational norm() const { return a_ * a_ - rational(d_) * b_ * b_; }

    quad_ext operator-() const {
        quad_ext out = *this;
        out.a_ = -a_;
        out.b_ = -b_;
        return out;
    }

    quad_ext& operator+=(const quad_ext& o) {
        d_ = common_d(o);
        a_ += o.a_;
        b_ += o.b_;
        canonicalize();
        return *this;
    }

    quad_ext& operator-=(const quad_ext& o) { return *this += -o; }

    quad_ext& operator*=(const quad_ext& o) {
        const std::int64_t d = common_d(o);
        const rational a = a_ * o.a_ + rational(d) * b_ * o.b_;
        const rational b = a_ * o.b_ + b_ * o.a_;
        a_ = a;
        b_ = b;
        d_ = d;
        canonicalize();
        return *this;
    }

    quad_ext& operator/=(const quad_ext& o) {
        const rational n = o.norm();
        if (n == 0) throw error(errc::invalid_argument, "division by zero in quad_ext");
        quad_ext inv = o.conjugate();
        inv.a_ /= n;
        inv.b_ /= n;
        return *this *= inv;
    }

    friend quad_ext operator+(quad_ext x, const quad_ext& y) { return x += y; }
    friend quad_ext operator-(quad_ext x, const quad_ext& y) { return x -= y; }
    friend quad_ext operator*(quad_ext x, const quad_ext& y) { return x *= y; }
    friend quad_ext operator/(quad_ext x, const quad_ext& y) { return x /= y; }

    friend bool operator==(const quad_ext& x, const quad_ext& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
    }
    friend bool operator!=(const quad_ext& x, const quad_ext& y) { return !(x == y); }

    std::string str() const {
        if (b_ == 0) return to_string(a_);
        std::ostringstream os;
        if (a_ != 0) os << a_ << (b_ > 0 ? " + " : " - ");
        else if (b_ < 0) os << "-";
        const rational ab = b_ < 0 ? rational(-b_) : b_;
        if (ab != 1) os << ab << "*";
        os << "sqrt(" << d_ << ")";
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const quad_ext& x) { return os << x.str(); }

private:
    std::int64_t common_d(const quad_ext& o) const {
        if (b_ == 0) return o.d_;
        if (o.b_ == 0) return d_;
        if (d_ != o.d_) throw error(errc::field_mismatch);
        return d_;
    }

    void canonicalize() {
        if (d_ == 1) {
            a_ += b_;
            b_ = 0;
        }
    }

    rational a_{0};
    rational b_{0};
    std::int64_t d_{1};
};

} // namespace sixcyl
