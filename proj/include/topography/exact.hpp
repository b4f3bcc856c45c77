#pragma once

// Exact scalars: big integers/rationals, quadratic surds (p + q*sqrt(D))/r and
// signed Farey fractions with mediant arithmetic. No floating point here.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <numeric>
#include <type_traits>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>

#include "topography/errors.hpp"

namespace topography {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

template <class Int>
Int abs_value(const Int& x) {
    return x < 0 ? Int(-x) : x;
}

template <class Int>
int sign_of(const Int& x) {
    return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

template <class Int>
Int gcd(Int a, Int b) {
    if constexpr (std::is_integral_v<Int>) {
        return std::gcd(a, b);
    }
    a = abs_value(a);
    b = abs_value(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Floor of the square root of a nonnegative integer.
template <class Int>
Int isqrt(const Int& n) {
    if (n < 2) return n;
    Int x = n;
    Int y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

template <class Int>
bool is_perfect_square(const Int& n) {
    if (n < 0) return false;
    Int s = isqrt(n);
    return s * s == n;
}

/// Sign of A + B*sqrt(D) for D >= 0, exactly.
template <class Int>
int sign_of_sum_with_root(const Int& A, const Int& B, const Int& D) {
    int sa = sign_of(A);
    int sb = (D == 0) ? 0 : sign_of(B);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: compare A^2 with B^2 D.
    Int lhs = A * A;
    Int rhs = B * B * D;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

template <class Int>
std::string to_text(const Int& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Farey fractions

/// Signed Farey fraction num/den with the sign carried by the numerator.
/// Infinity is 1/0.
template <class Int>
struct BasicFarey {
    Int num{0};
    Int den{1};

    BasicFarey() = default;
    BasicFarey(Int n, Int d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    static BasicFarey infinity() { return BasicFarey(Int(1), Int(0)); }

    bool is_infinite() const { return den == 0; }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (den == 0) {
            if (num == 0) throw ParseError("0/0 is not a Farey fraction");
            num = 1;
            return;
        }
        Int g = detail::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend bool operator==(const BasicFarey&, const BasicFarey&) = default;

    /// Order on the extended line; infinity is the largest element.
    friend std::strong_ordering operator<=>(const BasicFarey& a, const BasicFarey& b) {
        if (a.is_infinite() || b.is_infinite()) {
            return int(a.is_infinite()) <=> int(b.is_infinite());
        }
        Int lhs = a.num * b.den;
        Int rhs = b.num * a.den;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    BasicFarey reciprocal() const {
        if (num == 0) return infinity();
        return BasicFarey(den, num);
    }

    BasicFarey negated() const {
        BasicFarey r = *this;
        if (!r.is_infinite()) r.num = -r.num;
        return r;
    }

    std::string to_string() const { return detail::to_text(num) + "/" + detail::to_text(den); }
};

template <class Int>
std::ostream& operator<<(std::ostream& os, const BasicFarey<Int>& f) {
    return os << f.to_string();
}

template <class Int>
bool farey_neighbors(const BasicFarey<Int>& a, const BasicFarey<Int>& b) {
    Int det = a.num * b.den - b.num * a.den;
    return detail::abs_value(det) == 1;
}

/// Farey addition of two neighbors.
template <class Int>
BasicFarey<Int> mediant(const BasicFarey<Int>& a, const BasicFarey<Int>& b) {
    if (!farey_neighbors(a, b)) {
        throw NotNeighbors(a.to_string() + " and " + b.to_string() + " are not Farey neighbors");
    }
    return BasicFarey<Int>(a.num + b.num, a.den + b.den);
}

/// Farey subtraction of two neighbors, sign attributed to the numerator.
template <class Int>
BasicFarey<Int> farey_sub(const BasicFarey<Int>& a, const BasicFarey<Int>& b) {
    if (!farey_neighbors(a, b)) {
        throw NotNeighbors(a.to_string() + " and " + b.to_string() + " are not Farey neighbors");
    }
    return BasicFarey<Int>(a.num - b.num, a.den - b.den);
}

// ---------------------------------------------------------------------------
// Quadratic surds

/// (p + q*sqrt(D)) / r with gcd(p,q,r) = 1 and r > 0. D is kept as given.
/// For D < 0 the value lies in the closed upper half-plane iff q >= 0.
template <class Int>
struct BasicSurd {
    Int p{0};
    Int q{0};
    Int r{1};
    Int D{0};

    BasicSurd() = default;
    BasicSurd(Int p_, Int q_, Int r_, Int D_)
        : p(std::move(p_)), q(std::move(q_)), r(std::move(r_)), D(std::move(D_)) {
        normalize();
    }

    static BasicSurd rational(Int num, Int den) { return BasicSurd(std::move(num), Int(0), std::move(den), Int(0)); }

    void normalize() {
        if (r == 0) throw DivisionByZero("surd with zero denominator");
        if (r < 0) {
            p = -p;
            q = -q;
            r = -r;
        }
        Int g = detail::gcd(detail::gcd(p, q), r);
        if (g > 1) {
            p /= g;
            q /= g;
            r /= g;
        }
    }

    bool is_real() const { return q == 0 || D >= 0; }
    /// True when the value is a rational number (q = 0 or D a perfect square).
    bool is_rational() const { return q == 0 || detail::is_perfect_square(D); }

    /// The value as a Farey fraction; precondition: is_rational().
    BasicFarey<Int> as_fraction() const {
        Int s = detail::isqrt(D < 0 ? Int(0) : D);
        return BasicFarey<Int>(p + q * s, r);
    }

    /// Mirror in the imaginary axis: z -> -conj(z) for complex values, z -> -z for reals.
    BasicSurd reflected() const {
        if (is_real()) return BasicSurd(-p, -q, r, D);
        return BasicSurd(-p, q, r, D);
    }

    friend bool operator==(const BasicSurd&, const BasicSurd&) = default;

    std::string to_string() const {
        return detail::to_text(p) + "+" + detail::to_text(q) + "√" + detail::to_text(D) + "/" +
               detail::to_text(r);
    }
};

template <class Int>
std::ostream& operator<<(std::ostream& os, const BasicSurd<Int>& z) {
    return os << z.to_string();
}

using Farey = BasicFarey<BigInt>;
using Surd = BasicSurd<BigInt>;

/// Real part: p/r for imaginary surds; the full value is irrational for real
/// nonsquare D, in which case the rational part p/r is returned.
inline BigRational re(const Surd& z) {
    if (z.is_rational()) {
        Farey f = z.as_fraction();
        return BigRational(f.num, f.den);
    }
    return BigRational(z.p, z.r);
}

/// Squared imaginary part q^2 |D| / r^2 (zero for real values).
inline BigRational im_sq(const Surd& z) {
    if (z.is_real()) return BigRational(0);
    return BigRational(z.q * z.q * (-z.D), z.r * z.r);
}

/// Sign of the real part of z (of the value itself when z is real).
template <class Int>
int sgn(const BasicSurd<Int>& z) {
    if (!z.is_real()) return detail::sign_of(z.p);
    return detail::sign_of_sum_with_root(z.p, z.q, z.D);
}

template <class Int>
int chi(const BasicSurd<Int>& z) {
    return sgn(z) < 0 ? 1 : 0;
}

/// Exact comparison of a real surd with a finite fraction: sign of z - f.
template <class Int>
int compare_real(const BasicSurd<Int>& z, const BasicFarey<Int>& f) {
    // (p + q sqrt D)/r - n/d  has the sign of  (p d - n r) + q d sqrt D.
    return detail::sign_of_sum_with_root(Int(z.p * f.den - f.num * z.r), Int(z.q * f.den), z.D);
}

/// Strict membership of z in the open half-disk bounded by the geodesic from a
/// to b (a < b). For b = infinity the region is the half-plane re(z) > a.
template <class Int>
bool inside_semicircle(const BasicSurd<Int>& z, const BasicFarey<Int>& a, const BasicFarey<Int>& b) {
    if (z.is_real()) {
        if (compare_real(z, a) <= 0) return false;
        return b.is_infinite() || compare_real(z, b) < 0;
    }
    if (b.is_infinite()) return z.p * a.den > a.num * z.r;
    // (re - a)(re - b) + im^2 < 0, scaled by r^2 * a.den * b.den > 0.
    Int lhs = (z.p * a.den - a.num * z.r) * (z.p * b.den - b.num * z.r) + z.q * z.q * (-z.D) * a.den * b.den;
    return lhs < 0;
}

}  // namespace topography
