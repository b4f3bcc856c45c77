#pragma once

// The commutative-ring contract shared by the master engine: big integers,
// big rationals and double-precision complex numbers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>

#include "topography/errors.hpp"
#include "topography/exact.hpp"

namespace topography {

using Complex = std::complex<double>;

template <class S>
inline constexpr bool is_complex_scalar_v = std::is_same_v<S, Complex>;

template <class S>
S from_bigint(const BigInt& v) {
    if constexpr (is_complex_scalar_v<S>) {
        return Complex(v.template convert_to<double>(), 0.0);
    } else {
        return S(v);
    }
}

template <class S>
bool is_zero(const S& v) {
    return v == S(0);
}

/// a / b in the scalar ring. Integers must divide exactly.
template <class S>
S divide(const S& a, const S& b) {
    if (is_zero(b)) throw DivisionByZero("division by a zero cluster entry");
    if constexpr (std::is_same_v<S, BigInt> || std::is_integral_v<S>) {
        if (a % b != 0) {
            throw InexactDivision(detail::to_text(a) + " / " + detail::to_text(b) + " is not an integer");
        }
    }
    return a / b;
}

/// Equality for exact scalars; relative tolerance `tol` for complex ones.
template <class S>
bool approx_equal(const S& a, const S& b, double tol = 1e-9) {
    if constexpr (is_complex_scalar_v<S>) {
        double scale = std::max({1.0, std::abs(a), std::abs(b)});
        return std::abs(a - b) <= tol * scale;
    } else {
        (void)tol;
        return a == b;
    }
}

}  // namespace topography
