#pragma once

// Trivariate Laurent polynomials with big-integer coefficients. Exact
// division is the certificate for the Laurent phenomenon: a nonzero
// remainder raises InexactDivision.

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "topography/errors.hpp"
#include "topography/exact.hpp"
#include "topography/scalar.hpp"

namespace topography {

using Monomial3 = std::array<int, 3>;

/// Graded lexicographic order; the largest term leads in exact division.
struct GradedLess {
    bool operator()(const Monomial3& a, const Monomial3& b) const {
        int da = a[0] + a[1] + a[2];
        int db = b[0] + b[1] + b[2];
        if (da != db) return da < db;
        return a < b;
    }
};

class LaurentPoly {
public:
    using Terms = std::map<Monomial3, BigInt, GradedLess>;

    LaurentPoly() = default;
    explicit LaurentPoly(const BigInt& constant) { add_term({0, 0, 0}, constant); }
    LaurentPoly(Monomial3 exps, const BigInt& coeff) { add_term(exps, coeff); }

    /// The coordinate function x_{index+1}.
    static LaurentPoly variable(int index, int power = 1) {
        Monomial3 e{0, 0, 0};
        e.at(index) = power;
        return LaurentPoly(e, BigInt(1));
    }
    static LaurentPoly monomial(Monomial3 exps) { return LaurentPoly(exps, BigInt(1)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_monomial() const { return terms_.size() == 1; }

    /// Componentwise minimum exponent over all terms (zero polynomial: 0,0,0).
    Monomial3 min_exponents() const {
        if (terms_.empty()) return {0, 0, 0};
        Monomial3 m = terms_.begin()->first;
        for (const auto& [e, c] : terms_) {
            for (int k = 0; k < 3; ++k) m[k] = std::min(m[k], e[k]);
        }
        return m;
    }

    /// Componentwise maximum exponent over all terms (zero polynomial: 0,0,0).
    Monomial3 max_exponents() const {
        if (terms_.empty()) return {0, 0, 0};
        Monomial3 m = terms_.begin()->first;
        for (const auto& [e, c] : terms_) {
            for (int k = 0; k < 3; ++k) m[k] = std::max(m[k], e[k]);
        }
        return m;
    }

    void add_term(const Monomial3& e, const BigInt& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator-(const LaurentPoly& a) { return LaurentPoly() - a; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend LaurentPoly operator*(const LaurentPoly& a, const BigInt& k) {
        LaurentPoly out;
        if (k == 0) return out;
        for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, c * k);
        return out;
    }
    friend LaurentPoly operator*(const BigInt& k, const LaurentPoly& a) { return a * k; }

    LaurentPoly shifted(const Monomial3& by) const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(Monomial3{e[0] + by[0], e[1] + by[1], e[2] + by[2]}, c);
        return out;
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    /// Substitute a point; coordinates under a negative exponent must be nonzero.
    /// Integer scalars require every term to be integral.
    template <class Scalar>
    Scalar eval(std::span<const Scalar, 3> point) const {
        Scalar sum(0);
        for (const auto& [e, c] : terms_) {
            Scalar num = from_bigint<Scalar>(c);
            Scalar den(1);
            for (int k = 0; k < 3; ++k) {
                if (e[k] < 0 && topography::is_zero(point[k])) {
                    throw EvalAtZero("x" + std::to_string(k + 1) + " = 0 under exponent " + std::to_string(e[k]));
                }
                Scalar& target = e[k] < 0 ? den : num;
                for (int n = 0; n < std::abs(e[k]); ++n) target *= point[k];
            }
            // Over the integers a term that is not integral raises InexactDivision.
            sum += divide(num, den);
        }
        return sum;
    }
    template <class Scalar>
    Scalar eval(const std::array<Scalar, 3>& point) const {
        return eval<Scalar>(std::span<const Scalar, 3>(point));
    }

    /// Human-readable form with explicit exponents, e.g. "x1^-2*x2^3 + 2*x3".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest total degree first for readability.
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            BigInt mag = c < 0 ? BigInt(-c) : c;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool constant = e == Monomial3{0, 0, 0};
            bool wrote = false;
            if (mag != 1 || constant) {
                os << mag;
                wrote = true;
            }
            for (int k = 0; k < 3; ++k) {
                if (e[k] == 0) continue;
                if (wrote) os << "*";
                os << "x" << (k + 1);
                if (e[k] != 1) os << "^" << e[k];
                wrote = true;
            }
        }
        return os.str();
    }

private:
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }


namespace detail {

// Dense coefficient array over the box [lo, lo + extent) of exponents,
// indexed with x3 most significant so index order is lexicographic order.
struct DenseBox {
    Monomial3 lo{};
    std::array<std::size_t, 3> extent{1, 1, 1};
    std::vector<BigInt> coeffs;

    DenseBox(Monomial3 low, Monomial3 high) : lo(low) {
        for (int k = 0; k < 3; ++k) extent[k] = std::size_t(high[k] - low[k] + 1);
        coeffs.assign(extent[0] * extent[1] * extent[2], BigInt(0));
    }

    std::size_t offset(const Monomial3& e) const {
        return std::size_t(e[0] - lo[0]) + extent[0] * (std::size_t(e[1] - lo[1]) + extent[1] * std::size_t(e[2] - lo[2]));
    }
    Monomial3 monomial(std::size_t pos) const {
        Monomial3 e;
        e[0] = int(pos % extent[0]) + lo[0];
        pos /= extent[0];
        e[1] = int(pos % extent[1]) + lo[1];
        e[2] = int(pos / extent[1]) + lo[2];
        return e;
    }
};

inline constexpr std::size_t kDenseLimit = std::size_t(1) << 24;

inline std::size_t box_size(const Monomial3& lo, const Monomial3& hi) {
    std::size_t n = 1;
    for (int k = 0; k < 3; ++k) n *= std::size_t(hi[k] - lo[k] + 1);
    return n;
}

}  // namespace detail

inline LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    if (a.is_zero() || b.is_zero()) return out;
    Monomial3 lo = a.min_exponents(), hi = a.max_exponents();
    Monomial3 blo = b.min_exponents(), bhi = b.max_exponents();
    for (int k = 0; k < 3; ++k) {
        lo[k] += blo[k];
        hi[k] += bhi[k];
    }
    std::size_t work = a.size() * b.size();
    std::size_t cells = detail::box_size(lo, hi);
    if (work < 64 || cells > detail::kDenseLimit || cells > 8 * work) {
        for (const auto& [ea, ca] : a.terms()) {
            for (const auto& [eb, cb] : b.terms()) out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        }
        return out;
    }
    detail::DenseBox box(lo, hi);
    // offset(ea + eb) splits as a part from ea plus a part from eb
    auto part = [&](const Monomial3& e, const Monomial3& base) {
        return std::size_t(e[0] - base[0]) + box.extent[0] * (std::size_t(e[1] - base[1]) + box.extent[1] * std::size_t(e[2] - base[2]));
    };
    Monomial3 amin = a.min_exponents();
    std::vector<std::pair<std::size_t, const BigInt*>> bt;
    bt.reserve(b.size());
    for (const auto& [eb, cb] : b.terms()) bt.emplace_back(part(eb, blo), &cb);
    BigInt t;
    for (const auto& [ea, ca] : a.terms()) {
        std::size_t base = part(ea, amin);
        for (const auto& [off, cb] : bt) {
            t = ca * *cb;
            box.coeffs[base + off] += t;
        }
    }
    for (std::size_t pos = 0; pos < box.coeffs.size(); ++pos) {
        if (box.coeffs[pos] != 0) out.add_term(box.monomial(pos), box.coeffs[pos]);
    }
    return out;
}

namespace detail {

// Long division on the sparse terms, for operands whose degree box is mostly empty.
inline LaurentPoly sparse_exact_div(const LaurentPoly& p, const LaurentPoly& q, const Monomial3& pmin, const Monomial3& qmin) {
    auto neg = [](Monomial3 m) { return Monomial3{-m[0], -m[1], -m[2]}; };
    LaurentPoly rem = p.shifted(neg(pmin));
    LaurentPoly divisor = q.shifted(neg(qmin));
    const Monomial3 lead = divisor.terms().rbegin()->first;
    const BigInt lead_coeff = divisor.terms().rbegin()->second;

    LaurentPoly quotient;
    while (!rem.is_zero()) {
        const auto& [lm, lc] = *rem.terms().rbegin();
        Monomial3 factor{lm[0] - lead[0], lm[1] - lead[1], lm[2] - lead[2]};
        if (factor[0] < 0 || factor[1] < 0 || factor[2] < 0 || lc % lead_coeff != 0) {
            throw InexactDivision("(" + p.to_string() + ") / (" + q.to_string() + ") is not Laurent");
        }
        LaurentPoly step(factor, lc / lead_coeff);
        quotient += step;
        rem -= divisor * step;
    }
    return quotient.shifted({pmin[0] - qmin[0], pmin[1] - qmin[1], pmin[2] - qmin[2]});
}

}  // namespace detail

/// Exact quotient p / q in the Laurent ring; InexactDivision if none exists.
///
/// Both operands are cleared to polynomials by their minimal monomials and the
/// polynomial quotient is found by lexicographic long division. An exact
/// quotient keeps every partial product inside p's degree box, so a leading
/// term that would leave it, a non-integral coefficient ratio or a nonzero
/// remainder means p/q is not a Laurent polynomial with integer coefficients.
inline LaurentPoly exact_div(const LaurentPoly& p, const LaurentPoly& q) {
    if (q.is_zero()) throw DivisionByZero("Laurent division by the zero polynomial");
    if (p.is_zero()) return {};

    Monomial3 pmin = p.min_exponents();
    Monomial3 qmin = q.min_exponents();

    if (q.is_monomial()) {
        const BigInt& c = q.terms().begin()->second;
        LaurentPoly out;
        for (const auto& [e, pc] : p.terms()) {
            if (pc % c != 0) throw InexactDivision("coefficient " + detail::to_text(pc) + " not divisible by " + detail::to_text(c));
            out.add_term({e[0] - qmin[0], e[1] - qmin[1], e[2] - qmin[2]}, pc / c);
        }
        return out;
    }

    auto inexact = [&] { return InexactDivision("(" + p.to_string() + ") / (" + q.to_string() + ") is not Laurent"); };
    Monomial3 pdeg = p.max_exponents();
    Monomial3 qdeg = q.max_exponents();
    for (int k = 0; k < 3; ++k) {
        pdeg[k] -= pmin[k];
        qdeg[k] -= qmin[k];
        if (qdeg[k] > pdeg[k]) throw inexact();
    }
    std::size_t cells = detail::box_size({0, 0, 0}, pdeg);
    if (cells > detail::kDenseLimit || cells > 8 * p.size() * q.size()) return detail::sparse_exact_div(p, q, pmin, qmin);

    detail::DenseBox rem({0, 0, 0}, pdeg);
    for (const auto& [e, c] : p.terms()) rem.coeffs[rem.offset({e[0] - pmin[0], e[1] - pmin[1], e[2] - pmin[2]})] = c;

    std::vector<std::pair<std::size_t, const BigInt*>> divisor;
    Monomial3 lead{-1, -1, -1};
    std::size_t lead_pos = 0;
    for (const auto& [e, c] : q.terms()) {
        Monomial3 s{e[0] - qmin[0], e[1] - qmin[1], e[2] - qmin[2]};
        std::size_t pos = rem.offset(s);
        divisor.emplace_back(pos, &c);
        if (lead[0] < 0 || pos > lead_pos) {
            lead = s;
            lead_pos = pos;
        }
    }
    const BigInt& lead_coeff = *std::find_if(divisor.begin(), divisor.end(), [&](const auto& d) { return d.first == lead_pos; })->second;

    LaurentPoly quotient;
    BigInt k, t;
    for (std::size_t pos = rem.coeffs.size(); pos-- > 0;) {
        BigInt& lc = rem.coeffs[pos];
        if (lc == 0) continue;
        if (pos < lead_pos) throw inexact();
        Monomial3 m = rem.monomial(pos);
        Monomial3 factor{m[0] - lead[0], m[1] - lead[1], m[2] - lead[2]};
        for (int v = 0; v < 3; ++v) {
            if (factor[v] < 0 || factor[v] + qdeg[v] > pdeg[v]) throw inexact();
        }
        if (lc % lead_coeff != 0) throw inexact();
        k = lc / lead_coeff;
        quotient.add_term({factor[0] + pmin[0] - qmin[0], factor[1] + pmin[1] - qmin[1], factor[2] + pmin[2] - qmin[2]}, k);
        std::size_t base = rem.offset(factor);
        for (const auto& [off, c] : divisor) {
            t = k * *c;
            rem.coeffs[base + off] -= t;
        }
    }
    return quotient;
}

}  // namespace topography
