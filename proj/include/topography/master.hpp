#pragma once

// The master cubic
//   x1^2 + x2^2 + x3^2 + d1 x2x3 + d2 x3x1 + d3 x1x2 + s1 x1 + s2 x2 + s3 x3 + zeta = tau x1x2x3
// with its invariant, polynomial local rule and rational LP mutation.
// Indices are 1-based at the API (i in {1,2,3}); (i,j,k) is always cyclic.

#include <array>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "topography/errors.hpp"
#include "topography/laurent.hpp"
#include "topography/scalar.hpp"

namespace topography {

template <class S>
using Cluster = std::array<S, 3>;

template <class S>
struct MasterParams {
    std::array<S, 3> delta{S(0), S(0), S(0)};
    std::array<S, 3> sigma{S(0), S(0), S(0)};
    S zeta{0};
    S tau{0};

    friend bool operator==(const MasterParams&, const MasterParams&) = default;

    /// Converts every parameter into another scalar ring.
    template <class T, class F>
    MasterParams<T> map(F&& f) const {
        MasterParams<T> out;
        for (int k = 0; k < 3; ++k) {
            out.delta[k] = f(delta[k]);
            out.sigma[k] = f(sigma[k]);
        }
        out.zeta = f(zeta);
        out.tau = f(tau);
        return out;
    }
};

namespace params {

/// Markov: sigma = delta = 0, tau = 3.
template <class S = BigInt>
MasterParams<S> markov() {
    MasterParams<S> p;
    p.tau = S(3);
    return p;
}

/// Conway arithmetic progression: sigma = 0, delta = -2, tau = 0. The
/// discriminant enters as zeta = -Delta so that the rational mutation
/// agrees with Conway's rule on the discriminant equation.
template <class S = BigInt>
MasterParams<S> conway(const S& discriminant = S(0)) {
    MasterParams<S> p;
    p.delta = {S(-2), S(-2), S(-2)};
    p.zeta = S(-discriminant);
    return p;
}

template <class S = BigInt>
MasterParams<S> discriminant(const S& disc) {
    return conway<S>(disc);
}

/// Painleve VI monodromy cubic: tau = -1, sigma_i = -theta_i, zeta = theta_4.
template <class S>
MasterParams<S> pvi(const std::array<S, 4>& theta) {
    MasterParams<S> p;
    p.tau = S(-1);
    for (int k = 0; k < 3; ++k) p.sigma[k] = -theta[k];
    p.zeta = theta[3];
    return p;
}

}  // namespace params

namespace detail {

struct Triple {
    int i, j, k;  // zero-based, cyclic
};

inline Triple cyclic(int index) {
    if (index < 1 || index > 3) throw std::out_of_range("mutation index must be 1, 2 or 3, got " + std::to_string(index));
    int i = index - 1;
    return {i, (i + 1) % 3, (i + 2) % 3};
}

}  // namespace detail

/// F_i evaluated at (x_j, x_k):  x_j^2 + x_k^2 + d_i x_j x_k + s_j x_j + s_k x_k + zeta.
template <class S, class V>
V exchange_value(const MasterParams<S>& p, int index, const V& xj, const V& xk) {
    auto [i, j, k] = detail::cyclic(index);
    return xj * xj + xk * xk + V(p.delta[i]) * xj * xk + V(p.sigma[j]) * xj + V(p.sigma[k]) * xk + V(p.zeta);
}

/// The exchange polynomial F_i as a Laurent polynomial in the seed variables.
inline LaurentPoly exchange_poly(const MasterParams<BigInt>& p, int index) {
    auto [i, j, k] = detail::cyclic(index);
    LaurentPoly xj = LaurentPoly::variable(j);
    LaurentPoly xk = LaurentPoly::variable(k);
    return xj * xj + xk * xk + xj * xk * p.delta[i] + xj * p.sigma[j] + xk * p.sigma[k] + LaurentPoly(p.zeta);
}

/// I(w,n,e) = w^2+n^2+e^2 + d1 ne + d2 ew + d3 wn + s1 w + s2 n + s3 e - tau wne.
template <class S>
S invariant(const MasterParams<S>& p, const Cluster<S>& x) {
    const S& w = x[0];
    const S& n = x[1];
    const S& e = x[2];
    return w * w + n * n + e * e + p.delta[0] * n * e + p.delta[1] * e * w + p.delta[2] * w * n + p.sigma[0] * w +
           p.sigma[1] * n + p.sigma[2] * e - p.tau * w * n * e;
}

/// Master equation left side minus right side: invariant + zeta.
template <class S>
S residual(const MasterParams<S>& p, const Cluster<S>& x) {
    return invariant(p, x) + p.zeta;
}

/// Vieta-type polynomial rule x_i -> tau x_j x_k - x_i - d_j x_k - d_k x_j - s_i.
template <class S>
Cluster<S> local_rule(const MasterParams<S>& p, Cluster<S> x, int index) {
    auto [i, j, k] = detail::cyclic(index);
    x[i] = p.tau * x[j] * x[k] - x[i] - p.delta[j] * x[k] - p.delta[k] * x[j] - p.sigma[i];
    return x;
}

/// LP mutation x_i -> F_i(x_j, x_k) / x_i.
template <class S>
Cluster<S> mutate(const MasterParams<S>& p, Cluster<S> x, int index) {
    auto [i, j, k] = detail::cyclic(index);
    if (is_zero(x[i])) {
        throw DivisionByZero("mutation mu_" + std::to_string(index) + " at a zero entry");
    }
    x[i] = divide(exchange_value(p, index, x[j], x[k]), x[i]);
    return x;
}

// ---------------------------------------------------------------------------
// Permutations

/// A permutation of three slots; `image[k]` is the source slot of output slot k.
struct Perm3 {
    std::array<int, 3> source{0, 1, 2};

    static Perm3 identity() { return {}; }
    /// Transposition of the 1-based slots a and b.
    static Perm3 swap(int a, int b) {
        Perm3 p;
        std::swap(p.source.at(a - 1), p.source.at(b - 1));
        return p;
    }
    /// The 3-cycle (123): (a,b,c) -> (c,a,b).
    static Perm3 cycle() { return Perm3{{2, 0, 1}}; }

    friend bool operator==(const Perm3&, const Perm3&) = default;
};

template <class T>
std::array<T, 3> permute(const std::array<T, 3>& x, const Perm3& perm) {
    return {x[perm.source[0]], x[perm.source[1]], x[perm.source[2]]};
}

// ---------------------------------------------------------------------------
// Seeds over Laurent polynomials

/// A seed: cluster of Laurent polynomials plus the parameters from which the
/// exchange polynomials are always re-derived.
struct Seed {
    Cluster<LaurentPoly> cluster;
    MasterParams<BigInt> params;

    static Seed identity(const MasterParams<BigInt>& p) {
        return Seed{{LaurentPoly::variable(0), LaurentPoly::variable(1), LaurentPoly::variable(2)}, p};
    }
};

inline Seed mutate_seed(const Seed& seed, int index) {
    auto [i, j, k] = detail::cyclic(index);
    if (seed.cluster[i].is_zero()) throw DivisionByZero("seed entry " + std::to_string(index) + " is zero");
    Seed out = seed;
    LaurentPoly numerator = exchange_value(seed.params, index, seed.cluster[j], seed.cluster[k]);
    out.cluster[i] = exact_div(numerator, seed.cluster[i]);
    return out;
}

/// Reorders seed entries; params are deliberately left in place.
inline Seed permute(const Seed& seed, const Perm3& perm) {
    return Seed{permute(seed.cluster, perm), seed.params};
}

// ---------------------------------------------------------------------------
// LP exchange-polynomial invariance

/// Checks F_j(x') = M * H_j and F_k(x') = M * H_k with M = x_i'^2, where
/// G_j = F_j|_{x_i <- F_i|_{x_j=0} / x_i'} factors as (x_k^2 + s_k x_k + zeta) * H_j.
template <class S>
bool verify_exchange_invariance(const MasterParams<S>& p, const Cluster<S>& x, int index, double tol = 1e-9) {
    if constexpr (std::is_same_v<S, BigInt> || std::is_integral_v<S>) {
        // H_j has denominators; check over the rationals.
        auto q = [](const S& v) { return BigRational(BigInt(v)); };
        return verify_exchange_invariance(p.template map<BigRational>(q), Cluster<BigRational>{q(x[0]), q(x[1]), q(x[2])},
                                          index, tol);
    }
    auto [i, j, k] = detail::cyclic(index);
    Cluster<S> mutated = mutate(p, x, index);
    const S& xi_new = mutated[i];
    if (is_zero(xi_new)) throw DivisionByZero("mutated entry vanished; H_j is undefined");
    const S M = xi_new * xi_new;

    // F_j is a polynomial in (x_k, x_i); F_k in (x_i, x_j).
    auto Fj = [&](const S& xk, const S& xi) { return exchange_value(p, j + 1, xk, xi); };
    auto Fk = [&](const S& xi, const S& xj) { return exchange_value(p, k + 1, xi, xj); };

    bool ok = true;
    {
        S absorbed = x[k] * x[k] + p.sigma[k] * x[k] + p.zeta;  // F_i with x_j <- 0
        S G = Fj(x[k], absorbed / xi_new);
        S H = S(1) + p.sigma[i] / xi_new + p.delta[j] * x[k] / xi_new + absorbed / M;
        ok = ok && approx_equal<S>(G, absorbed * H, tol);
        ok = ok && approx_equal<S>(M * H, Fj(mutated[k], mutated[i]), tol);
    }
    {
        S absorbed = x[j] * x[j] + p.sigma[j] * x[j] + p.zeta;  // F_i with x_k <- 0
        S G = Fk(absorbed / xi_new, x[j]);
        S H = S(1) + p.sigma[i] / xi_new + p.delta[k] * x[j] / xi_new + absorbed / M;
        ok = ok && approx_equal<S>(G, absorbed * H, tol);
        ok = ok && approx_equal<S>(M * H, Fk(mutated[i], mutated[j]), tol);
    }
    return ok;
}

}  // namespace topography
