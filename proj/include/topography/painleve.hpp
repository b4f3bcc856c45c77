#pragma once

// The Painleve VI monodromy manifold
//   x1 x2 x3 + x1^2 + x2^2 + x3^2 - t1 x1 - t2 x2 - t3 x3 + t4 = 0
// with the braid action, squared braids and mutation pairs. Scalars are
// complex doubles; relations are checked to a relative tolerance.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "topography/errors.hpp"
#include "topography/master.hpp"
#include "topography/scalar.hpp"

namespace topography::pvi {

using Point = std::array<Complex, 3>;
using Theta = std::array<Complex, 4>;

/// Local monodromy data (a1, a2, a3, a_inf), optionally with the exponents it came from.
struct LocalData {
    std::array<Complex, 4> a{};
    std::optional<std::array<Complex, 4>> kappa;
};

/// a_i = 2 cos(pi k_i), a_inf = -2 cos(pi k_4).
inline LocalData a_from_kappa(const std::array<Complex, 4>& kappa) {
    LocalData d;
    const double pi = std::numbers::pi;
    for (int i = 0; i < 3; ++i) d.a[i] = 2.0 * std::cos(pi * kappa[i]);
    d.a[3] = -2.0 * std::cos(pi * kappa[3]);
    d.kappa = kappa;
    return d;
}

/// theta_i = a_i a_inf + a_j a_k; theta_4 = a1 a2 a3 a_inf + sum a^2 - 4.
inline Theta theta_from_a(const std::array<Complex, 4>& a) {
    Theta t;
    for (int i = 0; i < 3; ++i) t[i] = a[i] * a[3] + a[(i + 1) % 3] * a[(i + 2) % 3];
    t[3] = a[0] * a[1] * a[2] * a[3] + a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3] - 4.0;
    return t;
}

inline Complex residual(const Point& x, const Theta& t) {
    return x[0] * x[1] * x[2] + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - t[0] * x[0] - t[1] * x[1] - t[2] * x[2] + t[3];
}

/// Magnitude against which residuals and relation errors are measured.
inline double scale_of(const Point& x, const Theta& t) {
    double s = 1.0;
    for (const auto& v : x) s = std::max(s, std::abs(v) * std::abs(v) * std::abs(v));
    for (const auto& v : t) s = std::max(s, std::abs(v) * std::abs(v));
    return s;
}

/// Solves the manifold equation for x3; `branch` picks the sign of the square root.
inline Point sample_point(const Theta& t, Complex x1, Complex x2, bool branch) {
    Complex b = x1 * x2 - t[2];
    Complex c = x1 * x1 + x2 * x2 - t[0] * x1 - t[1] * x2 + t[3];
    Complex root = std::sqrt(b * b - 4.0 * c);
    Complex x3 = (-b + (branch ? root : -root)) / 2.0;
    return {x1, x2, x3};
}

namespace detail {

struct Slots {
    int i, j, k;
};

/// Zero-based (i, j, k), cyclic, with k the given 1-based index.
inline Slots around(int k) {
    if (k < 1 || k > 3) throw std::out_of_range("braid index must be 1, 2 or 3");
    int kk = k - 1;
    return {(kk + 1) % 3, (kk + 2) % 3, kk};
}

/// Zero-based (i, j, k), cyclic, with i the given 1-based index.
inline Slots from(int i) {
    if (i < 1 || i > 3) throw std::out_of_range("mutation index must be 1, 2 or 3");
    int ii = i - 1;
    return {ii, (ii + 1) % 3, (ii + 2) % 3};
}

}  // namespace detail

struct BraidResult {
    Point x;
    std::array<Complex, 4> a;
};

/// beta_k: x_i -> theta_j(a) - x_j - x_k x_i, x_j -> x_i, x_k fixed; a_i and a_j swap.
inline BraidResult braid(int k, const Point& x, const std::array<Complex, 4>& a) {
    auto [i, j, kk] = detail::around(k);
    Theta t = theta_from_a(a);
    BraidResult out{x, a};
    out.x[i] = t[j] - x[j] - x[kk] * x[i];
    out.x[j] = x[i];
    std::swap(out.a[i], out.a[j]);
    return out;
}

/// beta_k squared, with a unchanged.
inline Point braid_squared(int k, const Point& x, const std::array<Complex, 4>& a) {
    auto [i, j, kk] = detail::around(k);
    Theta t = theta_from_a(a);
    Point out = x;
    out[i] = t[i] - (1.0 - x[kk] * x[kk]) * x[i] - (t[j] - x[j]) * x[kk];
    out[j] = t[j] - x[j] - x[kk] * x[i];
    return out;
}

/// Polynomial mutation x_i -> theta_i - x_i - x_j x_k.
inline Point mutate(int i, const Point& x, const Theta& t) {
    auto [ii, j, k] = detail::from(i);
    Point out = x;
    out[ii] = t[ii] - x[ii] - x[j] * x[k];
    return out;
}

/// Rational mutation x_i -> (x_j^2 + x_k^2 - theta_j x_j - theta_k x_k + theta_4) / x_i,
/// equal to the polynomial one on the manifold.
inline Point mutate_rational(int i, const Point& x, const Theta& t) {
    auto [ii, j, k] = detail::from(i);
    if (x[ii] == Complex(0.0)) throw DivisionByZero("rational mutation at a zero coordinate");
    Point out = x;
    out[ii] = (x[j] * x[j] + x[k] * x[k] - t[j] * x[j] - t[k] * x[k] + t[3]) / x[ii];
    return out;
}

/// mu_i mu_j: mu_j first, then mu_i.
inline Point mu_pair(int i, int j, const Point& x, const Theta& t) { return mutate(i, mutate(j, x, t), t); }

/// Transposition of the 1-based slots a and b.
inline Point swap_slots(const Point& x, int a, int b) { return permute(x, Perm3::swap(a, b)); }

/// The master-cubic parameters with tau = -1, sigma = -theta, zeta = theta_4, delta = 0.
inline MasterParams<Complex> master_params(const Theta& t) { return params::pvi<Complex>(t); }

// ---------------------------------------------------------------------------
// Relation checks

inline double relative_error(const Point& a, const Point& b) {
    double scale = 1.0;
    double err = 0.0;
    for (int k = 0; k < 3; ++k) {
        scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
        err = std::max(err, std::abs(a[k] - b[k]));
    }
    return err / scale;
}

/// Largest relative error of each relation at one manifold point.
struct RelationReport {
    double residual = 0.0;          // |residual| / scale at the input point
    double braid_squares = 0.0;     // beta3^2 beta1^2 beta2^2 = id
    double mutation_pairs = 0.0;    // mu12 mu23 mu31 = id
    double swap_braid = 0.0;        // mu_j = (ij) beta_k
    double braid_square_pair = 0.0; // beta_k^2 = mu_i mu_j
    double involution = 0.0;        // mu_i mu_i = id, polynomial and rational
    double preservation = 0.0;      // residual after every generator

    double worst() const {
        return std::max({residual, braid_squares, mutation_pairs, swap_braid, braid_square_pair, involution, preservation});
    }
};

inline RelationReport check_relations(const Point& x, const std::array<Complex, 4>& a) {
    RelationReport r;
    Theta t = theta_from_a(a);
    auto rel_residual = [&](const Point& y, const Theta& th) { return std::abs(residual(y, th)) / scale_of(y, th); };
    r.residual = rel_residual(x, t);

    Point y = braid_squared(3, braid_squared(1, braid_squared(2, x, a), a), a);
    r.braid_squares = relative_error(y, x);

    y = mu_pair(1, 2, mu_pair(2, 3, mu_pair(3, 1, x, t), t), t);
    r.mutation_pairs = relative_error(y, x);

    for (int k = 1; k <= 3; ++k) {
        auto [i, j, kk] = detail::around(k);
        Point lhs = mutate(j + 1, x, t);
        Point rhs = swap_slots(braid(k, x, a).x, i + 1, j + 1);
        r.swap_braid = std::max(r.swap_braid, relative_error(lhs, rhs));
        r.braid_square_pair = std::max(r.braid_square_pair, relative_error(braid_squared(k, x, a), mu_pair(i + 1, j + 1, x, t)));
        (void)kk;
    }

    for (int i = 1; i <= 3; ++i) {
        r.involution = std::max(r.involution, relative_error(mutate(i, mutate(i, x, t), t), x));
        r.involution = std::max(r.involution, relative_error(mutate_rational(i, x, t), mutate(i, x, t)));
        r.preservation = std::max(r.preservation, rel_residual(mutate(i, x, t), t));
        BraidResult b = braid(i, x, a);
        r.preservation = std::max(r.preservation, rel_residual(b.x, theta_from_a(b.a)));
        r.preservation = std::max(r.preservation, rel_residual(braid_squared(i, x, a), t));
        for (int j = 1; j <= 3; ++j) {
            if (j != i) r.preservation = std::max(r.preservation, rel_residual(mu_pair(i, j, x, t), t));
        }
    }
    return r;
}

/// A random manifold point: a and (x1, x2) uniform in the unit disk, random branch.
struct Sample {
    std::array<Complex, 4> a;
    Point x;
};

inline Complex random_in_disk(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Complex z(u(rng), u(rng));
        if (std::norm(z) <= 1.0) return z;
    }
}

inline Sample random_sample(std::mt19937_64& rng) {
    Sample s;
    for (auto& v : s.a) v = random_in_disk(rng);
    Theta t = theta_from_a(s.a);
    s.x = sample_point(t, random_in_disk(rng), random_in_disk(rng), std::bernoulli_distribution(0.5)(rng));
    return s;
}

// ---------------------------------------------------------------------------
// Orbits

/// Points reachable from x by at most `depth` mutation pairs mu_ij (i != j),
/// identified when they agree to `tol` relative error.
inline std::vector<Point> orbit(const Point& x, const Theta& t, int depth, double tol = 1e-7) {
    std::vector<Point> found{x};
    std::vector<Point> frontier{x};
    auto known = [&](const Point& y) {
        for (const auto& f : found) {
            if (relative_error(f, y) <= tol) return true;
        }
        return false;
    };
    for (int level = 0; level < depth && !frontier.empty(); ++level) {
        std::vector<Point> next;
        for (const auto& p : frontier) {
            for (int i = 1; i <= 3; ++i) {
                for (int j = 1; j <= 3; ++j) {
                    if (i == j) continue;
                    Point y = mu_pair(i, j, p, t);
                    if (!known(y)) {
                        found.push_back(y);
                        next.push_back(y);
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return found;
}

}  // namespace topography::pvi
