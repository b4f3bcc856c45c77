#pragma once

// Binary quadratic forms as clusters of the discriminant equation: roots, the
// Farey walk toward the root, reduction by mutation, reduced-vertex
// classification, equivalence, and a greedy-descent oracle.
//
// A cluster (w, n, e) holds the values q(1,0), q(1,1), q(0,1), so the form is
// w x^2 + (n - w - e) xy + e y^2 and Delta = (n - w - e)^2 - 4we. Mutation uses
// Conway's parameters with zeta = -Delta.
//
// Most of the machinery is templated on the integer type so that bulk checks
// can run on std::int64_t; the public entry points use BigInt.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "topography/errors.hpp"
#include "topography/exact.hpp"
#include "topography/master.hpp"
#include "topography/snake.hpp"

namespace topography {

// ---------------------------------------------------------------------------
// Forms and roots

template <class Int>
Int cluster_discriminant(const Cluster<Int>& x) {
    Int b = x[1] - x[0] - x[2];
    return b * b - 4 * x[0] * x[2];
}

struct QuadForm {
    Cluster<BigInt> cluster;

    static QuadForm from_cluster(BigInt w, BigInt n, BigInt e) { return QuadForm{{std::move(w), std::move(n), std::move(e)}}; }
    /// a x^2 + b xy + c y^2.
    static QuadForm from_coefficients(const BigInt& a, const BigInt& b, const BigInt& c) {
        return QuadForm{{a, a + b + c, c}};
    }

    BigInt a() const { return cluster[0]; }
    BigInt b() const { return cluster[1] - cluster[0] - cluster[2]; }
    BigInt c() const { return cluster[2]; }

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

inline BigInt discriminant(const QuadForm& q) { return cluster_discriminant(q.cluster); }

/// Root (sqrt(Delta) - b) / 2a in the closed upper half-plane; -c/b when a = 0
/// and b > 0; nullopt (infinity) when a = 0 and b <= 0. For Delta < 0 the
/// conjugate is taken if needed so the imaginary part is positive.
template <class Int>
std::optional<BasicSurd<Int>> root_of(const Cluster<Int>& x) {
    const Int& a = x[0];
    Int b = x[1] - x[0] - x[2];
    const Int& c = x[2];
    if (a == 0) {
        if (b > 0) return BasicSurd<Int>::rational(Int(-c), b);
        return std::nullopt;
    }
    Int disc = b * b - 4 * a * c;
    BasicSurd<Int> z(Int(-b), Int(1), Int(2 * a), disc);
    if (disc < 0 && z.q < 0) z.q = -z.q;
    return z;
}

inline std::optional<Surd> root(const QuadForm& q) { return root_of(q.cluster); }

// ---------------------------------------------------------------------------
// The Farey walk

struct WalkResult {
    Word word;
    /// Last triangle apex, or the root itself when the root is a Farey vertex.
    Farey endpoint;
    bool terminated = true;
};

/// Descends the Stern-Brocot intervals toward z from (0/1, 1/0) after an
/// optional reflection (the S letter). Raw R enters (a, m), raw L enters
/// (m, b); the word body is the dual of the raw letters. nullopt means z is
/// infinity.
inline WalkResult farey_walk(const std::optional<Surd>& root, std::size_t max_steps = 10000) {
    WalkResult out;
    if (!root) {
        out.endpoint = Farey::infinity();
        return out;
    }
    Surd z = *root;
    if (chi(z) == 1) {
        out.word.has_s = true;
        z = z.reflected();
    }
    const bool rational = z.is_rational();
    Farey a(0, 1);
    Farey b = Farey::infinity();
    if (rational && z.as_fraction().num == 0) {
        out.endpoint = Farey(0, 1);
        return out;
    }
    Body raw;
    for (;;) {
        Farey m = mediant(a, b);
        if (rational && z.as_fraction() == m) {
            out.endpoint = m;
            break;
        }
        if (raw.size() >= max_steps) {
            out.endpoint = m;
            out.terminated = false;
            break;
        }
        if (inside_semicircle(z, a, m)) {
            raw.push_back(Letter::R);
            b = m;
        } else if (inside_semicircle(z, m, b)) {
            raw.push_back(Letter::L);
            a = m;
        } else {
            out.endpoint = m;
            break;
        }
    }
    out.word.body = dual(raw);
    if (out.word.has_s) out.endpoint = out.endpoint.negated();
    return out;
}

/// The same walk done incrementally: the root is carried back to the base
/// interval (0, infinity) after every letter (z -> z - 1 after L, z -> z/(1 - z)
/// after R), so its coefficients stay as small as the forms along the way.
template <class Int>
class RootWalker {
public:
    explicit RootWalker(const std::optional<BasicSurd<Int>>& root) {
        if (!root) {
            done_ = true;
            return;
        }
        z_ = *root;
        if (chi(z_) == 1) {
            has_s_ = true;
            z_ = z_.reflected();
        }
        rational_ = z_.is_rational();
        if (rational_) {
            // Drop the square root so the transform never meets the other root.
            BasicFarey<Int> f = z_.as_fraction();
            z_ = BasicSurd<Int>::rational(f.num, f.den);
            if (f.num == 0) done_ = true;
        }
    }

    bool has_s() const { return has_s_; }
    bool done() const { return done_; }
    const BasicSurd<Int>& state() const { return z_; }

    /// Next raw letter, or nullopt once the walk has stopped.
    std::optional<Letter> next_raw() {
        if (done_) return std::nullopt;
        using F = BasicFarey<Int>;
        static const F zero(Int(0), Int(1));
        static const F one(Int(1), Int(1));
        static const F infinity = F::infinity();
        if (rational_ && z_.as_fraction() == one) {
            done_ = true;
            return std::nullopt;
        }
        if (inside_semicircle(z_, zero, one)) {
            // z / (1 - z), rationalized.
            Int s = z_.r - z_.p;
            Int num_p = z_.p * s + z_.q * z_.q * z_.D;
            Int num_q = z_.q * z_.r;
            Int den = s * s - z_.q * z_.q * z_.D;
            z_ = BasicSurd<Int>(num_p, num_q, den, z_.D);
            return Letter::R;
        }
        if (inside_semicircle(z_, one, infinity)) {
            z_.p -= z_.r;  // still in lowest terms
            return Letter::L;
        }
        done_ = true;
        return std::nullopt;
    }

    friend bool operator==(const RootWalker&, const RootWalker&) = default;

private:
    BasicSurd<Int> z_;
    bool has_s_ = false;
    bool rational_ = false;
    bool done_ = false;
};

/// The walk toward an irrational real root, carried by the transformed form
/// (A, B, C) instead of the root: L takes the form to (A, 2A + B, A + B + C),
/// R to (A + B + C, B + 2C, C), and the root stays (-B + eps sqrt(Delta)) / 2A
/// with a fixed branch sign eps. No division is ever needed.
template <class Int>
class FormWalker {
public:
    explicit FormWalker(const Cluster<Int>& x)
        : a_(x[0]), b_(x[1] - x[0] - x[2]), c_(x[2]), disc_(b_ * b_ - 4 * a_ * c_) {
        if (a_ == 0 || disc_ <= 0 || detail::is_perfect_square(disc_)) {
            throw std::invalid_argument("form walker needs an irrational real root");
        }
        if (root_sign(b_, eps_) < 0) {
            has_s_ = true;
            b_ = -b_;
            eps_ = -eps_;
        }
    }

    bool has_s() const { return has_s_; }

    Letter next_raw() {
        if (root_sign(Int(b_ + 2 * a_), eps_) < 0) {
            Int a = a_ + b_ + c_;
            b_ += 2 * c_;
            a_ = a;
            return Letter::R;
        }
        Int c = a_ + b_ + c_;
        b_ += 2 * a_;
        c_ = c;
        return Letter::L;
    }

    /// True once the conjugate root is negative, i.e. the base edge separates
    /// the two roots and the walk runs along the river.
    bool on_river() const { return root_sign(b_, Int(-eps_)) < 0; }

    std::array<Int, 3> form() const { return {a_, b_, c_}; }

private:
    /// Sign of (-b + e sqrt(Delta)) / 2A.
    int root_sign(const Int& b, const Int& e) const { return detail::sign_of(a_) * detail::sign_of_sum_with_root(Int(-b), e, disc_); }

    Int a_, b_, c_, disc_;
    Int eps_{1};
    bool has_s_ = false;
};

/// Stateful letter-to-index scan: i starts at 2; S -> mu_i, L -> mu_{i-1},
/// R -> mu_{i+1}, and i becomes the emitted index.
struct MutationCursor {
    int current = 2;

    int next(Letter a) {
        if (a == Letter::L) current = (current + 1) % 3 + 1;
        if (a == Letter::R) current = current % 3 + 1;
        return current;
    }

    friend bool operator==(const MutationCursor&, const MutationCursor&) = default;
};

inline std::vector<int> word_to_mutations(const Word& word) {
    MutationCursor cursor;
    std::vector<int> out;
    if (word.has_s) out.push_back(cursor.next(Letter::S));
    for (Letter a : word.body) out.push_back(cursor.next(a));
    return out;
}

// ---------------------------------------------------------------------------
// Reduced vertices

enum class VertexKind { Well, Lake, LeftMouth, RightMouth, Lakeshore, BendCandidate, Ordinary };

inline std::string vertex_kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Well: return "well";
        case VertexKind::Lake: return "lake";
        case VertexKind::LeftMouth: return "left-mouth";
        case VertexKind::RightMouth: return "right-mouth";
        case VertexKind::Lakeshore: return "lakeshore";
        case VertexKind::BendCandidate: return "bend-candidate";
        case VertexKind::Ordinary: return "ordinary";
    }
    return "?";
}

namespace detail {

template <class Int>
int zero_count(const Cluster<Int>& x) {
    return int(x[0] == 0) + int(x[1] == 0) + int(x[2] == 0);
}

template <class Int>
int zero_slot(const Cluster<Int>& x) {
    for (int s = 0; s < 3; ++s) {
        if (x[s] == 0) return s;
    }
    return -1;
}

template <class Int>
bool mixed_signs(const Cluster<Int>& x) {
    bool pos = false;
    bool neg = false;
    for (const auto& v : x) {
        pos = pos || v > 0;
        neg = neg || v < 0;
    }
    return pos && neg;
}

/// Edge i (mutation of slot i) lies on the river iff the two faces it
/// separates have opposite signs.
template <class Int>
bool river_edge(const Cluster<Int>& x, int slot) {
    const Int& a = x[(slot + 1) % 3];
    const Int& b = x[(slot + 2) % 3];
    return (a > 0 && b < 0) || (a < 0 && b > 0);
}

template <class Int>
std::array<Int, 3> sorted(Cluster<Int> x) {
    std::sort(x.begin(), x.end());
    return x;
}

}  // namespace detail

/// Side of a mouth (one zero, opposite-sign companions) reached after a walk
/// of the given parity: left iff the entry cyclically after the zero is
/// positive, read in the start orientation (reversed after an odd walk). For a
/// weir vertex (two zeros) the one with the positive entry is left.
template <class Int>
bool is_left_mouth(const Cluster<Int>& x, bool odd) {
    if (detail::zero_count(x) == 2) {
        return x[0] + x[1] + x[2] > 0;
    }
    int z = detail::zero_slot(x);
    bool next_positive = x[(z + 1) % 3] > 0;
    return next_positive != odd;
}

/// Classification of a vertex of the discriminant-Delta topograph; `odd`
/// gives the orientation of the cluster relative to its start.
template <class Int>
VertexKind classify_vertex(const Cluster<Int>& x, const Int& disc, bool odd = false) {
    if (cluster_discriminant(x) != disc) {
        throw InconsistentDiscriminant("cluster does not solve the discriminant equation for " + detail::to_text(disc));
    }
    if (x[0] == 0 && x[1] == 0 && x[2] == 0) throw InconsistentDiscriminant("the zero cluster has no topograph");
    if (disc < 0) {
        auto p = params::conway<Int>(disc);
        for (int index = 1; index <= 3; ++index) {
            Int moved = local_rule(p, x, index)[index - 1];
            if (detail::abs_value(moved) < detail::abs_value(x[index - 1])) return VertexKind::Ordinary;
        }
        return VertexKind::Well;
    }
    int zeros = detail::zero_count(x);
    if (disc == 0) return zeros > 0 ? VertexKind::Lake : VertexKind::Ordinary;
    if (zeros == 2) return is_left_mouth(x, odd) ? VertexKind::LeftMouth : VertexKind::RightMouth;
    if (zeros == 1) {
        int z = detail::zero_slot(x);
        if (!detail::river_edge(x, z)) return VertexKind::Lakeshore;
        return is_left_mouth(x, odd) ? VertexKind::LeftMouth : VertexKind::RightMouth;
    }
    if (!detail::is_perfect_square(disc) && detail::mixed_signs(x)) return VertexKind::BendCandidate;
    return VertexKind::Ordinary;
}

// ---------------------------------------------------------------------------
// Reduction results

template <class Int>
struct WellVertex {
    Cluster<Int> vertex;
    bool odd = false;
};

template <class Int>
struct LakeVertex {
    Int m{0};
    Cluster<Int> vertex;
    bool odd = false;
};

template <class Int>
struct Mouth {
    Cluster<Int> vertex;
    bool odd = false;
};

template <class Int>
struct MouthPair {
    Mouth<Int> left;
    Mouth<Int> right;
};

/// Two adjacent river vertices across a sign-changing mutation of `slot`.
template <class Int>
struct Bend {
    Cluster<Int> before;
    Cluster<Int> after;
    int slot = 1;
};

template <class Int>
struct BendCycle {
    std::vector<Bend<Int>> cycle;
};

template <class Int>
using BasicReducedTuple = std::variant<WellVertex<Int>, LakeVertex<Int>, MouthPair<Int>, BendCycle<Int>>;

using ReducedTuple = BasicReducedTuple<BigInt>;

template <class Int>
std::string tuple_kind(const BasicReducedTuple<Int>& t) {
    static const char* names[] = {"well", "lake", "mouths", "bends"};
    return names[t.index()];
}

template <class Int>
struct BasicReductionLog {
    /// Letters consumed from the walk (the whole word when it is finite).
    Word word;
    std::vector<int> mutations;
    /// Start cluster followed by one cluster per mutation.
    std::vector<Cluster<Int>> clusters;
    /// Positions in `mutations` taken by the polynomial rule across a lake.
    std::vector<std::size_t> hops;
    /// True when the word ran into a zero entry and was cut short.
    bool halted = false;
};

using ReductionLog = BasicReductionLog<BigInt>;

template <class Int>
struct BasicReduction {
    BasicReducedTuple<Int> tuple;
    BasicReductionLog<Int> log;
};

using Reduction = BasicReduction<BigInt>;

struct ReduceOptions {
    /// Cap on letters plus mutations for one reduction.
    std::size_t max_steps = 1'000'000;
};

namespace detail {

template <class Int>
using BendKey = std::pair<std::array<Int, 3>, std::array<Int, 3>>;

template <class Int>
BendKey<Int> bend_key(const Bend<Int>& b) {
    return {sorted(b.before), sorted(b.after)};
}

/// Shortest prefix whose repetition gives the whole cycle.
template <class Int>
std::vector<Bend<Int>> primitive_cycle(const std::vector<Bend<Int>>& bends) {
    const std::size_t n = bends.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (std::size_t k = 0; k + d < n && periodic; ++k) periodic = bend_key(bends[k]) == bend_key(bends[k + d]);
        if (periodic) return {bends.begin(), bends.begin() + static_cast<std::ptrdiff_t>(d)};
    }
    return bends;
}

template <class T>
bool equal_up_to_rotation(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (std::size_t shift = 0; shift < a.size(); ++shift) {
        bool same = true;
        for (std::size_t k = 0; k < a.size() && same; ++k) same = a[k] == b[(k + shift) % b.size()];
        if (same) return true;
    }
    return false;
}

template <class Int>
std::vector<BendKey<Int>> bend_keys(const BendCycle<Int>& c) {
    std::vector<BendKey<Int>> out;
    for (const auto& b : c.cycle) out.push_back(bend_key(b));
    return out;
}

/// The cycle traversed the other way round.
template <class Int>
std::vector<BendKey<Int>> reversed_keys(std::vector<BendKey<Int>> keys) {
    std::reverse(keys.begin(), keys.end());
    for (auto& k : keys) std::swap(k.first, k.second);
    return keys;
}

}  // namespace detail

/// Oriented: the ordered topograph (mouth sides fixed, bend cycles up to
/// rotation). Unoriented: orientation flips allowed as well, which swap the
/// mouth sides and read bend cycles backwards.
enum class TupleSymmetry { Oriented, Unoriented };

/// Equality of reduced tuples up to their symmetry; vertices compare as value sets.
template <class Int>
bool same_tuple(const BasicReducedTuple<Int>& a, const BasicReducedTuple<Int>& b,
                TupleSymmetry symmetry = TupleSymmetry::Oriented) {
    if (a.index() != b.index()) return false;
    using detail::sorted;
    const bool flips = symmetry == TupleSymmetry::Unoriented;
    if (auto* w = std::get_if<WellVertex<Int>>(&a)) return sorted(w->vertex) == sorted(std::get<WellVertex<Int>>(b).vertex);
    if (auto* l = std::get_if<LakeVertex<Int>>(&a)) return l->m == std::get<LakeVertex<Int>>(b).m;
    if (auto* m = std::get_if<MouthPair<Int>>(&a)) {
        const auto& o = std::get<MouthPair<Int>>(b);
        auto L = sorted(m->left.vertex);
        auto R = sorted(m->right.vertex);
        if (L == sorted(o.left.vertex) && R == sorted(o.right.vertex)) return true;
        return flips && L == sorted(o.right.vertex) && R == sorted(o.left.vertex);
    }
    auto ka = detail::bend_keys(std::get<BendCycle<Int>>(a));
    auto kb = detail::bend_keys(std::get<BendCycle<Int>>(b));
    if (detail::equal_up_to_rotation(ka, kb)) return true;
    return flips && detail::equal_up_to_rotation(ka, detail::reversed_keys(kb));
}

// ---------------------------------------------------------------------------
// Canonical reduced clusters

namespace detail {

template <class Int>
Cluster<Int> rotated(const Cluster<Int>& x, int shift) {
    return {x[(0 + shift) % 3], x[(1 + shift) % 3], x[(2 + shift) % 3]};
}

template <class Int>
Cluster<Int> outer_swap(const Cluster<Int>& x) {
    return {x[2], x[1], x[0]};
}

/// U (if odd) then the rotation bringing the slot chosen by `pick` to the middle.
template <class Int, class Pick>
Cluster<Int> oriented_with_middle(Cluster<Int> x, bool odd, Pick pick) {
    if (odd) x = outer_swap(x);
    std::optional<Cluster<Int>> best;
    for (int shift = 0; shift < 3; ++shift) {
        Cluster<Int> y = rotated(x, shift);
        if (pick(y) && (!best || y < *best)) best = y;
    }
    return *best;
}

}  // namespace detail

/// Well: maximum rotated to the middle, then U if the walk was odd. Lake:
/// (m, 0, m). Mouths: (-, 0, +) for the left and (+, 0, -) for the right.
/// Bends: (-, z', +) with z' the value created by each sign change.
///
/// Ties are broken by the smallest triple. A well whose mutation leaves a
/// value unchanged sits next to a second well with the same values and the
/// opposite orientation; both orientations are candidates then.
template <class Int>
std::vector<Cluster<Int>> canonical_reduced_clusters(const BasicReducedTuple<Int>& t) {
    if (auto* w = std::get_if<WellVertex<Int>>(&t)) {
        const Cluster<Int>& x = w->vertex;
        Int mx = *std::max_element(x.begin(), x.end());
        auto max_middle = [&](const Cluster<Int>& c) { return c[1] == mx; };
        auto y = detail::oriented_with_middle(x, w->odd, max_middle);
        auto p = params::conway<Int>(cluster_discriminant(x));
        for (int index = 1; index <= 3; ++index) {
            if (local_rule(p, x, index) == x) {
                y = std::min(y, detail::oriented_with_middle(x, !w->odd, max_middle));
                break;
            }
        }
        return {y};
    }
    if (auto* l = std::get_if<LakeVertex<Int>>(&t)) return {{l->m, Int(0), l->m}};
    if (auto* m = std::get_if<MouthPair<Int>>(&t)) {
        auto zero_middle = [](const Cluster<Int>& c) { return c[1] == 0 && !(c[2] == 0); };
        auto left = detail::oriented_with_middle(m->left.vertex, m->left.odd, zero_middle);
        auto right = detail::oriented_with_middle(m->right.vertex, m->right.odd, zero_middle);
        return {left, right};
    }
    std::vector<Cluster<Int>> out;
    for (const auto& b : std::get<BendCycle<Int>>(t).cycle) {
        int s = b.slot - 1;
        const Int& u = b.after[(s + 1) % 3];
        const Int& v = b.after[(s + 2) % 3];
        out.push_back({std::min(u, v), b.after[s], std::max(u, v)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reduction

namespace detail {

template <class Int>
class Reducer {
public:
    Reducer(const Cluster<Int>& start, const ReduceOptions& opt)
        : disc_(cluster_discriminant(start)), p_(params::conway<Int>(disc_)), opt_(opt), x_(start) {
        log_.clusters.push_back(start);
    }

    BasicReduction<Int> run() {
        if (x_[0] == 0 && x_[1] == 0 && x_[2] == 0) {
            throw InconsistentDiscriminant("the zero cluster is not a form to reduce");
        }
        if (disc_ > 0 && !is_perfect_square(disc_)) return run_river();

        RootWalker<Int> walker(root_of(x_));
        log_.word.has_s = walker.has_s();
        Body raw;
        while (auto a = walker.next_raw()) {
            raw.push_back(*a);
            if (raw.size() > opt_.max_steps) throw TooLarge("walk exceeded the step cap");
        }
        log_.word.body = dual(raw);
        std::vector<int> indices = word_to_mutations(log_.word);

        if (disc_ < 0) {
            for (int index : indices) step(index);
            return finish(WellVertex<Int>{x_, odd()});
        }
        if (disc_ == 0) {
            for (int index : indices) {
                if (zero_count(x_) > 0) break;
                step(index);
            }
            int z = zero_slot(x_);
            if (z < 0) throw std::logic_error("walk ended away from the lake");
            return finish(LakeVertex<Int>{x_[(z + 1) % 3], x_, odd()});
        }
        for (int index : indices) {
            if (x_[index - 1] == 0) {
                log_.halted = true;
                break;
            }
            step(index);
        }
        if (zero_count(x_) == 0) throw std::logic_error("walk ended away from both lakes");
        return finish(mouths());
    }

private:
    bool odd() const { return log_.mutations.size() % 2 == 1; }

    void step(int index) {
        x_ = mutate(p_, x_, index);
        log_.mutations.push_back(index);
        log_.clusters.push_back(x_);
    }

    void hop(int index) {
        x_ = local_rule(p_, x_, index);
        log_.hops.push_back(log_.mutations.size());
        log_.mutations.push_back(index);
        log_.clusters.push_back(x_);
    }

    BasicReduction<Int> finish(BasicReducedTuple<Int> t) { return {std::move(t), std::move(log_)}; }

    MouthPair<Int> mouths() {
        int z = zero_slot(x_);
        // Walk the lakeshore toward the sign change by shrinking the larger
        // companion; the shore may instead end at the other lake (a weir).
        while (zero_count(x_) == 1 && !river_edge(x_, z)) {
            int j = (z + 1) % 3;
            int k = (z + 2) % 3;
            step((abs_value(x_[j]) >= abs_value(x_[k]) ? j : k) + 1);
            if (log_.mutations.size() > opt_.max_steps) throw TooLarge("lakeshore descent exceeded the step cap");
        }
        if (zero_count(x_) == 2) {
            // Weir: the river has length zero; the single nonzero slot leads across.
            Mouth<Int> first{x_, odd()};
            int s = 0;
            while (x_[s] == 0) ++s;
            step(s + 1);
            return pair(first, Mouth<Int>{x_, odd()});
        }
        Mouth<Int> first{x_, odd()};
        hop(z + 1);
        int arrival = z;
        while (zero_count(x_) == 0) {
            int next = -1;
            for (int s = 0; s < 3; ++s) {
                if (s != arrival && river_edge(x_, s)) next = s;
            }
            if (next < 0) throw std::logic_error("river lost between the mouths");
            step(next + 1);
            arrival = next;
            if (log_.mutations.size() > opt_.max_steps) throw TooLarge("river walk exceeded the step cap");
        }
        return pair(first, Mouth<Int>{x_, odd()});
    }

    static MouthPair<Int> pair(const Mouth<Int>& a, const Mouth<Int>& b) {
        bool a_left = is_left_mouth(a.vertex, a.odd);
        bool b_left = is_left_mouth(b.vertex, b.odd);
        if (a_left == b_left) throw std::logic_error("both mouths fall on the same side");
        return a_left ? MouthPair<Int>{a, b} : MouthPair<Int>{b, a};
    }

    /// Nonsquare Delta > 0: the word is infinite and eventually follows the
    /// river periodically; the sign-changing mutations of one period are the
    /// bends.
    BasicReduction<Int> run_river() {
        FormWalker<Int> walker(x_);
        MutationCursor cursor;
        bool flip = true;  // whether the next raw letter is flipped by the dual
        log_.word.has_s = walker.has_s();
        std::vector<std::pair<std::size_t, Bend<Int>>> bends;

        auto mutate_and_record = [&](int index) {
            Cluster<Int> before = x_;
            step(index);
            if (sign_of(before[index - 1]) != sign_of(x_[index - 1])) {
                if (x_[index - 1] == 0) throw std::logic_error("zero on a nonsquare river");
                bends.emplace_back(log_.mutations.size(), Bend<Int>{before, x_, index});
            }
        };
        auto advance = [&] {
            Letter raw = walker.next_raw();
            Letter body = flip ? flipped(raw) : raw;
            flip = !flip;
            log_.word.body.push_back(body);
            mutate_and_record(cursor.next(body));
        };
        auto check_cap = [&] {
            if (log_.mutations.size() > opt_.max_steps) throw TooLarge("river period not found within the step cap");
        };

        // Once on the river the walk is purely periodic, and the transformed
        // form fixes everything that follows, so its first return closes a period.
        if (log_.word.has_s) mutate_and_record(cursor.next(Letter::S));
        while (!walker.on_river()) {
            advance();
            check_cap();
        }
        const auto anchor = walker.form();
        std::size_t lambda = 0;
        do {
            advance();
            ++lambda;
            check_cap();
        } while (walker.form() != anchor);
        const std::size_t end = log_.mutations.size();
        const std::size_t begin = end - lambda;
        std::vector<Bend<Int>> period;
        for (const auto& [at, bend] : bends) {
            if (at > begin && at <= end) period.push_back(bend);
        }
        if (period.empty()) throw std::logic_error("river period without bends");
        return finish(BendCycle<Int>{primitive_cycle(period)});
    }

    Int disc_;
    MasterParams<Int> p_;
    ReduceOptions opt_;
    Cluster<Int> x_;
    BasicReductionLog<Int> log_;
};

}  // namespace detail

/// Reduction of the form with cluster `start` by mutations along the walk
/// toward its root.
template <class Int>
BasicReduction<Int> reduce_cluster(const Cluster<Int>& start, const ReduceOptions& opt = {}) {
    return detail::Reducer<Int>(start, opt).run();
}

inline Reduction reduce(const QuadForm& q, const ReduceOptions& opt = {}) { return reduce_cluster(q.cluster, opt); }

/// Same discriminant and same reduced tuple up to orientation flips.
inline bool equivalent(const QuadForm& q1, const QuadForm& q2) {
    if (discriminant(q1) != discriminant(q2)) return false;
    return same_tuple(reduce(q1).tuple, reduce(q2).tuple, TupleSymmetry::Unoriented);
}

/// Equivalent with equal canonical reduced clusters (bends up to rotation).
inline bool strict_equivalent(const QuadForm& q1, const QuadForm& q2) {
    if (discriminant(q1) != discriminant(q2)) return false;
    Reduction r1 = reduce(q1);
    Reduction r2 = reduce(q2);
    if (!same_tuple(r1.tuple, r2.tuple, TupleSymmetry::Unoriented)) return false;
    auto c1 = canonical_reduced_clusters(r1.tuple);
    auto c2 = canonical_reduced_clusters(r2.tuple);
    if (std::holds_alternative<BendCycle<BigInt>>(r1.tuple)) return detail::equal_up_to_rotation(c1, c2);
    return c1 == c2;
}

// ---------------------------------------------------------------------------
// Greedy-descent oracle

namespace detail {

/// Polynomial-rule walk along the river from `x` (just entered through
/// `arrival`) until a vertex containing zero. `steps` counts edges from the
/// original start.
template <class Int>
Mouth<Int> follow_river_to_lake(const MasterParams<Int>& p, Cluster<Int> x, int arrival, std::size_t steps) {
    while (zero_count(x) == 0) {
        int next = -1;
        for (int s = 0; s < 3; ++s) {
            if (s != arrival && river_edge(x, s)) next = s;
        }
        if (next < 0) throw std::logic_error("oracle lost the river");
        x = local_rule(p, x, next + 1);
        arrival = next;
        ++steps;
    }
    return {x, steps % 2 == 1};
}

}  // namespace detail

/// Independent reduction: climb down by the polynomial rule while some move
/// shrinks the moved entry (largest drop first), then read off the reduced
/// vertices around the stopping point.
template <class Int>
BasicReducedTuple<Int> oracle_reduce_cluster(const Cluster<Int>& start) {
    using namespace detail;
    if (start[0] == 0 && start[1] == 0 && start[2] == 0) throw InconsistentDiscriminant("the zero cluster");
    const Int disc = cluster_discriminant(start);
    const auto p = params::conway<Int>(disc);
    Cluster<Int> x = start;
    std::size_t steps = 0;
    for (;;) {
        int best = -1;
        Int best_drop = 0;
        for (int s = 0; s < 3; ++s) {
            Int moved = local_rule(p, x, s + 1)[s];
            Int drop = abs_value(x[s]) - abs_value(moved);
            if (drop > best_drop) {
                best = s;
                best_drop = drop;
            }
        }
        if (best < 0) break;
        x = local_rule(p, x, best + 1);
        ++steps;
    }
    const bool odd = steps % 2 == 1;

    if (disc < 0) return WellVertex<Int>{x, odd};
    if (disc == 0) {
        int z = zero_slot(x);
        if (z < 0) throw std::logic_error("oracle descent missed the lake");
        return LakeVertex<Int>{x[(z + 1) % 3], x, odd};
    }
    if (is_perfect_square(disc)) {
        auto ordered = [](const Mouth<Int>& a, const Mouth<Int>& b) {
            bool a_left = is_left_mouth(a.vertex, a.odd);
            if (a_left == is_left_mouth(b.vertex, b.odd)) throw std::logic_error("oracle mouths on one side");
            return a_left ? MouthPair<Int>{a, b} : MouthPair<Int>{b, a};
        };
        int zeros = zero_count(x);
        if (zeros == 2) {
            int s = 0;
            while (x[s] == 0) ++s;
            return ordered({x, odd}, {local_rule(p, x, s + 1), !odd});
        }
        if (zeros == 1) {
            int z = zero_slot(x);
            if (!river_edge(x, z)) throw std::logic_error("oracle stopped on a lakeshore");
            Mouth<Int> here{x, odd};
            return ordered(here, follow_river_to_lake(p, local_rule(p, x, z + 1), z, steps + 1));
        }
        std::vector<int> exits;
        for (int s = 0; s < 3; ++s) {
            if (river_edge(x, s)) exits.push_back(s);
        }
        if (exits.size() != 2) throw std::logic_error("oracle stopped off the river");
        Mouth<Int> a = follow_river_to_lake(p, local_rule(p, x, exits[0] + 1), exits[0], steps + 1);
        Mouth<Int> b = follow_river_to_lake(p, local_rule(p, x, exits[1] + 1), exits[1], steps + 1);
        return ordered(a, b);
    }

    // Nonsquare: go round the river once, collecting sign changes. The first
    // edge is the one with the positive face on its left in the start
    // orientation, which is the direction the walk toward the root takes.
    if (!mixed_signs(x)) throw std::logic_error("oracle stopped off the river");
    int arrival = -1;
    for (int s = 0; s < 3; ++s) {
        if (river_edge(x, s) && (x[(s + 1) % 3] > 0) == odd) arrival = s;
    }
    if (arrival < 0) throw std::logic_error("oracle found no river edge");
    // The river walk is a permutation of finitely many states, so it comes
    // back to where it started; that may take a few periods before the slot
    // labels line up again, which primitive_cycle undoes.
    const Cluster<Int> x0 = x;
    const int arrival0 = arrival;
    std::vector<Bend<Int>> period;
    do {
        int next = -1;
        for (int s = 0; s < 3 && next < 0; ++s) {
            if (s != arrival && river_edge(x, s)) next = s;
        }
        Cluster<Int> before = x;
        x = local_rule(p, x, next + 1);
        if (sign_of(before[next]) != sign_of(x[next])) period.push_back(Bend<Int>{before, x, next + 1});
        arrival = next;
    } while (!(x == x0 && arrival == arrival0));
    return BendCycle<Int>{primitive_cycle(period)};
}

inline ReducedTuple oracle_reduce(const QuadForm& q) { return oracle_reduce_cluster(q.cluster); }

}  // namespace topography
