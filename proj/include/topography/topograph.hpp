#pragma once

// The topograph as exchange graph: the PGL2(Z) generators acting by cluster
// transformations, their 2x2 matrix images, walks and breadth-first
// enumeration with DOT export.

#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "topography/exact.hpp"
#include "topography/master.hpp"

namespace topography {

/// 2x2 integer matrix [[r, t], [s, u]] acting on forms by x -> r x + t y, y -> s x + u y.
struct Mat2 {
    BigInt r{1}, t{0}, s{0}, u{1};

    static Mat2 identity() { return {}; }
    BigInt det() const { return r * u - t * s; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.r * b.r + a.t * b.s, a.r * b.t + a.t * b.u, a.s * b.r + a.u * b.s, a.s * b.t + a.u * b.u};
    }
    Mat2 negated() const { return {-r, -t, -s, -u}; }
    /// Equality in PGL2(Z), i.e. up to an overall sign.
    bool projectively_equal(const Mat2& o) const { return *this == o || *this == o.negated(); }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.r << "," << m.t << "],[" << m.s << "," << m.u << "]]";
}

enum class Generator { S, T, U, E, V, V2, Mu1, Mu2, Mu3 };

inline Mat2 matrix_of(Generator g) {
    switch (g) {
        case Generator::S: return {-1, 0, 0, 1};
        case Generator::T: return {-1, 1, 0, 1};
        case Generator::U: return {0, 1, 1, 0};
        case Generator::E: return {0, -1, 1, 0};
        case Generator::V: return {0, 1, -1, 1};
        case Generator::V2: return {-1, 1, -1, 0};
        case Generator::Mu1: return {1, 0, 2, -1};
        case Generator::Mu2: return {-1, 0, 0, 1};
        case Generator::Mu3: return {-1, 2, 0, 1};
    }
    throw std::logic_error("unknown generator");
}

inline std::string generator_name(Generator g) {
    switch (g) {
        case Generator::S: return "S";
        case Generator::T: return "T";
        case Generator::U: return "U";
        case Generator::E: return "E";
        case Generator::V: return "V";
        case Generator::V2: return "V2";
        case Generator::Mu1: return "mu1";
        case Generator::Mu2: return "mu2";
        case Generator::Mu3: return "mu3";
    }
    return "?";
}

inline Generator mutation_generator(int index) {
    switch (index) {
        case 1: return Generator::Mu1;
        case 2: return Generator::Mu2;
        case 3: return Generator::Mu3;
    }
    throw std::out_of_range("mutation index must be 1, 2 or 3");
}

/// Cluster action: S -> mu2, T -> (23), U -> (13), E -> (13) mu2, V -> (123).
template <class S>
Cluster<S> apply(const MasterParams<S>& p, const Cluster<S>& x, Generator g) {
    switch (g) {
        case Generator::S:
        case Generator::Mu2: return mutate(p, x, 2);
        case Generator::Mu1: return mutate(p, x, 1);
        case Generator::Mu3: return mutate(p, x, 3);
        case Generator::T: return permute(x, Perm3::swap(2, 3));
        case Generator::U: return permute(x, Perm3::swap(1, 3));
        case Generator::E: return permute(mutate(p, x, 2), Perm3::swap(1, 3));
        case Generator::V: return permute(x, Perm3::cycle());
        case Generator::V2: return permute(permute(x, Perm3::cycle()), Perm3::cycle());
    }
    throw std::logic_error("unknown generator");
}

template <class S>
struct Walk {
    std::vector<Generator> generators;
    Cluster<S> start;
};

/// Ordered product of the generator matrices, in application order.
template <class S>
Mat2 walk_matrix(const Walk<S>& walk) {
    Mat2 m;
    for (Generator g : walk.generators) m = m * matrix_of(g);
    return m;
}

template <class S>
Cluster<S> walk_end(const MasterParams<S>& p, const Walk<S>& walk) {
    Cluster<S> x = walk.start;
    for (Generator g : walk.generators) x = apply(p, x, g);
    return x;
}

/// Integer coefficients (a, b, c) of a x^2 + b xy + c y^2.
struct FormCoefficients {
    BigInt a, b, c;
    friend bool operator==(const FormCoefficients&, const FormCoefficients&) = default;
};

/// The unique form with q(1,0) = w, q(1,1) = n, q(0,1) = e.
inline FormCoefficients form_of_cluster(const Cluster<BigInt>& x) { return {x[0], x[1] - x[0] - x[2], x[2]}; }

inline Cluster<BigInt> cluster_of_form(const FormCoefficients& f) { return {f.a, f.a + f.b + f.c, f.c}; }

/// q o M: substitute x -> r x + t y, y -> s x + u y.
inline FormCoefficients compose(const FormCoefficients& q, const Mat2& m) {
    return {q.a * m.r * m.r + q.b * m.r * m.s + q.c * m.s * m.s,
            2 * q.a * m.r * m.t + q.b * (m.r * m.u + m.t * m.s) + 2 * q.c * m.s * m.u,
            q.a * m.t * m.t + q.b * m.t * m.u + q.c * m.u * m.u};
}

/// True iff q_start o M equals q_end, with M the walk matrix.
inline bool verify_walk(const MasterParams<BigInt>& p, const Walk<BigInt>& walk) {
    Mat2 m = walk_matrix(walk);
    if (detail::abs_value(m.det()) != 1) return false;
    Cluster<BigInt> end = walk_end(p, walk);
    return compose(form_of_cluster(walk.start), m) == form_of_cluster(end);
}

// ---------------------------------------------------------------------------
// Breadth-first enumeration

template <class S>
struct TopographPiece {
    std::set<Cluster<S>> clusters;
    /// Undirected mutation edges (from < to) with their mutation index.
    std::set<std::tuple<Cluster<S>, Cluster<S>, int>> edges;
    /// Number of attempted mutations skipped because the entry was zero.
    std::size_t pruned = 0;

    std::set<S> values() const {
        std::set<S> out;
        for (const auto& c : clusters) out.insert(c.begin(), c.end());
        return out;
    }
};

/// All ordered clusters reachable from `start` by at most `depth` mutations.
template <class S>
TopographPiece<S> bfs(const MasterParams<S>& p, const Cluster<S>& start, int depth) {
    TopographPiece<S> out;
    out.clusters.insert(start);
    std::vector<Cluster<S>> frontier{start};
    for (int level = 0; level < depth && !frontier.empty(); ++level) {
        std::vector<Cluster<S>> next;
        for (const auto& x : frontier) {
            for (int index = 1; index <= 3; ++index) {
                if (is_zero(x[index - 1])) {
                    ++out.pruned;
                    continue;
                }
                Cluster<S> y = mutate(p, x, index);
                out.edges.emplace(std::min(x, y), std::max(x, y), index);
                if (out.clusters.insert(y).second) next.push_back(y);
            }
        }
        frontier = std::move(next);
    }
    return out;
}

namespace detail {
template <class S>
std::string cluster_label(const Cluster<S>& c) {
    std::ostringstream os;
    os << "(" << c[0] << "," << c[1] << "," << c[2] << ")";
    return os.str();
}
}  // namespace detail

/// Graphviz text; nodes in lexicographic cluster order, edges labeled by index.
template <class S>
std::string to_dot(const TopographPiece<S>& piece) {
    std::map<Cluster<S>, std::size_t> ids;
    std::ostringstream os;
    os << "graph topograph {\n";
    for (const auto& c : piece.clusters) {
        std::size_t id = ids.size();
        ids.emplace(c, id);
        os << "  n" << id << " [label=\"" << detail::cluster_label(c) << "\"];\n";
    }
    for (const auto& [a, b, index] : piece.edges) {
        os << "  n" << ids.at(a) << " -- n" << ids.at(b) << " [label=\"" << index << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace topography
