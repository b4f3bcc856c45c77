#pragma once

// Words over {L,R} (with an optional leading S), snake graphs of diamond
// tiles, rattles, perfect-matching counts and the rattlesnake <-> Q bijection.
//
// Tiles live on the unit-square lattice, which is the diamond picture turned
// by 45 degrees: the square's top, right, bottom and left sides are the
// diamond's NW, NE, SE and SW sides. Positive words grow northward (L glues
// at NW, R at NE); words with a leading S are mirrored in the horizontal
// diamond axis and grow southward from G0.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topography/errors.hpp"
#include "topography/exact.hpp"

namespace topography {

enum class Letter : char { L = 'L', R = 'R', S = 'S' };

inline Letter flipped(Letter a) {
    if (a == Letter::S) throw SInBody("S has no opposite letter");
    return a == Letter::L ? Letter::R : Letter::L;
}

using Body = std::vector<Letter>;

inline std::string to_string(const Body& body) {
    std::string s;
    for (Letter a : body) s.push_back(static_cast<char>(a));
    return s;
}

inline void require_lr(const Body& w) {
    if (std::find(w.begin(), w.end(), Letter::S) != w.end()) {
        throw SInBody("word " + to_string(w) + " contains S outside the prefix");
    }
}

/// Every letter flipped.
inline Body opposite(const Body& w) {
    require_lr(w);
    Body out;
    out.reserve(w.size());
    for (Letter a : w) out.push_back(flipped(a));
    return out;
}

/// Letters at odd (1st, 3rd, ...) positions flipped.
inline Body dual(const Body& w) {
    require_lr(w);
    Body out = w;
    for (std::size_t k = 0; k < out.size(); k += 2) out[k] = flipped(out[k]);
    return out;
}

inline Body codual(const Body& w) { return dual(opposite(w)); }

/// A snake-graph word: optional leading S, then a body over {L,R}.
struct Word {
    bool has_s = false;
    Body body;

    static Word parse(std::string_view text) {
        Word w;
        std::size_t k = 0;
        if (!text.empty() && text[0] == 'S') {
            w.has_s = true;
            k = 1;
        }
        for (; k < text.size(); ++k) {
            char c = text[k];
            if (c == 'L' || c == 'R') {
                w.body.push_back(static_cast<Letter>(c));
            } else if (c == 'S') {
                throw SInBody("S may only lead a word: " + std::string(text));
            } else {
                throw ParseError("unexpected letter '" + std::string(1, c) + "' in word " + std::string(text));
            }
        }
        return w;
    }

    std::string to_string() const { return (has_s ? "S" : "") + topography::to_string(body); }

    friend bool operator==(const Word&, const Word&) = default;
};

// ---------------------------------------------------------------------------
// Fractions and words

/// Replays the Stern-Brocot descent driven by dual(body): raw L moves to the
/// right subinterval (m, b), raw R to the left one (a, m). Returns the final
/// mediant, negated when the word carries S. The empty body gives 1/1.
inline Farey word_to_fraction(const Word& word) {
    Farey a(0, 1);
    Farey b = Farey::infinity();
    for (Letter raw : dual(word.body)) {
        Farey m = mediant(a, b);
        if (raw == Letter::R) {
            b = m;
        } else {
            a = m;
        }
    }
    Farey m = mediant(a, b);
    return word.has_s ? m.negated() : m;
}

/// Word of a nonzero finite fraction: S for negatives, then the dual of the
/// Stern-Brocot path to |q|.
inline Word fraction_to_word(const Farey& q) {
    if (q.is_infinite() || q.num == 0) throw std::invalid_argument("0 and infinity have no tile word");
    Word w;
    w.has_s = q.num < 0;
    Farey target(w.has_s ? BigInt(-q.num) : q.num, q.den);
    Farey a(0, 1);
    Farey b = Farey::infinity();
    Body raw;
    for (;;) {
        Farey m = mediant(a, b);
        if (m == target) break;
        if (target < m) {
            raw.push_back(Letter::R);
            b = m;
        } else {
            raw.push_back(Letter::L);
            a = m;
        }
    }
    w.body = dual(raw);
    return w;
}

// ---------------------------------------------------------------------------
// Snake graphs

enum class Side { NW, NE, SE, SW };

inline bool is_northern(Side s) { return s == Side::NW || s == Side::NE; }
inline bool is_western(Side s) { return s == Side::NW || s == Side::SW; }

inline std::string side_name(Side s) {
    switch (s) {
        case Side::NW: return "NW";
        case Side::NE: return "NE";
        case Side::SE: return "SE";
        case Side::SW: return "SW";
    }
    return "?";
}

struct LatticePoint {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct GraphEdge {
    std::size_t u = 0;
    std::size_t v = 0;
};

struct SnakeGraph {
    /// Lower-left lattice corner of each tile G0..G_{n-1}.
    std::vector<LatticePoint> tiles;
    /// Gluing letter from tile k to tile k+1.
    Body gluings;
    bool southward = false;
    std::vector<LatticePoint> vertices;
    std::vector<GraphEdge> edges;

    std::size_t degree(std::size_t vertex) const {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(),
                                                      [&](const GraphEdge& e) { return e.u == vertex || e.v == vertex; }));
    }

    std::size_t vertex_id(LatticePoint p) const {
        auto it = std::find(vertices.begin(), vertices.end(), p);
        if (it == vertices.end()) throw std::out_of_range("no such snake-graph vertex");
        return static_cast<std::size_t>(it - vertices.begin());
    }

    /// Edge id of a tile side.
    std::size_t side_edge(std::size_t tile, Side side) const {
        auto [a, b] = side_corners(tiles.at(tile), side);
        std::size_t u = vertex_id(a);
        std::size_t v = vertex_id(b);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if ((edges[k].u == u && edges[k].v == v) || (edges[k].u == v && edges[k].v == u)) return k;
        }
        throw std::out_of_range("no such snake-graph edge");
    }

    static std::pair<LatticePoint, LatticePoint> side_corners(LatticePoint t, Side side) {
        switch (side) {
            case Side::NW: return {{t.x, t.y + 1}, {t.x + 1, t.y + 1}};
            case Side::NE: return {{t.x + 1, t.y}, {t.x + 1, t.y + 1}};
            case Side::SE: return {{t.x, t.y}, {t.x + 1, t.y}};
            case Side::SW: return {{t.x, t.y}, {t.x, t.y + 1}};
        }
        return {};
    }
};

enum class NorthSouth { Northern, Southern };
enum class EastWest { Eastern, Western };

struct Rattlesnake {
    SnakeGraph graph;
    std::size_t rattle = 0;
    NorthSouth ns = NorthSouth::Southern;
    EastWest ew = EastWest::Western;
    /// Zero tiles: the graph is a single tilted edge (0 eastern, infinity western).
    bool degenerate = false;
    /// W(G, e): the word read from the tile hosting the rattle.
    Word word;
};

/// Snake graph and rattle of a word. The rattle sits on G0 opposite its
/// gluing side: southern for positive words, northern for S-words.
inline Rattlesnake build_graph(const Word& word) {
    require_lr(word.body);
    Rattlesnake rs;
    rs.word = word;
    SnakeGraph& g = rs.graph;
    g.southward = word.has_s;
    g.gluings = word.body;

    LatticePoint at{0, 0};
    g.tiles.push_back(at);
    for (Letter a : word.body) {
        if (!word.has_s) {
            at = a == Letter::L ? LatticePoint{at.x, at.y + 1} : LatticePoint{at.x + 1, at.y};
        } else {
            at = a == Letter::L ? LatticePoint{at.x - 1, at.y} : LatticePoint{at.x, at.y - 1};
        }
        g.tiles.push_back(at);
    }

    std::map<LatticePoint, std::size_t> index;
    auto vertex = [&](LatticePoint p) {
        auto [it, inserted] = index.try_emplace(p, g.vertices.size());
        if (inserted) g.vertices.push_back(p);
        return it->second;
    };
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    for (const auto& t : g.tiles) {
        for (Side s : {Side::SE, Side::NE, Side::NW, Side::SW}) {
            auto [a, b] = SnakeGraph::side_corners(t, s);
            std::size_t u = vertex(a);
            std::size_t v = vertex(b);
            auto key = std::minmax(u, v);
            if (seen.try_emplace({key.first, key.second}, g.edges.size()).second) g.edges.push_back({u, v});
        }
    }

    Side rattle_side;
    if (word.body.empty()) {
        // One tile: every side is a rattle; S picks north, magnitude 1 picks west.
        rattle_side = word.has_s ? Side::NW : Side::SW;
    } else if (!word.has_s) {
        rattle_side = word.body.front() == Letter::L ? Side::SE : Side::SW;
    } else {
        rattle_side = word.body.front() == Letter::L ? Side::NE : Side::NW;
    }
    rs.rattle = g.side_edge(0, rattle_side);
    rs.ns = is_northern(rattle_side) ? NorthSouth::Northern : NorthSouth::Southern;
    rs.ew = is_western(rattle_side) ? EastWest::Western : EastWest::Eastern;
    return rs;
}

/// The single-edge rattlesnake of 0 (eastern) or infinity (western).
inline Rattlesnake degenerate_rattlesnake(EastWest ew) {
    Rattlesnake rs;
    rs.degenerate = true;
    rs.ew = ew;
    rs.ns = NorthSouth::Southern;
    rs.graph.vertices = {{0, 0}, {1, 1}};
    rs.graph.edges = {{0, 1}};
    rs.rattle = 0;
    return rs;
}

inline constexpr std::size_t kBruteForceTileCap = 24;

namespace detail {

inline std::uint64_t count_matchings_from(const std::vector<std::vector<std::size_t>>& adj, std::vector<char>& used) {
    std::size_t first = 0;
    while (first < used.size() && used[first]) ++first;
    if (first == used.size()) return 1;
    std::uint64_t total = 0;
    used[first] = 1;
    for (std::size_t w : adj[first]) {
        if (used[w]) continue;
        used[w] = 1;
        total += count_matchings_from(adj, used);
        used[w] = 0;
    }
    used[first] = 0;
    return total;
}

inline std::uint64_t brute_force_matchings(const SnakeGraph& g, std::optional<std::size_t> forced_edge) {
    if (g.tiles.size() > kBruteForceTileCap) {
        throw TooLarge("brute-force matching capped at " + std::to_string(kBruteForceTileCap) + " tiles, got " +
                       std::to_string(g.tiles.size()));
    }
    std::vector<std::vector<std::size_t>> adj(g.vertices.size());
    for (const auto& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> used(g.vertices.size(), 0);
    if (forced_edge) {
        const auto& e = g.edges.at(*forced_edge);
        used[e.u] = used[e.v] = 1;
    }
    return count_matchings_from(adj, used);
}

}  // namespace detail

/// Perfect matchings of the explicit graph, by exhaustive enumeration.
inline BigInt count_matchings(const SnakeGraph& g) { return BigInt(detail::brute_force_matchings(g, std::nullopt)); }

/// Perfect matchings containing the rattle.
inline BigInt count_matchings_with_rattle(const Rattlesnake& rs) {
    return BigInt(detail::brute_force_matchings(rs.graph, rs.rattle));
}

struct MatchingCounts {
    BigInt total;
    BigInt with_rattle;
    friend bool operator==(const MatchingCounts&, const MatchingCounts&) = default;
};

/// Counts read off the word's fraction r/s: total r + s, with rattle max(r, s).
inline MatchingCounts count_matchings_fast(const Word& word) {
    Farey f = word_to_fraction(word);
    BigInt r = detail::abs_value(f.num);
    return {r + f.den, std::max(r, f.den)};
}

inline MatchingCounts count_matchings_brute(const Rattlesnake& rs) {
    return {count_matchings(rs.graph), count_matchings_with_rattle(rs)};
}

// ---------------------------------------------------------------------------
// Bijection with Q and infinity

inline Rattlesnake fraction_to_rattlesnake(const Farey& q) {
    if (q.is_infinite()) return degenerate_rattlesnake(EastWest::Western);
    if (q.num == 0) return degenerate_rattlesnake(EastWest::Eastern);
    return build_graph(fraction_to_word(q));
}

/// Inverse of fraction_to_rattlesnake through matching counts:
/// |z| = (with / (total - with))^(+1 western, -1 eastern), negative if northern.
inline Farey rattlesnake_to_fraction(const Rattlesnake& rs) {
    MatchingCounts c = count_matchings_brute(rs);
    Farey magnitude(c.with_rattle, c.total - c.with_rattle);
    if (rs.ew == EastWest::Eastern) magnitude = magnitude.reciprocal();
    return rs.ns == NorthSouth::Northern ? magnitude.negated() : magnitude;
}

}  // namespace topography
