#include <gtest/gtest.h>

#include <random>

#include "topography/forms.hpp"
#include "topography/topograph.hpp"

using namespace topography;

namespace {

using C = Cluster<BigInt>;
using C64 = Cluster<std::int64_t>;

C cl(long a, long b, long c) { return {BigInt(a), BigInt(b), BigInt(c)}; }
QuadForm form(long w, long n, long e) { return QuadForm::from_cluster(w, n, e); }
Surd Z(long p, long q, long r, long D) { return Surd(BigInt(p), BigInt(q), BigInt(r), BigInt(D)); }
Farey F(long n, long d) { return Farey(BigInt(n), BigInt(d)); }

std::vector<C> box(long lo, long hi) {
    std::vector<C> out;
    for (long a = lo; a <= hi; ++a)
        for (long b = lo; b <= hi; ++b)
            for (long c = lo; c <= hi; ++c) out.push_back(cl(a, b, c));
    return out;
}

bool is_square(const BigInt& d) { return d >= 0 && detail::is_perfect_square(d); }

std::vector<C> replay(const C& start, const std::vector<int>& mutations, const std::vector<std::size_t>& hops) {
    auto p = params::conway(cluster_discriminant(start));
    std::vector<C> out{start};
    for (std::size_t k = 0; k < mutations.size(); ++k) {
        bool hop = std::find(hops.begin(), hops.end(), k) != hops.end();
        out.push_back(hop ? local_rule(p, out.back(), mutations[k]) : mutate(p, out.back(), mutations[k]));
    }
    return out;
}

Mat2 random_gl2(std::mt19937_64& rng, bool special) {
    std::uniform_int_distribution<int> pick(0, 3);
    const Generator gens[] = {Generator::S, Generator::T, Generator::U, Generator::V};
    Mat2 m;
    for (int k = 0; k < 6; ++k) m = m * matrix_of(gens[pick(rng)]);
    if (special && m.det() < 0) m = m * matrix_of(Generator::S);
    return m;
}

}  // namespace

TEST(Forms, Discriminant) {
    EXPECT_EQ(discriminant(form(16, 200, 103)), -31);
    EXPECT_EQ(discriminant(form(18, 2, 7)), 25);
    EXPECT_EQ(discriminant(form(1, 3, 1)), -3);
    for (const C& c : box(-4, 4)) EXPECT_EQ(cluster_discriminant(c), invariant(params::conway(), c));
}

TEST(Forms, Coefficients) {
    QuadForm q = QuadForm::from_coefficients(16, 81, 103);
    EXPECT_EQ(q.cluster, cl(16, 200, 103));
    EXPECT_EQ(q.b(), 81);
    EXPECT_EQ(form(18, 2, 7).b(), -23);
}

TEST(Forms, Roots) {
    EXPECT_EQ(root(form(16, 200, 103)), Z(-81, 1, 32, -31));
    EXPECT_EQ(root(form(41, 20, 4)), Z(25, 1, 82, -31));
    EXPECT_EQ(root(form(0, 3, 1)), Surd::rational(BigInt(-1), BigInt(2)));
    EXPECT_FALSE(root(form(0, 1, 1)).has_value());
    EXPECT_FALSE(root(form(0, -1, 1)).has_value());
    // negative leading coefficient keeps the upper half-plane
    auto z = root(form(-16, -200, -103));
    ASSERT_TRUE(z.has_value());
    EXPECT_GT(z->q, 0);
}

TEST(Forms, RootSolvesTheForm) {
    for (const C& c : box(-6, 6)) {
        auto z = root_of(c);
        if (!z || c[0] == 0) continue;
        QuadForm q{c};
        // a z^2 + b z + c = 0 with z = (p + q sqrt D) / r
        BigInt a = q.a(), b = q.b(), cc = q.c();
        BigInt rational = a * (z->p * z->p + z->q * z->q * z->D) + b * z->p * z->r + cc * z->r * z->r;
        BigInt irrational = 2 * a * z->p * z->q + b * z->q * z->r;
        EXPECT_EQ(rational, 0);
        if (!is_square(z->D)) EXPECT_EQ(irrational, 0);
    }
}

TEST(Forms, FareyWalkExamples) {
    WalkResult hat = farey_walk(Z(-81, 1, 32, -31));
    EXPECT_EQ(hat.word.to_string(), "SRLL");
    EXPECT_EQ(hat.endpoint, F(-5, 2));
    EXPECT_TRUE(hat.terminated);
    WalkResult check = farey_walk(Z(25, 1, 82, -31));
    EXPECT_EQ(check.word.to_string(), "LRL");
    EXPECT_EQ(check.endpoint, F(1, 4));
    EXPECT_EQ(farey_walk(Z(17, 1, 32, -31)).word.to_string(), "L");
    EXPECT_EQ(farey_walk(std::nullopt).word.to_string(), "");
    EXPECT_EQ(farey_walk(Surd::rational(BigInt(0), BigInt(1))).word.to_string(), "");
}

TEST(Forms, FareyWalkEmptyInsideBaseTriangle) {
    EXPECT_EQ(farey_walk(Z(1, 1, 2, -3)).word.to_string(), "");
    EXPECT_EQ(farey_walk(Z(1, 1, 2, -3)).endpoint, F(1, 1));
}

TEST(Forms, FareyWalkIrrational) {
    WalkResult golden = farey_walk(Z(1, 1, 2, 5), 40);
    EXPECT_FALSE(golden.terminated);
    EXPECT_EQ(golden.word.body.size(), 40u);
    // raw letters alternate L, R, ...; the dual turns them all into R
    for (std::size_t k = 0; k < 40; ++k) EXPECT_EQ(golden.word.body[k], Letter::R);
}

TEST(Forms, RationalRootsEndAtTheRoot) {
    for (long r = -12; r <= 12; ++r) {
        for (long s = 1; s <= 12; ++s) {
            if (r == 0 || std::gcd(r, s) != 1) continue;
            WalkResult w = farey_walk(Surd::rational(BigInt(r), BigInt(s)));
            EXPECT_TRUE(w.terminated);
            EXPECT_EQ(w.endpoint, F(r, s));
            EXPECT_EQ(word_to_fraction(w.word), F(r, s));
        }
    }
}

TEST(Forms, WalkersAgree) {
    // Letters of the interval walk, the root-transforming walk and the form walk.
    std::size_t irrational = 0;
    for (const C& c : box(-7, 7)) {
        BigInt d = cluster_discriminant(c);
        if (d == 0 && c == cl(0, 0, 0)) continue;
        auto z = root_of(c);
        WalkResult direct = farey_walk(z, 30);
        RootWalker<BigInt> walker(z);
        Body raw;
        while (raw.size() < 30) {
            auto a = walker.next_raw();
            if (!a) break;
            raw.push_back(*a);
        }
        ASSERT_EQ(dual(raw), direct.word.body) << c[0] << " " << c[1] << " " << c[2];
        ASSERT_EQ(walker.has_s(), direct.word.has_s);
        if (d > 0 && !is_square(d) && c[0] != 0) {
            FormWalker<BigInt> fw(c);
            Body raw2;
            for (int k = 0; k < 30; ++k) raw2.push_back(fw.next_raw());
            ASSERT_EQ(raw2, raw);
            ASSERT_EQ(fw.has_s(), walker.has_s());
            ++irrational;
        }
    }
    EXPECT_GT(irrational, 100u);
}

TEST(Forms, FormWalkerRejectsNonRiverForms) {
    EXPECT_THROW(FormWalker<BigInt>(cl(16, 200, 103)), std::invalid_argument);
    EXPECT_THROW(FormWalker<BigInt>(cl(18, 2, 7)), std::invalid_argument);
    EXPECT_THROW(FormWalker<BigInt>(cl(0, 2, 1)), std::invalid_argument);
}

TEST(Forms, WordToMutations) {
    EXPECT_EQ(word_to_mutations(Word::parse("SRLL")), (std::vector<int>{2, 3, 2, 1}));
    EXPECT_EQ(word_to_mutations(Word::parse("LRL")), (std::vector<int>{1, 2, 1}));
    EXPECT_TRUE(word_to_mutations(Word::parse("")).empty());
    EXPECT_EQ(word_to_mutations(Word::parse("LLRLL")), (std::vector<int>{1, 3, 1, 3, 2}));
}

TEST(Forms, ClassifyVertex) {
    EXPECT_EQ(classify_vertex(cl(2, 4, 5), BigInt(-31)), VertexKind::Well);
    EXPECT_EQ(classify_vertex(cl(16, 38, 103), BigInt(-31)), VertexKind::Ordinary);
    EXPECT_EQ(classify_vertex(cl(0, 2, -3), BigInt(25)), VertexKind::LeftMouth);
    EXPECT_EQ(classify_vertex(cl(0, -2, 3), BigInt(25)), VertexKind::RightMouth);
    EXPECT_EQ(classify_vertex(cl(-2, 0, 3), BigInt(25), true), VertexKind::RightMouth);
    EXPECT_EQ(classify_vertex(cl(8, 3, 0), BigInt(25)), VertexKind::Lakeshore);
    EXPECT_EQ(classify_vertex(cl(3, 0, 3), BigInt(0)), VertexKind::Lake);
    EXPECT_EQ(classify_vertex(cl(1, 1, -1), BigInt(5)), VertexKind::BendCandidate);
    EXPECT_THROW(classify_vertex(cl(2, 4, 5), BigInt(-30)), InconsistentDiscriminant);
    EXPECT_THROW(classify_vertex(cl(0, 0, 0), BigInt(0)), InconsistentDiscriminant);
    EXPECT_EQ(vertex_kind_name(VertexKind::LeftMouth), "left-mouth");
}

TEST(Forms, ReduceNegativeDiscriminant) {
    Reduction hat = reduce(form(16, 200, 103));
    EXPECT_EQ(hat.log.word.to_string(), "SRLL");
    EXPECT_EQ(hat.log.mutations, (std::vector<int>{2, 3, 2, 1}));
    EXPECT_EQ(hat.log.clusters,
              (std::vector<C>{cl(16, 200, 103), cl(16, 38, 103), cl(16, 38, 5), cl(16, 4, 5), cl(2, 4, 5)}));
    ASSERT_EQ(tuple_kind(hat.tuple), "well");
    EXPECT_EQ(std::get<WellVertex<BigInt>>(hat.tuple).vertex, cl(2, 4, 5));
    EXPECT_EQ(canonical_reduced_clusters(hat.tuple), std::vector<C>{cl(4, 5, 2)});

    Reduction check = reduce(form(41, 20, 4));
    EXPECT_EQ(check.log.word.to_string(), "LRL");
    EXPECT_EQ(check.log.clusters, (std::vector<C>{cl(41, 20, 4), cl(7, 20, 4), cl(7, 2, 4), cl(5, 2, 4)}));
    EXPECT_EQ(canonical_reduced_clusters(check.tuple), std::vector<C>{cl(2, 5, 4)});
}

TEST(Forms, ReducePerfectSquare) {
    Reduction q1 = reduce(form(18, 2, 7));
    EXPECT_EQ(q1.log.word.to_string(), "LLRLL");
    EXPECT_TRUE(q1.log.halted);
    EXPECT_EQ(q1.log.mutations, (std::vector<int>{1, 3, 1, 3, 2}));
    EXPECT_EQ(q1.log.hops, std::vector<std::size_t>{2});
    EXPECT_EQ(q1.log.clusters, (std::vector<C>{cl(18, 2, 7), cl(0, 2, 7), cl(0, 2, -3), cl(-2, 2, -3),
                                                cl(-2, 2, 3), cl(-2, 0, 3)}));
    const auto& m1 = std::get<MouthPair<BigInt>>(q1.tuple);
    EXPECT_EQ(m1.left.vertex, cl(0, 2, -3));
    EXPECT_EQ(m1.right.vertex, cl(-2, 0, 3));

    Reduction q2 = reduce(form(2, 12, 3));
    EXPECT_EQ(q2.log.word.to_string(), "SL");
    ASSERT_GE(q2.log.clusters.size(), 3u);
    EXPECT_EQ(q2.log.clusters[1], cl(2, -2, 3));
    EXPECT_EQ(q2.log.clusters[2], cl(0, -2, 3));
    EXPECT_EQ(std::get<MouthPair<BigInt>>(q2.tuple).right.vertex, cl(0, -2, 3));

    Reduction q3 = reduce(form(8, 3, 22));
    EXPECT_EQ(q3.log.word.to_string(), "R");
    EXPECT_EQ(q3.log.clusters[1], cl(8, 3, 0));
    EXPECT_EQ(q3.log.clusters[2], cl(-2, 3, 0));
    EXPECT_EQ(std::get<MouthPair<BigInt>>(q3.tuple).right.vertex, cl(-2, 3, 0));
}

TEST(Forms, ReduceWeir) {
    Reduction r = reduce(form(0, 0, 5));
    const auto& m = std::get<MouthPair<BigInt>>(r.tuple);
    EXPECT_EQ(r.log.mutations.size(), 1u);
    EXPECT_EQ(m.left.vertex, cl(0, 0, 5));
    EXPECT_EQ(m.right.vertex, cl(0, 0, -5));
}

TEST(Forms, ReduceLake) {
    Reduction r = reduce(form(1, 4, 1));
    ASSERT_EQ(tuple_kind(r.tuple), "lake");
    const auto& lake = std::get<LakeVertex<BigInt>>(r.tuple);
    EXPECT_EQ(canonical_reduced_clusters(r.tuple), std::vector<C>{cl(lake.m.convert_to<long>(), 0, lake.m.convert_to<long>())});
    EXPECT_EQ(canonical_reduced_clusters(ReducedTuple{LakeVertex<BigInt>{3, cl(3, 0, 3), false}}),
              std::vector<C>{cl(3, 0, 3)});
}

TEST(Forms, ReduceRiver) {
    Reduction r = reduce(form(1, 1, -1));
    ASSERT_EQ(tuple_kind(r.tuple), "bends");
    const auto& bends = std::get<BendCycle<BigInt>>(r.tuple).cycle;
    ASSERT_FALSE(bends.empty());
    for (const auto& b : bends) {
        int s = b.slot - 1;
        EXPECT_NE(b.before[s] > 0, b.after[s] > 0);
        EXPECT_EQ(cluster_discriminant(b.after), 5);
    }
    for (const auto& c : canonical_reduced_clusters(r.tuple)) {
        EXPECT_LT(c[0], 0);
        EXPECT_GT(c[2], 0);
    }
}

TEST(Forms, ReduceRejectsZeroCluster) {
    EXPECT_THROW(reduce(form(0, 0, 0)), InconsistentDiscriminant);
}

TEST(Forms, LogInvariants) {
    // Conway's progression n + s = 2(w + e), discriminant conservation, replay.
    for (const C& c : box(-9, 9)) {
        if (c == cl(0, 0, 0)) continue;
        Reduction r = reduce(QuadForm{c});
        BigInt d = cluster_discriminant(c);
        ASSERT_EQ(r.log.clusters.size(), r.log.mutations.size() + 1);
        for (std::size_t k = 0; k < r.log.mutations.size(); ++k) {
            auto [i, j, kk] = detail::cyclic(r.log.mutations[k]);
            const C& before = r.log.clusters[k];
            const C& after = r.log.clusters[k + 1];
            ASSERT_EQ(before[i] + after[i], 2 * (before[j] + before[kk]));
            ASSERT_EQ(after[j], before[j]);
            ASSERT_EQ(after[kk], before[kk]);
        }
        for (const C& x : r.log.clusters) ASSERT_EQ(cluster_discriminant(x), d);
        ASSERT_EQ(replay(c, r.log.mutations, r.log.hops), r.log.clusters);
    }
}

TEST(Forms, LaurentCertificateForWells) {
    std::size_t certified = 0;
    for (const C& c : box(-7, 7)) {
        BigInt d = cluster_discriminant(c);
        if (d >= 0) continue;
        Reduction r = reduce(QuadForm{c});
        if (r.log.mutations.size() > 6) continue;
        Seed s = Seed::identity(params::conway(d));
        std::array<BigRational, 3> at{BigRational(c[0]), BigRational(c[1]), BigRational(c[2])};
        for (std::size_t k = 0; k < r.log.mutations.size(); ++k) {
            if (c[r.log.mutations[k] - 1] == 0 && k == 0) break;
            ASSERT_NO_THROW(s = mutate_seed(s, r.log.mutations[k]));
            const C& expected = r.log.clusters[k + 1];
            for (int m = 0; m < 3; ++m) {
                if (c[0] == 0 || c[1] == 0 || c[2] == 0) break;
                ASSERT_EQ(s.cluster[m].eval(at), BigRational(expected[m]));
            }
        }
        ++certified;
    }
    EXPECT_GT(certified, 500u);
}

TEST(Forms, MouthSignConvention) {
    std::size_t seen = 0;
    for (const C& c : box(-12, 12)) {
        BigInt d = cluster_discriminant(c);
        if (d <= 0 || !is_square(d)) continue;
        Reduction r = reduce(QuadForm{c});
        const auto& m = std::get<MouthPair<BigInt>>(r.tuple);
        EXPECT_EQ(classify_vertex(m.left.vertex, d, m.left.odd), VertexKind::LeftMouth);
        EXPECT_EQ(classify_vertex(m.right.vertex, d, m.right.odd), VertexKind::RightMouth);
        auto canon = canonical_reduced_clusters(r.tuple);
        ASSERT_EQ(canon.size(), 2u);
        EXPECT_EQ(canon[0][1], 0);
        EXPECT_EQ(canon[1][1], 0);
        EXPECT_TRUE(canon[0][0] <= 0 && canon[0][2] >= 0) << canon[0][0] << " " << canon[0][2];
        EXPECT_TRUE(canon[1][0] >= 0 && canon[1][2] <= 0) << canon[1][0] << " " << canon[1][2];
        ++seen;
    }
    EXPECT_GT(seen, 500u);
}

TEST(Forms, CanonicalClustersOfMouthExamples) {
    auto canon = canonical_reduced_clusters(reduce(form(18, 2, 7)).tuple);
    EXPECT_EQ(canon, (std::vector<C>{cl(-3, 0, 2), cl(3, 0, -2)}));
}

TEST(Forms, Equivalence) {
    EXPECT_TRUE(equivalent(form(16, 200, 103), form(41, 20, 4)));
    EXPECT_FALSE(strict_equivalent(form(16, 200, 103), form(41, 20, 4)));
    EXPECT_TRUE(equivalent(form(16, 200, 103), form(16, 200, 103)));
    EXPECT_TRUE(strict_equivalent(form(16, 200, 103), form(16, 200, 103)));
    EXPECT_FALSE(equivalent(form(16, 200, 103), form(1, 3, 1)));
    // x^2 + xy + 8y^2 and 2x^2 + xy + 4y^2 have Delta = -31 but different classes
    EXPECT_FALSE(equivalent(QuadForm::from_coefficients(1, 1, 8), QuadForm::from_coefficients(2, 1, 4)));
}

TEST(Forms, EquivalenceUnderGroupAction) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> u(-9, 9);
    int checked = 0;
    while (checked < 300) {
        C c = cl(u(rng), u(rng), u(rng));
        BigInt d = cluster_discriminant(c);
        if (d == 0 || c == cl(0, 0, 0)) continue;
        QuadForm q{c};
        bool special = checked % 2 == 0;
        Mat2 m = random_gl2(rng, special);
        QuadForm moved{cluster_of_form(compose(form_of_cluster(c), m))};
        ASSERT_EQ(discriminant(moved), d);
        EXPECT_TRUE(equivalent(q, moved)) << c[0] << " " << c[1] << " " << c[2];
        if (special) {
            EXPECT_TRUE(strict_equivalent(q, moved)) << c[0] << " " << c[1] << " " << c[2];
        }
        ++checked;
    }
}

TEST(Forms, OracleExamples) {
    auto well = oracle_reduce(form(16, 200, 103));
    EXPECT_EQ(detail::sorted(std::get<WellVertex<BigInt>>(well).vertex), (std::array<BigInt, 3>{2, 4, 5}));
    auto mouths = oracle_reduce(form(2, 12, 3));
    const auto& m = std::get<MouthPair<BigInt>>(mouths);
    EXPECT_EQ(detail::sorted(m.right.vertex), (std::array<BigInt, 3>{-2, 0, 3}));
    auto fixed = oracle_reduce(form(2, 4, 5));
    EXPECT_EQ(std::get<WellVertex<BigInt>>(fixed).vertex, cl(2, 4, 5));
}

TEST(Forms, OracleAgreesOnSmallBox) {
    std::size_t compared = 0;
    for (long a = -20; a <= 20; ++a) {
        for (long b = -20; b <= 20; ++b) {
            for (long c = -20; c <= 20; ++c) {
                C64 x{a, b, c};
                if (cluster_discriminant(x) == 0) continue;
                auto fast = reduce_cluster(x).tuple;
                auto slow = oracle_reduce_cluster(x);
                ASSERT_TRUE(same_tuple(fast, slow)) << a << " " << b << " " << c;
                ++compared;
            }
        }
    }
    EXPECT_GT(compared, 60000u);
}

TEST(Forms, BigIntAndInt64Agree) {
    for (const C& c : box(-6, 6)) {
        if (cluster_discriminant(c) == 0) continue;
        C64 x{c[0].convert_to<std::int64_t>(), c[1].convert_to<std::int64_t>(), c[2].convert_to<std::int64_t>()};
        Reduction big = reduce(QuadForm{c});
        auto small = reduce_cluster(x);
        ASSERT_EQ(big.log.mutations, small.log.mutations);
        ASSERT_EQ(canonical_reduced_clusters(big.tuple).size(), canonical_reduced_clusters(small.tuple).size());
    }
}

TEST(Forms, SameTupleSymmetries) {
    MouthPair<BigInt> a{{cl(0, 2, -3), false}, {cl(-2, 0, 3), false}};
    MouthPair<BigInt> b{{cl(-2, 0, 3), false}, {cl(0, 2, -3), false}};
    EXPECT_FALSE(same_tuple<BigInt>(a, b));
    EXPECT_TRUE(same_tuple<BigInt>(a, b, TupleSymmetry::Unoriented));
    WellVertex<BigInt> w1{cl(2, 4, 5)};
    WellVertex<BigInt> w2{cl(5, 2, 4), true};
    EXPECT_TRUE(same_tuple<BigInt>(w1, w2));
    EXPECT_FALSE(same_tuple<BigInt>(w1, a));
}

TEST(Forms, StepCap) {
    ReduceOptions tight;
    tight.max_steps = 3;
    EXPECT_NO_THROW(reduce(form(16, 200, 103)));
    EXPECT_THROW(reduce(QuadForm::from_coefficients(1, 0, -94), tight), TooLarge);
    EXPECT_NO_THROW(reduce(QuadForm::from_coefficients(1, 0, -94)));
}
