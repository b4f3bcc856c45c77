#include <gtest/gtest.h>

#include <random>

#include "topography/master.hpp"

using namespace topography;

namespace {

using C = Cluster<BigInt>;
using Q = Cluster<BigRational>;

C cl(long a, long b, long c) { return {BigInt(a), BigInt(b), BigInt(c)}; }
LaurentPoly x(int k, int power = 1) { return LaurentPoly::variable(k - 1, power); }
LaurentPoly term(long coeff, int a, int b, int d) { return LaurentPoly({a, b, d}, BigInt(coeff)); }

MasterParams<BigInt> random_params(std::mt19937_64& rng, int bound = 3) {
    std::uniform_int_distribution<int> u(-bound, bound);
    MasterParams<BigInt> p;
    for (int k = 0; k < 3; ++k) {
        p.delta[k] = u(rng);
        p.sigma[k] = u(rng);
    }
    p.zeta = u(rng);
    p.tau = u(rng);
    return p;
}

Q to_rational(const C& c) { return {BigRational(c[0]), BigRational(c[1]), BigRational(c[2])}; }

MasterParams<BigRational> to_rational(const MasterParams<BigInt>& p) {
    return p.map<BigRational>([](const BigInt& v) { return BigRational(v); });
}

C random_nonzero_cluster(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> u(lo, hi);
    C c;
    for (auto& v : c) {
        do {
            v = u(rng);
        } while (v == 0);
    }
    return c;
}

}  // namespace

TEST(Master, ExchangePolynomials) {
    EXPECT_EQ(exchange_poly(params::markov(), 1), x(2, 2) + x(3, 2));
    EXPECT_EQ(exchange_poly(params::conway(), 2), x(1, 2) + x(3, 2) - term(2, 1, 0, 1));
    MasterParams<BigInt> p;
    p.zeta = 5;
    EXPECT_EQ(exchange_poly(p, 3), x(1, 2) + x(2, 2) + LaurentPoly(BigInt(5)));
    EXPECT_THROW(exchange_poly(p, 4), std::out_of_range);
}

TEST(Master, Invariant) {
    EXPECT_EQ(invariant(params::markov(), cl(1, 1, 1)), 0);
    EXPECT_EQ(invariant(params::conway(), cl(16, 200, 103)), -31);
    EXPECT_EQ(invariant(params::conway(), cl(41, 20, 4)), -31);
    EXPECT_EQ(residual(params::conway(BigInt(-31)), cl(41, 20, 4)), 0);
}

TEST(Master, LocalRule) {
    EXPECT_EQ(local_rule(params::markov(), cl(1, 1, 1), 1), cl(2, 1, 1));
    EXPECT_EQ(local_rule(params::conway(), cl(16, 38, 103), 3), cl(16, 38, 5));
    EXPECT_EQ(local_rule(params::conway(), cl(-2, 2, -3), 3), cl(-2, 2, 3));
    EXPECT_EQ(local_rule(params::conway(), cl(0, 0, 0), 2), cl(0, 0, 0));
}

TEST(Master, Mutate) {
    EXPECT_EQ(mutate(params::markov(), cl(2, 1, 1), 2), cl(2, 5, 1));
    EXPECT_EQ(mutate(params::conway(BigInt(-31)), cl(16, 200, 103), 2), cl(16, 38, 103));
    EXPECT_THROW(mutate(params::markov(), cl(0, 1, 1), 1), DivisionByZero);
    EXPECT_THROW(mutate(params::markov(), cl(3, 1, 1), 1), InexactDivision);
    EXPECT_THROW(mutate(params::markov(), cl(1, 1, 1), 0), std::out_of_range);
}

TEST(Master, MutationIsInvolution) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        auto p = to_rational(random_params(rng));
        Q c = to_rational(random_nonzero_cluster(rng, -5, 5));
        for (int i = 1; i <= 3; ++i) {
            Q once = mutate(p, c, i);
            if (is_zero(once[i - 1])) continue;
            EXPECT_EQ(mutate(p, once, i), c);
            EXPECT_EQ(local_rule(p, local_rule(p, c, i), i), c);
        }
    }
}

TEST(Master, LocalRulePreservesInvariant) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        auto p = random_params(rng);
        C c = random_nonzero_cluster(rng, -5, 5);
        for (int i = 1; i <= 3; ++i) EXPECT_EQ(invariant(p, local_rule(p, c, i)), invariant(p, c));
    }
}

TEST(Master, MutationPreservesInvariantOnSolutions) {
    // Solutions are made by choosing params, a cluster, and then zeta = -I.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        auto pi = random_params(rng);
        C c = random_nonzero_cluster(rng, -5, 5);
        pi.zeta = -invariant(pi, c);
        auto p = to_rational(pi);
        Q q = to_rational(c);
        for (int i = 1; i <= 3; ++i) {
            Q m = mutate(p, q, i);
            EXPECT_EQ(invariant(p, m), invariant(p, q));
            EXPECT_EQ(m, local_rule(p, q, i));
        }
    }
}

TEST(Master, RuleEquivalenceAlongMarkovOrbit) {
    auto p = params::markov();
    std::vector<C> frontier{cl(1, 1, 1)};
    for (int depth = 0; depth < 5; ++depth) {
        std::vector<C> next;
        for (const auto& c : frontier) {
            for (int i = 1; i <= 3; ++i) {
                C m = mutate(p, c, i);
                EXPECT_EQ(m, local_rule(p, c, i));
                EXPECT_EQ(invariant(p, m), 0);
                next.push_back(m);
            }
        }
        frontier = std::move(next);
    }
}

TEST(Master, ResidualScaling) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        auto p = to_rational(random_params(rng));
        Q c = to_rational(random_nonzero_cluster(rng, -5, 5));
        for (int i = 1; i <= 3; ++i) {
            auto [a, j, k] = detail::cyclic(i);
            BigRational F = exchange_value(p, i, c[j], c[k]);
            Q m = mutate(p, c, i);
            EXPECT_EQ(residual(p, m), F / (c[a] * c[a]) * residual(p, c));
        }
    }
}

TEST(Master, ResidualScalingComplex) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        MasterParams<Complex> p;
        for (int k = 0; k < 3; ++k) {
            p.delta[k] = {g(rng), g(rng)};
            p.sigma[k] = {g(rng), g(rng)};
        }
        p.zeta = {g(rng), g(rng)};
        p.tau = {g(rng), g(rng)};
        Cluster<Complex> c{Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
        for (int i = 1; i <= 3; ++i) {
            auto [a, j, k] = detail::cyclic(i);
            Complex F = exchange_value(p, i, c[j], c[k]);
            Complex lhs = residual(p, mutate(p, c, i));
            Complex rhs = F / (c[a] * c[a]) * residual(p, c);
            EXPECT_TRUE(approx_equal(lhs, rhs, 1e-9)) << lhs << " " << rhs;
        }
    }
}

TEST(Master, Permutations) {
    C c = cl(1, 2, 3);
    EXPECT_EQ(permute(c, Perm3::swap(1, 3)), cl(3, 2, 1));
    EXPECT_EQ(permute(c, Perm3::cycle()), cl(3, 1, 2));
    EXPECT_EQ(permute(c, Perm3::identity()), c);
    EXPECT_EQ(permute(permute(permute(c, Perm3::cycle()), Perm3::cycle()), Perm3::cycle()), c);
}

TEST(Master, SeedMutation) {
    Seed s = Seed::identity(params::markov());
    Seed one = mutate_seed(s, 1);
    EXPECT_EQ(one.cluster[0], (x(2, 2) + x(3, 2)) * x(1, -1));
    EXPECT_EQ(one.cluster[1], x(2));
    Seed two = mutate_seed(one, 2);
    LaurentPoly expected = term(1, -2, 3, 0) + term(2, -2, 1, 2) + term(1, -2, -1, 4) + term(1, 0, -1, 2);
    EXPECT_EQ(two.cluster[1], expected);
    EXPECT_EQ(two.params, s.params);
}

TEST(Master, SeedPermutationKeepsParams) {
    MasterParams<BigInt> p;
    p.sigma = {BigInt(2), BigInt(2), BigInt(1)};
    Seed s = permute(Seed::identity(p), Perm3::swap(2, 3));
    EXPECT_EQ(s.params, p);
    EXPECT_EQ(s.cluster[1], x(3));
}

TEST(Master, GenericityBreaksLaurentness) {
    for (long sigma : {2L, 3L, -1L, 5L}) {
        MasterParams<BigInt> p;
        p.sigma = {BigInt(sigma), BigInt(sigma), BigInt(1)};
        Seed s = mutate_seed(Seed::identity(p), 2);
        s = permute(s, Perm3::swap(2, 3));
        EXPECT_THROW(mutate_seed(s, 3), InexactDivision) << "sigma = " << sigma;
    }
}

TEST(Master, ExchangeInvariance) {
    for (int i = 1; i <= 3; ++i) EXPECT_TRUE(verify_exchange_invariance(params::markov(), cl(1, 1, 1), i));
    std::mt19937_64 rng(6);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto p = to_rational(random_params(rng));
        Q c = to_rational(random_nonzero_cluster(rng, 1, 5));
        for (int i = 1; i <= 3; ++i) {
            if (is_zero(mutate(p, c, i)[i - 1])) continue;
            EXPECT_TRUE(verify_exchange_invariance(p, c, i));
            ++checked;
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(Master, ExchangeInvarianceComplex) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        std::array<Complex, 4> theta;
        for (auto& t : theta) t = {g(rng), g(rng)};
        auto p = params::pvi(theta);
        Cluster<Complex> c{Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
        for (int i = 1; i <= 3; ++i) EXPECT_TRUE(verify_exchange_invariance(p, c, i));
    }
}

TEST(Master, ExchangeInvarianceAtZeroEntry) {
    auto p = to_rational(params::markov());
    EXPECT_TRUE(verify_exchange_invariance(p, Q{BigRational(2), BigRational(3), BigRational(5)}, 1));
    EXPECT_THROW(verify_exchange_invariance(p, Q{BigRational(0), BigRational(1), BigRational(1)}, 1), DivisionByZero);
}
