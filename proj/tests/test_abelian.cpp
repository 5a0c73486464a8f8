#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "capitula/abelian.hpp"
#include "capitula/verify.hpp"

using namespace capitula;
using abelian::AbHom;
using abelian::FinAbGroup;

namespace {

FinAbGroup G(std::vector<long long> f) {
    std::vector<Integer> v(f.begin(), f.end());
    return FinAbGroup::from_invariant_factors(v);
}

Matrix M(std::vector<std::vector<long long>> rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

bool unimodular(Matrix const& U) {
    // det = +-1 checked via SNF of U itself: all ones on the diagonal
    auto s = abelian::smith_normal_form(U);
    for (std::size_t i = 0; i < U.rows(); ++i)
        if (s.S(i, i) != 1) return false;
    return true;
}

void check_snf(Matrix const& A) {
    auto s = abelian::smith_normal_form(A);
    EXPECT_EQ(s.U * A * s.V, s.S);
    EXPECT_TRUE(unimodular(s.U));
    EXPECT_TRUE(unimodular(s.V));
    std::size_t k = std::min(A.rows(), A.cols());
    for (std::size_t i = 0; i < s.S.rows(); ++i)
        for (std::size_t j = 0; j < s.S.cols(); ++j)
            if (i != j) {
                EXPECT_EQ(s.S(i, j), 0);
            }
    for (std::size_t i = 0; i < k; ++i) {
        EXPECT_GE(s.S(i, i), 0);
        if (i + 1 < k && s.S(i, i) != 0) {
            EXPECT_EQ(s.S(i + 1, i + 1) % s.S(i, i), 0);
        }
        if (s.S(i, i) == 0 && i + 1 < k) {
            EXPECT_EQ(s.S(i + 1, i + 1), 0);
        }
    }
}

// Structure of ker[+Z/d_i -> Z/D] from counts of k-torsion elements, k | D.
FinAbGroup kernel_by_enumeration(std::vector<long long> const& d) {
    long long D = 1;
    for (auto x : d) D = std::lcm(D, x);
    std::vector<std::vector<long long>> elems{{}};
    for (auto x : d) {
        std::vector<std::vector<long long>> next;
        for (auto const& e : elems)
            for (long long a = 0; a < x; ++a) {
                auto f = e;
                f.push_back(a);
                next.push_back(f);
            }
        elems = next;
    }
    std::vector<std::vector<long long>> ker;
    for (auto const& e : elems) {
        long long s = 0;
        for (std::size_t i = 0; i < d.size(); ++i) s += e[i] * (D / d[i]);
        if (s % D == 0) ker.push_back(e);
    }
    auto count_torsion = [&](long long k) {
        long long c = 0;
        for (auto const& e : ker) {
            bool ok = true;
            for (std::size_t i = 0; i < d.size(); ++i) ok = ok && (e[i] * k) % d[i] == 0;
            c += ok;
        }
        return c;
    };
    // #G[p^j] for every j pins down the p-primary part
    std::vector<Integer> cyclic;
    for (long long p = 2; p <= D; ++p) {
        bool prime = true;
        for (long long q = 2; q * q <= p; ++q) prime = prime && p % q;
        if (!prime || D % p) continue;
        long long prev = 1, pk = 1;
        std::vector<int> ranks;  // rank of p^j-torsion layers
        while (D % (pk * p) == 0) {
            pk *= p;
            long long c = count_torsion(pk);
            int r = 0;
            for (long long x = c / prev; x > 1; x /= p) ++r;
            ranks.push_back(r);
            prev = c;
        }
        // ranks[j] = number of cyclic p-factors of order >= p^(j+1)
        for (std::size_t j = 0; j < ranks.size(); ++j) {
            int here = ranks[j] - (j + 1 < ranks.size() ? ranks[j + 1] : 0);
            Integer o = 1;
            for (std::size_t t = 0; t <= j; ++t) o *= p;
            for (int t = 0; t < here; ++t) cyclic.push_back(o);
        }
    }
    return FinAbGroup::from_cyclic_orders(cyclic);
}

}  // namespace

TEST(Smith, Diag2x3) {
    auto s = abelian::smith_normal_form(M({{2, 0}, {0, 3}}));
    EXPECT_EQ(s.S, M({{1, 0}, {0, 6}}));
}

TEST(Smith, ZeroMatrix) {
    auto s = abelian::smith_normal_form(Matrix(2, 2));
    EXPECT_EQ(s.S, Matrix(2, 2));
}

TEST(Smith, HandReduced) {
    Matrix A = M({{2, 4}, {6, 8}});
    auto s = abelian::smith_normal_form(A);
    EXPECT_EQ(s.S, M({{2, 0}, {0, 4}}));
    check_snf(A);
}

TEST(Smith, RandomMatricesSatisfyUAV) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 5), val(-9, 9);
    for (int t = 0; t < 200; ++t) {
        Matrix A(dim(rng), dim(rng));
        for (std::size_t r = 0; r < A.rows(); ++r)
            for (std::size_t c = 0; c < A.cols(); ++c) A(r, c) = val(rng);
        check_snf(A);
    }
}

TEST(FinAbGroup, NormalForm) {
    auto g = FinAbGroup::from_cyclic_orders({2, 3, 4, 1});
    EXPECT_EQ(g, G({2, 12}));
    EXPECT_EQ(g.order(), 24);
    EXPECT_TRUE(FinAbGroup::from_cyclic_orders({1, 1}).is_trivial());
    EXPECT_EQ(FinAbGroup().order(), 1);
    EXPECT_EQ(G({2, 4}).to_string(), "Z/2 + Z/4");
}

TEST(FinAbGroup, RejectsBadChains) {
    EXPECT_THROW(G({4, 6}), PreconditionError);
    EXPECT_THROW(G({1}), PreconditionError);
}

TEST(Hom, TimesTwoOnZ4) {
    AbHom h(G({4}), G({4}), M({{2}}));
    EXPECT_EQ(abelian::kernel(h).group, G({2}));
    EXPECT_EQ(abelian::cokernel(h), G({2}));
}

TEST(Hom, IdentityOnZ6) {
    auto h = AbHom::identity(G({6}));
    EXPECT_TRUE(abelian::kernel(h).group.is_trivial());
    EXPECT_TRUE(abelian::cokernel(h).is_trivial());
}

TEST(Hom, Z2Z4ToZ8) {
    AbHom h(G({2, 4}), G({8}), M({{4, 2}}));
    // brute force: (a, b) -> 4a + 2b mod 8
    int zeros = 0;
    std::set<int> image;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 4; ++b) {
            int v = (4 * a + 2 * b) % 8;
            zeros += v == 0;
            image.insert(v);
        }
    EXPECT_EQ(abelian::kernel(h).group.order(), zeros);
    EXPECT_EQ(abelian::image_order(h), static_cast<long long>(image.size()));
    EXPECT_EQ(abelian::cokernel(h), G({2}));
    // the inclusion really lands in the kernel
    auto k = abelian::kernel(h);
    auto comp = h.after(k.inclusion);
    EXPECT_TRUE(comp.matrix().is_zero());
}

TEST(Hom, RejectsIllDefinedImages) {
    EXPECT_THROW(AbHom(G({2}), G({3}), M({{1}})), MalformedHom);
    EXPECT_THROW(AbHom(G({2}), G({4}), M({{1, 1}})), MalformedHom);
}

TEST(Hom, RandomKernelCokernelLaw) {
    auto v = verify::kernel_cokernel_law(21, 300);
    EXPECT_TRUE(v.pass) << v.actual;
}

TEST(SumMap, SpecExamples) {
    EXPECT_TRUE(abelian::sum_map_kernel({2, 3}, 6).is_trivial());
    EXPECT_EQ(abelian::sum_map_kernel({2, 2}, 2), G({2}));
    EXPECT_EQ(abelian::sum_map_kernel({4, 4, 2}, 4).order(), 8);
    EXPECT_EQ(abelian::sum_map_kernel({4, 4, 2}, 4), kernel_by_enumeration({4, 4, 2}));
    EXPECT_TRUE(verify::sum_map_kernel_matches_enumeration({4, 4, 2}));
}

TEST(SumMap, MatchesIndependentEnumeration) {
    for (auto const& d : std::vector<std::vector<long long>>{{2, 2}, {4, 2}, {6, 4, 3}, {2, 2, 2, 2}, {4, 4, 4}, {6, 6}}) {
        long long D = 1, prod = 1;
        for (auto x : d) D = std::lcm(D, x), prod *= x;
        std::vector<Integer> di(d.begin(), d.end());
        auto g = abelian::sum_map_kernel(di, D);
        EXPECT_EQ(g, kernel_by_enumeration(d));
        EXPECT_EQ(g.order(), prod / D);
    }
}

TEST(SumMap, NeedsLcm) { EXPECT_THROW(abelian::sum_map_kernel({2, 3}, 12), PreconditionError); }

TEST(SumMap, ExhaustiveSmallVectors) {
    auto v = verify::sum_kernel_exhaustive();
    EXPECT_TRUE(v.pass) << v.actual;
}

TEST(EllRank, Examples) {
    EXPECT_EQ(abelian::ell_rank(G({2, 2, 2}), 2), 3u);
    EXPECT_EQ(abelian::ell_rank(G({6}), 5), 0u);
    EXPECT_EQ(abelian::ell_rank(FinAbGroup::from_cyclic_orders({2, 4, 3}), 2), 2u);
    EXPECT_THROW(abelian::ell_rank(G({6}), 4), PreconditionError);
}

TEST(DirectSum, Orders) {
    auto s = abelian::direct_sum(G({3}), G({2}));
    EXPECT_EQ(s, G({6}));
}
