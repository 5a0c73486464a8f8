#pragma once

// Cohomology of finite groups acting on finite abelian groups.
//
// Cyclic groups use the 2-periodic resolution (norm and sigma - 1); small
// abelian groups fall back to inhomogeneous bar cochains, solved as linear
// systems over Z/e where e is the exponent of the module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "capitula/abelian.hpp"
#include "capitula/error.hpp"
#include "capitula/integer.hpp"
#include "capitula/matrix.hpp"

namespace capitula::cohomology {

using abelian::AbHom;
using abelian::FinAbGroup;
using Rational = boost::multiprecision::cpp_rational;

/// A finite abelian group given by generator orders: Cyclic(n) is a single generator.
class ActingGroup {
public:
    ActingGroup() = default;
    static ActingGroup cyclic(std::int64_t n) {
        if (n < 1) throw PreconditionError("cyclic group order must be positive");
        return ActingGroup({n});
    }
    static ActingGroup abelian(std::vector<std::int64_t> orders) {
        for (auto o : orders)
            if (o < 1) throw PreconditionError("generator orders must be positive");
        return ActingGroup(std::move(orders));
    }

    std::vector<std::int64_t> const& generator_orders() const { return orders_; }
    bool is_cyclic() const { return orders_.size() <= 1; }
    std::int64_t order() const {
        std::int64_t n = 1;
        for (auto o : orders_) n *= o;
        return n;
    }
    friend bool operator==(ActingGroup const&, ActingGroup const&) = default;

private:
    explicit ActingGroup(std::vector<std::int64_t> o) : orders_(std::move(o)) {}
    std::vector<std::int64_t> orders_;
};

/// A finite abelian group with commuting automorphisms, one per group generator.
class GModule {
public:
    GModule(ActingGroup group, FinAbGroup module, std::vector<AbHom> actions)
        : group_(std::move(group)), module_(std::move(module)), actions_(std::move(actions)) {
        if (actions_.size() != group_.generator_orders().size())
            throw PreconditionError("one action matrix per group generator is required");
        auto const id = AbHom::identity(module_);
        for (std::size_t i = 0; i < actions_.size(); ++i) {
            auto const& a = actions_[i];
            if (!(a.source() == module_) || !(a.target() == module_))
                throw PreconditionError("action must be an endomorphism of the module");
            if (!abelian::kernel(a).group.is_trivial()) throw PreconditionError("action is not an automorphism");
            if (!(power(a, group_.generator_orders()[i]) == id))
                throw PreconditionError("action does not satisfy the generator order");
            for (std::size_t j = 0; j < i; ++j)
                if (!(a.after(actions_[j]) == actions_[j].after(a)))
                    throw PreconditionError("generator actions must commute");
        }
    }

    /// Trivial action of `group` on `module`.
    static GModule trivial(ActingGroup group, FinAbGroup module) {
        std::vector<AbHom> acts(group.generator_orders().size(), AbHom::identity(module));
        return {std::move(group), std::move(module), std::move(acts)};
    }

    /// Z/n acting on Z/m by multiplication by u.
    static GModule cyclic_on_cyclic(std::int64_t n, Integer const& m, Integer const& u) {
        FinAbGroup M = FinAbGroup::cyclic(m);
        Matrix a(M.rank(), M.rank());
        if (M.rank()) a(0, 0) = u;
        return {ActingGroup::cyclic(n), M, {AbHom(M, M, a)}};
    }

    /// The multiplicative group of F_{q^n} with Frobenius x -> x^q, as Z/(q^n - 1) under multiplication by q.
    static GModule multiplicative_group(std::int64_t q, std::int64_t n) {
        return cyclic_on_cyclic(n, ipow(q, static_cast<unsigned>(n)) - 1, q);
    }

    ActingGroup const& group() const { return group_; }
    FinAbGroup const& module() const { return module_; }
    std::vector<AbHom> const& actions() const { return actions_; }

    AbHom const& sigma() const {
        if (!group_.is_cyclic()) throw Unsupported("sigma: acting group is not cyclic");
        return actions_.at(0);
    }

    static AbHom power(AbHom const& a, std::int64_t k) {
        AbHom r = AbHom::identity(a.source());
        for (std::int64_t i = 0; i < k; ++i) r = a.after(r);
        return r;
    }

private:
    ActingGroup group_;
    FinAbGroup module_;
    std::vector<AbHom> actions_;
};

namespace detail {

inline void require_cyclic(GModule const& M) {
    if (!M.group().is_cyclic()) throw Unsupported("cyclic cohomology requested for a non-cyclic group; use h_general");
}

// sigma, or the identity for the trivial group
inline AbHom generator(GModule const& M) {
    return M.actions().empty() ? AbHom::identity(M.module()) : M.actions()[0];
}

inline AbHom norm_map(GModule const& M) {
    AbHom s = generator(M);
    AbHom power = AbHom::identity(M.module());
    AbHom sum = AbHom::zero(M.module(), M.module());
    for (std::int64_t i = 0; i < M.group().order(); ++i) {
        sum = sum + power;
        power = s.after(power);
    }
    return sum;
}

inline AbHom difference_map(GModule const& M) { return generator(M) - AbHom::identity(M.module()); }

// ker(k) / im(i) for endomorphisms with k ∘ i = 0
inline FinAbGroup ker_mod_im(AbHom const& k, AbHom const& i) {
    auto K = abelian::kernel(k);
    return abelian::cokernel(abelian::lift_through(K.inclusion, i));
}

}  // namespace detail

/// M^G / N M.
inline FinAbGroup tate_h0(GModule const& M) {
    detail::require_cyclic(M);
    return detail::ker_mod_im(detail::difference_map(M), detail::norm_map(M));
}

/// ker N / im(sigma - 1).
inline FinAbGroup h1_cyclic(GModule const& M) {
    detail::require_cyclic(M);
    return detail::ker_mod_im(detail::norm_map(M), detail::difference_map(M));
}

/// Degree 2 of the periodic resolution: ker(sigma - 1) / im N.
inline FinAbGroup h2_cyclic(GModule const& M) {
    detail::require_cyclic(M);
    auto D = detail::difference_map(M);
    auto N = detail::norm_map(M);
    return detail::ker_mod_im(D, N);
}

/// |Ĥ^0| / |H^1|.
inline Rational herbrand_quotient(GModule const& M) {
    return Rational(tate_h0(M).order(), h1_cyclic(M).order());
}

namespace detail {

// Streaming echelon form of linear equations over Z/e (e < 2^62).
class ModEchelon {
public:
    ModEchelon(std::size_t ncols, std::uint64_t e) : ncols_(ncols), e_(e), pivot_row_(ncols, npos) {}

    void insert(std::vector<std::uint64_t> v) {
        for (std::size_t c = 0; c < ncols_; ++c) {
            if (v[c] == 0) continue;
            std::size_t r = pivot_row_[c];
            if (r == npos) {
                pivot_row_[c] = rows_.size();
                rows_.push_back(std::move(v));
                return;
            }
            auto& p = rows_[r];
            std::int64_t a = static_cast<std::int64_t>(p[c]), b = static_cast<std::int64_t>(v[c]);
            if (b % a == 0) {
                std::uint64_t k = static_cast<std::uint64_t>(b / a);
                for (std::size_t j = c; j < ncols_; ++j) v[j] = sub(v[j], mul(k, p[j]));
                continue;
            }
            auto [g, x, y] = ext_gcd(a, b);
            std::uint64_t const X = lift(x), Y = lift(y), Z = lift(-(b / g)), W = lift(a / g);
            for (std::size_t j = c; j < ncols_; ++j) {
                std::uint64_t pj = p[j], vj = v[j];
                p[j] = add(mul(X, pj), mul(Y, vj));
                v[j] = add(mul(Z, pj), mul(W, vj));
            }
        }
    }

    /// Rows as an integer matrix.
    Matrix matrix() const {
        Matrix m(rows_.size(), ncols_);
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (std::size_t c = 0; c < ncols_; ++c) m(r, c) = rows_[r][c];
        return m;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    static std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
        std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
        while (b != 0) {
            std::int64_t q = a / b;
            std::int64_t t = a - q * b;
            a = b;
            b = t;
            t = x0 - q * x1;
            x0 = x1;
            x1 = t;
            t = y0 - q * y1;
            y0 = y1;
            y1 = t;
        }
        return {a, x0, y0};
    }
    std::uint64_t lift(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(e_);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(e_) : r);
    }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % e_);
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= e_ ? s - e_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + e_ - b; }

    std::size_t ncols_;
    std::uint64_t e_;
    std::vector<std::size_t> pivot_row_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

// Elements of the acting group as mixed-radix tuples, with their action matrices.
struct GroupTable {
    std::vector<std::int64_t> radix;
    std::size_t size = 1;
    std::vector<Matrix> act;

    explicit GroupTable(GModule const& M) : radix(M.group().generator_orders()) {
        for (auto r : radix) size *= static_cast<std::size_t>(r);
        auto const& f = M.module().invariant_factors();
        act.reserve(size);
        for (std::size_t g = 0; g < size; ++g) {
            AbHom a = AbHom::identity(M.module());
            std::size_t rest = g;
            for (std::size_t i = 0; i < radix.size(); ++i) {
                auto k = static_cast<std::int64_t>(rest % static_cast<std::size_t>(radix[i]));
                rest /= static_cast<std::size_t>(radix[i]);
                a = GModule::power(M.actions()[i], k).after(a);
            }
            Matrix m = a.matrix();
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = mod(m(r, c), f[r]);
            act.push_back(std::move(m));
        }
    }

    std::size_t mul(std::size_t g, std::size_t h) const {
        std::size_t out = 0, scale = 1;
        for (auto r : radix) {
            auto const ru = static_cast<std::size_t>(r);
            out += ((g % ru + h % ru) % ru) * scale;
            g /= ru;
            h /= ru;
            scale *= ru;
        }
        return out;
    }
};

// One term of a coboundary: sign * (act[g] or identity) applied to the cochain at `block`.
struct Term {
    std::int64_t sign;
    std::size_t block;
    std::size_t acting;  // group element, or npos for no action
};

// Rows of d_k: C^k -> C^{k+1} evaluated at one output tuple.
inline std::vector<Term> coboundary_terms(GroupTable const& T, std::size_t k, std::vector<std::size_t> const& tup) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    auto block_of = [&](std::vector<std::size_t> const& xs) {
        std::size_t b = 0;
        for (auto x : xs) b = b * T.size + x;
        return b;
    };
    std::vector<Term> terms;
    // g1 . f(g2, ..., g_{k+1})
    terms.push_back({1, block_of({tup.begin() + 1, tup.end()}), tup[0]});
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> xs;
        for (std::size_t j = 0; j < tup.size(); ++j) {
            if (j == i) {
                xs.push_back(T.mul(tup[i], tup[i + 1]));
                ++j;
            } else {
                xs.push_back(tup[j]);
            }
        }
        terms.push_back({(i % 2 == 0) ? -1 : 1, block_of(xs), none});
    }
    terms.push_back({(k % 2 == 0) ? -1 : 1, block_of({tup.begin(), tup.end() - 1}), none});
    return terms;
}

inline std::size_t ipow_size(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= b;
    return r;
}

// Dense matrix of d_k with rows reduced modulo the module's factors.
inline Matrix coboundary_matrix(GroupTable const& T, std::vector<Integer> const& f, std::size_t k) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::size_t const r = f.size();
    std::size_t const nin = ipow_size(T.size, k), nout = ipow_size(T.size, k + 1);
    Matrix D(nout * r, nin * r);
    std::vector<std::size_t> tup(k + 1);
    for (std::size_t out = 0; out < nout; ++out) {
        std::size_t rest = out;
        for (std::size_t i = k + 1; i-- > 0;) {
            tup[i] = rest % T.size;
            rest /= T.size;
        }
        for (auto const& t : coboundary_terms(T, k, tup))
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    Integer coeff = t.acting == none ? Integer(i == j ? 1 : 0) : T.act[t.acting](i, j);
                    if (coeff != 0) D(out * r + i, t.block * r + j) += t.sign * coeff;
                }
    }
    for (std::size_t row = 0; row < D.rows(); ++row)
        for (std::size_t c = 0; c < D.cols(); ++c) D(row, c) = mod(D(row, c), f[row % r]);
    return D;
}

}  // namespace detail

/// H^degree(G, M) for degree 1 or 2 via inhomogeneous cochains.
/// Throws ResourceError when |G| exceeds max_group_order or the cochain system is too large.
inline FinAbGroup h_general(GModule const& M, int degree, std::int64_t max_group_order = 64,
                            std::size_t max_unknowns = 20000) {
    if (degree != 1 && degree != 2) throw PreconditionError("h_general: degree must be 1 or 2");
    if (M.group().order() > max_group_order) throw ResourceError("h_general: group order exceeds the configured bound");
    if (M.module().is_trivial()) return {};
    detail::GroupTable T(M);
    auto const& f = M.module().invariant_factors();
    std::size_t const r = f.size();
    auto const k = static_cast<std::size_t>(degree);
    std::size_t const nk = detail::ipow_size(T.size, k) * r;
    if (nk > max_unknowns) throw ResourceError("h_general: cochain space too large");
    Integer const e = M.module().exponent();
    if (e >= (Integer(1) << 62)) throw ResourceError("h_general: module exponent too large");
    auto const eu = e.convert_to<std::uint64_t>();

    // cocycle equations, each coordinate scaled into Z/e
    detail::ModEchelon ech(nk, eu);
    std::size_t const nout = detail::ipow_size(T.size, k + 1);
    std::vector<std::size_t> tup(k + 1);
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<Integer> acc(nk);
    for (std::size_t out = 0; out < nout; ++out) {
        std::size_t rest = out;
        for (std::size_t i = k + 1; i-- > 0;) {
            tup[i] = rest % T.size;
            rest /= T.size;
        }
        auto terms = detail::coboundary_terms(T, k, tup);
        for (std::size_t i = 0; i < r; ++i) {
            std::fill(acc.begin(), acc.end(), Integer(0));
            for (auto const& t : terms)
                for (std::size_t j = 0; j < r; ++j) {
                    Integer coeff = t.acting == none ? Integer(i == j ? 1 : 0) : T.act[t.acting](i, j);
                    if (coeff != 0) acc[t.block * r + j] += t.sign * coeff;
                }
            std::vector<std::uint64_t> row(nk);
            Integer const scale = e / f[i];
            for (std::size_t c = 0; c < nk; ++c) row[c] = mod(acc[c] * scale, e).convert_to<std::uint64_t>();
            ech.insert(std::move(row));
        }
    }

    std::vector<Integer> cochain_orders(nk);
    for (std::size_t c = 0; c < nk; ++c) cochain_orders[c] = f[c % r];
    Matrix E = ech.matrix();
    auto cocycles = abelian::kernel_of(cochain_orders, std::vector<Integer>(E.rows(), e), E);

    Matrix B = detail::coboundary_matrix(T, f, k - 1);
    Matrix lifted(cocycles.inclusion.cols(), B.cols());
    for (std::size_t c = 0; c < B.cols(); ++c) {
        auto y = abelian::solve_in(cochain_orders, cocycles.inclusion, B.column(c));
        for (std::size_t i = 0; i < y.size(); ++i) lifted(i, c) = y[i];
    }
    return abelian::quotient_of(cocycles.group.invariant_factors(), lifted).group;
}

/// The group of g-equivariant homomorphisms A -> mu.
inline FinAbGroup hom_g_dual(GModule const& A, GModule const& mu) {
    if (!(A.group() == mu.group())) throw PreconditionError("hom_g_dual: modules have different acting groups");
    auto const& a = A.module().invariant_factors();
    auto const& b = mu.module().invariant_factors();
    std::size_t const na = a.size(), nb = b.size();
    // Hom(A, mu) = ⊕ Z/gcd(a_j, b_i); entry (i, j) of the hom matrix is (b_i / g_ij) x_ij
    std::vector<Integer> hom_orders;
    std::vector<Integer> step;
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j < na; ++j) {
            Integer g = gcd(a[j], b[i]);
            hom_orders.push_back(g);
            step.push_back(b[i] / g);
        }
    std::size_t const ngen = A.actions().size();
    std::vector<Integer> tgt;
    Matrix L(ngen * nb * na, nb * na);
    for (std::size_t s = 0; s < ngen; ++s) {
        Matrix const& Ag = A.actions()[s].matrix();
        Matrix const& Mg = mu.actions()[s].matrix();
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < na; ++j) {
                std::size_t const row = (s * nb + i) * na + j;
                tgt.push_back(b[i]);
                // (F * Ag)(i, j) = sum_k F(i, k) Ag(k, j)
                for (std::size_t kk = 0; kk < na; ++kk) L(row, i * na + kk) += step[i * na + kk] * Ag(kk, j);
                // (Mg * F)(i, j) = sum_l Mg(i, l) F(l, j)
                for (std::size_t l = 0; l < nb; ++l) L(row, l * na + j) -= Mg(i, l) * step[l * na + j];
            }
    }
    if (L.rows() == 0) return FinAbGroup::from_cyclic_orders(hom_orders);
    return abelian::kernel_of(hom_orders, tgt, L).group;
}

}  // namespace capitula::cohomology
