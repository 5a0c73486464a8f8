#pragma once

// Finite abelian groups in invariant-factor form, homomorphisms between them,
// and the Smith normal form machinery behind kernels, cokernels and images.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "capitula/error.hpp"
#include "capitula/integer.hpp"
#include "capitula/matrix.hpp"

namespace capitula::abelian {

/// U * M * V = S with U, V unimodular and S diagonal, s1 | s2 | ... (zeros last).
/// Uinv is U^{-1}; it lifts quotient generators back to the original coordinates.
struct SmithForm {
    Matrix U;
    Matrix S;
    Matrix V;
    Matrix Uinv;
};

namespace detail {

// Row/column bookkeeping shared by the integral and modular eliminations.
struct Tracker {
    Matrix& S;
    Matrix& U;
    Matrix& Uinv;
    Matrix& V;

    void swap_rows(std::size_t a, std::size_t b) {
        S.swap_rows(a, b);
        U.swap_rows(a, b);
        Uinv.swap_cols(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        S.swap_cols(a, b);
        V.swap_cols(a, b);
    }
    // rows (a, b) <- [[x, y], [z, w]] (a, b); determinant must be 1
    void combine_rows(std::size_t a, std::size_t b, Integer const& x, Integer const& y, Integer const& z,
                      Integer const& w) {
        S.combine_rows(a, b, x, y, z, w);
        U.combine_rows(a, b, x, y, z, w);
        Uinv.combine_cols(a, b, w, -z, -y, x);
    }
    void combine_cols(std::size_t a, std::size_t b, Integer const& x, Integer const& y, Integer const& z,
                      Integer const& w) {
        S.combine_cols(a, b, x, y, z, w);
        V.combine_cols(a, b, x, y, z, w);
    }
    void add_row(std::size_t dst, std::size_t src, Integer const& k) {
        S.add_row(dst, src, k);
        U.add_row(dst, src, k);
        Uinv.add_col(src, dst, -k);
    }
    void add_col(std::size_t dst, std::size_t src, Integer const& k) {
        S.add_col(dst, src, k);
        V.add_col(dst, src, k);
    }
    void scale_row(std::size_t r, Integer const& u, Integer const& uinv) {
        for (std::size_t c = 0; c < S.cols(); ++c) S(r, c) *= u;
        for (std::size_t c = 0; c < U.cols(); ++c) U(r, c) *= u;
        for (std::size_t i = 0; i < Uinv.rows(); ++i) Uinv(i, r) *= uinv;
    }
};

// A unit u mod m with u * s = gcd(s, m) (mod m).
inline Integer normalizing_unit(Integer const& s, Integer const& m) {
    Integer g = gcd(s, m);
    Integer mp = m / g;
    if (mp == 1) return 1;
    Integer u = invmod(s / g, mp);
    while (gcd(u, m) != 1) u += mp;
    return u;
}

// Shared elimination loop. With modulus m > 0 every entry is kept in [0, m) and
// pivots are normalized to divisors of m; with m == 0 the arithmetic is over Z.
inline SmithForm smith(Matrix const& M, Integer const& m) {
    std::size_t const nr = M.rows(), nc = M.cols();
    SmithForm f{Matrix::identity(nr), M, Matrix::identity(nc), Matrix::identity(nr)};
    Tracker tr{f.S, f.U, f.Uinv, f.V};
    bool const modular = m > 0;
    auto reduce = [&] {
        if (!modular) return;
        f.S.reduce_mod(m);
        f.U.reduce_mod(m);
        f.Uinv.reduce_mod(m);
        f.V.reduce_mod(m);
    };
    auto is_zero = [&](Integer const& x) { return modular ? mod(x, m) == 0 : x == 0; };
    reduce();

    std::size_t const n = std::min(nr, nc);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // pivot: smallest nonzero magnitude in the trailing block
            std::size_t pr = nr, pc = nc;
            Integer best;
            for (std::size_t i = t; i < nr; ++i)
                for (std::size_t j = t; j < nc; ++j) {
                    if (is_zero(f.S(i, j))) continue;
                    Integer a = modular ? gcd(f.S(i, j), m) : abs(f.S(i, j));
                    if (pr == nr || a < best) {
                        best = a;
                        pr = i;
                        pc = j;
                    }
                }
            if (pr == nr) goto done;
            tr.swap_rows(t, pr);
            tr.swap_cols(t, pc);
            if (modular) {
                Integer u = normalizing_unit(f.S(t, t), m);
                if (u != 1) tr.scale_row(t, u, invmod(u, m));
                reduce();
            }

            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t i = t + 1; i < nr; ++i) {
                    if (is_zero(f.S(i, t))) continue;
                    Integer const a = f.S(t, t), b = f.S(i, t);
                    if (b % a == 0) {
                        tr.add_row(i, t, -(b / a));
                    } else {
                        auto [g, x, y] = ext_gcd(a, b);
                        tr.combine_rows(t, i, x, y, -(b / g), a / g);
                        changed = true;
                    }
                    reduce();
                }
                for (std::size_t j = t + 1; j < nc; ++j) {
                    if (is_zero(f.S(t, j))) continue;
                    Integer const a = f.S(t, t), b = f.S(t, j);
                    if (b % a == 0) {
                        tr.add_col(j, t, -(b / a));
                    } else {
                        auto [g, x, y] = ext_gcd(a, b);
                        tr.combine_cols(t, j, x, y, -(b / g), a / g);
                        changed = true;
                    }
                    reduce();
                }
                if (modular && !is_zero(f.S(t, t))) {
                    Integer u = normalizing_unit(f.S(t, t), m);
                    if (u != 1) {
                        tr.scale_row(t, u, invmod(u, m));
                        reduce();
                    }
                }
            }

            // divisibility: the pivot must divide the whole trailing block
            bool divides = true;
            for (std::size_t i = t + 1; i < nr && divides; ++i)
                for (std::size_t j = t + 1; j < nc; ++j)
                    if (f.S(i, j) % f.S(t, t) != 0) {
                        tr.add_row(t, i, 1);
                        reduce();
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (!modular && f.S(t, t) < 0) tr.scale_row(t, -1, -1);
    }
done:
    reduce();
    return f;
}

}  // namespace detail

/// Smith normal form over the integers.
inline SmithForm smith_normal_form(Matrix const& M) { return detail::smith(M, 0); }

/// Smith normal form over Z/m (m >= 1): diagonal entries are divisors of m in a
/// divisibility chain, with 0 standing for m.
inline SmithForm smith_normal_form_mod(Matrix const& M, Integer const& m) {
    if (m < 1) throw PreconditionError("modulus must be positive");
    return detail::smith(M, m);
}

/// A finite abelian group Z/d1 + ... + Z/dk with d1 | d2 | ... and every di >= 2.
class FinAbGroup {
public:
    FinAbGroup() = default;

    /// Validates a divisibility chain of factors >= 2.
    static FinAbGroup from_invariant_factors(std::vector<Integer> factors) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i] < 2) throw PreconditionError("invariant factor must be >= 2");
            if (i > 0 && factors[i] % factors[i - 1] != 0)
                throw PreconditionError("invariant factors must form a divisibility chain");
        }
        FinAbGroup g;
        g.factors_ = std::move(factors);
        return g;
    }

    /// Normal form of Z/c1 + ... + Z/cn for arbitrary orders ci >= 1.
    static FinAbGroup from_cyclic_orders(std::vector<Integer> const& orders);

    static FinAbGroup cyclic(Integer const& n) { return from_cyclic_orders({n}); }

    std::vector<Integer> const& invariant_factors() const { return factors_; }
    std::size_t rank() const { return factors_.size(); }
    bool is_trivial() const { return factors_.empty(); }

    Integer order() const { return product_of(factors_); }
    Integer exponent() const { return factors_.empty() ? Integer(1) : factors_.back(); }

    friend bool operator==(FinAbGroup const&, FinAbGroup const&) = default;

    /// "0" for the trivial group, otherwise "Z/2 + Z/4".
    std::string to_string() const {
        if (factors_.empty()) return "0";
        std::ostringstream os;
        for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? " + " : "") << "Z/" << factors_[i];
        return os.str();
    }

private:
    std::vector<Integer> factors_;
};

/// A quotient of Z/o1 + ... + Z/ok together with coordinate maps.
/// projection has one row per generator of `group`; section lifts those generators.
struct Quotient {
    FinAbGroup group;
    Matrix projection;
    Matrix section;
};

/// A subgroup of Z/o1 + ... + Z/ok; inclusion columns are its generators in ambient coordinates.
struct Subgroup {
    FinAbGroup group;
    Matrix inclusion;
};

namespace detail {

inline Integer exponent_of(std::vector<Integer> const& orders) {
    Integer m = 1;
    for (auto const& o : orders) m = lcm(m, o);
    return m;
}

// Kernel over Z/m of A : (Z/m)^s -> (Z/m)^k, returned as generating columns in Z^s.
inline std::vector<std::vector<Integer>> kernel_mod(Matrix const& A, Integer const& m) {
    std::size_t const k = A.rows(), s = A.cols();
    SmithForm f = smith_normal_form_mod(A, m);
    std::vector<std::vector<Integer>> gens;
    for (std::size_t i = 0; i < s; ++i) {
        Integer scale = 1;
        if (i < k) {
            Integer d = mod(f.S(i, i), m);
            scale = d == 0 ? Integer(1) : m / gcd(d, m);
        }
        if (scale == m) continue;
        std::vector<Integer> v(s);
        bool nonzero = false;
        for (std::size_t r = 0; r < s; ++r) {
            v[r] = mod(f.V(r, i) * scale, m);
            nonzero |= v[r] != 0;
        }
        if (nonzero) gens.push_back(std::move(v));
    }
    return gens;
}

}  // namespace detail

/// (Z/o1 + ... + Z/ok) / <columns of gens>.
inline Quotient quotient_of(std::vector<Integer> const& orders, Matrix const& gens) {
    std::size_t const k = orders.size();
    if (gens.rows() != k) throw PreconditionError("quotient_of: generator length mismatch");
    for (auto const& o : orders)
        if (o < 1) throw PreconditionError("quotient_of: cyclic orders must be positive");
    Integer const m = detail::exponent_of(orders);
    Matrix R = Matrix::hconcat(Matrix::diagonal(orders), gens);
    SmithForm f = smith_normal_form_mod(R, m);

    std::vector<std::size_t> keep;
    std::vector<Integer> factors;
    for (std::size_t i = 0; i < k; ++i) {
        Integer d = i < R.cols() ? mod(f.S(i, i), m) : Integer(0);
        if (d == 0) d = m;
        if (d == 1) continue;
        keep.push_back(i);
        factors.push_back(d);
    }
    Quotient q;
    q.group = FinAbGroup::from_invariant_factors(factors);
    q.projection = Matrix(keep.size(), k);
    q.section = Matrix(k, keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t c = 0; c < k; ++c) {
            q.projection(a, c) = mod(f.U(keep[a], c), factors[a]);
            q.section(c, a) = mod(f.Uinv(c, keep[a]), orders[c]);
        }
    }
    return q;
}

/// The subgroup of Z/o1 + ... + Z/ok generated by the columns of gens.
inline Subgroup subgroup_of(std::vector<Integer> const& orders, Matrix const& gens) {
    std::size_t const k = orders.size(), s = gens.cols();
    if (gens.rows() != k) throw PreconditionError("subgroup_of: generator length mismatch");
    Integer const m = detail::exponent_of(orders);
    // relations y with gens*y = 0, via the embedding Z/o -> Z/m, x -> (m/o) x
    Matrix A(k, s);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < s; ++c) A(r, c) = mod(gens(r, c) * (m / orders[r]), m);
    auto rel = detail::kernel_mod(A, m);
    Quotient q = quotient_of(std::vector<Integer>(s, m), Matrix::from_columns(s, rel));
    Subgroup out;
    out.group = q.group;
    out.inclusion = gens * q.section;
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < out.inclusion.cols(); ++c)
            out.inclusion(r, c) = mod(out.inclusion(r, c), orders[r]);
    return out;
}

/// Elements x of Z/a1 + ... with M x = 0 in Z/b1 + ..., as a subgroup of the source.
inline Subgroup kernel_of(std::vector<Integer> const& src, std::vector<Integer> const& tgt, Matrix const& M) {
    if (M.rows() != tgt.size() || M.cols() != src.size()) throw MalformedHom("kernel_of: dimension mismatch");
    Integer m = lcm(detail::exponent_of(src), detail::exponent_of(tgt));
    Matrix A(M.rows(), M.cols());
    for (std::size_t r = 0; r < M.rows(); ++r)
        for (std::size_t c = 0; c < M.cols(); ++c) A(r, c) = mod(M(r, c) * (m / tgt[r]), m);
    auto gens = detail::kernel_mod(A, m);
    return subgroup_of(src, Matrix::from_columns(src.size(), gens));
}

/// Solves inc * y = x in Z/o (ambient orders), returning y in Z^{inc.cols()}.
/// Throws PreconditionError when x is not in the span of the columns of inc.
inline std::vector<Integer> solve_in(std::vector<Integer> const& orders, Matrix const& inc,
                                     std::vector<Integer> const& x) {
    std::size_t const k = orders.size(), s = inc.cols();
    Integer const m = detail::exponent_of(orders);
    Matrix A(k, s);
    std::vector<Integer> rhs(k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < s; ++c) A(r, c) = mod(inc(r, c) * (m / orders[r]), m);
        rhs[r] = mod(x[r] * (m / orders[r]), m);
    }
    SmithForm f = smith_normal_form_mod(A, m);
    std::vector<Integer> c = f.U * rhs;
    std::vector<Integer> z(s);
    for (std::size_t i = 0; i < k; ++i) {
        Integer ci = mod(c[i], m);
        Integer d = i < s ? mod(f.S(i, i), m) : Integer(0);
        if (d == 0) {
            if (ci != 0) throw PreconditionError("solve_in: element not in the subgroup");
            continue;
        }
        Integer g = gcd(d, m);
        if (ci % g != 0) throw PreconditionError("solve_in: element not in the subgroup");
        z[i] = ci / g * (d / g == 1 ? Integer(1) : invmod(d / g, m / g));
    }
    std::vector<Integer> y = f.V * z;
    for (auto& v : y) v = mod(v, m);
    return y;
}

inline FinAbGroup FinAbGroup::from_cyclic_orders(std::vector<Integer> const& orders) {
    for (auto const& o : orders)
        if (o < 1) throw PreconditionError("cyclic orders must be positive");
    return quotient_of(orders, Matrix(orders.size(), 0)).group;
}

/// A homomorphism between finite abelian groups, given on standard generators.
class AbHom {
public:
    AbHom() = default;

    /// matrix(i, j) = i-th target coordinate of the image of the j-th source generator.
    AbHom(FinAbGroup source, FinAbGroup target, Matrix matrix)
        : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
        auto const& sf = source_.invariant_factors();
        auto const& tf = target_.invariant_factors();
        if (matrix_.rows() != tf.size() || matrix_.cols() != sf.size())
            throw MalformedHom("matrix shape does not match generator counts");
        for (std::size_t r = 0; r < tf.size(); ++r)
            for (std::size_t c = 0; c < sf.size(); ++c) {
                if ((matrix_(r, c) * sf[c]) % tf[r] != 0)
                    throw MalformedHom("image of a generator has order not dividing the generator's order");
                matrix_(r, c) = mod(matrix_(r, c), tf[r]);
            }
    }

    static AbHom identity(FinAbGroup const& g) { return {g, g, Matrix::identity(g.rank())}; }
    static AbHom zero(FinAbGroup const& s, FinAbGroup const& t) { return {s, t, Matrix(t.rank(), s.rank())}; }

    FinAbGroup const& source() const { return source_; }
    FinAbGroup const& target() const { return target_; }
    Matrix const& matrix() const { return matrix_; }

    std::vector<Integer> apply(std::vector<Integer> const& x) const {
        std::vector<Integer> y = matrix_ * x;
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = mod(y[r], target_.invariant_factors()[r]);
        return y;
    }

    /// this ∘ other
    AbHom after(AbHom const& other) const {
        if (!(other.target_ == source_)) throw MalformedHom("composition: groups do not match");
        return {other.source_, target_, matrix_ * other.matrix_};
    }

    friend AbHom operator-(AbHom const& a, AbHom const& b) {
        if (!(a.source_ == b.source_) || !(a.target_ == b.target_)) throw MalformedHom("difference: groups differ");
        return {a.source_, a.target_, a.matrix_ - b.matrix_};
    }
    friend AbHom operator+(AbHom const& a, AbHom const& b) {
        if (!(a.source_ == b.source_) || !(a.target_ == b.target_)) throw MalformedHom("sum: groups differ");
        return {a.source_, a.target_, a.matrix_ + b.matrix_};
    }
    friend bool operator==(AbHom const& a, AbHom const& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
    }

private:
    FinAbGroup source_;
    FinAbGroup target_;
    Matrix matrix_;
};

struct Kernel {
    FinAbGroup group;
    AbHom inclusion;
};

inline Kernel kernel(AbHom const& h) {
    Subgroup s = kernel_of(h.source().invariant_factors(), h.target().invariant_factors(), h.matrix());
    return {s.group, AbHom(s.group, h.source(), s.inclusion)};
}

inline FinAbGroup cokernel(AbHom const& h) {
    return quotient_of(h.target().invariant_factors(), h.matrix()).group;
}

/// The projection target -> coker(h).
inline AbHom cokernel_map(AbHom const& h) {
    Quotient q = quotient_of(h.target().invariant_factors(), h.matrix());
    return {h.target(), q.group, q.projection};
}

inline Integer image_order(AbHom const& h) {
    return subgroup_of(h.target().invariant_factors(), h.matrix()).group.order();
}

/// g with inc ∘ g = h, where inc is injective and im h ⊂ im inc.
inline AbHom lift_through(AbHom const& inc, AbHom const& h) {
    if (!(inc.target() == h.target())) throw MalformedHom("lift_through: targets differ");
    auto const& orders = inc.target().invariant_factors();
    Matrix g(inc.source().rank(), h.source().rank());
    for (std::size_t c = 0; c < h.source().rank(); ++c) {
        auto y = solve_in(orders, inc.matrix(), h.matrix().column(c));
        for (std::size_t r = 0; r < y.size(); ++r) g(r, c) = y[r];
    }
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) = mod(g(r, c), inc.source().invariant_factors()[r]);
    return {h.source(), inc.source(), g};
}

/// Induced map on quotients: given h: A -> B and projections pA: A -> A', pB: B -> B'
/// (pA surjective with ker pA mapped into ker pB), returns A' -> B'.
inline AbHom induced_on_quotient(Quotient const& qa, AbHom const& h, Quotient const& qb) {
    Matrix m = qb.projection * h.matrix() * qa.section;
    return {qa.group, qb.group, m};
}

/// ker[Z/d1 + ... + Z/dr -> Z/D], generator v sent to D/dv.
inline FinAbGroup sum_map_kernel(std::vector<Integer> const& d, Integer const& D) {
    if (d.empty()) throw PreconditionError("sum_map_kernel: empty list of local degrees");
    for (auto const& x : d)
        if (x < 1) throw PreconditionError("sum_map_kernel: local degrees must be positive");
    if (lcm_of(d) != D) throw PreconditionError("sum_map_kernel: D must equal lcm(d)");
    Matrix M(1, d.size());
    for (std::size_t v = 0; v < d.size(); ++v) M(0, v) = D / d[v];
    return kernel_of(d, {D}, M).group;
}

/// Number of invariant factors divisible by the prime ell.
inline std::size_t ell_rank(FinAbGroup const& g, Integer const& ell) {
    if (!is_prime(ell)) throw PreconditionError("ell_rank: ell must be prime");
    std::size_t r = 0;
    for (auto const& d : g.invariant_factors())
        if (d % ell == 0) ++r;
    return r;
}

inline FinAbGroup direct_sum(FinAbGroup const& a, FinAbGroup const& b) {
    std::vector<Integer> o = a.invariant_factors();
    o.insert(o.end(), b.invariant_factors().begin(), b.invariant_factors().end());
    return FinAbGroup::from_cyclic_orders(o);
}

}  // namespace capitula::abelian
