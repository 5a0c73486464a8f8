#pragma once

// Finite fields GF(p^n) with p^n <= 2^20, elements encoded as integers whose
// base-p digits are the coefficients of a polynomial in a primitive root x.
// The prime field is therefore {0, ..., p-1} in every GF(p^n).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "capitula/error.hpp"

namespace capitula::fforacle {

using Elem = std::uint32_t;

namespace detail {

// Conway polynomials, ascending coefficients without the leading 1.
inline std::vector<int> const* conway_table(int p, int n) {
    static std::map<std::pair<int, int>, std::vector<int>> const table = {
        {{2, 1}, {1}},
        {{2, 2}, {1, 1}},
        {{2, 3}, {1, 1, 0}},
        {{2, 4}, {1, 1, 0, 0}},
        {{2, 5}, {1, 0, 1, 0, 0}},
        {{2, 6}, {1, 1, 0, 1, 1, 0}},
        {{2, 7}, {1, 1, 0, 0, 0, 0, 0}},
        {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0}},
        {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0}},
        {{2, 10}, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0}},
        {{2, 11}, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
        {{2, 12}, {1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0}},
        {{3, 1}, {1}},
        {{3, 2}, {2, 2}},
        {{3, 3}, {1, 2, 0}},
        {{3, 4}, {2, 0, 0, 2}},
        {{3, 5}, {1, 2, 0, 0, 0}},
        {{3, 6}, {2, 2, 1, 0, 2, 0}},
        {{3, 7}, {1, 0, 2, 0, 0, 0, 0}},
        {{5, 1}, {3}},
        {{5, 2}, {2, 4}},
        {{5, 3}, {3, 3, 0}},
        {{5, 4}, {2, 1, 4, 0}},
        {{5, 5}, {3, 4, 0, 0, 0}},
        {{7, 1}, {4}},
        {{7, 2}, {3, 6}},
        {{7, 3}, {4, 0, 6}},
    };
    auto it = table.find({p, n});
    return it == table.end() ? nullptr : &it->second;
}

}  // namespace detail

class GF {
public:
    static constexpr std::uint64_t max_size = 1u << 20;

    /// Builds GF(p^n) from the shipped table, or the first primitive polynomial in
    /// lexicographic order when the table has no (primitive) entry.
    GF(int p, int n) : p_(p), n_(n) {
        if (p < 2 || n < 1) throw PreconditionError("GF: need a prime p and n >= 1");
        for (int d = 2; d * d <= p; ++d)
            if (p % d == 0) throw PreconditionError("GF: characteristic must be prime");
        std::uint64_t sz = 1;
        for (int i = 0; i < n; ++i) {
            sz *= static_cast<std::uint64_t>(p);
            if (sz > max_size) throw ResourceError("GF: field too large");
        }
        size_ = static_cast<std::uint32_t>(sz);
        pw_.resize(static_cast<std::size_t>(n) + 1);
        pw_[0] = 1;
        for (int i = 1; i <= n; ++i) pw_[i] = pw_[i - 1] * static_cast<std::uint32_t>(p);

        if (auto const* c = detail::conway_table(p, n); c && try_build(*c)) {
            conway_ = true;
            return;
        }
        std::vector<int> c(static_cast<std::size_t>(n), 0);
        for (std::uint32_t code = 1; code < size_; ++code) {
            std::uint32_t x = code;
            for (int i = 0; i < n; ++i) {
                c[i] = static_cast<int>(x % static_cast<std::uint32_t>(p));
                x /= static_cast<std::uint32_t>(p);
            }
            if (try_build(c)) return;
        }
        throw Error("GF: no primitive polynomial found");
    }

    int characteristic() const { return p_; }
    int degree() const { return n_; }
    std::uint32_t size() const { return size_; }
    bool from_conway_table() const { return conway_; }
    /// Ascending coefficients of the defining polynomial, leading 1 included.
    std::vector<int> modulus() const {
        auto m = modulus_;
        m.push_back(1);
        return m;
    }

    Elem add(Elem a, Elem b) const {
        if (p_ == 2) return a ^ b;
        Elem r = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint32_t da = a % static_cast<std::uint32_t>(p_), db = b % static_cast<std::uint32_t>(p_);
            a /= static_cast<std::uint32_t>(p_);
            b /= static_cast<std::uint32_t>(p_);
            r += ((da + db) % static_cast<std::uint32_t>(p_)) * pw_[i];
        }
        return r;
    }
    Elem neg(Elem a) const {
        if (p_ == 2) return a;
        Elem r = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint32_t da = a % static_cast<std::uint32_t>(p_);
            a /= static_cast<std::uint32_t>(p_);
            r += ((static_cast<std::uint32_t>(p_) - da) % static_cast<std::uint32_t>(p_)) * pw_[i];
        }
        return r;
    }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Elem inv(Elem a) const {
        if (a == 0) throw PreconditionError("GF: inverse of zero");
        return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (size_ - 1))) % (size_ - 1)];
    }
    /// a^(p^k)
    Elem frobenius(Elem a, int k = 1) const {
        std::uint64_t e = 1;
        for (int i = 0; i < k % n_; ++i) e *= static_cast<std::uint64_t>(p_);
        return pow(a, e);
    }
    /// Inverse Frobenius a^(1/p).
    Elem root_p(Elem a) const { return frobenius(a, n_ - 1); }

    /// Element of the prime field.
    Elem from_int(long long c) const {
        long long r = c % p_;
        if (r < 0) r += p_;
        return static_cast<Elem>(r);
    }
    Elem primitive() const { return exp_[1]; }
    std::uint32_t log(Elem a) const {
        if (a == 0) throw PreconditionError("GF: log of zero");
        return log_[a];
    }
    Elem exp(std::uint64_t k) const { return exp_[k % (size_ - 1)]; }

    /// Absolute trace to the prime field.
    Elem trace(Elem a) const {
        Elem s = 0, x = a;
        for (int i = 0; i < n_; ++i) {
            s = add(s, x);
            x = frobenius(x);
        }
        return s;
    }
    /// Trace to the subfield of size p^d (d | n).
    Elem trace_to(Elem a, int d) const {
        Elem s = 0, x = a;
        for (int i = 0; i < n_ / d; ++i) {
            s = add(s, x);
            x = frobenius(x, d);
        }
        return s;
    }
    std::uint64_t multiplicative_order(Elem a) const {
        std::uint64_t m = size_ - 1, g = std::gcd(static_cast<std::uint64_t>(log(a)), m);
        return m / g;
    }
    /// Whether a lies in the subfield of size p^d.
    bool in_subfield(Elem a, int d) const { return frobenius(a, d) == a; }

private:
    bool try_build(std::vector<int> const& c) {
        modulus_ = c;
        exp_.assign(2 * static_cast<std::size_t>(size_), 0);
        log_.assign(size_, 0);
        // x^i as digit vectors, multiplied by x each step.
        std::vector<int> cur(static_cast<std::size_t>(n_), 0);
        cur[0] = 1;
        std::vector<char> seen(size_, 0);
        for (std::uint32_t i = 0; i + 1 < size_; ++i) {
            Elem code = 0;
            for (int j = 0; j < n_; ++j) code += static_cast<Elem>(cur[j]) * pw_[j];
            if (seen[code]) return false;
            seen[code] = 1;
            exp_[i] = code;
            log_[code] = i;
            if (n_ == 1) {
                cur[0] = (cur[0] * ((p_ - c[0]) % p_)) % p_;
            } else {
                int top = cur[n_ - 1];
                for (int j = n_ - 1; j > 0; --j) cur[j] = cur[j - 1];
                cur[0] = 0;
                for (int j = 0; j < n_; ++j) cur[j] = ((cur[j] - top * c[j]) % p_ + p_) % p_;
            }
        }
        Elem back = 0;
        for (int j = 0; j < n_; ++j) back += static_cast<Elem>(cur[j]) * pw_[j];
        if (back != 1) return false;
        for (std::uint32_t i = size_ - 1; i < 2 * size_; ++i) exp_[i] = exp_[i - (size_ - 1)];
        return true;
    }

    int p_, n_;
    std::uint32_t size_ = 0;
    bool conway_ = false;
    std::vector<std::uint32_t> pw_;
    std::vector<int> modulus_;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<GF const>;

/// Shared GF(p^n) instance.
inline FieldPtr field(int p, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, n}];
    if (!slot) slot = std::make_shared<GF const>(p, n);
    return slot;
}

/// Field embedding GF(p^a) -> GF(p^b), a | b, as a lookup table.
class Embedding {
public:
    Embedding(FieldPtr small, FieldPtr big) : small_(std::move(small)), big_(std::move(big)) {
        int const a = small_->degree(), b = big_->degree();
        if (small_->characteristic() != big_->characteristic() || b % a != 0)
            throw PreconditionError("Embedding: not a subfield");
        std::uint64_t const cofactor = (static_cast<std::uint64_t>(big_->size()) - 1) / (small_->size() - 1);
        Elem const beta = big_->exp(cofactor);
        auto const mod = small_->modulus();
        // Image of the small field's primitive root: the first power beta^j, j prime to
        // |small^*|, that is a root of its defining polynomial.
        std::uint64_t const sm = small_->size() - 1;
        Elem image = 0;
        for (std::uint64_t j = 1; j <= sm && image == 0; ++j) {
            if (std::gcd(j, sm) != 1) continue;
            Elem r = big_->pow(beta, j);
            Elem v = 0, xp = 1;
            for (int c : mod) {
                v = big_->add(v, big_->mul(big_->from_int(c), xp));
                xp = big_->mul(xp, r);
            }
            if (v == 0) image = r;
        }
        if (image == 0) throw Error("Embedding: no root of the defining polynomial");
        compatible_ = image == beta;
        map_.assign(small_->size(), 0);
        inverse_.clear();
        for (std::uint64_t k = 0; k < sm; ++k) {
            Elem s = small_->exp(k), t = big_->pow(image, k);
            map_[s] = t;
            inverse_[t] = s;
        }
        inverse_[0] = 0;
    }

    Elem operator()(Elem x) const { return map_[x]; }
    /// Preimage of an element of the subfield.
    Elem preimage(Elem y) const {
        auto it = inverse_.find(y);
        if (it == inverse_.end()) throw PreconditionError("Embedding: element not in the subfield");
        return it->second;
    }
    /// Whether the shipped polynomials are norm-compatible at this pair.
    bool compatible() const { return compatible_; }
    FieldPtr const& small() const { return small_; }
    FieldPtr const& big() const { return big_; }

private:
    FieldPtr small_, big_;
    std::vector<Elem> map_;
    std::map<Elem, Elem> inverse_;
    bool compatible_ = false;
};

inline std::shared_ptr<Embedding const> embedding(FieldPtr const& small, FieldPtr const& big) {
    static std::mutex mu;
    static std::map<std::pair<GF const*, GF const*>, std::shared_ptr<Embedding const>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({small.get(), big.get()});
        if (it != cache.end()) return it->second;
    }
    auto e = std::make_shared<Embedding const>(small, big);
    std::lock_guard<std::mutex> lock(mu);
    cache[{small.get(), big.get()}] = e;
    return e;
}

}  // namespace capitula::fforacle
