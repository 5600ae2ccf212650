#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ptower/gmodule.hpp"
#include "ptower/modular_elim.hpp"

namespace ptower {

// Indexing for normalized bar tuples: arguments run over the non-identity
// elements, little-endian (first argument is the least significant digit).
struct BarIndexer {
    int q = 1;
    int qbar = 0;
    Elem identity = 0;
    std::vector<int> bar_of;    // element -> [0, qbar), identity -> -1
    std::vector<Elem> elem_of;  // [0, qbar) -> element

    explicit BarIndexer(const FiniteGroup& g) : q(g.order()), qbar(g.order() - 1), identity(g.identity()) {
        bar_of.assign(q, -1);
        for (Elem x = 0; x < q; ++x) {
            if (x == identity) continue;
            bar_of[x] = static_cast<int>(elem_of.size());
            elem_of.push_back(x);
        }
    }

    std::int64_t tuple_count(int degree) const {
        std::int64_t n = 1;
        for (int i = 0; i < degree; ++i) n *= qbar;
        return n;
    }

    void decode(std::int64_t idx, int degree, std::vector<Elem>& out) const {
        out.resize(degree);
        for (int i = 0; i < degree; ++i) {
            out[i] = elem_of[idx % qbar];
            idx /= qbar;
        }
    }

    std::int64_t encode(const std::vector<Elem>& args) const {
        std::int64_t idx = 0;
        for (size_t i = args.size(); i-- > 0;) idx = idx * qbar + bar_of[args[i]];
        return idx;
    }

    bool all_nonidentity(const std::vector<Elem>& args) const {
        for (Elem a : args)
            if (a == identity) return false;
        return true;
    }
};

// Dense cochain G^n -> A, stored over the full table (identity-argument
// entries are zero when the cochain is normalized).
class Cochain {
public:
    Cochain(GroupPtr group, ModulePtr coeffs, int degree, bool normalized = true)
        : group_(std::move(group)), coeffs_(std::move(coeffs)), degree_(degree), normalized_(normalized) {
        if (degree_ < 0) throw UserInputError("Cochain", "degree must be >= 0", "");
        std::int64_t tuples = 1;
        for (int i = 0; i < degree_; ++i) {
            tuples *= group_->order();
            if (tuples * coeffs_->rank() > limits().max_table_entries)
                throw CapacityError("Cochain", "cochain table exceeds the memory bound",
                                    "raise PTOWER_MAX_TABLE or lower the degree");
        }
        tuples_ = tuples;
        values_.assign(static_cast<size_t>(tuples_) * coeffs_->rank(), 0);
    }

    const GroupPtr& group() const { return group_; }
    const ModulePtr& coefficients() const { return coeffs_; }
    int degree() const { return degree_; }
    bool normalized() const { return normalized_; }
    std::int64_t tuple_count() const { return tuples_; }

    std::int64_t index_of(const std::vector<Elem>& args) const {
        std::int64_t idx = 0;
        const int q = group_->order();
        for (size_t i = args.size(); i-- > 0;) idx = idx * q + args[i];
        return idx;
    }

    void decode_index(std::int64_t idx, std::vector<Elem>& out) const {
        out.resize(degree_);
        const int q = group_->order();
        for (int i = 0; i < degree_; ++i) {
            out[i] = static_cast<Elem>(idx % q);
            idx /= q;
        }
    }

    Tuple value_at(std::int64_t idx) const {
        const int k = coeffs_->rank();
        Tuple t(k);
        for (int c = 0; c < k; ++c) t[c] = values_[static_cast<size_t>(idx) * k + c];
        return t;
    }

    void set_value_at(std::int64_t idx, const Tuple& t) {
        const int k = coeffs_->rank();
        Tuple r = coeffs_->abelian().reduce(t);
        for (int c = 0; c < k; ++c) values_[static_cast<size_t>(idx) * k + c] = r[c];
    }

    Tuple eval(const std::vector<Elem>& args) const { return value_at(index_of(args)); }
    void set(const std::vector<Elem>& args, const Tuple& t) { set_value_at(index_of(args), t); }

    const std::vector<Int>& raw() const { return values_; }

    bool is_zero() const {
        for (Int v : values_)
            if (v != 0) return false;
        return true;
    }

    // re-assert normalization (throws if violated)
    void check_normalized() const {
        std::vector<Elem> args;
        for (std::int64_t i = 0; i < tuples_; ++i) {
            decode_index(i, args);
            bool has_id = false;
            for (Elem a : args)
                if (a == group_->identity()) { has_id = true; break; }
            if (!has_id) continue;
            for (int c = 0; c < coeffs_->rank(); ++c)
                if (values_[static_cast<size_t>(i) * coeffs_->rank() + c] != 0)
                    throw UserInputError("Cochain", "normalized cochain has a nonzero identity-argument entry",
                                         "zero the entries whose argument tuple contains the identity");
        }
    }

private:
    GroupPtr group_;
    ModulePtr coeffs_;
    int degree_;
    bool normalized_;
    std::int64_t tuples_ = 1;
    std::vector<Int> values_;
};

inline bool same_shape(const Cochain& a, const Cochain& b) {
    return a.degree() == b.degree() && a.group()->same_table(*b.group()) &&
           a.coefficients()->abelian() == b.coefficients()->abelian();
}

inline Cochain cochain_add(const Cochain& a, const Cochain& b, Int bsign = 1) {
    if (!same_shape(a, b)) throw TheoryViolation("cochain_add", "shape mismatch");
    Cochain out(a.group(), a.coefficients(), a.degree(), a.normalized() && b.normalized());
    const auto& A = a.coefficients()->abelian();
    for (std::int64_t i = 0; i < a.tuple_count(); ++i) {
        Tuple t = A.add(a.value_at(i), A.smul(bsign, b.value_at(i)));
        out.set_value_at(i, t);
    }
    return out;
}

inline Cochain cochain_sub(const Cochain& a, const Cochain& b) { return cochain_add(a, b, -1); }

inline Cochain cochain_scale(const Cochain& a, Int s) {
    Cochain out(a.group(), a.coefficients(), a.degree(), a.normalized());
    const auto& A = a.coefficients()->abelian();
    for (std::int64_t i = 0; i < a.tuple_count(); ++i) out.set_value_at(i, A.smul(s, a.value_at(i)));
    return out;
}

// ---------------------------------------------------------------------------
// The twisted bar differential
//   (δc)(g1,...,g_{n+1}) = g1·c(g2,...,g_{n+1})
//                        + Σ_{i=1..n} (-1)^i c(g1,...,g_i g_{i+1},...,g_{n+1})
//                        + (-1)^{n+1} c(g1,...,g_n).

namespace detail {

// visit(args of length n+1) over the full table, computing δc there
template <typename F>
inline void for_each_coboundary_value(const Cochain& c, F&& visit) {
    const FiniteGroup& g = *c.group();
    const GModule& mod = *c.coefficients();
    const auto& A = mod.abelian();
    const int n = c.degree();
    const int q = g.order();
    std::int64_t total = 1;
    for (int i = 0; i < n + 1; ++i) total *= q;
    std::vector<Elem> args(n + 1), sub(n);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t rem = idx;
        for (int i = 0; i < n + 1; ++i) {
            args[i] = static_cast<Elem>(rem % q);
            rem /= q;
        }
        // term 0
        for (int i = 0; i < n; ++i) sub[i] = args[i + 1];
        Tuple acc = mod.act(args[0], c.eval(sub));
        // middle terms
        Int sign = 1;
        for (int i = 1; i <= n; ++i) {
            sign = -sign;
            for (int j = 0; j < n; ++j) {
                if (j < i - 1) sub[j] = args[j];
                else if (j == i - 1) sub[j] = g.mul(args[i - 1], args[i]);
                else sub[j] = args[j + 1];
            }
            acc = A.add(acc, A.smul(sign, c.eval(sub)));
        }
        // last term
        sign = -sign;
        for (int j = 0; j < n; ++j) sub[j] = args[j];
        acc = A.add(acc, A.smul(sign, c.eval(sub)));
        visit(idx, args, acc);
    }
}

}  // namespace detail

inline Cochain coboundary(const Cochain& c) {
    Cochain out(c.group(), c.coefficients(), c.degree() + 1, c.normalized());
    detail::for_each_coboundary_value(c, [&](std::int64_t idx, const std::vector<Elem>&, const Tuple& v) {
        out.set_value_at(idx, v);
    });
    return out;
}

inline bool is_cocycle(const Cochain& c) {
    bool ok = true;
    detail::for_each_coboundary_value(c, [&](std::int64_t, const std::vector<Elem>&, const Tuple& v) {
        if (ok && !c.coefficients()->abelian().is_zero(v)) ok = false;
    });
    return ok;
}

// streaming check of δb = target (avoids materializing the big table)
inline bool coboundary_equals(const Cochain& b, const Cochain& target) {
    if (b.degree() + 1 != target.degree()) return false;
    bool ok = true;
    const auto& A = target.coefficients()->abelian();
    detail::for_each_coboundary_value(b, [&](std::int64_t idx, const std::vector<Elem>&, const Tuple& v) {
        if (!ok) return;
        if (!A.is_zero(A.sub(v, target.value_at(idx)))) ok = false;
    });
    return ok;
}

// ---------------------------------------------------------------------------
// Functoriality operators.

// pullback along a homomorphism phi: C -> G of a cochain over G
inline Cochain pullback_cochain(const Cochain& c, const GroupPtr& src, const std::vector<Elem>& phi,
                                const ModulePtr& src_coeffs) {
    Cochain out(src, src_coeffs, c.degree(), c.normalized());
    std::vector<Elem> args, mapped(c.degree());
    for (std::int64_t i = 0; i < out.tuple_count(); ++i) {
        out.decode_index(i, args);
        for (int j = 0; j < c.degree(); ++j) mapped[j] = phi[args[j]];
        out.set_value_at(i, c.eval(mapped));
    }
    return out;
}

// push values through an integer matrix into another module over the same group
inline Cochain pushforward_cochain(const Cochain& c, const ModulePtr& target, const IMat& value_map) {
    Cochain out(c.group(), target, c.degree(), c.normalized());
    for (std::int64_t i = 0; i < c.tuple_count(); ++i)
        out.set_value_at(i, mat_apply(value_map, c.value_at(i)));
    return out;
}

// Transfer along a subgroup H <= G of finite index: walk through canonical
// left-coset representatives (smallest element per coset).
//   (tr c)(g1,...,gn) = Σ_{r} t0 · c(t0^{-1} g1 t1, ..., t_{n-1}^{-1} gn tn)
// where tn = r and t_{j-1} = rep((g_j t_j) H).
inline Cochain transfer_cochain(const Cochain& c, const GroupPtr& big, const Subgroup& h,
                                const ModulePtr& big_coeffs) {
    const FiniteGroup& g = *big;
    // coset representatives and the rep-of map
    std::vector<Elem> rep_of(g.order(), -1);
    std::vector<Elem> reps;
    for (Elem x = 0; x < g.order(); ++x) {
        if (rep_of[x] != -1) continue;
        reps.push_back(x);
        for (Elem hh : h.elements()) rep_of[g.mul(x, hh)] = x;
    }
    std::vector<int> h_index(g.order(), -1);
    const auto& hel = h.elements();
    for (size_t i = 0; i < hel.size(); ++i) h_index[hel[i]] = static_cast<int>(i);

    const int n = c.degree();
    Cochain out(big, big_coeffs, n, c.normalized());
    const auto& A = big_coeffs->abelian();
    std::vector<Elem> args(n), walk(n + 1), sub(n);
    for (std::int64_t i = 0; i < out.tuple_count(); ++i) {
        out.decode_index(i, args);
        Tuple acc = A.zero();
        for (Elem r : reps) {
            walk[n] = r;
            for (int j = n; j >= 1; --j) walk[j - 1] = rep_of[g.mul(args[j - 1], walk[j])];
            for (int j = 1; j <= n; ++j) {
                Elem inside = g.mul(g.inv(walk[j - 1]), g.mul(args[j - 1], walk[j]));
                if (h_index[inside] < 0)
                    throw TheoryViolation("transfer_cochain", "coset walk left the subgroup");
                sub[j - 1] = h_index[inside];
            }
            acc = A.add(acc, big_coeffs->act(walk[0], c.eval(sub)));
        }
        out.set_value_at(i, acc);
    }
    return out;
}

// For gcd(|G|, exponent A) = 1 and a cocycle z of degree n >= 1,
//   u(g1,...,g_{n-1}) = Σ_x z(g1,...,g_{n-1},x),  δu = (-1)^n |G| z,
// so b = (-1)^n |G|^{-1} u solves δb = z exactly.
inline Cochain coprime_coboundary_solve(const Cochain& z) {
    const FiniteGroup& g = *z.group();
    const GModule& mod = *z.coefficients();
    const auto& A = mod.abelian();
    Int m = A.exponent();
    if (gcd_ll(g.order(), m) != 1)
        throw TheoryViolation("coprime_coboundary_solve", "group order is not invertible on the module");
    const int n = z.degree();
    Cochain u(z.group(), z.coefficients(), n - 1, z.normalized());
    std::vector<Elem> args(n - 1), full(n);
    for (std::int64_t i = 0; i < u.tuple_count(); ++i) {
        u.decode_index(i, args);
        for (int j = 0; j < n - 1; ++j) full[j] = args[j];
        Tuple acc = A.zero();
        for (Elem x = 0; x < g.order(); ++x) {
            full[n - 1] = x;
            acc = A.add(acc, z.eval(full));
        }
        u.set_value_at(i, acc);
    }
    Int sign = (n % 2 == 0) ? 1 : -1;
    Int scale = (sign * mod_inverse(g.order() % m, m)) % m;
    return cochain_scale(u, scale);
}

// Sparse view over the normalized basis (row = bar-tuple index * rank + coord).
inline SparseVec cochain_to_sparse(const Cochain& c, const BarIndexer& bar) {
    SparseVec v;
    const int k = c.coefficients()->rank();
    const Int m = c.coefficients()->abelian().exponent();
    std::vector<Elem> args;
    for (std::int64_t t = 0; t < bar.tuple_count(c.degree()); ++t) {
        bar.decode(t, c.degree(), args);
        Tuple val = c.eval(args);
        for (int j = 0; j < k; ++j) {
            Int x = ((val[j] % m) + m) % m;
            if (x) v.e.emplace_back(static_cast<std::int32_t>(t * k + j), static_cast<std::int32_t>(x));
        }
    }
    return v;
}

inline Cochain cochain_from_sparse(const SparseVec& v, const GroupPtr& g, const ModulePtr& coeffs,
                                   int degree, const BarIndexer& bar) {
    Cochain out(g, coeffs, degree, true);
    const int k = coeffs->rank();
    std::vector<Elem> args;
    std::vector<Elem> full;
    for (auto [row, val] : v.e) {
        std::int64_t t = row / k;
        int j = row % k;
        bar.decode(t, degree, args);
        Tuple cur = out.eval(args);
        cur[j] += val;
        out.set(args, cur);
    }
    return out;
}

}  // namespace ptower
