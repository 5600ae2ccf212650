#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "ptower/smith.hpp"

namespace ptower {

using Tuple = std::vector<Int>;

// Finite abelian group in invariant-factor form: Z/d1 x ... x Z/dk with
// d1 | d2 | ... | dk and every di >= 2. Elements are integer tuples reduced
// componentwise. k = 0 encodes the trivial group.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;

    explicit FiniteAbelianGroup(std::vector<Int> invariant_factors)
        : factors_(std::move(invariant_factors)) {
        for (size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i] < 2)
                throw UserInputError("invariant_factors", "factors must be >= 2",
                                     "drop unit factors before constructing the group");
            if (i > 0 && factors_[i] % factors_[i - 1] != 0)
                throw UserInputError("invariant_factors",
                                     "divisibility chain violated at position " + std::to_string(i),
                                     "reorder via Smith normal form first");
        }
    }

    int rank() const { return static_cast<int>(factors_.size()); }
    const std::vector<Int>& factors() const { return factors_; }

    Int order() const {
        Int o = 1;
        for (Int d : factors_) o *= d;
        return o;
    }

    Int exponent() const { return factors_.empty() ? 1 : factors_.back(); }

    bool is_trivial() const { return factors_.empty(); }

    Tuple zero() const { return Tuple(factors_.size(), 0); }

    Tuple reduce(Tuple t) const {
        for (size_t i = 0; i < factors_.size(); ++i) {
            t[i] %= factors_[i];
            if (t[i] < 0) t[i] += factors_[i];
        }
        return t;
    }

    Tuple add(const Tuple& a, const Tuple& b) const {
        Tuple r(factors_.size());
        for (size_t i = 0; i < factors_.size(); ++i) r[i] = a[i] + b[i];
        return reduce(std::move(r));
    }

    Tuple sub(const Tuple& a, const Tuple& b) const {
        Tuple r(factors_.size());
        for (size_t i = 0; i < factors_.size(); ++i) r[i] = a[i] - b[i];
        return reduce(std::move(r));
    }

    Tuple neg(const Tuple& a) const {
        Tuple r(factors_.size());
        for (size_t i = 0; i < factors_.size(); ++i) r[i] = -a[i];
        return reduce(std::move(r));
    }

    Tuple smul(Int c, const Tuple& a) const {
        Tuple r(factors_.size());
        for (size_t i = 0; i < factors_.size(); ++i) r[i] = c * (a[i] % factors_[i]);
        return reduce(std::move(r));
    }

    bool is_zero(const Tuple& a) const {
        for (size_t i = 0; i < factors_.size(); ++i)
            if (a[i] % factors_[i] != 0) return false;
        return true;
    }

    // mixed-radix element indexing, used by tests and G-set style enumeration
    Int element_count_checked() const {
        Int o = order();
        if (o > (Int(1) << 22))
            throw CapacityError("FiniteAbelianGroup", "group too large to enumerate",
                                "keep module orders small");
        return o;
    }

    Tuple element_at(Int index) const {
        Tuple t(factors_.size());
        for (size_t i = 0; i < factors_.size(); ++i) {
            t[i] = index % factors_[i];
            index /= factors_[i];
        }
        return t;
    }

    Int index_of(const Tuple& t) const {
        Int idx = 0;
        for (size_t i = factors_.size(); i-- > 0;) idx = idx * factors_[i] + (t[i] % factors_[i] + factors_[i]) % factors_[i];
        return idx;
    }

    bool operator==(const FiniteAbelianGroup& o) const { return factors_ == o.factors_; }

private:
    std::vector<Int> factors_;
};

// ---------------------------------------------------------------------------
// Presentations and subquotients. These reduce every structural question
// about finite abelian groups to Smith normal form.

struct PresentedAbelian {
    FiniteAbelianGroup group;
    IMat to_canonical;    // old ambient coords -> canonical coords
    IMat from_canonical;  // canonical coords -> old ambient coords
};

// Structure of (Z^k / span(relation columns) + diag(moduli)).
inline PresentedAbelian quotient_presentation(const IMat& relation_cols,
                                              const std::vector<Int>& moduli) {
    const int k = static_cast<int>(moduli.size());
    IMat rel(k, relation_cols.cols + k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < relation_cols.cols; ++j) rel.at(i, j) = relation_cols.at(i, j);
    for (int i = 0; i < k; ++i) rel.at(i, relation_cols.cols + i) = moduli[i];

    SmithResult s = smith_normal_form(rel);
    std::vector<Int> factors;
    std::vector<int> keep;
    for (int i = 0; i < k; ++i) {
        Int d = (i < std::min(rel.rows, rel.cols)) ? s.d.at(i, i) : 0;
        if (d == 0)
            throw TheoryViolation("quotient_presentation", "expected a finite quotient");
        if (d >= 2) {
            factors.push_back(d);
            keep.push_back(i);
        }
    }
    PresentedAbelian out;
    out.group = FiniteAbelianGroup(factors);
    out.to_canonical = IMat(static_cast<int>(keep.size()), k);
    out.from_canonical = IMat(k, static_cast<int>(keep.size()));
    for (size_t r = 0; r < keep.size(); ++r)
        for (int c = 0; c < k; ++c) {
            out.to_canonical.at(static_cast<int>(r), c) = s.u.at(keep[r], c);
            out.from_canonical.at(c, static_cast<int>(r)) = s.uinv.at(c, keep[r]);
        }
    return out;
}

// Subgroup of an ambient ⊕ Z/m_i described by generating tuples. Provides the
// canonical structure, aligned generators, and membership/coordinate solving.
struct AbelianSubgroup {
    FiniteAbelianGroup structure;       // invariant factors of the subgroup
    std::vector<Tuple> basis;           // one ambient tuple per factor
    std::vector<Int> ambient_moduli;
    IMat gen_matrix;                    // columns: original generators
    IMat coord_transform;               // structure coords of each original generator combo

    Int order() const { return structure.order(); }
    bool is_trivial() const { return structure.is_trivial(); }
};

inline AbelianSubgroup subgroup_from_generators(const std::vector<Tuple>& gens,
                                                const std::vector<Int>& moduli) {
    const int k = static_cast<int>(moduli.size());
    const int m = static_cast<int>(gens.size());
    IMat g(k, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < k; ++i) g.at(i, j) = gens[j][i];

    AbelianSubgroup out;
    out.ambient_moduli = moduli;
    out.gen_matrix = g;
    if (m == 0) {
        out.structure = FiniteAbelianGroup();
        out.coord_transform = IMat(0, 0);
        return out;
    }

    // kernel of Z^m -> ambient:  y with  G y ≡ 0 (mod moduli)
    IMat aug(k, m + k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < m; ++j) aug.at(i, j) = g.at(i, j);
        aug.at(i, m + i) = moduli[i];
    }
    IMat ker = integer_kernel(aug);
    IMat kproj(m, ker.cols);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < ker.cols; ++j) kproj.at(i, j) = ker.at(i, j);

    SmithResult s = smith_normal_form(kproj);
    std::vector<Int> factors;
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
        Int d = (i < std::min(kproj.rows, kproj.cols)) ? s.d.at(i, i) : 0;
        if (d == 0)
            throw TheoryViolation("subgroup_from_generators", "subgroup of a finite group must be finite");
        if (d >= 2) {
            factors.push_back(d);
            keep.push_back(i);
        }
    }
    out.structure = FiniteAbelianGroup(factors);
    for (int idx : keep) {
        // basis element = G * (uinv column idx), reduced mod ambient moduli
        Tuple b(k, 0);
        for (int i = 0; i < k; ++i) {
            Int acc = 0;
            for (int j = 0; j < m; ++j) acc += g.at(i, j) * s.uinv.at(j, idx);
            acc %= moduli[i];
            if (acc < 0) acc += moduli[i];
            b[i] = acc;
        }
        out.basis.push_back(std::move(b));
    }
    out.coord_transform = IMat(static_cast<int>(keep.size()), m);
    for (size_t r = 0; r < keep.size(); ++r)
        for (int c = 0; c < m; ++c) out.coord_transform.at(static_cast<int>(r), c) = s.u.at(keep[r], c);
    return out;
}

// Does the subgroup contain the tuple? If yes, optionally give coordinates in
// the subgroup's canonical basis.
inline bool subgroup_contains(const AbelianSubgroup& s, const Tuple& t, std::vector<Int>* coords = nullptr) {
    const int k = static_cast<int>(s.ambient_moduli.size());
    const int m = s.gen_matrix.cols;
    IMat aug(k, m + k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < m; ++j) aug.at(i, j) = s.gen_matrix.at(i, j);
        aug.at(i, m + i) = s.ambient_moduli[i];
    }
    std::vector<Int> x;
    if (!integer_solve(aug, t, x)) return false;
    if (coords) {
        std::vector<Int> y(x.begin(), x.begin() + m);
        std::vector<Int> c = mat_apply(s.coord_transform, y);
        for (int i = 0; i < s.structure.rank(); ++i) {
            Int d = s.structure.factors()[i];
            c[i] %= d;
            if (c[i] < 0) c[i] += d;
        }
        *coords = std::move(c);
    }
    return true;
}

inline bool subgroups_equal(const AbelianSubgroup& a, const AbelianSubgroup& b) {
    if (a.order() != b.order()) return false;
    for (const Tuple& t : b.basis)
        if (!subgroup_contains(a, t)) return false;
    return true;
}

inline Int gcd_ll(Int a, Int b) {
    while (b) { a %= b; std::swap(a, b); }
    return a < 0 ? -a : a;
}

inline Int p_part(Int n, Int p) {
    Int q = 1;
    while (n % p == 0) { n /= p; q *= p; }
    return q;
}

inline std::vector<std::pair<Int, int>> factorize(Int n) {
    std::vector<std::pair<Int, int>> f;
    for (Int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.emplace_back(p, e);
        }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline bool is_prime(Int p) {
    if (p < 2) return false;
    for (Int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline bool is_p_power(Int n, Int p) {
    if (n < 1) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

inline Int mod_inverse(Int a, Int m) {
    Int t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        Int q = r / newr;
        t -= q * newt; std::swap(t, newt);
        r -= q * newr; std::swap(r, newr);
    }
    if (r != 1)
        throw TheoryViolation("mod_inverse", "element not invertible");
    return ((t % m) + m) % m;
}

}  // namespace ptower
