#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/config.hpp"
#include "ptower/errors.hpp"

namespace ptower {

using Elem = int;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Finite group stored as an explicit multiplication table over element
// indices 0..order-1. Instances are immutable after construction; every
// operation below is a pure function.
class FiniteGroup {
public:
    FiniteGroup(int order, std::vector<Elem> mul_table, std::string name = "",
                std::vector<std::string> labels = {})
        : order_(order), mul_(std::move(mul_table)), name_(std::move(name)), labels_(std::move(labels)) {
        if (order_ <= 0 || static_cast<size_t>(order_) * order_ != mul_.size())
            throw UserInputError(name_, "multiplication table must be order x order",
                                 "check the table dimensions");
        for (Elem x : mul_)
            if (x < 0 || x >= order_)
                throw UserInputError(name_, "table entry out of range", "entries are element indices");
        identity_ = find_identity();
        inv_ = build_inverses();
        check_associativity();
        if (labels_.empty()) {
            labels_.reserve(order_);
            for (int i = 0; i < order_; ++i) labels_.push_back(std::to_string(i));
        } else if (static_cast<int>(labels_.size()) != order_) {
            throw UserInputError(name_, "label count must match order", "one label per element");
        }
    }

    int order() const { return order_; }
    Elem identity() const { return identity_; }
    Elem mul(Elem a, Elem b) const { return mul_[static_cast<size_t>(a) * order_ + b]; }
    Elem inv(Elem a) const { return inv_[a]; }
    Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv(g)); }
    const std::string& name() const { return name_; }
    const std::string& label(Elem a) const { return labels_[a]; }
    const std::vector<Elem>& table() const { return mul_; }

    int element_order(Elem a) const {
        int n = 1;
        Elem x = a;
        while (x != identity_) { x = mul(x, a); ++n; }
        return n;
    }

    bool is_abelian() const {
        for (Elem a = 0; a < order_; ++a)
            for (Elem b = a + 1; b < order_; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    bool is_p_group(Int p) const { return is_p_power(order_, p); }

    bool same_table(const FiniteGroup& o) const { return order_ == o.order_ && mul_ == o.mul_; }

private:
    Elem find_identity() const {
        for (Elem e = 0; e < order_; ++e) {
            bool ok = true;
            for (Elem x = 0; x < order_ && ok; ++x)
                if (mul(e, x) != x || mul(x, e) != x) ok = false;
            if (ok) return e;
        }
        throw UserInputError(name_, "no two-sided identity", "the table is not a group");
    }

    std::vector<Elem> build_inverses() const {
        std::vector<Elem> inv(order_, -1);
        for (Elem a = 0; a < order_; ++a) {
            for (Elem b = 0; b < order_; ++b)
                if (mul(a, b) == identity_ && mul(b, a) == identity_) { inv[a] = b; break; }
            if (inv[a] < 0)
                throw UserInputError(name_, "element " + std::to_string(a) + " has no inverse",
                                     "the table is not a group");
        }
        return inv;
    }

    void check_associativity() const {
        if (order_ > 256)
            throw CapacityError(name_, "group order exceeds 256", "this library targets desk-scale groups");
        for (Elem a = 0; a < order_; ++a)
            for (Elem b = 0; b < order_; ++b) {
                Elem ab = mul(a, b);
                for (Elem c = 0; c < order_; ++c)
                    if (mul(ab, c) != mul(a, mul(b, c)))
                        throw UserInputError(name_, "table is not associative",
                                             "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                                                 std::to_string(c) + ") fails");
            }
    }

    int order_;
    std::vector<Elem> mul_;
    std::string name_;
    std::vector<std::string> labels_;
    Elem identity_ = 0;
    std::vector<Elem> inv_;
};

// ---------------------------------------------------------------------------
// Element-set masks (order <= 128 is plenty for the brute-force layer).

struct Mask128 {
    std::uint64_t w0 = 0, w1 = 0;

    void set(int i) { (i < 64 ? w0 : w1) |= (std::uint64_t(1) << (i & 63)); }
    bool test(int i) const { return ((i < 64 ? w0 : w1) >> (i & 63)) & 1; }
    int count() const { return __builtin_popcountll(w0) + __builtin_popcountll(w1); }
    bool operator==(const Mask128& o) const { return w0 == o.w0 && w1 == o.w1; }
    bool operator<(const Mask128& o) const { return w1 != o.w1 ? w1 < o.w1 : w0 < o.w0; }
    bool contains(const Mask128& o) const { return (o.w0 & ~w0) == 0 && (o.w1 & ~w1) == 0; }
};

class Subgroup {
public:
    Subgroup(GroupPtr parent, std::vector<Elem> elements)
        : parent_(std::move(parent)), elems_(std::move(elements)) {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        for (Elem e : elems_) {
            if (e < 0 || e >= parent_->order())
                throw UserInputError("Subgroup", "element index out of range", "indices address parent elements");
            mask_.set(e);
        }
        validate();
    }

    const GroupPtr& parent() const { return parent_; }
    const std::vector<Elem>& elements() const { return elems_; }
    const Mask128& mask() const { return mask_; }
    int order() const { return static_cast<int>(elems_.size()); }
    bool contains(Elem e) const { return mask_.test(e); }
    bool is_trivial() const { return order() == 1; }
    bool is_whole_group() const { return order() == parent_->order(); }

    bool is_normal() const {
        const FiniteGroup& g = *parent_;
        for (Elem x = 0; x < g.order(); ++x)
            for (Elem h : elems_)
                if (!mask_.test(g.conj(x, h))) return false;
        return true;
    }

    bool operator==(const Subgroup& o) const { return mask_ == o.mask_; }
    bool operator<(const Subgroup& o) const {
        if (order() != o.order()) return order() < o.order();
        return elems_ < o.elems_;
    }

private:
    void validate() const {
        const FiniteGroup& g = *parent_;
        if (!mask_.test(g.identity()))
            throw UserInputError("Subgroup", "must contain the identity", "");
        for (Elem a : elems_) {
            if (!mask_.test(g.inv(a)))
                throw UserInputError("Subgroup", "not closed under inverses", "");
            for (Elem b : elems_)
                if (!mask_.test(g.mul(a, b)))
                    throw UserInputError("Subgroup", "not closed under multiplication", "");
        }
        if (g.order() % order() != 0)
            throw TheoryViolation("Subgroup", "order does not divide parent order");
    }

    GroupPtr parent_;
    std::vector<Elem> elems_;
    Mask128 mask_;
};

namespace detail {

inline std::vector<Elem> mask_elements(const FiniteGroup& g, const Mask128& m) {
    std::vector<Elem> v;
    for (Elem i = 0; i < g.order(); ++i)
        if (m.test(i)) v.push_back(i);
    return v;
}

inline Mask128 closure_mask(const FiniteGroup& g, Mask128 seed) {
    seed.set(g.identity());
    Mask128 m = seed;
    std::vector<Elem> all = mask_elements(g, m);
    size_t head = 0;
    while (head < all.size()) {
        Elem x = all[head++];
        for (size_t i = 0; i < all.size(); ++i) {
            Elem y = all[i];
            for (Elem z : {g.mul(x, y), g.mul(y, x)}) {
                if (!m.test(z)) {
                    m.set(z);
                    all.push_back(z);
                }
            }
        }
    }
    return m;
}

}  // namespace detail

inline Subgroup subgroup_closure(const GroupPtr& g, const std::vector<Elem>& gens) {
    Mask128 seed;
    seed.set(g->identity());
    for (Elem e : gens) seed.set(e);
    Mask128 m = detail::closure_mask(*g, seed);
    return Subgroup(g, detail::mask_elements(*g, m));
}

inline Subgroup trivial_subgroup(const GroupPtr& g) { return Subgroup(g, {g->identity()}); }

inline Subgroup whole_subgroup(const GroupPtr& g) {
    std::vector<Elem> all(g->order());
    for (int i = 0; i < g->order(); ++i) all[i] = i;
    return Subgroup(g, std::move(all));
}

// Every subgroup, found by closing each found subgroup with one extra
// element. Canonical order: by size, then lexicographically on element sets.
inline std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g) {
    if (g->order() > limits().subgroup_order_bound)
        throw CapacityError("enumerate_subgroups",
                            "group order " + std::to_string(g->order()) + " exceeds bound " +
                                std::to_string(limits().subgroup_order_bound),
                            "raise PTOWER_SUBGROUP_BOUND if you really want this");
    std::set<Mask128> found;
    Mask128 triv;
    triv.set(g->identity());
    std::vector<Mask128> work{triv};
    found.insert(triv);
    while (!work.empty()) {
        Mask128 h = work.back();
        work.pop_back();
        for (Elem x = 0; x < g->order(); ++x) {
            if (h.test(x)) continue;
            Mask128 seed = h;
            seed.set(x);
            Mask128 k = detail::closure_mask(*g, seed);
            if (found.insert(k).second) work.push_back(k);
        }
    }
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (const Mask128& m : found) out.emplace_back(g, detail::mask_elements(*g, m));
    std::sort(out.begin(), out.end());
    return out;
}

// Maximal p-subgroups, grown through p-subgroups only (the full-lattice walk
// above serves as the test oracle for this).
inline std::vector<Subgroup> sylow_subgroups(const GroupPtr& g, Int p) {
    if (!is_prime(p))
        throw UserInputError("sylow_subgroups", std::to_string(p) + " is not prime", "pass a prime");
    if (g->order() > limits().subgroup_order_bound)
        throw CapacityError("sylow_subgroups", "group order exceeds bound",
                            "raise PTOWER_SUBGROUP_BOUND if you really want this");
    Int target = p_part(g->order(), p);
    if (target == 1) return {trivial_subgroup(g)};

    std::vector<Elem> p_elems;
    for (Elem x = 0; x < g->order(); ++x)
        if (is_p_power(g->element_order(x), p)) p_elems.push_back(x);

    std::set<Mask128> seen;
    std::set<Mask128> sylows;
    Mask128 triv;
    triv.set(g->identity());
    std::vector<Mask128> work{triv};
    seen.insert(triv);
    while (!work.empty()) {
        Mask128 h = work.back();
        work.pop_back();
        bool maximal = true;
        for (Elem x : p_elems) {
            if (h.test(x)) continue;
            Mask128 seed = h;
            seed.set(x);
            Mask128 k = detail::closure_mask(*g, seed);
            if (!is_p_power(k.count(), p)) continue;
            maximal = false;
            if (seen.insert(k).second) work.push_back(k);
        }
        if (maximal && h.count() == target) sylows.insert(h);
    }
    std::vector<Subgroup> out;
    for (const Mask128& m : sylows) out.emplace_back(g, detail::mask_elements(*g, m));
    std::sort(out.begin(), out.end());
    return out;
}

// [A, B]: subgroup generated by commutators.
inline Subgroup commutator_subgroup(const GroupPtr& g, const Subgroup& a, const Subgroup& b) {
    std::vector<Elem> gens;
    for (Elem x : a.elements())
        for (Elem y : b.elements()) {
            Elem c = g->mul(g->mul(x, y), g->mul(g->inv(x), g->inv(y)));
            gens.push_back(c);
        }
    return subgroup_closure(g, gens);
}

struct NilpotencyCertificate {
    bool nilpotent = false;
    std::vector<Subgroup> lower_central_series;  // gamma_1 = G, ..., last term repeats on failure
};

inline NilpotencyCertificate is_nilpotent_group(const GroupPtr& g) {
    NilpotencyCertificate cert;
    Subgroup whole = whole_subgroup(g);
    cert.lower_central_series.push_back(whole);
    while (true) {
        const Subgroup& cur = cert.lower_central_series.back();
        Subgroup next = commutator_subgroup(g, whole, cur);
        if (next == cur) {
            cert.nilpotent = cur.is_trivial();
            if (!cert.nilpotent) cert.lower_central_series.push_back(next);
            return cert;
        }
        cert.lower_central_series.push_back(next);
        if (next.is_trivial()) {
            cert.nilpotent = true;
            return cert;
        }
    }
}

// Smallest g with g H1 g^{-1} = H2.
inline std::optional<Elem> are_conjugate(const GroupPtr& g, const Subgroup& h1, const Subgroup& h2) {
    if (h1.order() != h2.order()) return std::nullopt;
    for (Elem x = 0; x < g->order(); ++x) {
        Mask128 m;
        for (Elem h : h1.elements()) m.set(g->conj(x, h));
        if (m == h2.mask()) return x;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Homomorphisms and isomorphism search.

inline bool is_homomorphism(const FiniteGroup& src, const FiniteGroup& tgt, const std::vector<Elem>& phi) {
    if (static_cast<int>(phi.size()) != src.order()) return false;
    for (Elem x : phi)
        if (x < 0 || x >= tgt.order()) return false;
    for (Elem a = 0; a < src.order(); ++a)
        for (Elem b = 0; b < src.order(); ++b)
            if (phi[src.mul(a, b)] != tgt.mul(phi[a], phi[b])) return false;
    return true;
}

inline std::vector<Elem> minimal_generators(const FiniteGroup& g) {
    std::vector<Elem> gens;
    Mask128 seed;
    seed.set(g.identity());
    Mask128 cur = seed;
    while (cur.count() < g.order()) {
        Elem next = -1;
        for (Elem x = 0; x < g.order(); ++x)
            if (!cur.test(x)) { next = x; break; }
        gens.push_back(next);
        cur.set(next);
        cur = detail::closure_mask(g, cur);
    }
    return gens;
}

namespace detail {

// Extend a map defined on generators to the subgroup they generate; returns
// false on any inconsistency with the multiplication tables.
inline bool extend_hom(const FiniteGroup& src, const FiniteGroup& tgt,
                       const std::vector<std::pair<Elem, Elem>>& gen_images, std::vector<Elem>& phi) {
    phi.assign(src.order(), -1);
    phi[src.identity()] = tgt.identity();
    std::vector<Elem> known{src.identity()};
    for (auto [g, h] : gen_images) {
        if (phi[g] != -1) {
            if (phi[g] != h) return false;
            continue;
        }
        phi[g] = h;
        known.push_back(g);
        size_t head = 0;
        while (head < known.size()) {
            Elem x = known[head++];
            for (size_t i = 0; i < known.size(); ++i) {
                Elem y = known[i];
                for (auto [p, q] : {std::pair<Elem, Elem>{src.mul(x, y), tgt.mul(phi[x], phi[y])},
                                    std::pair<Elem, Elem>{src.mul(y, x), tgt.mul(phi[y], phi[x])}}) {
                    if (phi[p] == -1) {
                        phi[p] = q;
                        known.push_back(p);
                    } else if (phi[p] != q) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

inline bool iso_backtrack(const FiniteGroup& g1, const FiniteGroup& g2, const std::vector<Elem>& gens,
                          size_t idx, std::vector<std::pair<Elem, Elem>>& images, std::vector<Elem>& out) {
    if (idx == gens.size()) {
        std::vector<Elem> phi;
        if (!extend_hom(g1, g2, images, phi)) return false;
        std::vector<char> hit(g2.order(), 0);
        for (Elem x : phi) {
            if (x < 0) return false;
            if (hit[x]) return false;
            hit[x] = 1;
        }
        out = phi;
        return true;
    }
    Elem gen = gens[idx];
    int want = g1.element_order(gen);
    for (Elem cand = 0; cand < g2.order(); ++cand) {
        if (g2.element_order(cand) != want) continue;
        images.emplace_back(gen, cand);
        std::vector<Elem> partial;
        if (extend_hom(g1, g2, images, partial) && iso_backtrack(g1, g2, gens, idx + 1, images, out))
            return true;
        images.pop_back();
    }
    return false;
}

}  // namespace detail

// Deterministic: images chosen by ascending element index, so the first
// isomorphism found is the lexicographically least in generator images.
inline std::optional<std::vector<Elem>> find_isomorphism(const GroupPtr& g1, const GroupPtr& g2) {
    if (g1->order() != g2->order()) return std::nullopt;
    if (g1->order() > limits().isomorphism_order_bound)
        throw CapacityError("find_isomorphism", "group order exceeds bound " +
                                                    std::to_string(limits().isomorphism_order_bound),
                            "raise PTOWER_ISO_BOUND if you really want this");
    std::vector<int> orders1, orders2;
    for (Elem x = 0; x < g1->order(); ++x) orders1.push_back(g1->element_order(x));
    for (Elem x = 0; x < g2->order(); ++x) orders2.push_back(g2->element_order(x));
    std::sort(orders1.begin(), orders1.end());
    std::sort(orders2.begin(), orders2.end());
    if (orders1 != orders2) return std::nullopt;

    std::vector<Elem> gens = minimal_generators(*g1);
    std::vector<std::pair<Elem, Elem>> images;
    std::vector<Elem> out;
    if (detail::iso_backtrack(*g1, *g2, gens, 0, images, out)) return out;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructions.

inline GroupPtr make_group(int order, std::vector<Elem> table, std::string name = "",
                           std::vector<std::string> labels = {}) {
    return std::make_shared<FiniteGroup>(order, std::move(table), std::move(name), std::move(labels));
}

inline GroupPtr trivial_group() { return make_group(1, {0}, "1", {"e"}); }

inline GroupPtr cyclic_group(int n) {
    if (n < 1) throw UserInputError("cyclic", "order must be >= 1", "");
    std::vector<Elem> t(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[static_cast<size_t>(a) * n + b] = (a + b) % n;
    return make_group(n, std::move(t), "cyclic:" + std::to_string(n));
}

// Z/m ⋊ Z/n where the Z/n generator acts by x -> k x (requires k^n = 1 mod m).
inline GroupPtr semidirect_cyclic(int m, int n, Int k, const std::string& name) {
    if (m < 1 || n < 1) throw UserInputError(name, "orders must be positive", "");
    Int kk = ((k % m) + m) % m;
    Int pow = 1;
    for (int i = 0; i < n; ++i) pow = (pow * kk) % m;
    if (pow != 1 % m || gcd_ll(kk, m) != 1)
        throw UserInputError(name, "action parameter is not an order-dividing automorphism", "");
    int order = m * n;
    std::vector<Elem> t(static_cast<size_t>(order) * order);
    std::vector<Int> kpow(n, 1);
    for (int i = 1; i < n; ++i) kpow[i] = (kpow[i - 1] * kk) % m;
    auto idx = [&](int x, int y) { return y * m + x; };
    std::vector<std::string> labels(order);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < n; ++y) {
            labels[idx(x, y)] = "a^" + std::to_string(x) + (y ? "·b^" + std::to_string(y) : "");
            for (int x2 = 0; x2 < m; ++x2)
                for (int y2 = 0; y2 < n; ++y2) {
                    int xr = static_cast<int>((x + kpow[y] * x2) % m);
                    int yr = (y + y2) % n;
                    t[static_cast<size_t>(idx(x, y)) * order + idx(x2, y2)] = idx(xr, yr);
                }
        }
    return make_group(order, std::move(t), name, std::move(labels));
}

inline GroupPtr dihedral_group(int n) {
    if (n < 1) throw UserInputError("dihedral", "parameter must be >= 1", "dihedral:n has order 2n");
    return semidirect_cyclic(n, 2, n - 1, "dihedral:" + std::to_string(n));
}

inline GroupPtr semidihedral_16() { return semidirect_cyclic(8, 2, 3, "semidihedral:16"); }
inline GroupPtr modular_16() { return semidirect_cyclic(8, 2, 5, "modular:16"); }

// Generalized quaternion (dicyclic) group of order 4m: a^{2m}=1, b^2=a^m,
// b a b^{-1} = a^{-1}. Elements are a^i b^j with j in {0,1}.
inline GroupPtr quaternion_group(int order) {
    if (order < 8 || order % 4 != 0)
        throw UserInputError("quaternion", "order must be a multiple of 4 and >= 8", "");
    int m = order / 4;
    int two_m = 2 * m;
    auto idx = [&](int i, int j) { return j * two_m + i; };
    std::vector<Elem> t(static_cast<size_t>(order) * order);
    std::vector<std::string> labels(order);
    for (int i = 0; i < two_m; ++i)
        for (int j = 0; j < 2; ++j) {
            labels[idx(i, j)] = "a^" + std::to_string(i) + (j ? "·b" : "");
            for (int i2 = 0; i2 < two_m; ++i2)
                for (int j2 = 0; j2 < 2; ++j2) {
                    int ir, jr;
                    if (j == 0) {
                        ir = (i + i2) % two_m;
                        jr = j2;
                    } else if (j2 == 0) {
                        ir = ((i - i2) % two_m + two_m) % two_m;
                        jr = 1;
                    } else {
                        ir = ((i - i2 + m) % two_m + two_m) % two_m;
                        jr = 0;
                    }
                    t[static_cast<size_t>(idx(i, j)) * order + idx(i2, j2)] = idx(ir, jr);
                }
        }
    return make_group(order, std::move(t), "quaternion:" + std::to_string(order), std::move(labels));
}

inline GroupPtr symmetric_group(int n) {
    if (n < 1 || n > 5)
        throw UserInputError("sym", "sym:n supported for 1 <= n <= 5", "larger symmetric groups are out of scope");
    std::vector<std::vector<int>> perms;
    std::vector<int> base(n);
    for (int i = 0; i < n; ++i) base[i] = i;
    std::vector<int> p = base;
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    int order = static_cast<int>(perms.size());
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < order; ++i) index[perms[i]] = i;
    std::vector<Elem> t(static_cast<size_t>(order) * order);
    std::vector<std::string> labels(order);
    for (int a = 0; a < order; ++a) {
        std::string lab = "(";
        for (int i = 0; i < n; ++i) lab += std::to_string(perms[a][i]) + (i + 1 < n ? " " : "");
        lab += ")";
        labels[a] = lab;
        for (int b = 0; b < order; ++b) {
            std::vector<int> comp(n);
            for (int i = 0; i < n; ++i) comp[i] = perms[a][perms[b][i]];
            t[static_cast<size_t>(a) * order + b] = index[comp];
        }
    }
    return make_group(order, std::move(t), "sym:" + std::to_string(n), std::move(labels));
}

inline GroupPtr product_group(const std::vector<GroupPtr>& parts) {
    if (parts.empty()) return trivial_group();
    GroupPtr acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) {
        const FiniteGroup& a = *acc;
        const FiniteGroup& b = *parts[i];
        int order = a.order() * b.order();
        if (order > 256)
            throw CapacityError("product", "product order exceeds 256", "keep factor orders small");
        auto idx = [&](int x, int y) { return x * b.order() + y; };
        std::vector<Elem> t(static_cast<size_t>(order) * order);
        std::vector<std::string> labels(order);
        for (int x = 0; x < a.order(); ++x)
            for (int y = 0; y < b.order(); ++y) {
                labels[idx(x, y)] = "(" + a.label(x) + "," + b.label(y) + ")";
                for (int x2 = 0; x2 < a.order(); ++x2)
                    for (int y2 = 0; y2 < b.order(); ++y2)
                        t[static_cast<size_t>(idx(x, y)) * order + idx(x2, y2)] =
                            idx(a.mul(x, x2), b.mul(y, y2));
            }
        acc = make_group(order, std::move(t),
                         (i == 1 ? "product:[" + a.name() : a.name().substr(0, a.name().size() - 1)) + "," +
                             b.name() + "]",
                         std::move(labels));
    }
    return acc;
}

// Abelian ⋊ Z/n with the Z/n generator acting through an integer matrix.
inline GroupPtr semidirect_abelian(const FiniteAbelianGroup& a, int n, const IMat& action,
                                   const std::string& name) {
    Int ao = a.order();
    int order = static_cast<int>(ao) * n;
    if (order > 256) throw CapacityError(name, "order exceeds 256", "");
    // powers of the action matrix
    std::vector<IMat> pw(n, IMat::identity(a.rank()));
    for (int i = 1; i < n; ++i) pw[i] = mat_mul(pw[i - 1], action);
    {
        IMat last = mat_mul(pw[n - 1], action);
        for (int r = 0; r < a.rank(); ++r)
            for (int c = 0; c < a.rank(); ++c) {
                Int want = (r == c) ? 1 : 0;
                if (((last.at(r, c) - want) % a.factors()[r]) != 0)
                    throw UserInputError(name, "action matrix order does not divide n", "");
            }
    }
    auto idx = [&](Int x, int y) { return static_cast<int>(y * ao + x); };
    std::vector<Elem> t(static_cast<size_t>(order) * order);
    for (Int x = 0; x < ao; ++x)
        for (int y = 0; y < n; ++y)
            for (Int x2 = 0; x2 < ao; ++x2)
                for (int y2 = 0; y2 < n; ++y2) {
                    Tuple moved = a.reduce(mat_apply(pw[y], a.element_at(x2)));
                    Tuple sum = a.add(a.element_at(x), moved);
                    t[static_cast<size_t>(idx(x, y)) * order + idx(x2, y2)] =
                        idx(a.index_of(sum), (y + y2) % n);
                }
    return make_group(order, std::move(t), name);
}

inline GroupPtr abelian_group_of(const std::vector<Int>& orders) {
    std::vector<GroupPtr> parts;
    for (Int d : orders) parts.push_back(cyclic_group(static_cast<int>(d)));
    return product_group(parts);
}

// Reindex a subgroup as a standalone group; second result maps new -> old.
inline std::pair<GroupPtr, std::vector<Elem>> group_from_subgroup(const Subgroup& s) {
    const FiniteGroup& g = *s.parent();
    const std::vector<Elem>& el = s.elements();
    int n = static_cast<int>(el.size());
    std::vector<int> pos(g.order(), -1);
    for (int i = 0; i < n; ++i) pos[el[i]] = i;
    std::vector<Elem> t(static_cast<size_t>(n) * n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = g.label(el[i]);
        for (int j = 0; j < n; ++j) t[static_cast<size_t>(i) * n + j] = pos[g.mul(el[i], el[j])];
    }
    return {make_group(n, std::move(t), g.name() + "|sub" + std::to_string(n), std::move(labels)), el};
}

// Quotient by a normal subgroup; second result is the projection table.
inline std::pair<GroupPtr, std::vector<Elem>> quotient_group(const GroupPtr& g, const Subgroup& n) {
    if (!n.is_normal())
        throw UserInputError("quotient_group", "subgroup is not normal", "quotients need normal subgroups");
    std::vector<int> coset(g->order(), -1);
    std::vector<Elem> reps;
    for (Elem x = 0; x < g->order(); ++x) {
        if (coset[x] != -1) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (Elem h : n.elements()) coset[g->mul(x, h)] = c;
    }
    int q = static_cast<int>(reps.size());
    std::vector<Elem> t(static_cast<size_t>(q) * q);
    std::vector<std::string> labels(q);
    for (int i = 0; i < q; ++i) {
        labels[i] = g->label(reps[i]) + "·N";
        for (int j = 0; j < q; ++j) t[static_cast<size_t>(i) * q + j] = coset[g->mul(reps[i], reps[j])];
    }
    GroupPtr quot = make_group(q, std::move(t), g->name() + "/N", std::move(labels));
    return {quot, coset};
}

inline Subgroup hom_image(const GroupPtr& tgt, const std::vector<Elem>& phi) {
    std::vector<Elem> img(phi.begin(), phi.end());
    return Subgroup(tgt, std::move(img));
}

inline Subgroup hom_kernel(const GroupPtr& src, const GroupPtr& tgt, const std::vector<Elem>& phi) {
    std::vector<Elem> ker;
    for (Elem x = 0; x < src->order(); ++x)
        if (phi[x] == tgt->identity()) ker.push_back(x);
    return Subgroup(src, std::move(ker));
}

}  // namespace ptower
