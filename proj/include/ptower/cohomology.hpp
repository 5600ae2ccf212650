#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptower/cochain.hpp"

namespace ptower {

// Sparse access to the normalized bar cochain complex of (G, M):
//   C^n has basis index  tuple * rank + coordinate,
// and the differential is generated column- or row-wise on demand.
class BarComplex {
public:
    BarComplex(GroupPtr g, ModulePtr m) : group_(std::move(g)), module_(std::move(m)), bar_(*group_) {
        k_ = module_->rank();
        exp_ = module_->abelian().exponent();
        homogeneous_ = true;
        for (Int d : module_->abelian().factors())
            if (d != exp_) homogeneous_ = false;
    }

    const GroupPtr& group() const { return group_; }
    const ModulePtr& module() const { return module_; }
    const BarIndexer& bar() const { return bar_; }
    Int exponent() const { return exp_; }
    int rank() const { return k_; }
    bool homogeneous() const { return homogeneous_; }

    std::int64_t dim(int degree) const { return bar_.tuple_count(degree) * k_; }

    Int row_modulus(std::int64_t basis_index) const {
        return module_->abelian().factors()[basis_index % k_];
    }

    // Column of δ_n for the domain basis cochain (tuple, coord).
    SparseVec delta_column(int n, std::int64_t col) const {
        std::int64_t t = col / k_;
        int j = static_cast<int>(col % k_);
        std::vector<Elem> args;
        bar_.decode(t, n, args);
        std::vector<std::pair<std::int64_t, Int>> acc;

        // g1 · c(g2,...,g_{n+1}): output tuple (g, args...)
        for (int gb = 0; gb < bar_.qbar; ++gb) {
            Elem g = bar_.elem_of[gb];
            const IMat& mat = module_->matrix(g);
            std::int64_t shifted = gb + (t * bar_.qbar);  // little-endian: new first argument
            for (int i = 0; i < k_; ++i) {
                Int v = mat.at(i, j);
                if (v % exp_) acc.emplace_back(shifted * k_ + i, v);
            }
        }
        // middle terms: split args[i-1] = a·b  (1-based term index i)
        Int sign = 1;
        std::int64_t pow_lo = 1;  // qbar^(i-1)
        for (int i = 1; i <= n; ++i) {
            sign = -sign;
            std::int64_t lo = t % pow_lo;
            std::int64_t hi = t / (pow_lo * bar_.qbar);  // digits above position i-1
            Elem target = args[i - 1];
            for (int ab = 0; ab < bar_.qbar; ++ab) {
                Elem a = bar_.elem_of[ab];
                Elem b = group_->mul(group_->inv(a), target);
                if (b == group_->identity()) continue;
                std::int64_t tup = lo + pow_lo * (ab + bar_.qbar * (bar_.bar_of[b] + bar_.qbar * hi));
                acc.emplace_back(tup * k_ + j, sign);
            }
            pow_lo *= bar_.qbar;
        }
        // (-1)^{n+1} c(g1,...,gn): output tuple (args..., g)
        sign = -sign;
        for (int gb = 0; gb < bar_.qbar; ++gb) {
            std::int64_t tup = t + pow_lo * gb;
            acc.emplace_back(tup * k_ + j, sign);
        }
        return collect(acc);
    }

    // Row of δ_n (a functional on C^n), used for the transposed elimination.
    SparseVec delta_row(int n, std::int64_t row) const {
        std::int64_t t = row / k_;
        int i = static_cast<int>(row % k_);
        std::vector<Elem> args;
        bar_.decode(t, n + 1, args);
        std::vector<std::pair<std::int64_t, Int>> acc;

        {
            const IMat& mat = module_->matrix(args[0]);
            std::int64_t sub = t / bar_.qbar;  // drop first argument
            for (int j = 0; j < k_; ++j) {
                Int v = mat.at(i, j);
                if (v % exp_) acc.emplace_back(sub * k_ + j, v);
            }
        }
        Int sign = 1;
        std::int64_t pow_lo = 1;
        for (int ii = 1; ii <= n; ++ii) {
            sign = -sign;
            Elem merged = group_->mul(args[ii - 1], args[ii]);
            if (merged != group_->identity()) {
                std::int64_t lo = t % pow_lo;
                std::int64_t hi = t / (pow_lo * bar_.qbar * bar_.qbar);
                std::int64_t tup = lo + pow_lo * (bar_.bar_of[merged] + bar_.qbar * hi);
                acc.emplace_back(tup * k_ + i, sign);
            }
            pow_lo *= bar_.qbar;
        }
        sign = -sign;
        acc.emplace_back((t % pow_lo) * k_ + i, sign);
        return collect(acc);
    }

private:
    SparseVec collect(std::vector<std::pair<std::int64_t, Int>>& acc) const {
        std::sort(acc.begin(), acc.end());
        SparseVec out;
        for (size_t a = 0; a < acc.size();) {
            std::int64_t row = acc[a].first;
            Int v = 0;
            while (a < acc.size() && acc[a].first == row) v += acc[a++].second;
            v %= exp_;
            if (v < 0) v += exp_;
            if (v) out.e.emplace_back(static_cast<std::int32_t>(row), static_cast<std::int32_t>(v));
        }
        return out;
    }

    GroupPtr group_;
    ModulePtr module_;
    BarIndexer bar_;
    int k_ = 0;
    Int exp_ = 1;
    bool homogeneous_ = true;
};

namespace detail {

inline void check_elim_dims(const BarComplex& bc, int degree, const char* where) {
    if (bc.dim(degree) > std::numeric_limits<std::int32_t>::max())
        throw CapacityError(where, "cochain basis does not fit 32-bit indices",
                            "lower the degree or the group order");
    if (degree > limits().max_cohomology_degree + 1)
        throw CapacityError(where, "degree exceeds PTOWER_MAX_DEGREE", "raise the bound if intended");
}

// order of the image of δ_n inside C^{n+1}
inline Factored image_order(const BarComplex& bc, int n, const char* where) {
    if (bc.rank() == 0 || n < 0) return {};
    check_elim_dims(bc, n + 1, where);
    Int m = bc.exponent();
    if (bc.homogeneous()) {
        // |im D| = |im D^T| over Z/m when every coordinate has modulus m;
        // stream the ultra-sparse rows instead of the dense-ish columns.
        ModColumnReducer red(m, [m](std::int32_t) { return m; }, false, where);
        std::int64_t rows = bc.dim(n + 1);
        for (std::int64_t r = 0; r < rows; ++r) red.add_column(bc.delta_row(n, r), {});
        return red.image_order_factors();
    }
    auto rowmod = [&bc](std::int32_t r) { return bc.row_modulus(r); };
    ModColumnReducer red(m, rowmod, false, where);
    std::int64_t cols = bc.dim(n);
    for (std::int64_t c = 0; c < cols; ++c) red.add_column(bc.delta_column(n, c), {});
    return red.image_order_factors();
}

}  // namespace detail

// Description of H^n(G; M): the abstract group, basis cocycles aligned with
// its invariant factors, and exact coordinates for arbitrary cocycles.
class CohomologyGroup {
public:
    GroupPtr group;
    ModulePtr module;
    int degree = 0;
    FiniteAbelianGroup structure;
    std::vector<Cochain> basis;

    Factored order_factors;  // |H^n| as prime powers (matches structure)

    bool is_trivial() const { return structure.is_trivial(); }

    // Coordinates of a cocycle's class in the basis; empty when H^n = 0.
    std::vector<Int> coordinates(const Cochain& z) const {
        if (is_trivial()) return {};
        SparseVec res = lreducer_->canonical_residue(cochain_to_sparse(z, complex_->bar()));
        auto it = residue_lookup_.find(key_of(res));
        if (it == residue_lookup_.end())
            throw TheoryViolation("CohomologyGroup::coordinates",
                                  "cocycle residue not found (is the input a cocycle?)");
        return it->second;
    }

    Cochain representative(const std::vector<Int>& coords) const {
        Cochain out(group, module, degree, true);
        for (size_t i = 0; i < basis.size(); ++i)
            out = cochain_add(out, cochain_scale(basis[i], coords[i]));
        return out;
    }

    bool same_class(const Cochain& a, const Cochain& b) const {
        return coordinates(a) == coordinates(b);
    }

    // internal wiring (exposed for the witness machinery)
    std::shared_ptr<BarComplex> complex_;
    std::shared_ptr<ModColumnReducer> lreducer_;  // pivots of  im δ_{n-1} + floors
    std::unordered_map<std::string, std::vector<Int>> residue_lookup_;

    static std::string key_of(const SparseVec& v) {
        std::string s;
        s.reserve(v.e.size() * 8);
        for (auto [r, val] : v.e) {
            s.append(reinterpret_cast<const char*>(&r), 4);
            s.append(reinterpret_cast<const char*>(&val), 4);
        }
        return s;
    }
};

using CohomologyPtr = std::shared_ptr<const CohomologyGroup>;

inline CohomologyPtr cohomology_group(const GroupPtr& g, const ModulePtr& m, int n) {
    if (n < 0 || n > limits().max_cohomology_degree)
        throw CapacityError("cohomology_group", "degree out of range",
                            "0 <= n <= PTOWER_MAX_DEGREE (default 5)");
    auto out = std::make_shared<CohomologyGroup>();
    out->group = g;
    out->module = m;
    out->degree = n;
    out->complex_ = std::make_shared<BarComplex>(g, m);
    const BarComplex& bc = *out->complex_;

    if (m->rank() == 0) return out;  // trivial coefficients

    // order route: |H^n| = |C^n| / (|im δ_n| · |im δ_{n-1}|)
    Factored hn;
    factored_mul(hn, m->abelian().order(), bc.bar().tuple_count(n));
    Factored rn = detail::image_order(bc, n, "cohomology_group/delta_n");
    Factored rprev = (n == 0) ? Factored{} : detail::image_order(bc, n - 1, "cohomology_group/delta_prev");
    for (auto [p, e] : rn) hn[p] -= e;
    for (auto [p, e] : rprev) hn[p] -= e;
    Int order = 1;
    for (auto [p, e] : hn) {
        if (e < 0) throw TheoryViolation("cohomology_group", "negative cohomology order exponent");
        for (Int i = 0; i < e; ++i) {
            order *= p;
            if (order > 4096)
                throw CapacityError("cohomology_group", "H^n too large for structure extraction",
                                    "this build handles |H^n| <= 4096");
        }
    }
    out->order_factors = hn;
    if (order == 1) return out;  // H^n = 0: nothing else to build

    // structure route
    Int mod = bc.exponent();
    auto rowmod = [cx = out->complex_](std::int32_t r) { return cx->row_modulus(r); };
    out->lreducer_ = std::make_shared<ModColumnReducer>(mod, rowmod, false, "cohomology_group/L");
    if (n > 0) {
        std::int64_t cols = bc.dim(n - 1);
        for (std::int64_t c = 0; c < cols; ++c) out->lreducer_->add_column(bc.delta_column(n - 1, c), {});
    }

    ModColumnReducer kern(mod, rowmod, true, "cohomology_group/kernel");
    {
        std::int64_t cols = bc.dim(n);
        for (std::int64_t c = 0; c < cols; ++c) {
            SparseVec combo;
            combo.e.emplace_back(static_cast<std::int32_t>(c), 1);
            kern.add_column(bc.delta_column(n, c), std::move(combo));
        }
    }

    // deduplicate kernel generators by their residue class mod (im δ_{n-1} + floors)
    std::vector<SparseVec> gen_combos;   // representative cocycles (as combos = sparse cochains)
    std::vector<SparseVec> gen_residues;
    {
        std::unordered_map<std::string, int> seen;
        seen.emplace(CohomologyGroup::key_of(SparseVec{}), -1);
        for (const SparseVec& combo : kern.kernel_combos()) {
            SparseVec res = out->lreducer_->canonical_residue(combo);
            std::string key = CohomologyGroup::key_of(res);
            if (seen.emplace(std::move(key), static_cast<int>(gen_combos.size())).second) {
                gen_combos.push_back(combo);
                gen_residues.push_back(std::move(res));
            }
        }
    }

    // close the set of residues into the full (small) group, remembering one
    // expression of every element in the generators
    const int t = static_cast<int>(gen_combos.size());
    std::unordered_map<std::string, int> elem_index;  // residue -> element id
    std::vector<SparseVec> elems{SparseVec{}};        // residues
    std::vector<std::vector<Int>> expr{std::vector<Int>(t, 0)};
    elem_index.emplace(CohomologyGroup::key_of(SparseVec{}), 0);
    SparseVec tmp;
    for (size_t head = 0; head < elems.size(); ++head) {
        if (static_cast<Int>(elems.size()) > order)
            throw TheoryViolation("cohomology_group", "closure exceeded the computed order");
        for (int i = 0; i < t; ++i) {
            detail::sv_axpy_into(tmp, elems[head], 1, gen_residues[i], mod);
            SparseVec res = out->lreducer_->canonical_residue(tmp);
            std::string key = CohomologyGroup::key_of(res);
            if (elem_index.emplace(key, static_cast<int>(elems.size())).second) {
                std::vector<Int> e = expr[head];
                e[i] += 1;
                elems.push_back(std::move(res));
                expr.push_back(std::move(e));
            }
        }
    }
    if (static_cast<Int>(elems.size()) != order)
        throw TheoryViolation("cohomology_group", "closure order disagrees with the rank computation");

    // relation lattice from the Cayley-walk identities y(h) + e_i - y(h + g_i)
    std::vector<std::vector<Int>> rel_gens;
    for (size_t h = 0; h < elems.size(); ++h)
        for (int i = 0; i < t; ++i) {
            detail::sv_axpy_into(tmp, elems[h], 1, gen_residues[i], mod);
            SparseVec res = out->lreducer_->canonical_residue(tmp);
            int target = elem_index.at(CohomologyGroup::key_of(res));
            std::vector<Int> rel = expr[h];
            rel[i] += 1;
            for (int j = 0; j < t; ++j) rel[j] -= expr[target][j];
            bool nonzero = false;
            for (Int v : rel)
                if (v) nonzero = true;
            if (nonzero) rel_gens.push_back(std::move(rel));
        }

    IMat relmat(t, static_cast<int>(rel_gens.size()) + t);
    for (size_t j = 0; j < rel_gens.size(); ++j)
        for (int i = 0; i < t; ++i) relmat.at(i, static_cast<int>(j)) = rel_gens[j][i];
    for (int i = 0; i < t; ++i) relmat.at(i, static_cast<int>(rel_gens.size()) + i) = mod;

    PresentedAbelian pres = quotient_presentation(relmat, std::vector<Int>(t, mod));
    // pres: Z^t relations -> structure; basis_j = Σ_i from_canonical[i][j] · gen_i
    out->structure = pres.group;
    for (int j = 0; j < pres.group.rank(); ++j) {
        SparseVec combo;
        for (int i = 0; i < t; ++i) {
            Int coef = ((pres.from_canonical.at(i, j) % mod) + mod) % mod;
            if (!coef) continue;
            detail::sv_axpy_into(tmp, combo, coef, gen_combos[i], mod);
            std::swap(combo, tmp);
        }
        out->basis.push_back(cochain_from_sparse(combo, g, m, n, bc.bar()));
    }
    if (out->structure.order() != order)
        throw TheoryViolation("cohomology_group", "presented structure disagrees with the order route");

    // freeze the residue -> coordinates table
    {
        FiniteAbelianGroup& st = out->structure;
        std::vector<SparseVec> basis_sparse;
        for (const Cochain& b : out->basis) basis_sparse.push_back(cochain_to_sparse(b, bc.bar()));
        Int total = st.order();
        for (Int idx = 0; idx < total; ++idx) {
            Tuple coords = st.element_at(idx);
            SparseVec sum;
            for (int j = 0; j < st.rank(); ++j) {
                if (!coords[j]) continue;
                detail::sv_axpy_into(tmp, sum, coords[j], basis_sparse[j], mod);
                std::swap(sum, tmp);
            }
            SparseVec res = out->lreducer_->canonical_residue(sum);
            out->residue_lookup_[CohomologyGroup::key_of(res)] = coords;
        }
        if (static_cast<Int>(out->residue_lookup_.size()) != total)
            throw TheoryViolation("cohomology_group", "basis classes are not independent");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cohomology classes and the maps between groups.

struct CohomologyClass {
    CohomologyPtr ambient;
    Cochain representative;
    std::vector<Int> coordinates;

    static CohomologyClass of(const CohomologyPtr& ambient, Cochain rep) {
        CohomologyClass c{ambient, std::move(rep), {}};
        c.coordinates = ambient->coordinates(c.representative);
        return c;
    }

    bool is_zero() const {
        for (Int v : coordinates)
            if (v) return false;
        return true;
    }
};

// Restriction of a class along a subgroup inclusion (the subgroup is
// reindexed as a standalone group; the module restricts along it).
inline CohomologyClass restriction(const CohomologyClass& cls, const Subgroup& h) {
    auto [hg, old_of_new] = group_from_subgroup(h);
    ModulePtr hm = make_module(pullback_module(*cls.ambient->module, hg, old_of_new));
    Cochain rep = pullback_cochain(cls.representative, hg, old_of_new, hm);
    CohomologyPtr amb = cohomology_group(hg, hm, cls.ambient->degree);
    return CohomologyClass::of(amb, std::move(rep));
}

// Transfer (corestriction) from a subgroup back up; the class is given over
// the reindexed subgroup group, h names the same subgroup inside g.
inline CohomologyClass transfer(const CohomologyClass& cls, const GroupPtr& g, const Subgroup& h,
                                const ModulePtr& g_module) {
    Cochain rep = transfer_cochain(cls.representative, g, h, g_module);
    CohomologyPtr amb = cohomology_group(g, g_module, cls.ambient->degree);
    return CohomologyClass::of(amb, std::move(rep));
}

// ---------------------------------------------------------------------------
// Witness solving: explicit b with δb = z.

// Exact solver: columns of δ_{n-1} with unit combos, then Howell-solve.
// Reusable across many right-hand sides over the same (G, M, degree).
class CoboundarySolver {
public:
    CoboundarySolver(GroupPtr g, ModulePtr m, int target_degree)
        : bc_(std::make_shared<BarComplex>(std::move(g), std::move(m))), degree_(target_degree) {
        detail::check_elim_dims(*bc_, target_degree, "CoboundarySolver");
        Int mod = bc_->exponent();
        auto rowmod = [bc = bc_](std::int32_t r) { return bc->row_modulus(r); };
        red_ = std::make_unique<ModColumnReducer>(mod, rowmod, true, "CoboundarySolver");
        std::int64_t cols = bc_->dim(target_degree - 1);
        for (std::int64_t c = 0; c < cols; ++c) {
            SparseVec combo;
            combo.e.emplace_back(static_cast<std::int32_t>(c), 1);
            red_->add_column(bc_->delta_column(target_degree - 1, c), std::move(combo));
        }
    }

    std::optional<Cochain> solve(const Cochain& z) const {
        auto combo = red_->solve(cochain_to_sparse(z, bc_->bar()));
        if (!combo) return std::nullopt;
        return cochain_from_sparse(*combo, bc_->group(), bc_->module(), degree_ - 1, bc_->bar());
    }

private:
    std::shared_ptr<BarComplex> bc_;
    int degree_;
    std::unique_ptr<ModColumnReducer> red_;
};

// b with δb = z, or nullopt when z is not a coboundary. Uses the averaging
// formula when |G| is invertible on the coefficients, the Howell solver
// otherwise; the result is verified before being returned.
inline std::optional<Cochain> solve_coboundary(const Cochain& z) {
    if (z.degree() < 1) throw UserInputError("solve_coboundary", "target degree must be >= 1", "");
    if (z.coefficients()->rank() == 0) return Cochain(z.group(), z.coefficients(), z.degree() - 1);
    Int m = z.coefficients()->abelian().exponent();
    if (gcd_ll(z.group()->order(), m) == 1) {
        Cochain b = coprime_coboundary_solve(z);
        if (!coboundary_equals(b, z))
            throw TheoryViolation("solve_coboundary", "averaging witness failed verification");
        return b;
    }
    CoboundarySolver solver(z.group(), z.coefficients(), z.degree());
    auto b = solver.solve(z);
    if (b && !coboundary_equals(*b, z))
        throw TheoryViolation("solve_coboundary", "Howell witness failed verification");
    return b;
}

// Witness b with δb = c1 - c2 (both must be cocycles of the same shape).
inline std::optional<Cochain> cohomologous_witness(const Cochain& c1, const Cochain& c2) {
    if (!same_shape(c1, c2))
        throw UserInputError("cohomologous_witness", "cochains have different shapes",
                             "same degree, group and coefficients required");
    if (!is_cocycle(c1) || !is_cocycle(c2))
        throw UserInputError("cohomologous_witness", "inputs must be cocycles", "check δc = 0 first");
    return solve_coboundary(cochain_sub(c1, c2));
}

}  // namespace ptower
