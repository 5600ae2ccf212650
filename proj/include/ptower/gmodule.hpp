#pragma once

#include <memory>
#include <vector>

#include "ptower/finite_group.hpp"

namespace ptower {

class GModule;
using ModulePtr = std::shared_ptr<const GModule>;

inline void reduce_matrix_rows(IMat& m, const std::vector<Int>& row_moduli) {
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            m.at(i, j) %= row_moduli[i];
            if (m.at(i, j) < 0) m.at(i, j) += row_moduli[i];
        }
}

// A finite abelian group with a G-action given by one integer matrix per
// group element (acting on invariant-factor tuples).
class GModule {
public:
    GModule(GroupPtr group, FiniteAbelianGroup abelian, std::vector<IMat> action, std::string name = "")
        : group_(std::move(group)), abelian_(std::move(abelian)), action_(std::move(action)),
          name_(std::move(name)) {
        const int k = abelian_.rank();
        if (static_cast<int>(action_.size()) != group_->order())
            throw UserInputError(name_, "need one action matrix per group element", "");
        for (IMat& m : action_) {
            if (m.rows != k || m.cols != k)
                throw UserInputError(name_, "action matrix has wrong shape", "matrices act on module tuples");
            check_well_defined(m);
            reduce_matrix_rows(m, abelian_.factors());
        }
        check_homomorphism();
    }

    static GModule trivial(GroupPtr group, FiniteAbelianGroup abelian, std::string name = "") {
        std::vector<IMat> act(group->order(), IMat::identity(abelian.rank()));
        return GModule(std::move(group), std::move(abelian), std::move(act), std::move(name));
    }

    // Complete an action given on a generating set (breadth-first over words).
    static GModule from_generator_action(GroupPtr group, FiniteAbelianGroup abelian,
                                         const std::vector<Elem>& gens, const std::vector<IMat>& mats,
                                         std::string name = "") {
        if (gens.size() != mats.size())
            throw UserInputError(name, "one matrix per generator required", "");
        const FiniteGroup& g = *group;
        std::vector<IMat> act(g.order());
        std::vector<char> known(g.order(), 0);
        act[g.identity()] = IMat::identity(abelian.rank());
        known[g.identity()] = 1;
        for (size_t i = 0; i < gens.size(); ++i) {
            act[gens[i]] = mats[i];
            known[gens[i]] = 1;
        }
        bool progress = true;
        while (progress) {
            progress = false;
            for (Elem a = 0; a < g.order(); ++a) {
                if (!known[a]) continue;
                for (Elem b = 0; b < g.order(); ++b) {
                    if (!known[b] || known[g.mul(a, b)]) continue;
                    IMat m = mat_mul(act[a], act[b]);
                    reduce_matrix_rows(m, abelian.factors());
                    act[g.mul(a, b)] = std::move(m);
                    known[g.mul(a, b)] = 1;
                    progress = true;
                }
            }
        }
        for (Elem a = 0; a < g.order(); ++a)
            if (!known[a])
                throw UserInputError(name, "generators do not generate the group",
                                     "add elements until the closure is everything");
        return GModule(std::move(group), std::move(abelian), std::move(act), std::move(name));
    }

    const GroupPtr& group() const { return group_; }
    const FiniteAbelianGroup& abelian() const { return abelian_; }
    const IMat& matrix(Elem g) const { return action_[g]; }
    const std::string& name() const { return name_; }
    int rank() const { return abelian_.rank(); }
    Int order() const { return abelian_.order(); }
    bool is_zero() const { return abelian_.is_trivial(); }

    Tuple act(Elem g, const Tuple& t) const { return abelian_.reduce(mat_apply(action_[g], t)); }

    bool has_trivial_action() const {
        IMat id = IMat::identity(abelian_.rank());
        for (const IMat& m : action_)
            if (!(m == id)) return false;
        return true;
    }

    bool same_shape(const GModule& o) const {
        return group_->same_table(*o.group_) && abelian_ == o.abelian_;
    }

private:
    void check_well_defined(const IMat& m) const {
        const auto& d = abelian_.factors();
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j)
                if ((m.at(i, j) * d[j]) % d[i] != 0)
                    throw UserInputError(name_, "action matrix is not well defined on the module",
                                         "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                             ") violates the modulus constraint");
    }

    void check_homomorphism() const {
        const FiniteGroup& g = *group_;
        IMat id = IMat::identity(abelian_.rank());
        IMat e = action_[g.identity()];
        if (!(e == id))
            throw UserInputError(name_, "identity must act as the identity matrix", "");
        for (Elem a = 0; a < g.order(); ++a)
            for (Elem b = 0; b < g.order(); ++b) {
                IMat prod = mat_mul(action_[a], action_[b]);
                reduce_matrix_rows(prod, abelian_.factors());
                if (!(prod == action_[g.mul(a, b)]))
                    throw UserInputError(name_, "action is not a homomorphism",
                                         "g=" + std::to_string(a) + ", h=" + std::to_string(b));
            }
    }

    GroupPtr group_;
    FiniteAbelianGroup abelian_;
    std::vector<IMat> action_;
    std::string name_;
};

inline ModulePtr make_module(GModule m) { return std::make_shared<const GModule>(std::move(m)); }

// Pull a module back along a homomorphism phi: C -> G (restriction when phi
// is an inclusion).
inline GModule pullback_module(const GModule& m, GroupPtr c, const std::vector<Elem>& phi,
                               std::string name = "") {
    std::vector<IMat> act(c->order());
    for (Elem x = 0; x < c->order(); ++x) act[x] = m.matrix(phi[x]);
    return GModule(std::move(c), m.abelian(), std::move(act),
                   name.empty() ? m.name() + "|pullback" : std::move(name));
}

// Restriction to a subgroup, reindexed as a standalone group.
inline GModule restrict_module(const GModule& m, const Subgroup& h) {
    if (!m.group()->same_table(*h.parent()))
        throw UserInputError("restrict_module", "subgroup does not live in the module's group", "");
    auto [grp, old_of_new] = group_from_subgroup(h);
    return pullback_module(m, grp, old_of_new, m.name() + "|" + std::to_string(h.order()));
}

// phi(h . m) = phi1(h) . phi(m) for all h in H, m in M (checked on module
// generators; linearity gives the rest).
inline bool module_map_check(const GModule& m, const GModule& n, const std::vector<Elem>& phi1,
                             const IMat& phi) {
    if (phi.rows != n.rank() || phi.cols != m.rank()) return false;
    // well-definedness of phi itself
    for (int i = 0; i < phi.rows; ++i)
        for (int j = 0; j < phi.cols; ++j)
            if ((phi.at(i, j) * m.abelian().factors()[j]) % n.abelian().factors()[i] != 0) return false;
    for (Elem h = 0; h < m.group()->order(); ++h) {
        IMat lhs = mat_mul(phi, m.matrix(h));
        IMat rhs = mat_mul(n.matrix(phi1[h]), phi);
        reduce_matrix_rows(lhs, n.abelian().factors());
        reduce_matrix_rows(rhs, n.abelian().factors());
        if (!(lhs == rhs)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Primary decomposition A = A_p ⊕ A^(p) via CRT idempotents per cyclic factor.

struct PrimaryDecomposition {
    Int prime = 2;
    GModule p_part;        // A_p
    GModule coprime_part;  // A^(p)
    IMat incl_p, proj_p;   // A_p <-> A
    IMat incl_c, proj_c;   // A^(p) <-> A
};

inline PrimaryDecomposition primary_decompose(const GModule& m, Int p) {
    if (!is_prime(p))
        throw UserInputError("primary_decompose", std::to_string(p) + " is not prime", "pass a prime");
    const auto& d = m.abelian().factors();
    const int k = m.rank();

    std::vector<int> ip, ic;        // positions contributing to each part
    std::vector<Int> fp, fc;        // their invariant factors
    std::vector<Int> up(k, 0), uc(k, 0);  // idempotent scalars per position
    for (int i = 0; i < k; ++i) {
        Int pe = p_part(d[i], p);
        Int mi = d[i] / pe;
        if (pe > 1) {
            ip.push_back(i);
            fp.push_back(pe);
            up[i] = (mi == 1) ? 1 : (mi * mod_inverse(mi % pe, pe)) % d[i];
        }
        if (mi > 1) {
            ic.push_back(i);
            fc.push_back(mi);
            uc[i] = (pe == 1) ? 1 : (pe * mod_inverse(pe % mi, mi)) % d[i];
        }
    }

    auto build = [&](const std::vector<int>& idx, const std::vector<Int>& factors,
                     const std::vector<Int>& u, const char* tag) {
        FiniteAbelianGroup part(factors);
        IMat incl(k, static_cast<int>(idx.size()));
        IMat proj(static_cast<int>(idx.size()), k);
        for (size_t j = 0; j < idx.size(); ++j) {
            incl.at(idx[j], static_cast<int>(j)) = u[idx[j]];
            proj.at(static_cast<int>(j), idx[j]) = 1;
        }
        std::vector<IMat> act(m.group()->order());
        for (Elem g = 0; g < m.group()->order(); ++g) {
            IMat mm = mat_mul(proj, mat_mul(m.matrix(g), incl));
            reduce_matrix_rows(mm, factors);
            act[g] = std::move(mm);
        }
        GModule sub(m.group(), part, std::move(act), m.name() + tag);
        return std::make_tuple(std::move(sub), std::move(incl), std::move(proj));
    };

    auto [pp, inclp, projp] = build(ip, fp, up, "_p");
    auto [cc, inclc, projc] = build(ic, fc, uc, "_coprime");
    PrimaryDecomposition out{p, std::move(pp), std::move(cc), std::move(inclp), std::move(projp),
                             std::move(inclc), std::move(projc)};

    if (out.p_part.order() * out.coprime_part.order() != m.order() ||
        out.p_part.order() != p_part(m.order(), p))
        throw TheoryViolation("primary_decompose", "component orders do not multiply up");
    return out;
}

// ---------------------------------------------------------------------------
// Nilpotent actions: iterate the augmentation submodule
//   M_0 = A,  M_{i+1} = < g.a - a : g in G, a in M_i >  (as a submodule).

namespace detail {

inline AbelianSubgroup action_saturate(const GModule& m, std::vector<Tuple> gens) {
    const auto& moduli = m.abelian().factors();
    AbelianSubgroup s = subgroup_from_generators(gens, moduli);
    while (true) {
        std::vector<Tuple> bigger = s.basis;
        bool grew = false;
        for (Elem g = 0; g < m.group()->order(); ++g)
            for (const Tuple& b : s.basis) {
                Tuple moved = m.act(g, b);
                if (!subgroup_contains(s, moved)) {
                    bigger.push_back(moved);
                    grew = true;
                }
            }
        if (!grew) return s;
        s = subgroup_from_generators(bigger, moduli);
    }
}

}  // namespace detail

struct NilpotentActionCertificate {
    bool nilpotent = false;
    std::vector<AbelianSubgroup> chain;  // M_0 ⊇ M_1 ⊇ ...; last repeats on failure
};

inline NilpotentActionCertificate is_nilpotent_action(const GModule& m) {
    NilpotentActionCertificate cert;
    const auto& moduli = m.abelian().factors();
    std::vector<Tuple> std_gens;
    for (int i = 0; i < m.rank(); ++i) {
        Tuple e(m.rank(), 0);
        e[i] = 1;
        std_gens.push_back(std::move(e));
    }
    AbelianSubgroup cur = subgroup_from_generators(std_gens, moduli);
    cert.chain.push_back(cur);
    while (true) {
        std::vector<Tuple> gens;
        for (Elem g = 0; g < m.group()->order(); ++g)
            for (const Tuple& b : cur.basis)
                gens.push_back(m.abelian().sub(m.act(g, b), b));
        AbelianSubgroup next = detail::action_saturate(m, gens);
        if (next.order() == cur.order()) {
            cert.nilpotent = next.is_trivial();
            if (!cert.nilpotent) cert.chain.push_back(next);
            return cert;
        }
        cert.chain.push_back(next);
        if (next.is_trivial()) {
            cert.nilpotent = true;
            return cert;
        }
        cur = std::move(next);
    }
}

// ---------------------------------------------------------------------------
// External direct sum over a product group, renormalized to invariant-factor
// form. proj1/proj2 give the product-group projections used for the action.

struct ModuleSum {
    GModule sum;
    IMat into_sum_1, into_sum_2;  // canonical coords of each summand inside the sum
};

inline ModuleSum direct_sum_over_product(const GModule& m1, const GModule& m2, const GroupPtr& prod,
                                         const std::vector<Elem>& proj1, const std::vector<Elem>& proj2) {
    std::vector<Int> concat = m1.abelian().factors();
    concat.insert(concat.end(), m2.abelian().factors().begin(), m2.abelian().factors().end());
    PresentedAbelian can = quotient_presentation(IMat(static_cast<int>(concat.size()), 0), concat);

    const int k1 = m1.rank(), k2 = m2.rank(), k = k1 + k2;
    std::vector<IMat> act(prod->order());
    for (Elem g = 0; g < prod->order(); ++g) {
        IMat block(k, k);
        const IMat& a1 = m1.matrix(proj1[g]);
        const IMat& a2 = m2.matrix(proj2[g]);
        for (int i = 0; i < k1; ++i)
            for (int j = 0; j < k1; ++j) block.at(i, j) = a1.at(i, j);
        for (int i = 0; i < k2; ++i)
            for (int j = 0; j < k2; ++j) block.at(k1 + i, k1 + j) = a2.at(i, j);
        IMat moved = mat_mul(can.to_canonical, mat_mul(block, can.from_canonical));
        reduce_matrix_rows(moved, can.group.factors());
        act[g] = std::move(moved);
    }
    GModule sum(prod, can.group, std::move(act), m1.name() + "⊕" + m2.name());

    IMat in1(can.group.rank(), k1), in2(can.group.rank(), k2);
    for (int i = 0; i < can.group.rank(); ++i) {
        for (int j = 0; j < k1; ++j) in1.at(i, j) = can.to_canonical.at(i, j);
        for (int j = 0; j < k2; ++j) in2.at(i, j) = can.to_canonical.at(i, k1 + j);
    }
    return ModuleSum{std::move(sum), std::move(in1), std::move(in2)};
}

}  // namespace ptower
