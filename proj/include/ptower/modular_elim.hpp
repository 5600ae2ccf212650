#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ptower/abelian.hpp"
#include "ptower/config.hpp"

namespace ptower {

// prime -> exponent, for orders too large to hold in an integer
using Factored = std::map<Int, Int>;

inline void factored_mul(Factored& f, Int n, Int times = 1) {
    for (auto [p, e] : factorize(n)) f[p] += e * times;
}

inline bool factored_is_one(const Factored& f) {
    for (const auto& [p, e] : f)
        if (e != 0) return false;
    return true;
}

// Sparse vector over Z/m: strictly increasing rows, values in (0, m).
struct SparseVec {
    std::vector<std::pair<std::int32_t, std::int32_t>> e;

    bool empty() const { return e.empty(); }
    std::int32_t lead_row() const { return e.front().first; }
    Int lead_val() const { return e.front().second; }
    size_t size() const { return e.size(); }
};

namespace detail {

inline void sv_axpy_into(SparseVec& out, const SparseVec& x, Int alpha, const SparseVec& y, Int m) {
    // out = x + alpha * y  (mod m)
    out.e.clear();
    alpha = ((alpha % m) + m) % m;
    size_t i = 0, j = 0;
    while (i < x.e.size() || j < y.e.size()) {
        if (j >= y.e.size() || (i < x.e.size() && x.e[i].first < y.e[j].first)) {
            out.e.push_back(x.e[i++]);
        } else if (i >= x.e.size() || y.e[j].first < x.e[i].first) {
            Int v = (alpha * y.e[j].second) % m;
            if (v) out.e.emplace_back(y.e[j].first, static_cast<std::int32_t>(v));
            ++j;
        } else {
            Int v = (x.e[i].second + alpha * y.e[j].second) % m;
            if (v) out.e.emplace_back(x.e[i].first, static_cast<std::int32_t>(v));
            ++i;
            ++j;
        }
    }
}

inline void sv_scale_into(SparseVec& out, const SparseVec& x, Int alpha, Int m) {
    out.e.clear();
    alpha = ((alpha % m) + m) % m;
    for (auto [r, v] : x.e) {
        Int w = (alpha * v) % m;
        if (w) out.e.emplace_back(r, static_cast<std::int32_t>(w));
    }
}

inline Int ext_gcd(Int a, Int b, Int& s, Int& t) {
    Int old_r = a, r = b, old_s = 1, s_ = 0, old_t = 0, t_ = 1;
    while (r != 0) {
        Int q = old_r / r;
        old_r -= q * r; std::swap(old_r, r);
        old_s -= q * s_; std::swap(old_s, s_);
        old_t -= q * t_; std::swap(old_t, t_);
    }
    s = old_s; t = old_t;
    return old_r;
}

}  // namespace detail

// Column-style Howell elimination over Z/m with optional per-row moduli
// ("floors": the row r coordinate lives in Z/d_r, realized by the implicit
// relation d_r·e_r). Columns are processed in a fixed order; the pivot state
// plus the processing order make every output deterministic.
//
// Three uses:
//   * image orders (track=false): |span(cols) + floors| / |floors|
//   * solving  A x ≡ b  (track=true, then solve())
//   * kernels: combos of columns that reduce to zero span ker(A mod floors)
class ModColumnReducer {
public:
    ModColumnReducer(Int modulus, std::function<Int(std::int32_t)> row_modulus, bool track_combos,
                     std::string where)
        : m_(modulus), row_mod_(std::move(row_modulus)), track_(track_combos), where_(std::move(where)) {
        if (m_ < 2) throw TheoryViolation(where_, "modulus must be >= 2");
    }

    // Feed one column; combo is the caller's bookkeeping vector (typically a
    // unit vector naming the column). Kernel combos are collected when
    // tracking is on.
    void add_column(SparseVec col, SparseVec combo) {
        work_.push_back({std::move(col), std::move(combo), true});
        drain();
    }

    // Membership / solving against the current pivot state. Returns the
    // combination x with  span_matrix · x ≡ target  (mod floors), if any.
    std::optional<SparseVec> solve(const SparseVec& target) const {
        if (!track_) throw TheoryViolation(where_, "solve requires combo tracking");
        SparseVec cur = target, acc, tmp;
        while (!cur.empty()) {
            std::int32_t r = cur.lead_row();
            Int u = cur.lead_val();
            const Pivot* p = find_pivot(r);
            Int v = p ? p->col.lead_val() : row_mod_(r);
            if (v >= m_ || v == 0) return std::nullopt;  // untouched free row
            Int g = gcd_ll(v, m_);
            if (u % g != 0) return std::nullopt;
            Int alpha = ((u / g) % (m_ / g)) * mod_inverse((v / g) % (m_ / g), m_ / g) % (m_ / g);
            if (p) {
                detail::sv_axpy_into(tmp, cur, -alpha, p->col, m_);
                std::swap(cur, tmp);
                detail::sv_axpy_into(tmp, acc, alpha, p->combo, m_);
                std::swap(acc, tmp);
            } else {
                // floor reduction: no contribution to the combination
                SparseVec floorvec;
                floorvec.e.emplace_back(r, static_cast<std::int32_t>(v));
                detail::sv_axpy_into(tmp, cur, -alpha, floorvec, m_);
                std::swap(cur, tmp);
            }
        }
        return acc;
    }

    // Canonical residue of a vector modulo the span (pivots + floors).
    // Identical residues <=> congruent vectors.
    SparseVec canonical_residue(const SparseVec& target) const {
        SparseVec cur = target, out, tmp;
        while (!cur.empty()) {
            std::int32_t r = cur.lead_row();
            Int u = cur.lead_val();
            const Pivot* p = find_pivot(r);
            Int v = p ? p->col.lead_val() : row_mod_(r);
            Int g = (v >= m_ || v == 0) ? m_ : gcd_ll(v, m_);
            Int rem = u % g;
            Int drop = u - rem;
            if (drop != 0) {
                Int alpha = ((drop / g) % (m_ / g)) * mod_inverse((v / g) % (m_ / g), m_ / g) % (m_ / g);
                SparseVec basis;
                const SparseVec* red = p ? &p->col : (basis.e.emplace_back(r, static_cast<std::int32_t>(v)), &basis);
                detail::sv_axpy_into(tmp, cur, -alpha, *red, m_);
                std::swap(cur, tmp);
            }
            if (!cur.empty() && cur.lead_row() == r) {
                out.e.push_back(cur.e.front());
                cur.e.erase(cur.e.begin());
            }
        }
        return out;
    }

    const std::vector<SparseVec>& kernel_combos() const { return kernel_; }

    // Π over materialized pivot rows of d_r / gcd(v_r, m): the order of
    // span(columns) inside ⊕_r Z/d_r.
    Factored image_order_factors() const {
        Factored f;
        for (const auto& [r, p] : pivots_) {
            Int g = gcd_ll(p.col.lead_val(), m_);
            Int contrib = row_mod_(r) / g;
            if (contrib > 1) factored_mul(f, contrib);
        }
        return f;
    }

    size_t pivot_count() const { return pivots_.size(); }
    size_t stored_entries() const { return entries_; }

private:
    struct Pivot {
        SparseVec col;
        SparseVec combo;
    };
    struct WorkItem {
        SparseVec col;
        SparseVec combo;
        bool real;  // floors and their descendants carry no combo
    };

    const Pivot* find_pivot(std::int32_t r) const {
        auto it = pivots_.find(r);
        return it == pivots_.end() ? nullptr : &it->second;
    }

    void charge(std::int64_t delta) {
        entries_ += delta;
        if (entries_ > limits().max_elim_entries)
            throw CapacityError(where_, "sparse elimination exceeded the memory budget",
                                "raise PTOWER_MAX_ELIM or shrink the instance");
    }

    void drain() {
        SparseVec tmp;
        while (!work_.empty()) {
            WorkItem item = std::move(work_.back());
            work_.pop_back();
            SparseVec& c = item.col;
            SparseVec& combo = item.combo;
            while (true) {
                if (c.empty()) {
                    if (track_ && item.real && !combo.empty()) kernel_.push_back(std::move(combo));
                    break;
                }
                std::int32_t r = c.lead_row();
                Int u = c.lead_val();
                auto it = pivots_.find(r);
                if (it == pivots_.end()) {
                    Int dr = row_mod_(r);
                    if (dr < m_) {
                        // materialize the floor pivot for this row
                        Pivot fp;
                        fp.col.e.emplace_back(r, static_cast<std::int32_t>(dr));
                        charge(1);
                        it = pivots_.emplace(r, std::move(fp)).first;
                    }
                }
                if (it == pivots_.end()) {
                    Int g = gcd_ll(u, m_);
                    if (g > 1) {
                        WorkItem desc;
                        detail::sv_scale_into(desc.col, c, m_ / g, m_);
                        if (track_) detail::sv_scale_into(desc.combo, combo, m_ / g, m_);
                        desc.real = item.real;
                        charge(static_cast<std::int64_t>(desc.col.size() + desc.combo.size()));
                        work_.push_back(std::move(desc));
                    }
                    charge(static_cast<std::int64_t>(c.size() + combo.size()));
                    pivots_.emplace(r, Pivot{std::move(c), std::move(combo)});
                    break;
                }

                Pivot& p = it->second;
                Int v = p.col.lead_val();
                Int g = gcd_ll(v, m_);
                if (u % g == 0) {
                    Int alpha = ((u / g) % (m_ / g)) * mod_inverse((v / g) % (m_ / g), m_ / g) % (m_ / g);
                    detail::sv_axpy_into(tmp, c, -alpha, p.col, m_);
                    std::swap(c, tmp);
                    if (track_) {
                        detail::sv_axpy_into(tmp, combo, -alpha, p.combo, m_);
                        std::swap(combo, tmp);
                    }
                    continue;
                }

                // pivot refinement: combine to reach gcd(u, v) at this row
                Int s, t;
                Int w = detail::ext_gcd(u, v, s, t);
                Pivot fresh;
                detail::sv_scale_into(tmp, c, s, m_);
                detail::sv_axpy_into(fresh.col, tmp, t, p.col, m_);
                if (track_) {
                    detail::sv_scale_into(tmp, combo, s, m_);
                    detail::sv_axpy_into(fresh.combo, tmp, t, p.combo, m_);
                }
                // the displaced pivot keeps reducing below r
                WorkItem old;
                detail::sv_axpy_into(old.col, p.col, -(v / w), fresh.col, m_);
                if (track_) detail::sv_axpy_into(old.combo, p.combo, -(v / w), fresh.combo, m_);
                old.real = true;
                charge(static_cast<std::int64_t>(old.col.size() + old.combo.size()));
                work_.push_back(std::move(old));

                Int g2 = gcd_ll(w, m_);
                if (g2 > 1) {
                    WorkItem desc;
                    detail::sv_scale_into(desc.col, fresh.col, m_ / g2, m_);
                    if (track_) detail::sv_scale_into(desc.combo, fresh.combo, m_ / g2, m_);
                    desc.real = true;
                    charge(static_cast<std::int64_t>(desc.col.size() + desc.combo.size()));
                    work_.push_back(std::move(desc));
                }

                detail::sv_axpy_into(tmp, c, -(u / w), fresh.col, m_);
                std::swap(c, tmp);
                if (track_) {
                    detail::sv_axpy_into(tmp, combo, -(u / w), fresh.combo, m_);
                    std::swap(combo, tmp);
                }
                charge(static_cast<std::int64_t>(fresh.col.size()) + static_cast<std::int64_t>(fresh.combo.size()) -
                       static_cast<std::int64_t>(p.col.size()) - static_cast<std::int64_t>(p.combo.size()));
                p = std::move(fresh);
            }
        }
    }

    Int m_;
    std::function<Int(std::int32_t)> row_mod_;
    bool track_;
    std::string where_;
    std::unordered_map<std::int32_t, Pivot> pivots_;
    std::vector<WorkItem> work_;
    std::vector<SparseVec> kernel_;
    std::int64_t entries_ = 0;
};

}  // namespace ptower
