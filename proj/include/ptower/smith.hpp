#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ptower/errors.hpp"

namespace ptower {

using Int = long long;
using BigInt = boost::multiprecision::cpp_int;

// Dense integer matrix, row-major. Dimensions here are small (module ranks,
// presentation matrices); the big sparse eliminations live in modular_elim.hpp.
struct IMat {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    Int& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    Int at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static IMat identity(int n) {
        IMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline IMat mat_mul(const IMat& x, const IMat& y) {
    if (x.cols != y.rows)
        throw TheoryViolation("mat_mul", "dimension mismatch");
    IMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            Int v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

inline std::vector<Int> mat_apply(const IMat& m, const std::vector<Int>& v) {
    if (m.cols != static_cast<int>(v.size()))
        throw TheoryViolation("mat_apply", "dimension mismatch");
    std::vector<Int> out(m.rows, 0);
    for (int i = 0; i < m.rows; ++i) {
        Int s = 0;
        for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

inline IMat mat_transpose(const IMat& m) {
    IMat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

namespace detail {

struct BigMat {
    int rows = 0, cols = 0;
    std::vector<BigInt> a;
    BigMat() = default;
    BigMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
    BigInt& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const BigInt& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    static BigMat identity(int n) {
        BigMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

inline BigMat to_big(const IMat& m) {
    BigMat b(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) b.a[i] = m.a[i];
    return b;
}

inline IMat to_small(const BigMat& m, const char* where) {
    IMat s(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) {
        if (m.a[i] > std::numeric_limits<Int>::max() || m.a[i] < std::numeric_limits<Int>::min())
            throw CapacityError(where, "integer matrix entry exceeds 64 bits",
                                "reduce the problem size");
        s.a[i] = static_cast<Int>(m.a[i]);
    }
    return s;
}

}  // namespace detail

// U * A * V = D with U, V unimodular and D diagonal satisfying the
// divisibility chain d1 | d2 | ... All four transforms are returned so both
// coordinate directions are available without inverting anything later.
struct SmithResult {
    IMat d;     // rows x cols, diagonal
    IMat u;     // rows x rows
    IMat uinv;  // rows x rows
    IMat v;     // cols x cols
    IMat vinv;  // cols x cols
    int rank = 0;  // number of nonzero diagonal entries
};

inline SmithResult smith_normal_form(const IMat& input) {
    using detail::BigMat;
    BigMat a = detail::to_big(input);
    BigMat u = BigMat::identity(a.rows), uinv = BigMat::identity(a.rows);
    BigMat v = BigMat::identity(a.cols), vinv = BigMat::identity(a.cols);

    auto row_swap = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < a.cols; ++c) std::swap(a.at(i, c), a.at(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
        for (int r = 0; r < uinv.rows; ++r) std::swap(uinv.at(r, i), uinv.at(r, j));
    };
    auto col_swap = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < a.rows; ++r) std::swap(a.at(r, i), a.at(r, j));
        for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
        for (int c = 0; c < vinv.cols; ++c) std::swap(vinv.at(i, c), vinv.at(j, c));
    };
    // row i -= q * row j   (and the inverse column update on uinv)
    auto row_axpy = [&](int i, int j, const BigInt& q) {
        if (q == 0) return;
        for (int c = 0; c < a.cols; ++c) a.at(i, c) -= q * a.at(j, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) -= q * u.at(j, c);
        for (int r = 0; r < uinv.rows; ++r) uinv.at(r, j) += q * uinv.at(r, i);
    };
    auto col_axpy = [&](int i, int j, const BigInt& q) {
        if (q == 0) return;
        for (int r = 0; r < a.rows; ++r) a.at(r, i) -= q * a.at(r, j);
        for (int r = 0; r < v.rows; ++r) v.at(r, i) -= q * v.at(r, j);
        for (int c = 0; c < vinv.cols; ++c) vinv.at(j, c) += q * vinv.at(i, c);
    };
    auto row_negate = [&](int i) {
        for (int c = 0; c < a.cols; ++c) a.at(i, c) = -a.at(i, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
        for (int r = 0; r < uinv.rows; ++r) uinv.at(r, i) = -uinv.at(r, i);
    };

    int t = 0;
    const int tmax = std::min(a.rows, a.cols);
    while (t < tmax) {
        // locate smallest nonzero entry in the remaining block
        int pr = -1, pc = -1;
        for (int i = t; i < a.rows; ++i)
            for (int j = t; j < a.cols; ++j) {
                const BigInt& x = a.at(i, j);
                if (x == 0) continue;
                if (pr < 0 || abs(x) < abs(a.at(pr, pc))) { pr = i; pc = j; }
            }
        if (pr < 0) break;
        row_swap(t, pr);
        col_swap(t, pc);
        if (a.at(t, t) < 0) row_negate(t);

        bool clean = true;
        for (int i = t + 1; i < a.rows; ++i) {
            if (a.at(i, t) == 0) continue;
            BigInt q = a.at(i, t) / a.at(t, t);
            row_axpy(i, t, q);
            if (a.at(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < a.cols; ++j) {
            if (a.at(t, j) == 0) continue;
            BigInt q = a.at(t, j) / a.at(t, t);
            col_axpy(j, t, q);
            if (a.at(t, j) != 0) clean = false;
        }
        if (!clean) continue;  // remainder became the new smaller pivot candidate

        // enforce divisibility: pivot must divide every later entry
        bool divides = true;
        for (int i = t + 1; i < a.rows && divides; ++i)
            for (int j = t + 1; j < a.cols && divides; ++j)
                if (a.at(i, j) % a.at(t, t) != 0) {
                    row_axpy(t, i, BigInt(-1));  // fold the offending row into the pivot row
                    divides = false;
                }
        if (divides) ++t;
    }

    SmithResult res;
    res.d = detail::to_small(a, "smith_normal_form");
    res.u = detail::to_small(u, "smith_normal_form");
    res.uinv = detail::to_small(uinv, "smith_normal_form");
    res.v = detail::to_small(v, "smith_normal_form");
    res.vinv = detail::to_small(vinv, "smith_normal_form");
    res.rank = 0;
    for (int i = 0; i < tmax; ++i)
        if (res.d.at(i, i) != 0) ++res.rank;
    return res;
}

// Basis of { x : A x = 0 } as matrix columns.
inline IMat integer_kernel(const IMat& a) {
    SmithResult s = smith_normal_form(a);
    int free_cols = a.cols - s.rank;
    IMat k(a.cols, free_cols);
    for (int j = 0; j < free_cols; ++j)
        for (int i = 0; i < a.cols; ++i) k.at(i, j) = s.v.at(i, s.rank + j);
    return k;
}

// One solution of A x = b over the integers, if any.
inline bool integer_solve(const IMat& a, const std::vector<Int>& b, std::vector<Int>& x_out) {
    SmithResult s = smith_normal_form(a);
    std::vector<Int> c = mat_apply(s.u, b);
    std::vector<Int> y(a.cols, 0);
    for (int i = 0; i < std::min(a.rows, a.cols); ++i) {
        Int d = s.d.at(i, i);
        if (d == 0) {
            if (i < static_cast<int>(c.size()) && c[i] != 0) return false;
            continue;
        }
        if (c[i] % d != 0) return false;
        y[i] = c[i] / d;
    }
    for (int i = std::min(a.rows, a.cols); i < a.rows; ++i)
        if (c[i] != 0) return false;
    x_out = mat_apply(s.v, y);
    return true;
}

}  // namespace ptower
