#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "multirew/rational.hpp"

namespace multirew {

struct LinearSystem {
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> rhs;
};

// Exact solver for square systems: denominator-cleared integer elimination
// with per-row gcd normalization, pivoting on the largest numerator
// magnitude. Returns the unique solution, or nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(const LinearSystem& sys) {
    size_t n = sys.matrix.size();
    if (sys.rhs.size() != n)
        throw invalid_operand_error("solve_square: rhs dimension mismatch");
    for (const auto& row : sys.matrix)
        if (row.size() != n)
            throw invalid_operand_error("solve_square: matrix is not square");
    if (n == 0) return std::vector<Rational>{};

    // Integer augmented matrix, one row scale at a time.
    std::vector<std::vector<Int>> a(n, std::vector<Int>(n + 1));
    for (size_t i = 0; i < n; ++i) {
        Int scale = 1;
        for (size_t j = 0; j < n; ++j) scale = lcm(scale, sys.matrix[i][j].get_den());
        scale = lcm(scale, sys.rhs[i].get_den());
        for (size_t j = 0; j < n; ++j)
            a[i][j] = sys.matrix[i][j].get_num() * (scale / sys.matrix[i][j].get_den());
        a[i][n] = sys.rhs[i].get_num() * (scale / sys.rhs[i].get_den());
    }

    auto normalize_row = [&](std::vector<Int>& row) {
        Int g = 0;
        for (const Int& v : row) g = gcd(g, v);
        if (g > 1)
            for (Int& v : row) v /= g;
    };

    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col; r < n; ++r) {
            normalize_row(a[r]);
            if (a[pivot][col] == 0 ||
                (a[r][col] != 0 &&
                 mpz_cmpabs(a[r][col].get_mpz_t(), a[pivot][col].get_mpz_t()) > 0))
                pivot = r;
        }
        if (a[pivot][col] == 0) return std::nullopt;
        std::swap(a[col], a[pivot]);
        for (size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Int factor = a[r][col];
            for (size_t j = col; j <= n; ++j)
                a[r][j] = a[r][j] * a[col][col] - a[col][j] * factor;
            normalize_row(a[r]);
        }
    }

    std::vector<Rational> x(n);
    for (size_t i = n; i-- > 0;) {
        Rational acc(a[i][n]);
        for (size_t j = i + 1; j < n; ++j) acc -= Rational(a[i][j]) * x[j];
        x[i] = acc / Rational(a[i][i]);
        x[i].canonicalize();
    }
    return x;
}

// Convenience wrapper: solves A X = B column by column with one elimination
// per column. Used for expected-visiting-time matrices.
inline std::optional<std::vector<std::vector<Rational>>> solve_columns(
    const std::vector<std::vector<Rational>>& matrix,
    const std::vector<std::vector<Rational>>& rhs_columns) {
    std::vector<std::vector<Rational>> out;
    for (const auto& rhs : rhs_columns) {
        auto x = solve_square(LinearSystem{matrix, rhs});
        if (!x) return std::nullopt;
        out.push_back(std::move(*x));
    }
    return out;
}

// min objective . x  subject to  eq_lhs x = eq_rhs,  ge_lhs x >= ge_rhs,
// and x_i >= 0 unless free_vars marks the variable unbounded.
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> eq_lhs;
    std::vector<Rational> eq_rhs;
    std::vector<std::vector<Rational>> ge_lhs;
    std::vector<Rational> ge_rhs;
    std::vector<char> free_vars;  // empty means all variables >= 0
};

struct LpResult {
    bool feasible = false;
    std::vector<Rational> solution;
    Rational objective;
};

namespace detail {

struct Tableau {
    // rows x (cols + 1); the last column is the right-hand side.
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> cost;  // reduced-cost row, cost.back() = -objective
    std::vector<int> basis;
    size_t cols = 0;

    void pivot(size_t pr, size_t pc) {
        Rational p = rows[pr][pc];
        for (auto& v : rows[pr]) v /= p;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == pr) continue;
            Rational f = rows[r][pc];
            if (f == 0) continue;
            for (size_t c = 0; c <= cols; ++c) rows[r][c] -= f * rows[pr][c];
        }
        Rational f = cost[pc];
        if (f != 0)
            for (size_t c = 0; c <= cols; ++c) cost[c] -= f * rows[pr][c];
        basis[pr] = static_cast<int>(pc);
    }

    // Bland's rule: lowest-index entering column with negative reduced cost,
    // lowest-index basic variable among ratio ties. Terminates on degenerate
    // problems.
    bool optimize(size_t usable_cols) {
        while (true) {
            size_t enter = usable_cols;
            for (size_t c = 0; c < usable_cols; ++c)
                if (cost[c] < 0) {
                    enter = c;
                    break;
                }
            if (enter == usable_cols) return true;
            size_t leave = rows.size();
            Rational best;
            for (size_t r = 0; r < rows.size(); ++r) {
                if (rows[r][enter] <= 0) continue;
                Rational ratio = rows[r][cols] / rows[r][enter];
                if (leave == rows.size() || ratio < best ||
                    (ratio == best && basis[r] < basis[leave]))
                    leave = r, best = ratio;
            }
            if (leave == rows.size()) return false;  // unbounded direction
            pivot(leave, enter);
        }
    }
};

}  // namespace detail

// Exact two-phase simplex. Throws on an unbounded objective, which the two
// linear programs built by this library never produce.
inline LpResult lp_solve(const LinearProgram& lp) {
    size_t nvars = lp.objective.size();
    auto width_check = [&](const std::vector<std::vector<Rational>>& rows) {
        for (const auto& r : rows)
            if (r.size() != nvars)
                throw invalid_operand_error("lp_solve: constraint dimension mismatch");
    };
    width_check(lp.eq_lhs);
    width_check(lp.ge_lhs);
    if (lp.eq_lhs.size() != lp.eq_rhs.size() || lp.ge_lhs.size() != lp.ge_rhs.size())
        throw invalid_operand_error("lp_solve: rhs dimension mismatch");
    std::vector<char> free_vars = lp.free_vars;
    free_vars.resize(nvars, 0);

    // Column layout: for each variable one column, plus one negated column
    // per free variable, plus one surplus column per >= row.
    std::vector<int> neg_col(nvars, -1);
    size_t cols = nvars;
    for (size_t i = 0; i < nvars; ++i)
        if (free_vars[i]) neg_col[i] = static_cast<int>(cols++);
    size_t surplus_base = cols;
    cols += lp.ge_lhs.size();

    size_t nrows = lp.eq_lhs.size() + lp.ge_lhs.size();
    std::vector<std::vector<Rational>> rows(nrows, std::vector<Rational>(cols + 1, Rational(0)));
    auto fill_row = [&](size_t r, const std::vector<Rational>& lhs, const Rational& rhs) {
        for (size_t i = 0; i < nvars; ++i) {
            rows[r][i] = lhs[i];
            if (neg_col[i] >= 0) rows[r][neg_col[i]] = -lhs[i];
        }
        rows[r][cols] = rhs;
    };
    for (size_t r = 0; r < lp.eq_lhs.size(); ++r) fill_row(r, lp.eq_lhs[r], lp.eq_rhs[r]);
    for (size_t r = 0; r < lp.ge_lhs.size(); ++r) {
        size_t row = lp.eq_lhs.size() + r;
        fill_row(row, lp.ge_lhs[r], lp.ge_rhs[r]);
        rows[row][surplus_base + r] = Rational(-1);
    }
    for (auto& row : rows)
        if (row[cols] < 0)
            for (auto& v : row) v = -v;

    // Phase 1: artificial basis, minimize the sum of artificials.
    detail::Tableau t;
    t.cols = cols + nrows;
    t.basis.resize(nrows);
    t.rows.assign(nrows, std::vector<Rational>(t.cols + 1, Rational(0)));
    for (size_t r = 0; r < nrows; ++r) {
        for (size_t c = 0; c < cols; ++c) t.rows[r][c] = rows[r][c];
        t.rows[r][cols + r] = Rational(1);
        t.rows[r][t.cols] = rows[r][cols];
        t.basis[r] = static_cast<int>(cols + r);
    }
    t.cost.assign(t.cols + 1, Rational(0));
    for (size_t c = 0; c < cols; ++c)
        for (size_t r = 0; r < nrows; ++r) t.cost[c] -= t.rows[r][c];
    for (size_t r = 0; r < nrows; ++r) t.cost[t.cols] -= t.rows[r][t.cols];
    if (!t.optimize(t.cols))
        throw precondition_error("lp_solve: phase 1 unbounded");
    if (-t.cost[t.cols] != 0) return LpResult{};  // infeasible

    // Drive leftover artificials out of the basis or drop redundant rows.
    for (size_t r = 0; r < t.rows.size();) {
        if (t.basis[r] < static_cast<int>(cols)) {
            ++r;
            continue;
        }
        size_t c = 0;
        while (c < cols && t.rows[r][c] == 0) ++c;
        if (c < cols) {
            t.pivot(r, c);
            ++r;
        } else {
            t.rows.erase(t.rows.begin() + r);
            t.basis.erase(t.basis.begin() + r);
        }
    }

    // Phase 2 on the original objective: drop the artificial columns and
    // move the right-hand side next to the structural columns.
    for (auto& row : t.rows) {
        row[cols] = row[t.cols];
        row.resize(cols + 1);
    }
    t.cols = cols;
    t.cost.assign(cols + 1, Rational(0));
    auto col_cost = [&](size_t c) -> Rational {
        if (c < nvars) return lp.objective[c];
        for (size_t i = 0; i < nvars; ++i)
            if (neg_col[i] == static_cast<int>(c)) return -lp.objective[i];
        return Rational(0);  // surplus
    };
    for (size_t c = 0; c < cols; ++c) t.cost[c] = col_cost(c);
    for (size_t r = 0; r < t.rows.size(); ++r) {
        Rational cb = col_cost(static_cast<size_t>(t.basis[r]));
        if (cb == 0) continue;
        for (size_t c = 0; c <= cols; ++c) t.cost[c] -= cb * t.rows[r][c];
    }
    if (!t.optimize(cols))
        throw precondition_error("lp_solve: objective unbounded below");

    std::vector<Rational> full(cols, Rational(0));
    for (size_t r = 0; r < t.rows.size(); ++r)
        if (t.basis[r] < static_cast<int>(cols)) full[t.basis[r]] = t.rows[r][cols];
    LpResult res;
    res.feasible = true;
    res.solution.resize(nvars);
    for (size_t i = 0; i < nvars; ++i) {
        res.solution[i] = full[i];
        if (neg_col[i] >= 0) res.solution[i] -= full[neg_col[i]];
    }
    res.objective = -t.cost[cols];
    return res;
}

}  // namespace multirew
