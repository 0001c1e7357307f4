// Independent reference implementations used only to check the library:
// a dense two-phase simplex for exact transportation LPs, textbook
// one-pass correlation formulas, and O(n^2) rank enumeration. None of
// them share code with the implementations they validate.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sentfact/matrix.hpp"

namespace oracles {

// Minimizes c.x subject to A x = b, x >= 0 with a dense two-phase
// simplex using Bland's rule. Sized for desk-scale transportation
// instances (tens of variables).
class SimplexLp {
public:
    SimplexLp(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

    double solve() {
        std::size_t m = a_.size(), n = c_.size();
        // tableau: m rows x (n + m artificials + 1 rhs)
        std::size_t width = n + m + 1;
        tableau_.assign(m, std::vector<double>(width, 0.0));
        basis_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            double sign = b_[i] >= 0 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < n; ++j) tableau_[i][j] = sign * a_[i][j];
            tableau_[i][n + i] = 1.0;
            tableau_[i][width - 1] = sign * b_[i];
            basis_[i] = n + i;
        }

        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1(width, 0.0);
        for (std::size_t j = n; j < n + m; ++j) phase1[j] = 1.0;
        run(phase1, n + m);
        if (objective(phase1) > 1e-7) throw std::runtime_error("oracle LP infeasible");

        // Phase 2 over the original columns only.
        std::vector<double> phase2(width, 0.0);
        for (std::size_t j = 0; j < n; ++j) phase2[j] = c_[j];
        run(phase2, n);
        return objective(phase2);
    }

private:
    void run(const std::vector<double>& cost, std::size_t usable_cols) {
        std::size_t m = tableau_.size(), width = tableau_[0].size();
        while (true) {
            std::vector<double> y(m); // simplex multipliers for basic costs
            for (std::size_t i = 0; i < m; ++i) y[i] = cost[basis_[i]];
            // reduced cost of column j: c_j - y . column_j
            std::size_t entering = width;
            for (std::size_t j = 0; j < usable_cols; ++j) {
                double reduced = cost[j];
                for (std::size_t i = 0; i < m; ++i) reduced -= y[i] * tableau_[i][j];
                if (reduced < -1e-9) { // Bland: first improving column
                    entering = j;
                    break;
                }
            }
            if (entering == width) return; // optimal
            std::size_t leaving = m;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (tableau_[i][entering] > 1e-12) {
                    double ratio = tableau_[i][width - 1] / tableau_[i][entering];
                    if (leaving == m || ratio < best_ratio - 1e-15 ||
                        (std::abs(ratio - best_ratio) <= 1e-15 &&
                         basis_[i] < basis_[leaving])) {
                        leaving = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leaving == m) throw std::runtime_error("oracle LP unbounded");
            pivot(leaving, entering);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        std::size_t m = tableau_.size(), width = tableau_[0].size();
        double p = tableau_[row][col];
        for (std::size_t j = 0; j < width; ++j) tableau_[row][j] /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = tableau_[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) tableau_[i][j] -= f * tableau_[row][j];
        }
        basis_[row] = col;
    }

    double objective(const std::vector<double>& cost) const {
        double total = 0.0;
        std::size_t width = tableau_[0].size();
        for (std::size_t i = 0; i < tableau_.size(); ++i)
            total += cost[basis_[i]] * tableau_[i][width - 1];
        return total;
    }

    std::vector<std::vector<double>> a_;
    std::vector<double> b_;
    std::vector<double> c_;
    std::vector<std::vector<double>> tableau_;
    std::vector<std::size_t> basis_;
};

// Exact transportation cost: min sum_ij C_ij x_ij with row sums alpha and
// column sums beta.
inline double lp_transport_cost(const sentfact::Matrix& cost, const std::vector<double>& alpha,
                                const std::vector<double>& beta) {
    std::size_t m = alpha.size(), n = beta.size();
    std::vector<std::vector<double>> a(m + n, std::vector<double>(m * n, 0.0));
    std::vector<double> b(m + n), c(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][i * n + j] = 1.0;
            a[m + j][i * n + j] = 1.0;
            c[i * n + j] = cost(i, j);
        }
    for (std::size_t i = 0; i < m; ++i) b[i] = alpha[i];
    for (std::size_t j = 0; j < n; ++j) b[m + j] = beta[j];
    return SimplexLp(std::move(a), std::move(b), std::move(c)).solve();
}

// Textbook one-pass Pearson: (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2)).
inline double pearson_onepass(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// O(n^2) fractional ranks: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> bruteforce_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double smaller = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++smaller;
            if (v[j] == v[i]) ++equal;
        }
        ranks[i] = 1.0 + smaller + (equal - 1.0) / 2.0;
    }
    return ranks;
}

inline double spearman_bruteforce(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_onepass(bruteforce_ranks(x), bruteforce_ranks(y));
}

} // namespace oracles
