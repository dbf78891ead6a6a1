#pragma once

#include "galekit/matrix.hpp"

#include <optional>

namespace galekit {

struct HnfResult {
    IntMat H;  // row Hermite normal form
    IntMat U;  // unimodular, U * M = H
    std::vector<int> pivot_cols;
    int rank() const { return int(pivot_cols.size()); }
};

// Row-style HNF: pivots positive, entries above each pivot reduced into
// [0, pivot), zero rows last. H is unique, U is not.
inline HnfResult hnf_rows(const IntMat& M) {
    int m = M.rows(), n = M.cols();
    HnfResult res{M, IntMat::identity(m), {}};
    IntMat& H = res.H;
    IntMat& U = res.U;
    auto row_sub = [&](int i, const Int& q, int k) {
        if (q == 0) return;
        for (int j = 0; j < n; ++j) H(i, j) -= q * H(k, j);
        for (int j = 0; j < m; ++j) U(i, j) -= q * U(k, j);
    };
    auto row_swap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < n; ++j) std::swap(H(i, j), H(k, j));
        for (int j = 0; j < m; ++j) std::swap(U(i, j), U(k, j));
    };
    auto row_negate = [&](int i) {
        for (int j = 0; j < n; ++j) H(i, j) = -H(i, j);
        for (int j = 0; j < m; ++j) U(i, j) = -U(i, j);
    };

    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        while (true) {
            int p = -1;
            for (int i = r; i < m; ++i)
                if (H(i, c) != 0 && (p < 0 || abs(H(i, c)) < abs(H(p, c)))) p = i;
            if (p < 0) break;
            row_swap(p, r);
            bool clean = true;
            for (int i = r + 1; i < m; ++i) {
                if (H(i, c) == 0) continue;
                row_sub(i, H(i, c) / H(r, c), r);
                if (H(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (H(r, c) == 0) continue;
        if (H(r, c) < 0) row_negate(r);
        for (int i = 0; i < r; ++i) row_sub(i, floor_div(H(i, c), H(r, c)), r);
        res.pivot_cols.push_back(c);
        ++r;
    }
    return res;
}

struct SnfResult {
    IntMat D;   // diagonal, d1 | d2 | ...
    IntMat mu;  // unimodular, mu * M * nu = D
    IntMat nu;
    IntVec invariant_factors() const {
        IntVec f;
        for (int i = 0; i < std::min(D.rows(), D.cols()); ++i)
            if (D(i, i) != 0) f.push_back(D(i, i));
        return f;
    }
    IntVec nontrivial_factors() const {
        IntVec f;
        for (const Int& d : invariant_factors())
            if (d != 1) f.push_back(d);
        return f;
    }
};

inline SnfResult snf(const IntMat& M) {
    int m = M.rows(), n = M.cols();
    SnfResult res{M, IntMat::identity(m), IntMat::identity(n)};
    IntMat& D = res.D;
    IntMat& mu = res.mu;
    IntMat& nu = res.nu;

    auto row_sub = [&](int i, const Int& q, int k) {
        if (q == 0) return;
        for (int j = 0; j < n; ++j) D(i, j) -= q * D(k, j);
        for (int j = 0; j < m; ++j) mu(i, j) -= q * mu(k, j);
    };
    auto col_sub = [&](int j, const Int& q, int k) {
        if (q == 0) return;
        for (int i = 0; i < m; ++i) D(i, j) -= q * D(i, k);
        for (int i = 0; i < n; ++i) nu(i, j) -= q * nu(i, k);
    };
    auto row_swap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < n; ++j) std::swap(D(i, j), D(k, j));
        for (int j = 0; j < m; ++j) std::swap(mu(i, j), mu(k, j));
    };
    auto col_swap = [&](int j, int k) {
        if (j == k) return;
        for (int i = 0; i < m; ++i) std::swap(D(i, j), D(i, k));
        for (int i = 0; i < n; ++i) std::swap(nu(i, j), nu(i, k));
    };

    int t = 0;
    while (t < std::min(m, n)) {
        int pi = -1, pj = -1;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) pi = i, pj = j;
        if (pi < 0) break;
        row_swap(pi, t);
        col_swap(pj, t);

        while (true) {
            bool again = false;
            for (int i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                row_sub(i, D(i, t) / D(t, t), t);
                if (D(i, t) != 0) {
                    row_swap(i, t);
                    again = true;
                }
            }
            if (again) continue;
            for (int j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                col_sub(j, D(t, j) / D(t, t), t);
                if (D(t, j) != 0) {
                    col_swap(j, t);
                    again = true;
                }
            }
            if (again) continue;

            // pivot must divide the rest of the block
            int bi = -1;
            for (int i = t + 1; i < m && bi < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) { bi = i; break; }
            if (bi < 0) break;
            row_sub(t, Int(-1), bi);  // pull the bad row in and restart
        }
        if (D(t, t) < 0) {
            for (int j = 0; j < n; ++j) D(t, j) = -D(t, j);
            for (int j = 0; j < m; ++j) mu(t, j) = -mu(t, j);
        }
        ++t;
    }
    return res;
}

// Basis of the saturated lattice {x in Z^cols : M x = 0}, one row per basis
// vector, HNF-canonical. Rows of the result are cotorsion free.
inline IntMat integer_kernel_rows(const IntMat& M) {
    HnfResult h = hnf_rows(M.transpose());
    int k = M.cols() - h.rank();
    IntMat K = h.U.bottom_rows(k);
    return hnf_rows(K).H;
}

// Saturation of the row lattice of A (kernel of the kernel).
inline IntMat saturation_rows(const IntMat& A) {
    return integer_kernel_rows(integer_kernel_rows(A));
}

// Row lattices compared via canonical HNF with zero rows dropped.
inline bool lattice_equal(const IntMat& A, const IntMat& B) {
    if (A.cols() != B.cols()) throw std::invalid_argument("lattice_equal: column count differs");
    HnfResult ha = hnf_rows(A), hb = hnf_rows(B);
    if (ha.rank() != hb.rank()) return false;
    return ha.H.top_rows(ha.rank()) == hb.H.top_rows(hb.rank());
}

// Some integer solution x of A x = b, if one exists.
inline std::optional<IntVec> solve_integer(const IntMat& A, const IntVec& b) {
    SnfResult s = snf(A);
    IntVec c = s.mu.mul_vec(b);
    int m = A.rows(), n = A.cols();
    IntVec y(n, Int(0));
    for (int i = 0; i < m; ++i) {
        Int d = (i < std::min(m, n)) ? s.D(i, i) : Int(0);
        if (d == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % d != 0) return std::nullopt;
            y[i] = c[i] / d;
        }
    }
    return s.nu.mul_vec(y);
}

inline bool is_unimodular(const IntMat& U) {
    return U.rows() == U.cols() && det_abs(U) == 1;
}

}  // namespace galekit
