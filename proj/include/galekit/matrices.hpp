#pragma once

#include "galekit/cone.hpp"

namespace galekit {

struct FanMatrixFlags {
    bool full_rank = false;
    bool f_complete = false;         // <V> = N_R, decided via a positive Gale basis
    bool nonzero_columns = false;
    bool no_proportional_pair = false;
    bool cotorsion_free = false;     // CF condition
    bool reduced = false;            // every column primitive
    bool is_F() const { return full_rank && f_complete && nonzero_columns && no_proportional_pair; }
    bool is_CF() const { return is_F() && cotorsion_free; }
};

struct WeightMatrixFlags {
    bool full_rank = false;          // (a)
    bool no_cotorsion = false;       // (b)
    bool w_positive = false;         // (c)
    bool nonzero_columns = false;    // (d)
    bool no_unit_vector = false;     // (e)
    bool no_mixed_pair = false;      // (f)
    bool reduced = false;
    bool positive_ref = false;
    // witness for a failed (e)/(f): the offending lattice vector
    std::optional<IntVec> witness;
    bool is_W() const {
        return full_rank && no_cotorsion && w_positive && nonzero_columns && no_unit_vector &&
               no_mixed_pair;
    }
};

inline bool is_positive_matrix(const IntMat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) < 0) return false;
    return true;
}

inline bool is_ref(const IntMat& m) {
    int last = -1;
    for (int i = 0; i < m.rows(); ++i) {
        int p = -1;
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) { p = j; break; }
        if (p < 0) return false;  // no zero rows in a weight matrix
        if (p <= last) return false;
        for (int k = i + 1; k < m.rows(); ++k)
            if (m(k, p) != 0) return false;
        last = p;
    }
    return true;
}

// Positive REF basis of the row lattice of Q. Starts from the HNF basis and
// clears negative entries bottom-up by adding positive multiples of lower
// rows; each negative entry must be covered by a lower row with a positive
// entry in that column, which is exactly feasibility on W-positive input.
inline std::optional<IntMat> try_positive_ref(const IntMat& Q) {
    HnfResult h = hnf_rows(Q);
    int r = h.rank();
    IntMat B = h.H.top_rows(r);
    int n = B.cols();
    for (int i = r - 1; i >= 0; --i) {
        for (int k = r - 1; k > i; --k) {
            // columns that only row k (among rows below i) can still fix
            Int t = 0;
            for (int j = 0; j < n; ++j) {
                if (B(i, j) >= 0 || B(k, j) <= 0) continue;
                bool lower_choice = false;
                for (int k2 = k + 1; k2 < r; ++k2)
                    if (B(k2, j) > 0) { lower_choice = true; break; }
                if (lower_choice) continue;
                t = std::max(t, ceil_div(-B(i, j), B(k, j)));
            }
            if (t > 0)
                for (int j = 0; j < n; ++j) B(i, j) += t * B(k, j);
        }
        for (int j = 0; j < n; ++j)
            if (B(i, j) < 0) return std::nullopt;
    }
    return B;
}

// Gale dual: canonical basis of the saturated integer kernel of M's rows.
inline IntMat gale_dual(const IntMat& M) {
    if (rank(M) != M.rows()) throw std::invalid_argument("gale_dual: input must have full row rank");
    return integer_kernel_rows(M);
}

// W-positivity is order-free: the row lattice admits a positive basis iff
// the coefficient cone {y : y Q >= 0} is full-dimensional. (A positive REF
// basis for the given column order is a strictly stronger condition.)
inline bool is_w_positive(const IntMat& Q) {
    int r = Q.rows();
    if (rank(Q) != r) return false;
    std::vector<IntVec> ineqs;
    for (int j = 0; j < Q.cols(); ++j) ineqs.push_back(Q.col(j));
    try {
        Cone c = cone_from_constraints(r, {}, ineqs);
        return c.dim() == r;
    } catch (const std::invalid_argument&) {
        return false;  // coefficient cone not strongly convex cannot happen at full rank
    }
}

// Positive REF form with the same row lattice; errors out when no positive
// basis exists (the Gale-dual fan matrix is not F-complete).
inline IntMat positive_ref(const IntMat& Q) {
    auto B = try_positive_ref(Q);
    if (!B)
        throw std::runtime_error(
            "positive_ref: no positive REF basis for this column order");
    return *B;
}

inline FanMatrixFlags check_F(const IntMat& V) {
    int n = V.rows(), c = V.cols();
    if (c <= n) throw std::invalid_argument("check_F: need more columns than rows");
    FanMatrixFlags f;
    f.full_rank = (rank(V) == n);
    f.nonzero_columns = true;
    f.reduced = true;
    for (int j = 0; j < c; ++j) {
        IntVec col = V.col(j);
        if (is_zero_vec(col)) {
            f.nonzero_columns = false;
            continue;
        }
        if (content(col) != 1) f.reduced = false;
    }
    f.no_proportional_pair = true;
    for (int i = 0; i < c && f.no_proportional_pair; ++i)
        for (int j = i + 1; j < c; ++j) {
            IntVec a = V.col(i), b = V.col(j);
            if (is_zero_vec(a) || is_zero_vec(b)) continue;
            if (make_primitive(a) == make_primitive(b)) {
                f.no_proportional_pair = false;
                break;
            }
        }
    if (f.full_rank) {
        f.f_complete = is_w_positive(integer_kernel_rows(V));
        IntVec factors = snf(V).invariant_factors();
        f.cotorsion_free =
            std::all_of(factors.begin(), factors.end(), [](const Int& d) { return d == 1; });
    }
    return f;
}

namespace detail {

// lattice vectors of L_r(Q) supported on the coordinate subset `keep`:
// basis of {y Q : (y Q)_j = 0 for j outside keep}, restricted to keep
inline IntMat row_lattice_slice(const IntMat& Q, const std::vector<int>& keep) {
    std::vector<char> is_kept(Q.cols(), 0);
    for (int j : keep) is_kept[j] = 1;
    std::vector<int> drop;
    for (int j = 0; j < Q.cols(); ++j)
        if (!is_kept[j]) drop.push_back(j);
    IntMat A = Q.cols_selected(drop);               // r x (#dropped)
    IntMat Y = integer_kernel_rows(A.transpose());  // y with y^T A = 0
    IntMat restricted = Y.mul(Q).cols_selected(keep);
    HnfResult h = hnf_rows(restricted);
    return h.H.top_rows(h.rank());
}

}  // namespace detail

inline WeightMatrixFlags check_W(const IntMat& Q) {
    int r = Q.rows(), c = Q.cols();
    WeightMatrixFlags w;
    w.full_rank = (rank(Q) == r);
    IntVec factors = snf(Q).invariant_factors();
    w.no_cotorsion =
        std::all_of(factors.begin(), factors.end(), [](const Int& d) { return d == 1; });
    w.w_positive = is_w_positive(Q);
    w.nonzero_columns = true;
    for (int j = 0; j < c; ++j)
        if (is_zero_vec(Q.col(j))) w.nonzero_columns = false;
    w.positive_ref = is_positive_matrix(Q) && is_ref(Q);

    // (e): a unit vector in the row lattice is a rank-1 slice on one
    // coordinate whose generator is +-1
    w.no_unit_vector = true;
    for (int j = 0; j < c && w.no_unit_vector; ++j) {
        IntMat s = detail::row_lattice_slice(Q, {j});
        if (s.rows() >= 1 && abs(s(0, 0)) == 1) {
            w.no_unit_vector = false;
            IntVec witness(c, Int(0));
            witness[j] = 1;
            w.witness = witness;
        }
    }
    // (f): a two-coordinate slice with opposite signs; a rank-2 slice always
    // contains such a vector
    w.no_mixed_pair = true;
    for (int i = 0; i < c && w.no_mixed_pair; ++i)
        for (int j = i + 1; j < c; ++j) {
            IntMat s = detail::row_lattice_slice(Q, {i, j});
            std::optional<IntVec> bad;
            if (s.rows() == 2) {
                // a rank-2 slice always holds a mixed-sign vector
                Int d = abs(s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0));
                bad = IntVec{d, -d};
            } else if (s.rows() == 1 && s(0, 0) * s(0, 1) < 0) {
                bad = s.row(0);
            }
            if (bad) {
                w.no_mixed_pair = false;
                IntVec witness(c, Int(0));
                witness[i] = (*bad)[0];
                witness[j] = (*bad)[1];
                w.witness = witness;
                break;
            }
        }
    if (w.is_W()) {
        // reduced when the Gale-dual fan matrix has primitive columns
        IntMat V = gale_dual(Q);
        w.reduced = true;
        for (int j = 0; j < V.cols(); ++j)
            if (content(V.col(j)) != 1) w.reduced = false;
    }
    return w;
}

// V^red: every column divided by its gcd; returns the reduced pair.
inline std::pair<IntMat, IntMat> reduce_fan(const IntMat& V) {
    FanMatrixFlags f = check_F(V);
    if (!f.is_F()) throw std::invalid_argument("reduce_fan: input is not an F-matrix");
    IntMat R = V;
    for (int j = 0; j < R.cols(); ++j) {
        IntVec col = make_primitive(R.col(j));
        for (int i = 0; i < R.rows(); ++i) R(i, j) = col[i];
    }
    IntMat Qred = positive_ref(gale_dual(R));
    return {R, Qred};
}

// The two extremal positive rows of a rank-2 row lattice: the primitive
// lattice vectors on the extremal rays of the coefficient cone
// {y : y A >= 0}. They form a basis exactly when the lattice has a
// positive basis at all.
inline std::optional<IntMat> rank2_extremal_positive_basis(const IntMat& A) {
    HnfResult h = hnf_rows(A);
    if (h.rank() != 2) return std::nullopt;
    IntMat H = h.H.top_rows(2);
    int c = A.cols();
    std::vector<IntVec> ineqs;
    for (int j = 0; j < c; ++j) ineqs.push_back(IntVec{H(0, j), H(1, j)});
    Cone coeff;
    try {
        coeff = cone_from_constraints(2, {}, ineqs);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    if (coeff.dim() != 2) return std::nullopt;
    std::vector<IntVec> rows;
    for (const IntVec& y : coeff.rays()) {
        IntVec v(c, Int(0));
        for (int j = 0; j < c; ++j) v[j] = y[0] * H(0, j) + y[1] * H(1, j);
        rows.push_back(make_primitive(v));
    }
    IntMat P = from_rows(rows, c);
    if (!lattice_equal(P, A)) return std::nullopt;
    return P;
}

// Column order by increasing slope of the two positive basis rows, longer
// columns first on ties: the order in which a rank-2 positive lattice
// always admits a positive REF basis.
inline std::vector<int> rank2_slope_order(const IntMat& P) {
    int c = P.cols();
    std::vector<int> order(c);
    std::iota(order.begin(), order.end(), 0);
    auto leq = [&](int i, int j) {
        Int d = P(0, i) * P(1, j) - P(1, i) * P(0, j);
        if (d != 0) return d > 0;
        Int ni = P(0, i) * P(0, i) + P(1, i) * P(1, i);
        Int nj = P(0, j) * P(0, j) + P(1, j) * P(1, j);
        return ni >= nj;
    };
    std::stable_sort(order.begin(), order.end(), leq);
    return order;
}

struct BorderingTransform {
    IntMat alpha;       // unimodular row action
    std::vector<int> column_order;  // beta as a permutation of 0..n+r-1
    IntMat Q_new;       // alpha * Q * beta, positive REF, H-columns first
};

// Send a hyperplane cutting a facet of <Q> to the bottom coordinate
// hyperplane: stable partition puts the on-H columns first, then a positive
// REF row normalization. Bottom row of Q_new vanishes exactly on the on-H
// block. Columns keep their original relative order inside each block.
inline BorderingTransform transform_bordering(const IntMat& Q, const IntVec& h_normal) {
    int r = Q.rows(), c = Q.cols();
    std::vector<int> on_h, off_h;
    for (int j = 0; j < c; ++j) {
        Int s = 0;
        for (int i = 0; i < r; ++i) s += h_normal[i] * Q(i, j);
        if (s == 0)
            on_h.push_back(j);
        else if (s > 0)
            off_h.push_back(j);
        else
            throw std::invalid_argument("transform_bordering: normal is not inward for <Q>");
    }
    if (rank(Q.cols_selected(on_h)) != r - 1)
        throw std::invalid_argument("transform_bordering: hyperplane does not cut a facet of <Q>");

    BorderingTransform t;
    t.column_order = on_h;
    t.column_order.insert(t.column_order.end(), off_h.begin(), off_h.end());

    IntMat P = Q.cols_selected(t.column_order);
    // fixed point: already normalized for this hyperplane
    if (int(on_h.size()) < c && t.column_order == [&] {
            std::vector<int> id(c);
            std::iota(id.begin(), id.end(), 0);
            return id;
        }()) {
        bool bottom_ok = true;
        for (size_t j = 0; j < on_h.size(); ++j)
            if (Q(r - 1, int(j)) != 0) bottom_ok = false;
        for (int j = int(on_h.size()); j < c; ++j)
            if (Q(r - 1, j) <= 0) bottom_ok = false;
        if (bottom_ok && is_positive_matrix(Q) && is_ref(Q)) {
            t.alpha = IntMat::identity(r);
            t.Q_new = Q;
            return t;
        }
    }

    auto ref = try_positive_ref(P);
    if (!ref && r - 1 == 2) {
        // the stable in-block order can refuse a positive REF; re-sort the
        // on-H block by the slope order of its rank-2 row lattice
        IntMat block = Q.cols_selected(on_h);
        if (auto basis2 = rank2_extremal_positive_basis(block)) {
            std::vector<int> ord = rank2_slope_order(*basis2);
            std::vector<int> new_order;
            for (int idx : ord) new_order.push_back(on_h[idx]);
            new_order.insert(new_order.end(), off_h.begin(), off_h.end());
            IntMat P2 = Q.cols_selected(new_order);
            if (auto ref2 = try_positive_ref(P2)) {
                t.column_order = new_order;
                P = P2;
                ref = ref2;
            }
        }
    }
    if (!ref)
        throw std::runtime_error(
            "transform_bordering: no positive REF normalization for this hyperplane");
    IntMat B = *ref;
    // recover alpha from B = alpha * P on r independent columns of P
    std::vector<int> cols_ind = hnf_rows(P).pivot_cols;
    IntMat S = P.cols_selected(cols_ind);
    RatMat al = RatMat::from_int(B.cols_selected(cols_ind)).mul(inverse(S));
    if (!al.is_integral()) throw std::runtime_error("transform_bordering: non-integral row action");
    IntMat alpha = al.to_int();
    if (!is_unimodular(alpha) || alpha.mul(P) != B)
        throw std::runtime_error("transform_bordering: row action not unimodular");
    // postcondition: on-H block has zero bottom row, off-H strictly positive
    for (size_t j = 0; j < on_h.size(); ++j)
        if (B(r - 1, int(j)) != 0) throw std::runtime_error("transform_bordering: bottom row not aligned");
    for (int j = int(on_h.size()); j < c; ++j)
        if (B(r - 1, j) <= 0) throw std::runtime_error("transform_bordering: bottom row not positive off H");
    t.alpha = alpha;
    t.Q_new = B;
    return t;
}

}  // namespace galekit
