#pragma once

#include "galekit/bundles.hpp"

namespace galekit {

// X = P(O + O(c_1) + ... + O(c_b)) over P^a, with 0 <= c_1 <= ... <= c_b.
struct KleinschmidtForm {
    Int a = 0, b = 0;
    IntVec c;
    IntMat Q_normal;  // two-row normal form with rows giving the two relations

    bool operator<(const KleinschmidtForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
    bool operator==(const KleinschmidtForm& o) const {
        return a == o.a && b == o.b && c == o.c;
    }
};

namespace detail {

inline KleinschmidtForm form_from_decomposition(const BundleDecomposition& dec) {
    KleinschmidtForm f;
    if (dec.base_case != BaseCase::a)
        throw std::runtime_error("kleinschmidt: smooth chamber decomposed with a covering");
    for (int j = 0; j < dec.Q_base.cols(); ++j)
        if (dec.Q_base(0, j) != 1)
            throw std::runtime_error("kleinschmidt: base is not a projective space");
    for (const Int& w : dec.W)
        if (w != 1) throw std::runtime_error("kleinschmidt: fiber is not a projective space");
    f.a = dec.Q_base.cols() - 1;
    int s1 = int(dec.W.size());
    f.b = s1 - 1;
    // twist exponents of the split bundle
    IntVec e(s1);
    for (int k = 0; k < s1; ++k) e[k] = -dec.Qsecond(0, k);
    Int m = *std::min_element(e.begin(), e.end());
    for (Int& x : e) x -= m;
    std::sort(e.begin(), e.end());
    if (e[0] != 0) throw std::runtime_error("kleinschmidt: no trivial summand after twisting");
    f.c.assign(e.begin() + 1, e.end());

    int a = int(f.a), b = int(f.b), n2 = a + b + 2;
    f.Q_normal = IntMat(2, n2);
    for (int j = 0; j <= a; ++j) f.Q_normal(0, j) = 1;
    for (int k = 0; k < b; ++k) f.Q_normal(0, a + 2 + k) = -f.c[k];
    for (int j = a + 1; j < n2; ++j) f.Q_normal(1, j) = 1;
    return f;
}

}  // namespace detail

// The form attached to one non-singular chamber (the variety of that
// chamber); for a product both bordering hyperplanes yield a form and the
// smaller one is returned.
inline KleinschmidtForm kleinschmidt_form_of_chamber(const IntMat& Q, const Chamber& chamber) {
    if (Q.rows() != 2) throw std::invalid_argument("kleinschmidt: rank must be 2");
    BorderInfo info = classify_border_basic(chamber, Q);
    if (info.maxbord_hyperplanes.empty())
        throw std::runtime_error("kleinschmidt: smooth rank-2 chamber is not bordering");
    std::optional<KleinschmidtForm> best;
    for (const IntVec& h : info.maxbord_hyperplanes) {
        KleinschmidtForm f = detail::form_from_decomposition(decompose_maxbord(Q, chamber, h));
        if (!best || f < *best) best = f;
    }
    return *best;
}

namespace detail {

// A positive REF representative for a rank-2 row lattice, re-sorting the
// columns by slope when the given order admits none.
inline IntMat rank2_positive_ref_sorted(const IntMat& Q) {
    if (auto direct = try_positive_ref(Q)) return *direct;
    auto basis = rank2_extremal_positive_basis(Q);
    if (!basis) throw std::runtime_error("rank2_positive_ref_sorted: input not W-positive");
    std::vector<int> order = rank2_slope_order(*basis);
    IntMat sorted = basis->cols_selected(order);
    if (auto ref = try_positive_ref(sorted)) return *ref;
    std::reverse(order.begin(), order.end());
    return positive_ref(basis->cols_selected(order));
}

}  // namespace detail

// Kleinschmidt normal form of a smooth rank-2 weight matrix: the smallest
// form over the non-singular chambers. Rejects matrices carrying no
// non-singular projective fan. The column order is canonicalized first, so
// the form only depends on the row lattice up to column permutation.
inline KleinschmidtForm kleinschmidt_normal_form(const IntMat& Q) {
    if (Q.rows() != 2) throw std::invalid_argument("kleinschmidt: rank must be 2");
    IntMat Qp = detail::rank2_positive_ref_sorted(Q);
    IntMat V = gale_dual(Qp);
    std::optional<KleinschmidtForm> best;
    for (const Chamber& ch : moving_chambers(enumerate_chambers(Qp))) {
        SingularityProfile p = singularity_profile(V, Qp, ch.fan);
        if (!p.non_singular) continue;
        KleinschmidtForm f = kleinschmidt_form_of_chamber(Qp, ch);
        if (!best || f < *best) best = f;
    }
    if (!best) throw std::runtime_error("kleinschmidt: no non-singular chamber (input singular)");
    return *best;
}

// Fano criterion: sum of the twists at most the base dimension.
inline bool is_fano_rank2(const KleinschmidtForm& f) {
    Int s = 0;
    for (const Int& x : f.c) s += x;
    return s <= f.a;
}

struct FlipTaxonomy {
    int case_id = 0;  // the four alternatives for a smooth rank-2 variety
    std::optional<KleinschmidtForm> flip_target;     // case 3
    std::vector<Chamber> singular_flip_chambers;      // case 4
    std::vector<SingularityProfile> flip_profiles;    // per singular chamber
    Int max_index = 1;                                 // bound on the quotient singularities
};

// The four mutually exclusive alternatives: no flip with a single twisted
// summand, a product, the unique smooth flip, or singular flips only.
inline FlipTaxonomy flip_taxonomy(const IntMat& Q) {
    KleinschmidtForm f = kleinschmidt_normal_form(Q);
    FlipTaxonomy t;
    int nonzero = 0;
    Int cmax = 0;
    for (const Int& x : f.c)
        if (x != 0) { ++nonzero; cmax = std::max(cmax, x); }
    if (nonzero == 0) {
        t.case_id = 2;
        return t;
    }
    if (nonzero == 1) {
        t.case_id = 1;
        return t;
    }
    if (cmax == 1) {
        t.case_id = 3;
        // the mirror bundle over the complementary projective space
        KleinschmidtForm target;
        Int zeros = Int(f.c.size()) - nonzero;
        target.a = nonzero - 1;
        target.b = f.a + zeros + 1;  // dimensions agree: a' + b' = a + b
        target.c.assign(size_t(zeros), Int(0));
        target.c.insert(target.c.end(), size_t(f.a) + 1, Int(1));
        int A = int(target.a), B = int(target.b);
        target.Q_normal = IntMat(2, A + B + 2);
        for (int j = 0; j <= A; ++j) target.Q_normal(0, j) = 1;
        for (int k = 0; k < B; ++k) target.Q_normal(0, A + 2 + k) = -target.c[k];
        for (int j = A + 1; j < A + B + 2; ++j) target.Q_normal(1, j) = 1;
        t.flip_target = target;
        return t;
    }
    t.case_id = 4;
    IntMat Qp = detail::rank2_positive_ref_sorted(Q);
    IntMat V = gale_dual(Qp);
    for (const Chamber& ch : moving_chambers(enumerate_chambers(Qp))) {
        SingularityProfile p = singularity_profile(V, Qp, ch.fan);
        if (p.non_singular) continue;
        for (const Int& d : p.fan_dets) t.max_index = std::max(t.max_index, d);
        t.singular_flip_chambers.push_back(ch);
        t.flip_profiles.push_back(p);
    }
    return t;
}

// Smoothly torically flipping: the weight matrix reduces to a bit matrix in
// the flip-admitting configuration, i.e. all twists are 0 or 1 with at
// least two 1's.
inline bool is_stf(const IntMat& Q) {
    KleinschmidtForm f = kleinschmidt_normal_form(Q);
    Int ones = 0;
    for (const Int& x : f.c) {
        if (x > 1) return false;
        if (x == 1) ++ones;
    }
    return ones >= 2;
}

}  // namespace galekit
