#pragma once

#include "galekit/collections.hpp"

namespace galekit {

enum class BaseCase { a, b, c, not_W };

inline const char* to_string(BaseCase c) {
    switch (c) {
        case BaseCase::a: return "a";
        case BaseCase::b: return "b";
        case BaseCase::c: return "c";
        case BaseCase::not_W: return "not_W";
    }
    return "?";
}

struct SplitWeights {
    IntMat Qprime;   // (r-1) x (n+r-s-1)
    IntMat Qsecond;  // (r-1) x (s+1), normalized so every entry is <= 0
    IntVec W;        // w_0 .. w_s
};

// Split a matrix in the fibred block shape: bottom row (0..0, w_0..w_s).
// The second block is normalized by subtracting bottom-row multiples until
// no positive entry remains, so that column k+1 equals -d'(E_k).
inline SplitWeights split_weight_matrix(const IntMat& Q_norm) {
    int r = Q_norm.rows(), c = Q_norm.cols();
    int first_pos = -1;
    for (int j = 0; j < c; ++j) {
        if (Q_norm(r - 1, j) == 0) {
            if (first_pos >= 0)
                throw std::invalid_argument("split_weight_matrix: bottom row not block-shaped");
        } else if (Q_norm(r - 1, j) > 0) {
            if (first_pos < 0) first_pos = j;
        } else {
            throw std::invalid_argument("split_weight_matrix: bottom row has negative entries");
        }
    }
    if (first_pos <= 0 || first_pos >= c)
        throw std::invalid_argument("split_weight_matrix: bottom row not of shape (0..0,w..w)");
    int s1 = c - first_pos;  // s + 1
    SplitWeights out;
    std::vector<int> left(first_pos), right(s1);
    std::iota(left.begin(), left.end(), 0);
    std::iota(right.begin(), right.end(), first_pos);
    out.Qprime = Q_norm.cols_selected(left).top_rows(r - 1);
    out.Qsecond = Q_norm.cols_selected(right).top_rows(r - 1);
    out.W.resize(s1);
    for (int k = 0; k < s1; ++k) out.W[k] = Q_norm(r - 1, first_pos + k);
    for (int i = 0; i < r - 1; ++i) {
        Int t = 0;
        for (int k = 0; k < s1; ++k) t = std::max(t, ceil_div(out.Qsecond(i, k), out.W[k]));
        if (t > 0)
            for (int k = 0; k < s1; ++k) out.Qsecond(i, k) -= t * out.W[k];
    }
    return out;
}

inline BaseCase classify_base_case(const IntMat& Qprime) {
    WeightMatrixFlags f = check_W(Qprime);
    if (!(f.full_rank && f.w_positive && f.nonzero_columns && f.no_unit_vector && f.no_mixed_pair))
        return BaseCase::not_W;
    if (!f.no_cotorsion) return BaseCase::c;
    return f.reduced ? BaseCase::a : BaseCase::b;
}

struct CoveringData {
    RatMat A;        // accumulated rational row transform
    IntMat B;        // accumulated positive integer diagonal
    IntMat Q_tilde;  // A * Q * B
    IntMat V_tilde;  // Gale dual of Q_tilde
    IntMat C;        // V^T C = B V_tilde^T
    Int index = 1;   // |det C|
};

namespace detail {

// T with M = T * S, where S is a full-row-rank basis
inline IntMat factor_through(const IntMat& M, const IntMat& S) {
    IntMat G = S.mul(S.transpose());
    RatMat T(M.rows(), S.rows());
    for (int i = 0; i < M.rows(); ++i) {
        RatVec rhs(S.rows(), Rat(0));
        for (int k = 0; k < S.rows(); ++k)
            for (int j = 0; j < M.cols(); ++j) rhs[k] += Rat(S(k, j)) * Rat(M(i, j));
        RatVec t = solve_rational(G, rhs);
        for (int k = 0; k < S.rows(); ++k) T(i, k) = t[k];
    }
    if (!T.is_integral()) throw std::runtime_error("factor_through: lattice is not contained");
    IntMat Ti = T.to_int();
    if (Ti.mul(S) != M) throw std::runtime_error("factor_through: factorization failed");
    return Ti;
}

inline IntMat diag_matrix(const IntVec& d) {
    IntMat m(int(d.size()), int(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
    return m;
}

}  // namespace detail

// Cases (b) and (c) of the maxbord decomposition: normalize the upper-left
// block to a reduced W-matrix, one offending column / cotorsion row at a
// time, accumulating the rational row action A and the diagonal B.
inline CoveringData covering_reduction(const IntMat& Q_norm) {
    int r = Q_norm.rows(), c = Q_norm.cols();
    CoveringData cov;
    cov.A = RatMat::identity(r);
    cov.B = IntMat::identity(c);
    IntMat cur = Q_norm;

    for (int guard = 0; guard < 64; ++guard) {
        SplitWeights sp = split_weight_matrix(cur);
        int m = sp.Qprime.cols();
        BaseCase bc = classify_base_case(sp.Qprime);
        if (bc == BaseCase::a) break;
        if (bc == BaseCase::not_W)
            throw std::runtime_error("covering_reduction: upper block violates a W-condition other than cotorsion");

        IntMat Astep_num;  // alpha part, to be scaled by diag(1,..,1/d)
        Int d;
        IntVec bdiag(c, Int(1));
        if (bc == BaseCase::c) {
            IntMat S = saturation_rows(sp.Qprime);
            IntMat T = detail::factor_through(sp.Qprime, S);
            SnfResult st = snf(T);
            d = st.D(r - 2, r - 2);
            if (d <= 1) throw std::runtime_error("covering_reduction: no cotorsion factor found");
            Astep_num = st.mu;
            for (int j = m; j < c; ++j) bdiag[j] = d;
        } else {
            IntMat Vp = gale_dual(sp.Qprime);
            int bad = -1;
            Int content_d = 0;
            for (int j = 0; j < Vp.cols(); ++j) {
                Int g = content(Vp.col(j));
                if (g > 1) { bad = j; content_d = g; break; }
            }
            if (bad < 0) throw std::runtime_error("covering_reduction: no non-primitive column found");
            IntVec scale(m, Int(1));
            scale[bad] = content_d;
            IntMat scaled = sp.Qprime.mul(detail::diag_matrix(scale));
            IntMat Vr = Vp;
            {
                IntVec col = make_primitive(Vr.col(bad));
                for (int i = 0; i < Vr.rows(); ++i) Vr(i, bad) = col[i];
            }
            IntMat S = gale_dual(Vr);
            IntMat T = detail::factor_through(scaled, S);
            SnfResult st = snf(T);
            d = st.D(r - 2, r - 2);
            if (d != content_d)
                throw std::runtime_error("covering_reduction: column content is not the lattice index");
            for (int j = 0; j < r - 2; ++j)
                if (st.D(j, j) != 1)
                    throw std::runtime_error("covering_reduction: non-cyclic quotient in case (b)");
            Astep_num = st.mu;
            bdiag[bad] = d;
            for (int j = m; j < c; ++j) bdiag[j] = d;
        }

        RatMat Astep = RatMat::identity(r);
        for (int i = 0; i < r - 1; ++i)
            for (int j = 0; j < r - 1; ++j)
                Astep(i, j) = (i == r - 2) ? Rat(Astep_num(i, j), d) : Rat(Astep_num(i, j));
        Astep(r - 1, r - 1) = Rat(1, d);

        IntMat Bstep = detail::diag_matrix(bdiag);
        cur = Astep.mul(RatMat::from_int(cur)).mul(RatMat::from_int(Bstep)).to_int();
        cov.A = Astep.mul(cov.A);
        cov.B = cov.B.mul(Bstep);
    }

    cov.Q_tilde = cur;
    cov.V_tilde = gale_dual(cur);

    // covering matrix C through the HNF section of the CF fan matrix
    IntMat V = gale_dual(Q_norm);
    int n = V.rows();
    HnfResult h = hnf_rows(V.transpose());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (h.H(i, j) != (i == j ? 1 : 0))
                throw std::runtime_error("covering_reduction: fan matrix is not CF");
    IntMat section = h.U.top_rows(n);  // ^nU with ^nU V^T = I_n
    cov.C = section.mul(cov.B).mul(cov.V_tilde.transpose());
    if (V.transpose().mul(cov.C) != cov.B.mul(cov.V_tilde.transpose()))
        throw std::runtime_error("covering_reduction: covering matrix inconsistent");
    cov.index = det_abs(cov.C);
    return cov;
}

// Least l such that l * (the divisor with the given coefficients) is
// Cartier: per maximal cone, the integral solvability denominator.
inline Int cartier_index(const IntMat& V_base, const SimplicialFan& fan, const IntVec& coeffs) {
    Int l = 1;
    for (const std::vector<int>& I : fan.max_cones) {
        IntMat VI = V_base.cols_selected(I);
        RatVec rhs(int(I.size()));
        for (size_t t = 0; t < I.size(); ++t) rhs[t] = Rat(coeffs[I[t]]);
        RatVec m = solve_rational(VI.transpose(), rhs);
        for (const Rat& x : m) l = lcm(l, boost::multiprecision::denominator(x));
    }
    return l;
}

struct WptwbData {
    IntVec l;          // Cartier indices l_0..l_s
    Int lambda = 1;    // gcd(l_k w_k)
    IntVec d;          // d_k
    IntVec a_vec;      // a_k
    Int a = 1;         // lcm of the a_k
    IntVec eta;        // eta_k = l_k a / a_k
    IntVec W_reduced;  // reduced weight vector of (l_k w_k)
    Int galois_order = 1;
    IntMat Lambda;     // diag(1..1, eta_0..eta_s)
    IntMat Phi;        // section * Lambda * V_tilde_tilde^T
    IntMat Q_quot;     // Delta * Q * Lambda
    IntVec ramification;  // multiplicity per trailing divisor
};

// All derived quantities of the weighted projective toric weak bundle
// associated with weights W and Cartier indices l on a fan matrix with
// weight matrix Q_tilde in fibred shape.
inline WptwbData wptwb_tower(const IntVec& W, const IntVec& l, const IntMat& Q_tilde) {
    int s1 = int(W.size());
    WptwbData t;
    t.l = l;
    IntVec lw(s1);
    for (int k = 0; k < s1; ++k) lw[k] = l[k] * W[k];
    t.lambda = content(lw);
    t.d.resize(s1);
    for (int k = 0; k < s1; ++k) {
        Int g = 0;
        for (int i = 0; i < s1; ++i)
            if (i != k) g = gcd(g, lw[i] / t.lambda);
        t.d[k] = (s1 == 1) ? 1 : g;
    }
    t.a_vec.resize(s1);
    t.a = 1;
    for (int k = 0; k < s1; ++k) {
        Int m = 1;
        for (int i = 0; i < s1; ++i)
            if (i != k) m = lcm(m, t.d[i]);
        t.a_vec[k] = m;
        t.a = lcm(t.a, m);
    }
    t.eta.resize(s1);
    t.W_reduced.resize(s1);
    Int prod_l = 1;
    for (int k = 0; k < s1; ++k) {
        t.eta[k] = l[k] * t.a / t.a_vec[k];
        if (t.eta[k] != l[k] * t.d[k])
            throw std::runtime_error("wptwb_tower: eta forms disagree");
        if (lw[k] % (t.lambda * t.a_vec[k]) != 0)
            throw std::runtime_error("wptwb_tower: weight reduction not integral");
        t.W_reduced[k] = lw[k] / (t.lambda * t.a_vec[k]);
        prod_l *= l[k];
    }
    if (prod_l % t.lambda != 0) throw std::runtime_error("wptwb_tower: Galois order not integral");
    t.galois_order = prod_l / t.lambda;
    t.ramification = t.eta;

    int c = Q_tilde.cols(), r = Q_tilde.rows(), n = c - r;
    IntVec ldiag(c, Int(1));
    for (int k = 0; k < s1; ++k) ldiag[c - s1 + k] = t.eta[k];
    t.Lambda = detail::diag_matrix(ldiag);

    RatMat Delta = RatMat::identity(r);
    Delta(r - 1, r - 1) = Rat(1, t.lambda * t.a);
    t.Q_quot = Delta.mul(RatMat::from_int(Q_tilde)).mul(RatMat::from_int(t.Lambda)).to_int();

    IntMat Vtt = gale_dual(t.Q_quot);
    IntMat Vt = gale_dual(Q_tilde);
    HnfResult h = hnf_rows(Vt.transpose());
    IntMat section = h.U.top_rows(n);
    t.Phi = section.mul(t.Lambda).mul(Vtt.transpose());
    if (Vt.transpose().mul(t.Phi) != t.Lambda.mul(Vtt.transpose()))
        throw std::runtime_error("wptwb_tower: Phi inconsistent");
    if (det_abs(t.Phi) != t.galois_order)
        throw std::runtime_error("wptwb_tower: |det Phi| differs from the Galois order");
    return t;
}

// Primitive generators of the fan of P(W): columns of the Gale dual of the
// weight row; they satisfy sum w_k e_k = 0 and the minor condition
// |det(e_0..^e_i..e_s)| = w_i.
inline std::vector<IntVec> wps_fan_generators(const IntVec& W) {
    IntMat row(1, int(W.size()));
    for (size_t k = 0; k < W.size(); ++k) row(0, int(k)) = W[k];
    IntMat E = gale_dual(row);
    std::vector<IntVec> out;
    for (int j = 0; j < E.cols(); ++j) out.push_back(E.col(j));
    return out;
}

// Fan matrix of the W-weighted bundle with the given divisor classes over
// the base: block shape [[V', 0], [E A, E]].
inline IntMat build_fibred_fan(const IntMat& V_base, const IntMat& classes, const IntVec& W) {
    int np = V_base.rows(), cb = V_base.cols(), s1 = int(W.size());
    if (classes.rows() != s1 || classes.cols() != cb)
        throw std::invalid_argument("build_fibred_fan: classes must be (s+1) x (n'+r')");
    std::vector<IntVec> e = wps_fan_generators(W);
    int s = s1 - 1;
    IntMat V(np + s, cb + s1);
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < cb; ++j) V(i, j) = V_base(i, j);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < cb; ++j) {
            Int sum = 0;
            for (int k = 0; k < s1; ++k) sum += classes(k, j) * e[k][i];
            V(np + i, j) = sum;
        }
    for (int k = 0; k < s1; ++k)
        for (int i = 0; i < s; ++i) V(np + i, cb + k) = e[k][i];
    return V;
}

struct BundleDecomposition {
    IntVec hyperplane;              // inward normal of the maxbord facet of <Q>
    std::vector<int> column_order;  // the bordering permutation
    IntMat Q_norm;                  // alpha Q beta in fibred shape
    IntMat Qprime;
    IntMat Qsecond;                 // normalized block, columns -d'(E_k)
    IntVec W;
    BaseCase base_case = BaseCase::a;
    std::optional<CoveringData> cover;  // cases (b) and (c)
    IntMat Q_base;                  // reduced base weight matrix (from Q_tilde)
    IntMat V_base;
    Chamber base_chamber;
    IntVec cartier;                 // Cartier index of each E_k class on the base
    std::optional<WptwbData> wptwb;
};

namespace detail {

inline Cone apply_rational(const RatMat& A, const Cone& c) {
    std::vector<IntVec> rays;
    for (const IntVec& ray : c.rays()) {
        RatVec img(A.rows(), Rat(0));
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j) img[i] += A(i, j) * Rat(ray[j]);
        Int mult = 1;
        for (const Rat& x : img) mult = lcm(mult, boost::multiprecision::denominator(x));
        IntVec v(A.rows());
        for (int i = 0; i < A.rows(); ++i) v[i] = boost::multiprecision::numerator(img[i] * Rat(mult));
        rays.push_back(make_primitive(v));
    }
    return cone_from_generators(A.rows(), rays);
}

// gamma' = (gamma transformed) cap H_r, projected to the first r-1 coords
inline Cone descend_chamber_cone(const Cone& gamma, const RatMat& A) {
    int r = gamma.ambient();
    Cone moved = apply_rational(A, gamma);
    IntVec er(r, Int(0));
    er[r - 1] = 1;
    std::vector<IntVec> ineqs = moved.facet_normals_ambient();
    Cone cut = cone_from_constraints(r, {er}, ineqs);
    if (cut.dim() != r - 1)
        throw std::runtime_error("descend_chamber_cone: section is not a facet");
    std::vector<IntVec> proj;
    for (const IntVec& ray : cut.rays()) {
        if (ray[r - 1] != 0) throw std::runtime_error("descend_chamber_cone: ray off the section");
        proj.push_back(IntVec(ray.begin(), ray.end() - 1));
    }
    return cone_from_generators(r - 1, proj);
}

}  // namespace detail

// Decompose a chamber that is maxbord w.r.t. the facet of <Q> with inward
// normal h into the bundle data of the associated toric cover of a WPTB.
inline BundleDecomposition decompose_maxbord(const IntMat& Q, const Chamber& chamber,
                                             const IntVec& h) {
    int r = Q.rows();
    BundleDecomposition dec;
    dec.hyperplane = h;
    BorderingTransform t = transform_bordering(Q, h);
    dec.column_order = t.column_order;
    dec.Q_norm = t.Q_new;

    SplitWeights sp = split_weight_matrix(dec.Q_norm);
    dec.Qprime = sp.Qprime;
    dec.Qsecond = sp.Qsecond;
    dec.W = sp.W;
    dec.base_case = classify_base_case(sp.Qprime);
    if (dec.base_case == BaseCase::not_W)
        throw std::runtime_error("decompose_maxbord: base block is not a W-matrix (chamber not maxbord)");

    IntMat Q_tilde = dec.Q_norm;
    RatMat A = RatMat::identity(r);
    if (dec.base_case != BaseCase::a) {
        dec.cover = covering_reduction(dec.Q_norm);
        Q_tilde = dec.cover->Q_tilde;
        A = dec.cover->A;
    }
    SplitWeights spt = split_weight_matrix(Q_tilde);
    dec.Q_base = spt.Qprime;
    dec.V_base = gale_dual(dec.Q_base);

    // the chamber transforms along alpha then A and descends to the base
    RatMat alphaA = A.mul(RatMat::from_int(t.alpha));
    Cone gamma_base = detail::descend_chamber_cone(chamber.cone, alphaA);
    bool found = false;
    for (Chamber& bc : moving_chambers(enumerate_chambers(dec.Q_base))) {
        if (bc.cone == gamma_base) {
            dec.base_chamber = bc;
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("decompose_maxbord: descended cone is not a base chamber");

    // Cartier indices of the E_k classes on the base
    int s1 = int(dec.W.size());
    dec.cartier.resize(s1);
    bool nontrivial = false;
    for (int k = 0; k < s1; ++k) {
        IntVec cls(r - 1);
        for (int i = 0; i < r - 1; ++i) cls[i] = -spt.Qsecond(i, k);
        auto coeffs = solve_integer(dec.Q_base, cls);
        if (!coeffs) throw std::runtime_error("decompose_maxbord: class has no divisor preimage");
        dec.cartier[k] = cartier_index(dec.V_base, dec.base_chamber.fan, *coeffs);
        if (dec.cartier[k] != 1) nontrivial = true;
    }
    if (nontrivial) dec.wptwb = wptwb_tower(dec.W, dec.cartier, Q_tilde);
    return dec;
}

struct Tower {
    std::vector<BundleDecomposition> stages;
    IntVec wps_weights;  // weights of the terminal WPS (r = 1)
    bool complete = false;
};

namespace detail {

inline bool build_tower(const IntMat& Q, const Chamber& chamber, Tower& tower) {
    if (Q.rows() == 1) {
        tower.wps_weights = make_primitive(Q.row(0));
        tower.complete = true;
        return true;
    }
    BorderInfo info = classify_border_basic(chamber, Q);
    for (const IntVec& h : info.maxbord_hyperplanes) {
        BundleDecomposition dec;
        try {
            dec = decompose_maxbord(Q, chamber, h);
        } catch (const std::runtime_error&) {
            continue;
        }
        tower.stages.push_back(dec);
        if (build_tower(dec.Q_base, dec.base_chamber, tower)) return true;
        tower.stages.pop_back();
    }
    return false;
}

}  // namespace detail

// Iterate the maxbord descent down to a WPS; stops with complete = false
// when some stage admits no maxbord hyperplane.
inline Tower recursive_decomposition(const IntMat& Q, const Chamber& chamber) {
    Tower tower;
    if (!detail::build_tower(Q, chamber, tower)) {
        tower.complete = false;
        // keep a first stage for reporting when the chamber is at least maxbord
        BorderInfo info = classify_border_basic(chamber, Q);
        for (const IntVec& h : info.maxbord_hyperplanes) {
            try {
                tower.stages = {decompose_maxbord(Q, chamber, h)};
                break;
            } catch (const std::runtime_error&) {
                continue;
            }
        }
    }
    return tower;
}

// Full taxonomy including the recursive upgrade.
inline BorderInfo classify_border(const Chamber& chamber, const IntMat& Q) {
    BorderInfo info = classify_border_basic(chamber, Q);
    if (info.kind == BorderKind::maxbord || info.kind == BorderKind::totally_maxbord) {
        Tower t = recursive_decomposition(Q, chamber);
        if (t.complete) {
            for (const BundleDecomposition& st : t.stages)
                info.recursion_sequence.push_back(st.hyperplane);
            if (info.kind != BorderKind::totally_maxbord)
                info.kind = BorderKind::recursively_maxbord;
        }
    }
    return info;
}

enum class Contractibility { contractible, pseudo_contractible, neither };

inline const char* to_string(Contractibility c) {
    switch (c) {
        case Contractibility::contractible: return "contractible";
        case Contractibility::pseudo_contractible: return "pseudo_contractible";
        case Contractibility::neither: return "neither";
    }
    return "?";
}

// A nef class is contractible when its chamber is maxbord w.r.t. the
// supporting hyperplane with base case (a) and Cartier fiber classes;
// pseudo-contractible when a covering or a Weil non-Cartier class intervenes.
inline Contractibility contractibility(const PrimitiveCollection& pc, const Chamber& chamber,
                                       const IntMat& Q) {
    if (!pc.is_nef) throw std::invalid_argument("contractibility: collection is not nef");
    IntVec h = make_primitive(pc.numerical_class);
    BorderInfo info = classify_border_basic(chamber, Q);
    if (std::find(info.maxbord_hyperplanes.begin(), info.maxbord_hyperplanes.end(), h) ==
        info.maxbord_hyperplanes.end())
        return Contractibility::neither;
    BundleDecomposition dec = decompose_maxbord(Q, chamber, h);
    bool all_cartier = std::all_of(dec.cartier.begin(), dec.cartier.end(),
                                   [](const Int& l) { return l == 1; });
    if (dec.base_case == BaseCase::a && all_cartier) return Contractibility::contractible;
    return Contractibility::pseudo_contractible;
}

}  // namespace galekit
