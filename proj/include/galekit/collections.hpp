#pragma once

#include "galekit/secfan.hpp"

namespace galekit {

struct PrimitiveCollection {
    std::vector<int> indices;   // P, sorted 0-based column indices
    IntVec relation;            // r_Z(P), length n+r
    IntVec numerical_class;     // n_P, length r; also the inward normal of H_P
    std::vector<int> focus;     // ray indices of the focus cone; empty for focus 0
    bool is_nef = false;
};

// Minimal non-faces of the maximal-cone set: P lies in no maximal cone while
// every proper subset does.
inline std::vector<std::vector<int>> primitive_collections(const SimplicialFan& fan, int num_rays) {
    auto is_face = [&](const std::vector<int>& s) {
        for (const std::vector<int>& I : fan.max_cones)
            if (std::includes(I.begin(), I.end(), s.begin(), s.end())) return true;
        return false;
    };
    std::vector<std::vector<int>> out;
    for (int k = 2; k <= fan.n + 1; ++k) {
        for (const std::vector<int>& P : detail::subsets_of_size(num_rays, k)) {
            if (is_face(P)) continue;
            bool minimal = true;
            for (int drop = 0; drop < k && minimal; ++drop) {
                std::vector<int> sub = P;
                sub.erase(sub.begin() + drop);
                if (!is_face(sub)) minimal = false;
            }
            if (minimal) out.push_back(P);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Locate v_P inside the fan and solve the unique relation through the focus.
inline PrimitiveCollection primitive_relation(const std::vector<int>& P, const SimplicialFan& fan,
                                              const IntMat& V, const IntMat& Q) {
    int n = V.rows(), c = V.cols(), r = Q.rows();
    PrimitiveCollection pc;
    pc.indices = P;

    IntVec vp(n, Int(0));
    for (int j : P)
        for (int i = 0; i < n; ++i) vp[i] += V(i, j);

    RatVec coeff(c, Rat(0));  // c_rho by column index
    if (!is_zero_vec(vp)) {
        bool located = false;
        for (const std::vector<int>& I : fan.max_cones) {
            RatVec lambda = solve_rational(V.cols_selected(I), to_rat(vp));
            if (std::all_of(lambda.begin(), lambda.end(), [](const Rat& x) { return x >= 0; })) {
                for (size_t t = 0; t < I.size(); ++t)
                    if (lambda[t] > 0) {
                        coeff[I[t]] = lambda[t];
                        pc.focus.push_back(I[t]);
                    }
                located = true;
                break;
            }
        }
        if (!located) throw std::runtime_error("primitive_relation: v_P outside the fan support");
    }

    RatVec b(c, Rat(0));
    for (int j = 0; j < c; ++j) b[j] = -coeff[j];
    for (int j : P) b[j] += 1;
    Int l = 1;
    for (const Rat& x : b) l = lcm(l, boost::multiprecision::denominator(x));
    pc.relation.resize(c);
    for (int j = 0; j < c; ++j)
        pc.relation[j] = boost::multiprecision::numerator(b[j] * Rat(l));

    // solve Q^T n_P = r_Z(P); unique because Q^T is injective
    std::vector<int> ind = hnf_rows(Q).pivot_cols;
    IntMat S = Q.cols_selected(ind);  // r x r nonsingular
    RatVec rhs(r);
    for (int i = 0; i < r; ++i) rhs[i] = Rat(pc.relation[ind[i]]);
    RatVec npr = solve_rational(S.transpose(), rhs);
    pc.numerical_class.resize(r);
    for (int i = 0; i < r; ++i) {
        if (boost::multiprecision::denominator(npr[i]) != 1)
            throw std::runtime_error("primitive_relation: numerical class is not integral");
        pc.numerical_class[i] = boost::multiprecision::numerator(npr[i]);
    }
    IntVec check = Q.transpose().mul_vec(pc.numerical_class);
    if (check != pc.relation)
        throw std::runtime_error("primitive_relation: relation is not in the row lattice");

    pc.is_nef = std::all_of(pc.relation.begin(), pc.relation.end(),
                            [](const Int& x) { return x >= 0; });
    return pc;
}

inline std::vector<PrimitiveCollection> collections_of(const SimplicialFan& fan, const IntMat& V,
                                                       const IntMat& Q) {
    std::vector<PrimitiveCollection> out;
    for (const std::vector<int>& P : primitive_collections(fan, V.cols()))
        out.push_back(primitive_relation(P, fan, V, Q));
    return out;
}

// Nef(X) described through the primitive collections: the intersection of
// the half-spaces H_P^+ and the cones <Q^{P \ i}>. The intersection without
// the half-spaces can overshoot (already on the smooth bundle example, where
// both <Q^{P'' \ i}> are the full orthant while H_{P''} cuts a facet of Nef);
// keeping them matches what the supporting proof actually establishes.
inline Cone nef_cone_via_collections(const SimplicialFan& fan, const IntMat& V, const IntMat& Q) {
    int r = Q.rows();
    std::vector<IntVec> ineqs;
    bool any = false;
    for (const std::vector<int>& P : primitive_collections(fan, V.cols())) {
        any = true;
        PrimitiveCollection pc = primitive_relation(P, fan, V, Q);
        ineqs.push_back(pc.numerical_class);
        for (int i : P) {
            std::vector<int> drop;
            for (int j : P)
                if (j != i) drop.push_back(j);
            Cone c = cone_from_generators(r, Q.cols_dropped(drop).columns());
            for (const IntVec& f : c.facet_normals_ambient()) ineqs.push_back(f);
            IntMat E = integer_kernel_rows(c.span_basis());
            for (int k = 0; k < E.rows(); ++k) {
                ineqs.push_back(E.row(k));
                IntVec neg = E.row(k);
                for (Int& x : neg) x = -x;
                ineqs.push_back(neg);
            }
        }
    }
    if (!any) return gale_cone(Q);
    return cone_from_constraints(r, {}, ineqs);
}

inline std::vector<IntVec> mori_generators(const std::vector<PrimitiveCollection>& pcs) {
    std::vector<IntVec> out;
    for (const PrimitiveCollection& pc : pcs) out.push_back(pc.numerical_class);
    return out;
}

enum class BorderKind {
    interior,
    bordering,
    intbord,
    maxbord,
    totally_maxbord,
    recursively_maxbord,
};

inline const char* to_string(BorderKind k) {
    switch (k) {
        case BorderKind::interior: return "interior";
        case BorderKind::bordering: return "bordering";
        case BorderKind::intbord: return "intbord";
        case BorderKind::maxbord: return "maxbord";
        case BorderKind::totally_maxbord: return "totally_maxbord";
        case BorderKind::recursively_maxbord: return "recursively_maxbord";
    }
    return "?";
}

struct BorderInfo {
    BorderKind kind = BorderKind::interior;
    std::vector<IntVec> bordering_hyperplanes;  // inward facet normals of <Q>
    std::vector<IntVec> intbord_hyperplanes;
    std::vector<IntVec> maxbord_hyperplanes;
    // filled by the bundle machinery when the chamber is recursively maxbord:
    // per stage, the inward normal in that stage's coordinates
    std::vector<IntVec> recursion_sequence;
};

// Taxonomy up to totally maxbord; the recursive upgrade needs the bundle
// descent and lives with it.
inline BorderInfo classify_border_basic(const Chamber& ch, const IntMat& Q) {
    int r = Q.rows();
    BorderInfo info;
    Cone qcone = gale_cone(Q);
    for (const IntVec& h : qcone.facet_normals_ambient()) {
        std::vector<IntVec> on_h;
        for (const IntVec& ray : ch.cone.rays()) {
            Int s = 0;
            for (int i = 0; i < r; ++i) s += h[i] * ray[i];
            if (s == 0) on_h.push_back(ray);
        }
        if (on_h.empty()) continue;
        int d = rank(from_rows(on_h, r));
        if (d < 1) continue;
        info.bordering_hyperplanes.push_back(h);
        if (d == r - 1) {
            info.maxbord_hyperplanes.push_back(h);
            info.intbord_hyperplanes.push_back(h);
            continue;
        }
        // internal bordering: a facet H' of the chamber that swallows the
        // border face and strictly separates two columns lying on H
        std::vector<IntVec> on_h_cols;
        for (int j = 0; j < Q.cols(); ++j) {
            Int s = 0;
            for (int i = 0; i < r; ++i) s += h[i] * Q(i, j);
            if (s == 0) on_h_cols.push_back(Q.col(j));
        }
        for (const IntVec& np : ch.cone.facet_normals_ambient()) {
            bool face_inside = true;
            for (const IntVec& ray : on_h) {
                Int s = 0;
                for (int i = 0; i < r; ++i) s += np[i] * ray[i];
                if (s != 0) { face_inside = false; break; }
            }
            if (!face_inside) continue;
            bool pos = false, neg = false;
            for (const IntVec& q : on_h_cols) {
                Int s = 0;
                for (int i = 0; i < r; ++i) s += np[i] * q[i];
                if (s > 0) pos = true;
                if (s < 0) neg = true;
            }
            if (pos && neg) {
                info.intbord_hyperplanes.push_back(h);
                break;
            }
        }
    }
    if (!info.bordering_hyperplanes.empty()) info.kind = BorderKind::bordering;
    if (!info.intbord_hyperplanes.empty()) info.kind = BorderKind::intbord;
    if (!info.maxbord_hyperplanes.empty()) info.kind = BorderKind::maxbord;
    if (int(info.maxbord_hyperplanes.size()) >= r - 1 && r >= 2)
        info.kind = BorderKind::totally_maxbord;
    return info;
}

// collections of the fan whose support hyperplane is the given one
inline std::vector<PrimitiveCollection> collections_supported_on(
    const std::vector<PrimitiveCollection>& pcs, const IntVec& h) {
    std::vector<PrimitiveCollection> out;
    for (const PrimitiveCollection& pc : pcs) {
        IntVec a = make_primitive(pc.numerical_class);
        IntVec b = make_primitive(h);
        IntVec bneg = b;
        for (Int& x : bneg) x = -x;
        if (a == b || a == bneg) out.push_back(pc);
    }
    return out;
}

struct AnnotatedFlipEdge {
    FlipEdge edge;
    IntVec wall_normal;  // primitive normal of the wall hyperplane
    std::vector<std::vector<int>> exchanged_a;  // collections of side a supported on the wall
    std::vector<std::vector<int>> exchanged_b;
};

inline AnnotatedFlipEdge annotate_flip_edge(const FlipEdge& e, const std::vector<Chamber>& moving,
                                            const IntMat& V, const IntMat& Q) {
    AnnotatedFlipEdge a;
    a.edge = e;
    IntMat K = integer_kernel_rows(from_rows(e.wall.rays(), Q.rows()));
    if (K.rows() != 1) throw std::runtime_error("annotate_flip_edge: wall is not a hyperplane piece");
    a.wall_normal = make_primitive(K.row(0));
    for (const PrimitiveCollection& pc :
         collections_supported_on(collections_of(moving[e.a].fan, V, Q), a.wall_normal))
        a.exchanged_a.push_back(pc.indices);
    for (const PrimitiveCollection& pc :
         collections_supported_on(collections_of(moving[e.b].fan, V, Q), a.wall_normal))
        a.exchanged_b.push_back(pc.indices);
    return a;
}

}  // namespace galekit
