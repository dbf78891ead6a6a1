#pragma once

#include "galekit/normal_form.hpp"

#include <functional>
#include <set>

namespace galekit {

// Rational polyhedral cone with canonical primitive extremal rays, kept
// together with a saturated lattice basis of its linear span and the facet
// normals expressed in span coordinates. Strongly convex throughout; cones
// of any dimension (0 and 1 included) share the representation.
class Cone {
public:
    Cone() = default;

    int ambient() const { return ambient_; }
    int dim() const { return dim_; }
    const std::vector<IntVec>& rays() const { return rays_; }
    bool is_zero() const { return dim_ == 0; }
    bool is_simplicial() const { return int(rays_.size()) == dim_; }

    // rows form a basis of the saturated span lattice
    const IntMat& span_basis() const { return span_; }
    // inward facet normals in span coordinates
    const std::vector<IntVec>& facet_normals_span() const { return facets_; }

    // facet normals lifted to ambient functionals (any lift mod span-perp)
    std::vector<IntVec> facet_normals_ambient() const;

    // rays written in span coordinates (integral by saturation)
    std::vector<IntVec> rays_span() const;

    bool contains(const RatVec& p) const;          // closed membership
    bool contains_relint(const RatVec& p) const;   // relative interior
    bool contains_cone(const Cone& c) const;

    bool operator==(const Cone& o) const {
        return ambient_ == o.ambient_ && rays_ == o.rays_;
    }
    bool operator<(const Cone& o) const { return rays_ < o.rays_; }

    friend Cone cone_from_generators(int ambient, const std::vector<IntVec>& gens);
    friend Cone cone_from_constraints(int ambient, const std::vector<IntVec>& equations,
                                      const std::vector<IntVec>& inequalities);

private:
    // span coordinates of an ambient point, empty if p is outside the span
    std::optional<RatVec> span_coords(const RatVec& p) const;

    int ambient_ = 0;
    int dim_ = 0;
    std::vector<IntVec> rays_;     // primitive, lex-sorted
    IntMat span_;                  // dim_ x ambient_
    std::vector<IntVec> facets_;   // in span coordinates, primitive, lex-sorted
};

namespace detail {

// nonnegative exact solve: is p a nonnegative combination of the columns
// of gens (full column rank not assumed)? Caratheodory enumeration.
inline bool in_nonneg_hull(const std::vector<IntVec>& gens, const RatVec& p, int dim) {
    if (std::all_of(p.begin(), p.end(), [](const Rat& x) { return x == 0; })) return true;
    int k = int(gens.size());
    if (k == 0) return false;
    int d = std::min(dim, k);
    std::vector<int> idx(d);
    std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
        if (pos == d) {
            IntMat A = from_columns(int(gens[0].size()), [&] {
                std::vector<IntVec> sel;
                for (int i : idx) sel.push_back(gens[i]);
                return sel;
            }());
            // solve A x = p in least-squares-free exact form: use the span
            IntMat AtA = A.transpose().mul(A);
            if (det(AtA) == 0) return false;
            RatVec rhs(d, Rat(0));
            for (int i = 0; i < d; ++i)
                for (size_t j = 0; j < p.size(); ++j) rhs[i] += Rat(A(int(j), i)) * p[j];
            RatVec x = solve_rational(AtA, rhs);
            for (const Rat& v : x)
                if (v < 0) return false;
            // verify A x = p (A had full column rank on its span only)
            for (size_t r = 0; r < p.size(); ++r) {
                Rat s = 0;
                for (int c = 0; c < d; ++c) s += Rat(A(int(r), c)) * x[c];
                if (s != p[r]) return false;
            }
            return true;
        }
        for (int i = start; i < k; ++i) {
            idx[pos] = i;
            if (rec(pos + 1, i + 1)) return true;
        }
        return false;
    };
    return rec(0, 0);
}

inline std::vector<IntVec> dedup_sorted(std::vector<IntVec> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace detail

inline std::optional<RatVec> Cone::span_coords(const RatVec& p) const {
    // solve span_^T c = p ;  span_ rows are the basis
    int d = dim_;
    if (d == 0) {
        for (const Rat& x : p)
            if (x != 0) return std::nullopt;
        return RatVec{};
    }
    IntMat B = span_;                      // d x ambient
    IntMat G = B.mul(B.transpose());       // d x d, nonsingular
    RatVec rhs(d, Rat(0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < ambient_; ++j) rhs[i] += Rat(B(i, j)) * p[j];
    RatVec c = solve_rational(G, rhs);
    // consistency: B^T c == p
    for (int j = 0; j < ambient_; ++j) {
        Rat s = 0;
        for (int i = 0; i < d; ++i) s += Rat(B(i, j)) * c[i];
        if (s != p[j]) return std::nullopt;
    }
    return c;
}

inline std::vector<IntVec> Cone::rays_span() const {
    std::vector<IntVec> out;
    for (const IntVec& r : rays_) {
        RatVec p(r.size());
        for (size_t i = 0; i < r.size(); ++i) p[i] = Rat(r[i]);
        auto c = span_coords(p);
        IntVec v(dim_);
        for (int i = 0; i < dim_; ++i) {
            if (boost::multiprecision::denominator((*c)[i]) != 1)
                throw std::runtime_error("Cone: ray has non-integer span coordinates");
            v[i] = boost::multiprecision::numerator((*c)[i]);
        }
        out.push_back(v);
    }
    return out;
}

inline bool Cone::contains(const RatVec& p) const {
    if (int(p.size()) != ambient_) throw std::invalid_argument("Cone::contains: dimension mismatch");
    auto c = span_coords(p);
    if (!c) return false;
    for (const IntVec& f : facets_) {
        Rat s = 0;
        for (int i = 0; i < dim_; ++i) s += Rat(f[i]) * (*c)[i];
        if (s < 0) return false;
    }
    return true;
}

inline bool Cone::contains_relint(const RatVec& p) const {
    if (int(p.size()) != ambient_) throw std::invalid_argument("Cone::contains_relint: dimension mismatch");
    auto c = span_coords(p);
    if (!c) return false;
    for (const IntVec& f : facets_) {
        Rat s = 0;
        for (int i = 0; i < dim_; ++i) s += Rat(f[i]) * (*c)[i];
        if (s <= 0) return false;
    }
    return true;
}

inline bool Cone::contains_cone(const Cone& c) const {
    for (const IntVec& r : c.rays_) {
        RatVec p(r.size());
        for (size_t i = 0; i < r.size(); ++i) p[i] = Rat(r[i]);
        if (!contains(p)) return false;
    }
    return true;
}

inline std::vector<IntVec> Cone::facet_normals_ambient() const {
    // lift each span-coordinate functional nu to f = nu^T (B B^T)^{-1} B
    std::vector<IntVec> out;
    if (dim_ == 0) return out;
    IntMat B = span_;
    IntMat G = B.mul(B.transpose());
    for (const IntVec& nu : facets_) {
        RatVec nr(nu.size());
        for (size_t i = 0; i < nu.size(); ++i) nr[i] = Rat(nu[i]);
        RatVec y = solve_rational(G, nr);  // G symmetric: y = G^{-1} nu
        RatVec f(ambient_, Rat(0));
        for (int j = 0; j < ambient_; ++j)
            for (int i = 0; i < dim_; ++i) f[j] += y[i] * Rat(B(i, j));
        Int mult = 1;
        for (const Rat& x : f) mult = lcm(mult, boost::multiprecision::denominator(x));
        IntVec fi(ambient_);
        for (int j = 0; j < ambient_; ++j)
            fi[j] = boost::multiprecision::numerator(f[j] * Rat(mult));
        out.push_back(make_primitive(fi));
    }
    return out;
}

// Canonical cone from generators: redundant generators removed, rays
// primitive and lex-sorted. Throws if the generators span a line.
inline Cone cone_from_generators(int ambient, const std::vector<IntVec>& gens) {
    Cone c;
    c.ambient_ = ambient;
    std::vector<IntVec> g;
    for (const IntVec& v : gens) {
        if (int(v.size()) != ambient) throw std::invalid_argument("cone_from_generators: dimension mismatch");
        if (!is_zero_vec(v)) g.push_back(make_primitive(v));
    }
    g = detail::dedup_sorted(g);
    if (g.empty()) {
        c.dim_ = 0;
        c.span_ = IntMat(0, ambient);
        return c;
    }

    IntMat Gm = from_rows(g, ambient);
    c.span_ = saturation_rows(Gm);
    c.dim_ = c.span_.rows();
    int d = c.dim_;

    // span coordinates of the generators (integral by saturation)
    Cone tmp = c;  // has span set, no facets: span_coords works
    std::vector<IntVec> gs;
    for (const IntVec& v : g) {
        RatVec p(v.size());
        for (size_t i = 0; i < v.size(); ++i) p[i] = Rat(v[i]);
        auto sc = tmp.span_coords(p);
        IntVec w(d);
        for (int i = 0; i < d; ++i) w[i] = boost::multiprecision::numerator((*sc)[i]);
        gs.push_back(w);
    }

    if (d == 1) {
        // all generators must point the same way
        bool pos = false, neg = false;
        for (const IntVec& w : gs) (w[0] > 0 ? pos : neg) = true;
        if (pos && neg) throw std::invalid_argument("cone_from_generators: cone contains a line");
        if (neg) {
            // flip the span basis so the ray coordinate is positive
            for (int j = 0; j < ambient; ++j) c.span_(0, j) = -c.span_(0, j);
            for (IntVec& w : gs) w[0] = -w[0];
        }
        c.facets_ = {IntVec{Int(1)}};
        c.rays_ = {[&] {
            IntVec r(ambient);
            for (int j = 0; j < ambient; ++j) r[j] = c.span_(0, j);
            return make_primitive(r);
        }()};
        return c;
    }

    // extremal generators: not in the hull of the others
    std::vector<IntVec> extremal;
    for (size_t i = 0; i < gs.size(); ++i) {
        std::vector<IntVec> others;
        for (size_t j = 0; j < gs.size(); ++j)
            if (j != i) others.push_back(gs[j]);
        RatVec p(d);
        for (int k = 0; k < d; ++k) p[k] = Rat(gs[i][k]);
        if (!detail::in_nonneg_hull(others, p, d)) extremal.push_back(gs[i]);
    }
    if (extremal.empty())  // everything redundant yet lattice full: a line
        throw std::invalid_argument("cone_from_generators: cone contains a line");

    // facets by (d-1)-subset enumeration with sign check
    std::set<IntVec> facets;
    int k = int(extremal.size());
    std::vector<int> idx(d - 1);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == d - 1) {
            IntMat S(d - 1, d);
            for (int i = 0; i < d - 1; ++i) S.set_row(i, extremal[idx[i]]);
            IntMat K = integer_kernel_rows(S);
            if (K.rows() != 1) return;
            IntVec nu = K.row(0);
            bool pos_side = false, neg_side = false;
            for (const IntVec& w : extremal) {
                Int s = 0;
                for (int t = 0; t < d; ++t) s += nu[t] * w[t];
                if (s > 0) pos_side = true;
                if (s < 0) neg_side = true;
            }
            if (pos_side && neg_side) return;
            if (neg_side)
                for (Int& x : nu) x = -x;
            if (!pos_side && !neg_side) return;  // all on the hyperplane: degenerate
            facets.insert(make_primitive(nu));
            return;
        }
        for (int i = start; i < k; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    c.facets_.assign(facets.begin(), facets.end());

    // strong convexity: facet normals must span the whole span
    if (rank(from_rows(c.facets_, d)) != d)
        throw std::invalid_argument("cone_from_generators: cone contains a line");

    // back to ambient coordinates
    for (const IntVec& w : extremal) {
        IntVec r(ambient, Int(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < ambient; ++j) r[j] += w[i] * c.span_(i, j);
        c.rays_.push_back(make_primitive(r));
    }
    c.rays_ = detail::dedup_sorted(c.rays_);
    return c;
}

// Exact cone {x : E x = 0, F x >= 0}; result must be strongly convex.
inline Cone cone_from_constraints(int ambient, const std::vector<IntVec>& equations,
                                  const std::vector<IntVec>& inequalities) {
    IntMat S(0, ambient);
    if (equations.empty()) {
        S = IntMat::identity(ambient);
    } else {
        S = integer_kernel_rows(from_rows(equations, ambient));
    }
    int d = S.rows();
    Cone zero;
    zero.ambient_ = ambient;
    zero.dim_ = 0;
    zero.span_ = IntMat(0, ambient);
    if (d == 0) return zero;

    // restrict inequalities to subspace coordinates: M y >= 0 for x = S^T y
    IntMat St = S.transpose();
    std::vector<IntVec> M;
    for (const IntVec& f : inequalities) {
        IntVec m(d, Int(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < ambient; ++j) m[i] += f[j] * S(i, j);
        if (!is_zero_vec(m)) M.push_back(m);
    }
    if (rank(from_rows(M, d)) < d)
        throw std::invalid_argument("cone_from_constraints: result is not strongly convex");

    auto satisfies = [&](const IntVec& v) {
        for (const IntVec& m : M) {
            Int s = 0;
            for (int i = 0; i < d; ++i) s += m[i] * v[i];
            if (s < 0) return false;
        }
        return true;
    };

    std::vector<IntVec> candidates;
    if (d == 1) {
        IntVec v{Int(1)}, w{Int(-1)};
        if (satisfies(v)) candidates.push_back(v);
        if (satisfies(w)) candidates.push_back(w);
    } else {
        int k = int(M.size());
        std::vector<int> idx(d - 1);
        std::set<IntVec> seen;
        std::function<void(int, int)> rec = [&](int pos, int start) {
            if (pos == d - 1) {
                IntMat T(d - 1, d);
                for (int i = 0; i < d - 1; ++i) T.set_row(i, M[idx[i]]);
                IntMat K = integer_kernel_rows(T);
                if (K.rows() != 1) return;
                IntVec v = K.row(0);
                bool p = satisfies(v);
                IntVec nv(d);
                for (int i = 0; i < d; ++i) nv[i] = -v[i];
                bool q = satisfies(nv);
                if (p && q) throw std::invalid_argument("cone_from_constraints: result is not strongly convex");
                if (p && seen.insert(v).second) candidates.push_back(v);
                if (q && seen.insert(nv).second) candidates.push_back(nv);
                return;
            }
            for (int i = start; i < k; ++i) {
                idx[pos] = i;
                rec(pos + 1, i + 1);
            }
        };
        rec(0, 0);
    }

    // back to ambient and canonicalize
    std::vector<IntVec> amb;
    for (const IntVec& v : candidates) {
        IntVec r(ambient, Int(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < ambient; ++j) r[j] += v[i] * S(i, j);
        amb.push_back(r);
    }
    return cone_from_generators(ambient, amb);
}

inline Cone intersect(const Cone& a, const Cone& b) {
    if (a.ambient() != b.ambient()) throw std::invalid_argument("intersect: ambient mismatch");
    std::vector<IntVec> eqs, ineqs;
    auto add_cone = [&](const Cone& c) {
        IntMat E = integer_kernel_rows(c.span_basis());
        for (int i = 0; i < E.rows(); ++i) eqs.push_back(E.row(i));
        for (const IntVec& f : c.facet_normals_ambient()) ineqs.push_back(f);
    };
    add_cone(a);
    add_cone(b);
    if (ineqs.empty())  // both cones are zero-dimensional
        return cone_from_generators(a.ambient(), {});
    return cone_from_constraints(a.ambient(), eqs, ineqs);
}

inline Cone intersect_many(const std::vector<Cone>& cones) {
    if (cones.empty()) throw std::invalid_argument("intersect_many: empty list");
    std::vector<IntVec> eqs, ineqs;
    for (const Cone& c : cones) {
        IntMat E = integer_kernel_rows(c.span_basis());
        for (int i = 0; i < E.rows(); ++i) eqs.push_back(E.row(i));
        for (const IntVec& f : c.facet_normals_ambient()) ineqs.push_back(f);
        if (c.dim() == 0) return c;
    }
    return cone_from_constraints(cones[0].ambient(), eqs, ineqs);
}

// |det| of the primitive ray matrix, in saturated span coordinates
inline Int simplicial_det(const Cone& c) {
    if (!c.is_simplicial()) throw std::invalid_argument("simplicial_det: cone is not simplicial");
    if (c.dim() == 0) return 1;
    return det_abs(from_rows(c.rays_span(), c.dim()));
}

// dual cone {x : g . x >= 0 for all generators g of c}; c must span ambient
inline Cone dual_cone(const Cone& c) {
    if (c.dim() != c.ambient())
        throw std::invalid_argument("dual_cone: primal must be full-dimensional");
    return cone_from_constraints(c.ambient(), {}, c.rays());
}

inline RatVec to_rat(const IntVec& v) {
    RatVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

inline IntVec sum_vec(const std::vector<IntVec>& vs, int ambient) {
    IntVec s(ambient, Int(0));
    for (const IntVec& v : vs)
        for (int i = 0; i < ambient; ++i) s[i] += v[i];
    return s;
}

}  // namespace galekit
