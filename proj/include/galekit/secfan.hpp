#pragma once

#include "galekit/matrices.hpp"

#include <map>

namespace galekit {

// maximal cones as sorted index sets into the columns of the fan matrix
struct SimplicialFan {
    int n = 0;
    std::vector<std::vector<int>> max_cones;
    bool is_complete = false;
    bool is_projective = false;
    std::string source;

    bool operator==(const SimplicialFan& o) const { return max_cones == o.max_cones; }
};

struct Chamber {
    Cone cone;
    std::vector<std::vector<int>> bunch;  // J with |J| = r, det Q_J != 0, chamber in <Q_J>
    SimplicialFan fan;                    // Gale-dual fan, populated inside Mov
    bool in_moving = false;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Cone gale_cone(const IntMat& Q) { return cone_from_generators(Q.rows(), Q.columns()); }

// Mov(V) = intersection of the cones spanned by the column-deleted
// weight submatrices.
inline Cone mov_cone(const IntMat& Q) {
    std::vector<Cone> dropped;
    for (int i = 0; i < Q.cols(); ++i)
        dropped.push_back(cone_from_generators(Q.rows(), Q.cols_dropped({i}).columns()));
    return intersect_many(dropped);
}

namespace detail {

// all hyperplanes spanned by linearly independent (r-1)-subsets of columns
inline std::vector<IntVec> arrangement_normals(const IntMat& Q) {
    int r = Q.rows(), c = Q.cols();
    std::set<IntVec> normals;
    if (r < 2) return {};
    std::vector<int> idx(r - 1);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == r - 1) {
            IntMat S(r - 1, r);
            for (int i = 0; i < r - 1; ++i) S.set_row(i, Q.col(idx[i]));
            IntMat K = integer_kernel_rows(S);
            if (K.rows() != 1) return;
            IntVec nu = make_primitive(K.row(0));
            for (const Int& x : nu) {
                if (x != 0) {
                    if (x < 0)
                        for (Int& y : nu) y = -y;
                    break;
                }
            }
            normals.insert(nu);
            return;
        }
        for (int i = start; i < c; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return {normals.begin(), normals.end()};
}

inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return out;
}

inline std::vector<int> complement(const std::vector<int>& J, int n) {
    std::vector<char> in(n, 0);
    for (int j : J) in[j] = 1;
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
        if (!in[j]) out.push_back(j);
    return out;
}

// sample point strictly inside <Q_J> test via the simplicial solve
inline bool simplicial_cone_contains(const IntMat& Q, const std::vector<int>& J, const RatVec& p) {
    RatVec lambda = solve_rational(Q.cols_selected(J), p);
    return std::all_of(lambda.begin(), lambda.end(), [](const Rat& x) { return x >= 0; });
}

}  // namespace detail

// All full-dimensional chambers of the secondary fan inside <Q>, each with
// its bunch; the Gale-dual fan is populated on the moving ones. Ordering is
// lexicographic by the sorted ray list.
inline std::vector<Chamber> enumerate_chambers(const IntMat& Q) {
    int r = Q.rows(), c = Q.cols();
    Cone qcone = gale_cone(Q);
    if (qcone.dim() != r) throw std::invalid_argument("enumerate_chambers: <Q> not full-dimensional");
    Cone mov = mov_cone(Q);

    std::vector<Cone> cells = {qcone};
    for (const IntVec& h : detail::arrangement_normals(Q)) {
        std::vector<Cone> next;
        for (const Cone& cell : cells) {
            bool pos = false, neg = false;
            for (const IntVec& ray : cell.rays()) {
                Int s = 0;
                for (int i = 0; i < r; ++i) s += h[i] * ray[i];
                if (s > 0) pos = true;
                if (s < 0) neg = true;
            }
            if (!(pos && neg)) {
                next.push_back(cell);
                continue;
            }
            std::vector<IntVec> facets = cell.facet_normals_ambient();
            IntVec hneg(h.size());
            for (size_t i = 0; i < h.size(); ++i) hneg[i] = -h[i];
            for (const IntVec& side : {h, hneg}) {
                std::vector<IntVec> fs = facets;
                fs.push_back(side);
                Cone piece = cone_from_constraints(r, {}, fs);
                if (piece.dim() == r) next.push_back(piece);
            }
        }
        cells = std::move(next);
    }
    // the full hyperplanes oversplit: a chamber is recovered as the
    // intersection of all simplicial subcones containing a cell sample, and
    // cells with the same bunch are the same chamber
    std::vector<std::vector<int>> all_J;
    for (const std::vector<int>& J : detail::subsets_of_size(c, r))
        if (det(Q.cols_selected(J)) != 0) all_J.push_back(J);

    std::map<std::vector<std::vector<int>>, std::vector<Cone>> by_bunch;
    for (const Cone& cell : cells) {
        RatVec sample = to_rat(sum_vec(cell.rays(), r));
        std::vector<std::vector<int>> bunch;
        for (const std::vector<int>& J : all_J)
            if (detail::simplicial_cone_contains(Q, J, sample)) bunch.push_back(J);
        by_bunch[bunch].push_back(cell);
    }

    std::vector<Chamber> chambers;
    for (const auto& [bunch, group] : by_bunch) {
        Chamber ch;
        ch.bunch = bunch;
        std::vector<Cone> bunch_cones;
        for (const std::vector<int>& J : bunch)
            bunch_cones.push_back(cone_from_generators(r, Q.cols_selected(J).columns()));
        ch.cone = intersect_many(bunch_cones);
        if (ch.cone.dim() != r) throw std::runtime_error("enumerate_chambers: degenerate chamber");
        for (const Cone& cell : group)
            if (!ch.cone.contains_cone(cell))
                throw std::runtime_error("enumerate_chambers: bunch does not cut out the chamber");
        ch.in_moving = mov.contains_cone(ch.cone);
        if (ch.in_moving) {
            ch.fan.n = c - r;
            for (const std::vector<int>& J : ch.bunch)
                ch.fan.max_cones.push_back(detail::complement(J, c));
            std::sort(ch.fan.max_cones.begin(), ch.fan.max_cones.end());
            ch.fan.is_complete = true;
            ch.fan.is_projective = true;
            ch.fan.source = "chamber";
        }
        chambers.push_back(std::move(ch));
    }
    std::sort(chambers.begin(), chambers.end(),
              [](const Chamber& a, const Chamber& b) { return a.cone.rays() < b.cone.rays(); });
    int moving_id = 0;
    for (Chamber& ch : chambers)
        if (ch.in_moving) ch.fan.source = "chamber:" + std::to_string(++moving_id);
    return chambers;
}

inline std::vector<Chamber> moving_chambers(const std::vector<Chamber>& chambers) {
    std::vector<Chamber> out;
    for (const Chamber& c : chambers)
        if (c.in_moving) out.push_back(c);
    return out;
}

struct ChamberOfFan {
    Cone gamma;
    bool projective = false;  // false when the bunch intersection drops dimension
};

// Intersection of the bunch of cones of a fan; dimension r exactly on the
// projective locus.
inline ChamberOfFan chamber_of_fan(const IntMat& Q, const SimplicialFan& fan) {
    int r = Q.rows();
    std::vector<Cone> bunch;
    for (const std::vector<int>& I : fan.max_cones)
        bunch.push_back(cone_from_generators(r, Q.cols_dropped(I).columns()));
    ChamberOfFan out;
    out.gamma = intersect_many(bunch);
    out.projective = (out.gamma.dim() == r);
    return out;
}

namespace detail {

// exact pairwise fan-compatibility: cones meet along the common face
struct ConeCompat {
    const IntMat& V;
    std::map<std::pair<std::vector<int>, std::vector<int>>, bool> memo;
    std::map<std::vector<int>, Cone> cone_memo;

    const Cone& cone_of(const std::vector<int>& I) {
        auto it = cone_memo.find(I);
        if (it != cone_memo.end()) return it->second;
        return cone_memo.emplace(I, cone_from_generators(V.rows(), V.cols_selected(I).columns()))
            .first->second;
    }
    bool compatible(const std::vector<int>& A, const std::vector<int>& B) {
        auto key = std::make_pair(std::min(A, B), std::max(A, B));
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<int> common;
        std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(common));
        Cone meet = intersect(cone_of(A), cone_of(B));
        bool ok = (meet == cone_of(common)) ||
                  (common.empty() && meet.dim() == 0);
        memo[key] = ok;
        return ok;
    }
};

}  // namespace detail

// All simplicial complete fans on the rays of V. Backtracking over
// facet-paired maximal cones seeded at a generic direction; throws
// BudgetExceeded when more than max_candidates states are explored.
inline std::vector<SimplicialFan> enumerate_complete_fans(const IntMat& V,
                                                          long max_candidates = 200000) {
    int n = V.rows(), c = V.cols();
    std::vector<std::vector<int>> candidates;
    for (const std::vector<int>& I : detail::subsets_of_size(c, n))
        if (det(V.cols_selected(I)) != 0) candidates.push_back(I);

    // generic integer direction missing every hyperplane spanned by columns
    std::vector<IntVec> normals = detail::arrangement_normals(V);
    IntVec p0(n);
    for (Int k = 2;; ++k) {
        Int t = 1;
        for (int i = 0; i < n; ++i) {
            p0[i] = t;
            t *= k;
        }
        bool ok = true;
        for (const IntVec& h : normals) {
            Int s = 0;
            for (int i = 0; i < n; ++i) s += h[i] * p0[i];
            if (s == 0) { ok = false; break; }
        }
        if (ok) break;
    }

    detail::ConeCompat compat{V, {}, {}};
    RatVec p0r = to_rat(p0);
    std::vector<std::vector<int>> roots;
    for (const std::vector<int>& I : candidates)
        if (detail::simplicial_cone_contains(V, I, p0r)) roots.push_back(I);

    // facet -> owning cones map keyed by the (n-1)-subset
    std::set<std::vector<std::vector<int>>> found;
    long budget = max_candidates;

    std::function<void(std::vector<std::vector<int>>&)> dfs = [&](std::vector<std::vector<int>>& fan) {
        if (--budget < 0) throw BudgetExceeded("enumerate_complete_fans: candidate budget exceeded");
        // facet usage count
        std::map<std::vector<int>, int> use;
        for (const std::vector<int>& I : fan)
            for (int drop = 0; drop < n; ++drop) {
                std::vector<int> F = I;
                F.erase(F.begin() + drop);
                ++use[F];
            }
        std::vector<int> open;
        for (const auto& [F, cnt] : use) {
            if (cnt > 2) return;  // over-shared facet, dead branch
            if (cnt == 1 && open.empty()) open = F;
        }
        if (open.empty()) {
            std::vector<std::vector<int>> key = fan;
            std::sort(key.begin(), key.end());
            found.insert(key);
            return;
        }
        // extend across the lex-smallest open facet
        std::vector<int> owner;
        for (const std::vector<int>& I : fan)
            if (std::includes(I.begin(), I.end(), open.begin(), open.end())) owner = I;
        for (const std::vector<int>& J : candidates) {
            if (!std::includes(J.begin(), J.end(), open.begin(), open.end())) continue;
            if (J == owner) continue;
            if (std::find(fan.begin(), fan.end(), J) != fan.end()) continue;
            bool ok = true;
            for (const std::vector<int>& I : fan)
                if (!compat.compatible(I, J)) { ok = false; break; }
            if (!ok) continue;
            fan.push_back(J);
            dfs(fan);
            fan.pop_back();
        }
    };

    for (const std::vector<int>& root : roots) {
        std::vector<std::vector<int>> fan = {root};
        dfs(fan);
    }

    std::vector<SimplicialFan> out;
    for (const auto& key : found) {
        // every column must appear as a ray of the fan
        std::vector<char> used(c, 0);
        for (const std::vector<int>& I : key)
            for (int i : I) used[i] = 1;
        if (!std::all_of(used.begin(), used.end(), [](char u) { return u != 0; })) continue;
        SimplicialFan f;
        f.n = n;
        f.max_cones = key;
        f.is_complete = true;
        f.source = "search";
        out.push_back(f);
    }
    return out;
}

struct SingularityProfile {
    std::vector<Int> fan_dets;  // |det V_I| per maximal cone, in fan order
    Int delta = 1;              // uniform |det V_I| / |det Q^I|
    bool non_singular = false;
};

inline SingularityProfile singularity_profile(const IntMat& V, const IntMat& Q,
                                              const SimplicialFan& fan) {
    SingularityProfile p;
    p.non_singular = true;
    bool first = true;
    for (const std::vector<int>& I : fan.max_cones) {
        Int dv = det_abs(V.cols_selected(I));
        Int dq = det_abs(Q.cols_dropped(I));
        if (dq == 0 || dv % dq != 0)
            throw std::runtime_error("singularity_profile: determinant correspondence violated");
        Int delta = dv / dq;
        if (first) {
            p.delta = delta;
            first = false;
        } else if (p.delta != delta) {
            throw std::runtime_error("singularity_profile: delta is not constant");
        }
        p.fan_dets.push_back(dv);
        if (dv != 1) p.non_singular = false;
    }
    return p;
}

inline bool is_nef_class(const IntVec& cls, const Chamber& ch) {
    return ch.cone.contains(to_rat(cls));
}
inline bool is_ample_class(const IntVec& cls, const Chamber& ch) {
    return ch.cone.contains_relint(to_rat(cls));
}

// anticanonical class = sum of the columns of Q
inline bool q_fano(const IntMat& Q, const Chamber& ch) {
    IntVec sum(Q.rows(), Int(0));
    for (int j = 0; j < Q.cols(); ++j)
        for (int i = 0; i < Q.rows(); ++i) sum[i] += Q(i, j);
    return is_ample_class(sum, ch);
}

struct FlipEdge {
    int a = 0, b = 0;  // indices into the moving chamber list
    Cone wall;
};

// adjacency of moving chambers along shared walls
inline std::vector<FlipEdge> flip_graph(const std::vector<Chamber>& moving) {
    std::vector<FlipEdge> edges;
    int r = moving.empty() ? 0 : moving[0].cone.ambient();
    for (size_t i = 0; i < moving.size(); ++i)
        for (size_t j = i + 1; j < moving.size(); ++j) {
            Cone wall = intersect(moving[i].cone, moving[j].cone);
            if (wall.dim() == r - 1) edges.push_back({int(i), int(j), wall});
        }
    return edges;
}

}  // namespace galekit
