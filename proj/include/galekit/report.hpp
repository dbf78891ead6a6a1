#pragma once

#include "galekit/bundles.hpp"
#include "galekit/io.hpp"
#include "galekit/rank2.hpp"

#include <chrono>
#include <json.hpp>

namespace galekit {

using Json = nlohmann::ordered_json;

inline Json to_json(const IntVec& v) {
    Json a = Json::array();
    for (const Int& x : v) a.push_back(x.str());
    return a;
}

inline Json to_json(const IntMat& m) {
    Json a = Json::array();
    for (int i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
    return a;
}

inline Json to_json(const std::vector<IntVec>& rows) {
    Json a = Json::array();
    for (const IntVec& r : rows) a.push_back(to_json(r));
    return a;
}

inline Json to_json(const Cone& c) {
    Json j;
    j["dim"] = c.dim();
    j["rays"] = to_json(c.rays());
    return j;
}

inline Json index_sets_json(const std::vector<std::vector<int>>& sets) {
    Json a = Json::array();
    for (const std::vector<int>& s : sets) {
        Json row = Json::array();
        for (int i : s) row.push_back(i + 1);  // reports use 1-based ray labels
        a.push_back(row);
    }
    return a;
}

struct AnalyzeOptions {
    bool enumerate_complete = false;
    long max_candidates = 200000;
    PinnedTransforms pins;
    bool timings = false;
};

struct BirWptbCandidate {
    IntVec hyperplane;
    std::string failed_condition;
    std::optional<IntVec> witness;
};

struct BirWptbVerdict {
    bool flip_equivalent = false;  // Mov(V) maxbord w.r.t. some hyperplane
    std::vector<IntVec> mov_maxbord_hyperplanes;
    std::vector<BirWptbCandidate> failures;
};

// Flip-equivalence to a toric cover of a weighted projective toric bundle:
// Mov(V) must itself be maxbord; when it is not, each bordering hyperplane
// is analyzed and the failing W-condition of its upper block is named.
inline BirWptbVerdict bir_wptb_analysis(const IntMat& Q) {
    BirWptbVerdict v;
    int r = Q.rows();
    Cone mov = mov_cone(Q);
    Cone qcone = gale_cone(Q);
    for (const IntVec& h : qcone.facet_normals_ambient()) {
        std::vector<IntVec> on_h;
        for (const IntVec& ray : mov.rays()) {
            Int s = 0;
            for (int i = 0; i < r; ++i) s += h[i] * ray[i];
            if (s == 0) on_h.push_back(ray);
        }
        if (on_h.empty()) continue;
        int d = rank(from_rows(on_h, r));
        if (d == r - 1) {
            v.flip_equivalent = true;
            v.mov_maxbord_hyperplanes.push_back(h);
            continue;
        }
        BirWptbCandidate cand;
        cand.hyperplane = h;
        try {
            BorderingTransform t = transform_bordering(Q, h);
            SplitWeights sp = split_weight_matrix(t.Q_new);
            WeightMatrixFlags f = check_W(sp.Qprime);
            if (!f.full_rank)
                cand.failed_condition = "condition_a_rank";
            else if (!f.w_positive)
                cand.failed_condition = "condition_c_positive_basis";
            else if (!f.nonzero_columns)
                cand.failed_condition = "condition_d_zero_column";
            else if (!f.no_unit_vector)
                cand.failed_condition = "condition_e_unit_vector";
            else if (!f.no_mixed_pair)
                cand.failed_condition = "condition_f_mixed_pair";
            else
                cand.failed_condition = "chamber_not_maxbord";
            if (f.witness) {
                // the witness lives on the columns of Q'; report it in the
                // original column positions of Q
                IntVec w(Q.cols(), Int(0));
                for (int j = 0; j < sp.Qprime.cols(); ++j)
                    w[t.column_order[j]] = (*f.witness)[j];
                cand.witness = w;
            }
        } catch (const std::exception& e) {
            cand.failed_condition = std::string("normalization_failed: ") + e.what();
        }
        v.failures.push_back(std::move(cand));
    }
    return v;
}

struct AnalysisReport {
    Json json;
};

inline Json border_json(const BorderInfo& info) {
    Json j;
    j["kind"] = to_string(info.kind);
    j["bordering_hyperplanes"] = to_json(info.bordering_hyperplanes);
    j["intbord_hyperplanes"] = to_json(info.intbord_hyperplanes);
    j["maxbord_hyperplanes"] = to_json(info.maxbord_hyperplanes);
    j["recursion_hyperplanes"] = to_json(info.recursion_sequence);
    return j;
}

inline Json decomposition_json(const BundleDecomposition& dec) {
    Json j;
    j["hyperplane"] = to_json(dec.hyperplane);
    Json order = Json::array();
    for (int c : dec.column_order) order.push_back(c + 1);
    j["column_order"] = order;
    j["case"] = to_string(dec.base_case);
    j["W"] = to_json(dec.W);
    j["Q_normalized"] = to_json(dec.Q_norm);
    j["Q_prime"] = to_json(dec.Qprime);
    j["Q_second"] = to_json(dec.Qsecond);
    if (dec.cover) {
        Json c;
        c["B"] = to_json(dec.cover->B);
        c["C"] = to_json(dec.cover->C);
        c["index"] = dec.cover->index.str();
        c["Q_tilde"] = to_json(dec.cover->Q_tilde);
        c["V_tilde"] = to_json(dec.cover->V_tilde);
        j["cover"] = c;
    }
    j["base_weight_matrix"] = to_json(dec.Q_base);
    j["base_chamber_rays"] = to_json(dec.base_chamber.cone.rays());
    j["cartier_indices"] = to_json(dec.cartier);
    if (dec.wptwb) {
        Json t;
        t["l"] = to_json(dec.wptwb->l);
        t["lambda"] = dec.wptwb->lambda.str();
        t["d"] = to_json(dec.wptwb->d);
        t["a"] = dec.wptwb->a.str();
        t["eta"] = to_json(dec.wptwb->eta);
        t["W_reduced"] = to_json(dec.wptwb->W_reduced);
        t["galois_order"] = dec.wptwb->galois_order.str();
        t["Lambda"] = to_json(dec.wptwb->Lambda);
        t["Phi"] = to_json(dec.wptwb->Phi);
        t["ramification"] = to_json(dec.wptwb->ramification);
        j["wptwb"] = t;
    }
    return j;
}

// The full pipeline: flags, Gale dual, moving cone, chambers with their
// collections and taxonomy, decompositions and towers, the flip graph, the
// quotient data for a non-CF input, and the flip-equivalence verdict.
inline AnalysisReport analyze(const IntMat& input, MatrixKind kind, const AnalyzeOptions& opt = {}) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    std::map<std::string, double> stage_ms;
    auto mark = [&](const char* stage, auto& last) {
        auto now = clock::now();
        stage_ms[stage] = std::chrono::duration<double, std::milli>(now - last).count();
        last = now;
    };

    Json j;
    j["input"] = Json{{"kind", kind == MatrixKind::weight ? "weight" : "fan"},
                      {"rows", input.rows()},
                      {"cols", input.cols()},
                      {"matrix", to_json(input)}};

    IntMat V, Q;
    Json flags;
    if (kind == MatrixKind::weight) {
        WeightMatrixFlags wf = check_W(input);
        if (!wf.is_W()) throw std::invalid_argument("analyze: input is not a W-matrix");
        if (wf.positive_ref) {
            Q = input;
        } else if (auto pos = try_positive_ref(input)) {
            Q = *pos;
        } else {
            Q = input;  // order admits no positive REF; the geometry is basis-free
        }
        flags["weight_basis_positive"] = is_positive_matrix(Q) && is_ref(Q);
        V = gale_dual(Q);
        flags["weight"] = Json{{"is_W", wf.is_W()},    {"reduced", wf.reduced},
                               {"positive_ref", wf.positive_ref}, {"full_rank", wf.full_rank},
                               {"no_cotorsion", wf.no_cotorsion}, {"w_positive", wf.w_positive}};
        FanMatrixFlags ff = check_F(V);
        flags["fan"] = Json{{"is_F", ff.is_F()}, {"is_CF", ff.is_CF()}, {"reduced", ff.reduced}};
        j["gale_dual"] = to_json(V);
    } else {
        FanMatrixFlags ff = check_F(input);
        if (!ff.is_F()) throw std::invalid_argument("analyze: input is not an F-matrix");
        flags["fan"] = Json{{"is_F", ff.is_F()}, {"is_CF", ff.is_CF()}, {"reduced", ff.reduced}};
        V = input;
        for (int jj = 0; jj < V.cols(); ++jj) {
            IntVec col = make_primitive(V.col(jj));
            for (int i = 0; i < V.rows(); ++i) V(i, jj) = col[i];
        }
        IntMat K = gale_dual(V);
        auto pos = try_positive_ref(K);
        Q = pos ? *pos : K;  // all downstream geometry is basis-independent
        flags["reduced_applied"] = !ff.reduced;
        flags["weight_basis_positive"] = pos.has_value();
        WeightMatrixFlags wf = check_W(Q);
        flags["weight"] = Json{{"is_W", wf.is_W()}, {"reduced", wf.reduced}};
        j["gale_dual"] = to_json(Q);
    }
    j["flags"] = flags;
    auto tstage = clock::now();
    mark("input", t0);

    Cone mov = mov_cone(Q);
    j["mov"] = to_json(mov);
    std::vector<Chamber> all = enumerate_chambers(Q);
    std::vector<Chamber> moving = moving_chambers(all);
    mark("chambers", tstage);

    Json chambers = Json::array();
    std::vector<BorderInfo> infos;
    Json decs = Json::array();
    for (size_t k = 0; k < moving.size(); ++k) {
        const Chamber& ch = moving[k];
        Json c;
        c["id"] = int(k + 1);
        c["rays"] = to_json(ch.cone.rays());
        c["bunch"] = index_sets_json(ch.bunch);
        c["fan"] = index_sets_json(ch.fan.max_cones);
        SingularityProfile prof = singularity_profile(V, Q, ch.fan);
        c["singularity"] = Json{{"fan_determinants", to_json(prof.fan_dets)},
                                {"delta", prof.delta.str()},
                                {"non_singular", prof.non_singular}};
        c["q_fano"] = q_fano(Q, ch);
        BorderInfo info = classify_border(ch, Q);
        infos.push_back(info);
        c["border"] = border_json(info);

        Json cols = Json::array();
        for (const PrimitiveCollection& pc : collections_of(ch.fan, V, Q)) {
            Json p;
            Json idx = Json::array();
            for (int i : pc.indices) idx.push_back(i + 1);
            p["indices"] = idx;
            p["relation"] = to_json(pc.relation);
            p["numerical_class"] = to_json(pc.numerical_class);
            Json foc = Json::array();
            for (int i : pc.focus) foc.push_back(i + 1);
            p["focus"] = foc;
            p["nef"] = pc.is_nef;
            if (pc.is_nef) {
                try {
                    p["contractibility"] = to_string(contractibility(pc, ch, Q));
                } catch (const std::exception& e) {
                    p["contractibility"] = std::string("error: ") + e.what();
                }
            }
            cols.push_back(p);
        }
        c["collections"] = cols;
        chambers.push_back(c);

        if (!info.maxbord_hyperplanes.empty()) {
            Json d;
            d["chamber_id"] = int(k + 1);
            try {
                Tower tower = recursive_decomposition(Q, ch);
                Json stages = Json::array();
                for (const BundleDecomposition& st : tower.stages)
                    stages.push_back(decomposition_json(st));
                d["stages"] = stages;
                d["tower_complete"] = tower.complete;
                if (tower.complete) d["wps_weights"] = to_json(tower.wps_weights);
            } catch (const std::exception& e) {
                d["error"] = e.what();
            }
            decs.push_back(d);
        }
    }
    j["chambers"] = chambers;
    mark("taxonomy", tstage);

    if (opt.enumerate_complete) {
        std::vector<SimplicialFan> fans = enumerate_complete_fans(V, opt.max_candidates);
        std::set<std::vector<std::vector<int>>> projective;
        for (const Chamber& ch : moving) projective.insert(ch.fan.max_cones);
        Json jf = Json::array();
        for (const SimplicialFan& f : fans) {
            Json e;
            e["max_cones"] = index_sets_json(f.max_cones);
            bool proj = projective.count(f.max_cones) > 0;
            e["projective"] = proj;
            if (!proj) {
                ChamberOfFan cf = chamber_of_fan(Q, f);
                e["nef_cone"] = to_json(cf.gamma);
            }
            jf.push_back(e);
        }
        j["complete_fans"] = Json{{"total", int(fans.size())}, {"fans", jf}};
    } else {
        j["complete_fans"] = nullptr;
    }
    mark("complete_fans", tstage);

    Json edges = Json::array();
    for (const FlipEdge& e : flip_graph(moving)) {
        AnnotatedFlipEdge a = annotate_flip_edge(e, moving, V, Q);
        Json je;
        je["chambers"] = Json::array({e.a + 1, e.b + 1});
        je["wall_rays"] = to_json(e.wall.rays());
        je["wall_normal"] = to_json(a.wall_normal);
        je["exchanged"] = Json::array({index_sets_json(a.exchanged_a), index_sets_json(a.exchanged_b)});
        edges.push_back(je);
    }
    j["flip_graph"] = edges;
    j["decompositions"] = decs;
    j["bir_wptb"] = [&] {
        BirWptbVerdict v = bir_wptb_analysis(Q);
        Json b;
        b["flip_equivalent_to_wptb_cover"] = v.flip_equivalent;
        b["mov_maxbord_hyperplanes"] = to_json(v.mov_maxbord_hyperplanes);
        Json fails = Json::array();
        for (const BirWptbCandidate& c : v.failures) {
            Json f;
            f["hyperplane"] = to_json(c.hyperplane);
            f["failed_condition"] = c.failed_condition;
            if (c.witness) f["witness"] = to_json(*c.witness);
            fails.push_back(f);
        }
        b["bordering_failures"] = fails;
        return b;
    }();
    mark("flip_graph", tstage);

    FanMatrixFlags ff = check_F(V);
    if (!ff.is_CF()) {
        QuotientReport rep = torsion_pipeline(V, opt.pins);
        Json q;
        q["torsion_factors"] = to_json(rep.torsion_factors);
        q["s"] = rep.s;
        q["Vhat"] = to_json(rep.Vhat);
        q["Gamma"] = to_json(rep.Gamma);
        q["experimental_multifactor"] = rep.experimental_multifactor;
        q["trace"] = Json{{"H", to_json(rep.H)},         {"U", to_json(rep.U)},
                          {"Hhat", to_json(rep.Hhat)},     {"Uhat", to_json(rep.Uhat)},
                          {"beta_H", to_json(rep.beta_H)}, {"beta", to_json(rep.beta)},
                          {"Delta", to_json(rep.Delta)},   {"mu", to_json(rep.mu)},
                          {"nu", to_json(rep.nu)},         {"Vprime", to_json(rep.Vprime)},
                          {"Vhatprime", to_json(rep.Vhatprime)}, {"W", to_json(rep.W)},
                          {"G", to_json(rep.G)},           {"U_G", to_json(rep.U_G)}};
        CoxPresentation cox = cox_presentation(rep);
        q["cox_action"] = render_cox_action(cox);
        q["cox_free_weights"] = to_json(cox.free_weights);
        q["cox_torsion_rows"] = to_json(cox.torsion_rows);
        q["cox_torsion_moduli"] = to_json(cox.torsion_moduli);
        j["quotient"] = q;
    } else {
        j["quotient"] = nullptr;
    }
    mark("quotient", tstage);

    if (opt.timings) {
        Json t;
        for (const auto& [k, v] : stage_ms) t[k] = v;
        j["timings"] = t;
    } else {
        j["timings"] = Json::object();
    }

    return AnalysisReport{std::move(j)};
}

}  // namespace galekit
