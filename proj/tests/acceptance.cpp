// Acceptance suite: one verdict line per criterion, nonzero exit when any
// fails. All tolerances are exact; everything runs on exact arithmetic.

#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "galekit/report.hpp"
#include "worked_examples.hpp"

using namespace galekit;

namespace {

int failures = 0;
std::ostringstream detail;

void criterion(int id, const std::string& name, bool ok) {
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << " - " << name << "\n";
    if (!ok) {
        ++failures;
        std::string d = detail.str();
        if (!d.empty()) std::cout << d;
    }
    detail.str("");
}

bool expect(bool ok, const std::string& what) {
    if (!ok) detail << "    failed: " << what << "\n";
    return ok;
}

std::vector<std::vector<int>> one_based(std::initializer_list<std::initializer_list<int>> init) {
    std::vector<std::vector<int>> out;
    for (const auto& s : init) {
        std::vector<int> v;
        for (int i : s) v.push_back(i - 1);
        std::sort(v.begin(), v.end());
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Chamber* find_chamber(const std::vector<Chamber>& moving,
                            std::initializer_list<std::initializer_list<long long>> rays) {
    std::vector<IntVec> want;
    for (const auto& r : rays) {
        IntVec v;
        for (long long x : r) v.emplace_back(x);
        want.push_back(v);
    }
    std::sort(want.begin(), want.end());
    for (const Chamber& c : moving)
        if (c.cone.rays() == want) return &c;
    return nullptr;
}

IntVec iv(std::initializer_list<long long> xs) {
    IntVec v;
    for (long long x : xs) v.emplace_back(x);
    return v;
}

// ---- random instances for the property suites ----

struct Instance {
    IntMat V, Q;
};

std::vector<Instance> random_instances(size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> entry(-2, 2);
    std::vector<Instance> out;
    while (out.size() < count) {
        int n = 2 + int(rng() % 3);  // 2..4
        int r = 2 + int(rng() % 2);  // 2..3
        if (n + r > 7) continue;
        IntMat V(n, n + r);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n + r; ++j) V(i, j) = entry(rng);
        FanMatrixFlags f;
        try {
            f = check_F(V);
        } catch (const std::exception&) {
            continue;
        }
        if (!f.is_F()) continue;
        try {
            auto [vr, qr] = reduce_fan(V);
            if (!check_W(qr).is_W()) continue;
            out.push_back({vr, qr});
        } catch (const std::exception&) {
            continue;  // kernel order admits no positive REF basis: resample
        }
    }
    return out;
}

}  // namespace

int main() {
    // 1. Gale duality goldens
    {
        bool ok = true;
        ok &= expect(lattice_equal(gale_dual(testdata::noconverse_V()), testdata::noconverse_Q()),
                     "noconverse pair");
        ok &= expect(lattice_equal(gale_dual(testdata::ptb_V()), testdata::ptb_Q()), "ptb pair");
        ok &= expect(lattice_equal(gale_dual(testdata::nototmaxbord_V()), testdata::nototmaxbord_Q()),
                     "nototmaxbord pair");
        ok &= expect(lattice_equal(gale_dual(testdata::nowptb_V()), testdata::nowptb_Q()),
                     "nowptb pair");
        ok &= expect(lattice_equal(gale_dual(testdata::wptb_b_V()), testdata::wptb_b_Q()),
                     "case (b) pair");
        ok &= expect(lattice_equal(gale_dual(testdata::wptb_c_V()), testdata::wptb_c_Q()),
                     "case (c) pair");
        ok &= expect(lattice_equal(gale_dual(testdata::quot_V()), testdata::wptb_b_Q()),
                     "torsion example pair");
        ok &= expect(gale_dual(testdata::noconverse_Q()) == testdata::noconverse_V(),
                     "noconverse reverse direction");
        ok &= expect(gale_dual(testdata::wptb_b_Q()) == testdata::wptb_b_V(),
                     "case (b) reverse direction");
        criterion(1, "Gale duality reproduces the reference matrix pairs", ok);
    }

    // 2. chamber counts
    {
        auto count = [](const IntMat& q) {
            return moving_chambers(enumerate_chambers(q)).size();
        };
        bool ok = true;
        ok &= expect(count(testdata::ptb_Q()) == 2, "ptb: 2 chambers");
        ok &= expect(count(testdata::nototmaxbord_Q()) == 4, "nototmaxbord: 4 chambers");
        ok &= expect(count(testdata::nowptb_Q()) == 1, "nowptb: 1 chamber");
        ok &= expect(count(testdata::wptb_b_Q()) == 8, "case (b): 8 chambers");
        ok &= expect(count(testdata::wptb_c_Q()) == 12, "case (c): 12 chambers");
        criterion(2, "chamber counts inside the moving cones", ok);
    }

    // 3. fan goldens of the bundle example
    {
        auto moving = moving_chambers(enumerate_chambers(testdata::ptb_Q()));
        const Chamber* g1 = find_chamber(moving, {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}});
        const Chamber* g2 = find_chamber(moving, {{1, 1, 0}, {1, 1, 1}, {1, 0, 1}});
        bool ok = expect(g1 && g2, "chambers located");
        if (ok) {
            ok &= expect(g1->fan.max_cones == one_based({{1, 4, 5},
                                                         {1, 3, 5},
                                                         {2, 4, 5},
                                                         {2, 3, 5},
                                                         {2, 4, 6},
                                                         {2, 3, 6},
                                                         {1, 4, 6},
                                                         {1, 3, 6}}),
                         "Sigma_1 maximal cones");
            ok &= expect(g2->fan.max_cones == one_based({{1, 4, 5},
                                                         {1, 3, 5},
                                                         {2, 4, 5},
                                                         {2, 3, 5},
                                                         {1, 2, 4},
                                                         {2, 3, 6},
                                                         {1, 3, 6},
                                                         {1, 2, 6}}),
                         "Sigma_2 maximal cones");
        }
        criterion(3, "reference fans of both bundle-example chambers", ok);
    }

    // 4. complete fan enumeration
    {
        bool ok = true;
        std::vector<SimplicialFan> fb = enumerate_complete_fans(testdata::wptb_b_V());
        ok &= expect(fb.size() == 10, "case (b): 10 complete fans");
        std::set<std::vector<std::vector<int>>> proj_b;
        for (const Chamber& c : moving_chambers(enumerate_chambers(testdata::wptb_b_Q())))
            proj_b.insert(c.fan.max_cones);
        auto sigma9 = one_based({{2, 3, 4, 7}, {2, 3, 4, 6}, {2, 3, 5, 7}, {2, 3, 5, 6},
                                 {1, 3, 4, 7}, {1, 2, 4, 7}, {1, 3, 4, 6}, {1, 2, 4, 6},
                                 {1, 3, 5, 7}, {1, 2, 5, 7}, {1, 3, 5, 6}, {1, 2, 5, 6}});
        auto sigma10 = one_based({{2, 4, 5, 7}, {2, 4, 6, 7}, {2, 3, 5, 7}, {2, 3, 6, 7},
                                  {1, 4, 5, 7}, {1, 4, 6, 7}, {1, 2, 4, 5}, {1, 2, 4, 6},
                                  {1, 3, 5, 7}, {1, 2, 3, 5}, {1, 2, 3, 6}, {1, 3, 6, 7}});
        std::set<std::vector<std::vector<int>>> nonproj_b;
        for (const SimplicialFan& f : fb)
            if (!proj_b.count(f.max_cones)) nonproj_b.insert(f.max_cones);
        ok &= expect(nonproj_b == std::set<std::vector<std::vector<int>>>{sigma9, sigma10},
                     "case (b): the two reference non-projective fans");
        for (const auto& mc : nonproj_b) {
            SimplicialFan f;
            f.n = 4;
            f.max_cones = mc;
            ChamberOfFan cf = chamber_of_fan(testdata::wptb_b_Q(), f);
            ok &= expect(!cf.projective && cf.gamma.dim() == 1 &&
                             cf.gamma.rays() == std::vector<IntVec>{iv({1, 2, 2})},
                         "case (b): bunch intersection is the ray (1,2,2)");
        }

        std::vector<SimplicialFan> fc = enumerate_complete_fans(testdata::wptb_c_V());
        ok &= expect(fc.size() == 13, "case (c): 13 complete fans");
        std::set<std::vector<std::vector<int>>> proj_c;
        for (const Chamber& c : moving_chambers(enumerate_chambers(testdata::wptb_c_Q())))
            proj_c.insert(c.fan.max_cones);
        auto sigma13 = one_based({{3, 4, 5, 7}, {3, 4, 6, 7}, {2, 3, 5, 7}, {2, 3, 5, 6},
                                  {2, 3, 6, 7}, {2, 4, 5, 7}, {2, 4, 6, 7}, {1, 3, 4, 5},
                                  {1, 3, 5, 6}, {1, 3, 4, 6}, {1, 2, 4, 5}, {1, 2, 5, 6},
                                  {1, 2, 4, 6}});
        int nonproj_count = 0;
        bool sigma13_found = false, zero_cone = false;
        for (const SimplicialFan& f : fc)
            if (!proj_c.count(f.max_cones)) {
                ++nonproj_count;
                if (f.max_cones == sigma13) {
                    sigma13_found = true;
                    ChamberOfFan cf = chamber_of_fan(testdata::wptb_c_Q(), f);
                    zero_cone = !cf.projective && cf.gamma.dim() == 0;
                }
            }
        ok &= expect(nonproj_count == 1 && sigma13_found, "case (c): the reference non-projective fan");
        ok &= expect(zero_cone, "case (c): its bunch intersection is the zero cone");
        criterion(4, "complete-fan enumeration finds the non-projective fans", ok);
    }

    // 5. primitive collections
    {
        bool ok = true;
        IntMat V = testdata::noconverse_V(), Q = testdata::noconverse_Q();
        auto nc = moving_chambers(enumerate_chambers(Q));
        auto pcs = collections_of(nc[0].fan, V, Q);
        ok &= expect(pcs.size() == 2 && pcs[0].indices == std::vector<int>{0, 1} &&
                         pcs[1].indices == std::vector<int>{2, 3},
                     "noconverse: collections {1,2},{3,4}");
        ok &= expect(pcs[0].relation == iv({1, 1, 0, -1}), "noconverse: relation (1,1,0,-1)");
        ok &= expect(pcs[1].relation == iv({-1, 0, 1, 2}), "noconverse: relation (-1,0,1,2)");

        auto wb = moving_chambers(enumerate_chambers(testdata::wptb_b_Q()));
        const Chamber* g8 = find_chamber(wb, {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
        ok &= expect(g8 != nullptr, "case (b): maxbord chamber located");
        if (g8) {
            auto p8 = collections_of(g8->fan, testdata::wptb_b_V(), testdata::wptb_b_Q());
            ok &= expect(p8.size() == 3 && p8[0].indices == std::vector<int>{0, 1} &&
                             p8[1].indices == std::vector<int>{2, 3} &&
                             p8[2].indices == std::vector<int>{4, 5, 6},
                         "case (b): collections {1,2},{3,4},{5,6,7}");
            ok &= expect(p8[2].is_nef && p8[2].relation == testdata::wptb_b_Q().row(2),
                         "case (b): nef relation equals the bottom row of Q");
        }

        auto ptb = moving_chambers(enumerate_chambers(testdata::ptb_Q()));
        const Chamber* g1 = find_chamber(ptb, {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}});
        const Chamber* g2 = find_chamber(ptb, {{1, 1, 0}, {1, 1, 1}, {1, 0, 1}});
        ok &= expect(g1 && collections_of(g1->fan, testdata::ptb_V(), testdata::ptb_Q()).size() == 3,
                     "Sigma_1: 3 collections");
        ok &= expect(g2 && collections_of(g2->fan, testdata::ptb_V(), testdata::ptb_Q()).size() == 5,
                     "Sigma_2: 5 collections");
        criterion(5, "primitive collections and reference relations", ok);
    }

    // 6. border taxonomy
    {
        bool ok = true;
        auto nc = moving_chambers(enumerate_chambers(testdata::noconverse_Q()));
        ok &= expect(classify_border(nc[0], testdata::noconverse_Q()).kind == BorderKind::interior,
                     "noconverse: interior");
        auto nw = moving_chambers(enumerate_chambers(testdata::nowptb_Q()));
        BorderInfo bnw = classify_border(nw[0], testdata::nowptb_Q());
        ok &= expect(bnw.kind == BorderKind::intbord && bnw.maxbord_hyperplanes.empty(),
                     "nowptb: intbord, not maxbord");
        auto ptb = moving_chambers(enumerate_chambers(testdata::ptb_Q()));
        const Chamber* g1 = find_chamber(ptb, {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}});
        ok &= expect(g1 && classify_border(*g1, testdata::ptb_Q()).kind == BorderKind::totally_maxbord,
                     "bundle example gamma_1: totally maxbord");
        auto wb = moving_chambers(enumerate_chambers(testdata::wptb_b_Q()));
        const Chamber* g8 = find_chamber(wb, {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
        ok &= expect(g8 && classify_border(*g8, testdata::wptb_b_Q()).kind ==
                               BorderKind::recursively_maxbord,
                     "case (b) gamma_8: recursively maxbord");
        auto wc = moving_chambers(enumerate_chambers(testdata::wptb_c_Q()));
        const Chamber* g5 = find_chamber(wc, {{0, 1, 1}, {0, 1, 2}, {1, 12, 12}});
        const Chamber* g10 = find_chamber(wc, {{1, 2, 0}, {1, 6, 0}, {1, 6, 4}});
        ok &= expect(g5 && classify_border(*g5, testdata::wptb_c_Q()).kind == BorderKind::maxbord,
                     "case (c) gamma_5: maxbord, not recursively");
        ok &= expect(g10 && classify_border(*g10, testdata::wptb_c_Q()).kind == BorderKind::maxbord,
                     "case (c) gamma_10: maxbord, not recursively");
        criterion(6, "bordering taxonomy labels", ok);
    }

    // 7. decomposition numerics
    {
        bool ok = true;
        auto wb = moving_chambers(enumerate_chambers(testdata::wptb_b_Q()));
        const Chamber* g8 = find_chamber(wb, {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
        if (expect(g8 != nullptr, "case (b): chamber located")) {
            BundleDecomposition dec =
                decompose_maxbord(testdata::wptb_b_Q(), *g8, iv({0, 0, 1}));
            ok &= expect(dec.base_case == BaseCase::b, "case label b");
            IntVec bdiag;
            for (int i = 0; i < 7; ++i) bdiag.push_back(dec.cover ? dec.cover->B(i, i) : Int(0));
            ok &= expect(bdiag == iv({1, 1, 2, 1, 2, 2, 2}), "B = diag(1,1,2,1,2,2,2)");
            ok &= expect(dec.cover && dec.cover->index == 4, "covering index 4");
        } else {
            ok = false;
        }

        auto wc = moving_chambers(enumerate_chambers(testdata::wptb_c_Q()));
        const Chamber* g10 = find_chamber(wc, {{1, 2, 0}, {1, 6, 0}, {1, 6, 4}});
        if (expect(g10 != nullptr, "case (c): gamma_10 located")) {
            BundleDecomposition dec =
                decompose_maxbord(testdata::wptb_c_Q(), *g10, iv({0, 0, 1}));
            ok &= expect(dec.base_case == BaseCase::c, "case label c");
            ok &= expect(dec.cover && dec.cover->index == 2, "covering index 2");
            ok &= expect(dec.cartier == iv({1, 6, 6}), "Cartier indices (1,6,6)");
            bool lam = dec.wptwb.has_value();
            if (lam) {
                IntVec ldiag;
                for (int i = 0; i < 7; ++i) ldiag.push_back(dec.wptwb->Lambda(i, i));
                lam = (ldiag == iv({1, 1, 1, 1, 6, 6, 6}));
            }
            ok &= expect(lam, "Lambda = diag(1,1,1,1,6,6,6)");
            ok &= expect(dec.wptwb && dec.wptwb->galois_order == 36 &&
                             det_abs(dec.wptwb->Phi) == 36,
                         "Galois order 36 = |det Phi|");
        } else {
            ok = false;
        }

        const Chamber* g5 = find_chamber(wc, {{0, 1, 1}, {0, 1, 2}, {1, 12, 12}});
        if (expect(g5 != nullptr, "case (c): gamma_5 located")) {
            BundleDecomposition dec = decompose_maxbord(testdata::wptb_c_Q(), *g5, iv({1, 0, 0}));
            ok &= expect(dec.base_case == BaseCase::a && dec.W == iv({1, 1, 1}),
                         "gamma_5: case a with W = (1,1,1)");
        } else {
            ok = false;
        }
        criterion(7, "bundle decomposition numerics", ok);
    }

    // 8. quotient pipeline
    {
        bool ok = true;
        PinnedTransforms pins;
        pins.U = IntMat{{-13, 36, 7, -2}, {-26, 92, 16, -5}, {-22, 83, 17, -5}, {-30, 105, 20, -6}};
        pins.Uhat = IntMat::identity(4);
        pins.mu = IntMat{{-1, 1, 0, 0}, {14, -18, 1, 0}, {8, -22, -3, 1}, {-30, 105, 20, -6}};
        pins.nu = IntMat{{1, -1, 4, 20}, {0, 1, -5, -27}, {0, 0, 1, 6}, {0, 0, 0, 1}};
        pins.W = IntMat{{-1, 0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0},
                        {0, 0, 0, 1, 0, 0, 0},  {0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 0, 1, 0},
                        {0, 0, 0, 0, 0, 0, 1}};
        pins.U_G = IntMat{{1, 0, 0, 1, 0, 0},  {0, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0},
                          {-1, 0, 0, 0, 0, 0}, {1, 0, 0, 1, 1, 0}, {-1, 0, 0, -1, 0, 1}};
        QuotientReport rep = torsion_pipeline(testdata::quot_V(), pins);
        ok &= expect(rep.Delta == IntMat{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 30}},
                     "Delta = diag(1,1,1,30)");
        ok &= expect(rep.Gamma == IntMat{{1, 1, 0, 0, 1, 0, 0}},
                     "pinned Gamma = (1,1,0,0,1,0,0) mod 30");
        Int prod = 1;
        for (const Int& f : snf(testdata::quot_V()).invariant_factors()) prod *= f;
        ok &= expect(prod == 30, "product of invariant factors of V is 30");
        auto wb = moving_chambers(enumerate_chambers(testdata::wptb_b_Q()));
        SingularityProfile p =
            singularity_profile(testdata::quot_V(), testdata::wptb_b_Q(), wb[0].fan);
        ok &= expect(p.delta == 30, "determinant correspondence constant is 30");
        criterion(8, "quotient pipeline with pinned transforms", ok);
    }

    // 9. randomized property suites
    {
        bool ok = true;
        std::vector<Instance> corpus = random_instances(200, 20250810);

        // determinant correspondence with a single constant
        for (const Instance& ins : corpus) {
            Int delta = 1;
            for (const Int& f : snf(ins.V).invariant_factors()) delta *= f;
            int r = ins.Q.rows(), c = ins.Q.cols();
            std::vector<int> J(r);
            std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
                if (pos == r) {
                    return delta * det_abs(ins.Q.cols_selected(J)) ==
                           det_abs(ins.V.cols_dropped(J));
                }
                for (int j = start; j < c; ++j) {
                    J[pos] = j;
                    if (!rec(pos + 1, j + 1)) return false;
                }
                return true;
            };
            if (!rec(0, 0)) {
                ok = expect(false, "determinant correspondence failed");
                break;
            }
        }

        // chamber/fan round trip, nef cone via collections, positivity
        // against nef divisors, maxbord vs disjoint nef collection
        for (const Instance& ins : corpus) {
            auto moving = moving_chambers(enumerate_chambers(ins.Q));
            for (const Chamber& ch : moving) {
                ChamberOfFan back = chamber_of_fan(ins.Q, ch.fan);
                if (!(back.projective && back.gamma == ch.cone)) {
                    ok = expect(false, "chamber/fan round trip failed");
                    break;
                }
                auto pcs = collections_of(ch.fan, ins.V, ins.Q);
                Cone nef = nef_cone_via_collections(ch.fan, ins.V, ins.Q);
                if (!(nef == ch.cone)) {
                    ok = expect(false, "nef cone via collections differs from the chamber");
                    break;
                }
                for (const PrimitiveCollection& pc : pcs)
                    for (const IntVec& ray : ch.cone.rays()) {
                        Int s = 0;
                        for (size_t i = 0; i < ray.size(); ++i)
                            s += pc.numerical_class[i] * ray[i];
                        if (s < 0) ok = expect(false, "chamber leaves a positive half-space");
                    }
                bool maxbord = !classify_border_basic(ch, ins.Q).maxbord_hyperplanes.empty();
                bool disjoint_nef = false;
                for (const PrimitiveCollection& pc : pcs) {
                    if (!pc.is_nef) continue;
                    bool disjoint = true;
                    for (const PrimitiveCollection& other : pcs) {
                        if (other.indices == pc.indices) continue;
                        std::vector<int> common;
                        std::set_intersection(pc.indices.begin(), pc.indices.end(),
                                              other.indices.begin(), other.indices.end(),
                                              std::back_inserter(common));
                        if (!common.empty()) disjoint = false;
                    }
                    if (disjoint) disjoint_nef = true;
                }
                if (maxbord != disjoint_nef)
                    ok = expect(false, "maxbord does not match the disjoint nef collection");
            }
            if (!ok) break;
        }

        // rank-2 Fano criterion against the relative-interior oracle
        {
            std::mt19937_64 rng(424242);
            for (int iter = 0; iter < 200 && ok; ++iter) {
                int a = 1 + int(rng() % 3);
                int b = 1 + int(rng() % 2);
                if (a + b > 4) continue;
                int n2 = a + b + 2;
                IntMat Qk(2, n2);
                for (int j = 0; j <= a; ++j) Qk(0, j) = 1;
                std::vector<long long> cs(b);
                for (int k = 0; k < b; ++k) cs[k] = long(rng() % 3);
                std::sort(cs.begin(), cs.end());
                for (int k = 0; k < b; ++k) Qk(0, a + 2 + k) = -cs[k];
                for (int j = a + 1; j < n2; ++j) Qk(1, j) = 1;
                IntMat Qp = positive_ref(Qk);
                IntMat Vk = gale_dual(Qk);
                for (const Chamber& ch : moving_chambers(enumerate_chambers(Qp))) {
                    if (!singularity_profile(Vk, Qp, ch.fan).non_singular) continue;
                    KleinschmidtForm form = kleinschmidt_form_of_chamber(Qp, ch);
                    if (is_fano_rank2(form) != q_fano(Qp, ch))
                        ok = expect(false, "rank-2 Fano criterion disagrees with the oracle");
                }
            }
        }
        criterion(9, "randomized property suites (200+ instances)", ok);
    }

    // 10. negative control
    {
        AnalysisReport r = analyze(testdata::nowptb_Q(), MatrixKind::weight);
        const Json& b = r.json["bir_wptb"];
        bool ok = expect(b["flip_equivalent_to_wptb_cover"] == false,
                         "not flip-equivalent to a WPTB cover");
        ok &= expect(b["bordering_failures"].size() == 1 &&
                         b["bordering_failures"][0]["failed_condition"] == "condition_f_mixed_pair",
                     "the exact failure condition is named");
        criterion(10, "negative control: the obstructed example", ok);
    }

    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
