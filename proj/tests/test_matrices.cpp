#include "galekit/matrices.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "worked_examples.hpp"

using namespace galekit;

TEST_CASE("fan matrix classification") {
    FanMatrixFlags f1 = check_F(testdata::quot_V());
    CHECK(f1.is_F());
    CHECK_FALSE(f1.is_CF());
    CHECK(f1.reduced);

    FanMatrixFlags f2 = check_F(testdata::wptb_b_V());
    CHECK(f2.is_F());
    CHECK(f2.is_CF());
    CHECK(f2.reduced);

    IntMat zero_col{{1, 0, 0}, {0, 0, 1}};
    FanMatrixFlags f3 = check_F(zero_col);
    CHECK_FALSE(f3.nonzero_columns);
    CHECK_FALSE(f3.is_F());

    CHECK_THROWS(check_F(IntMat{{1, 0}, {0, 1}}));
}

TEST_CASE("weight matrix classification") {
    WeightMatrixFlags w1 = check_W(testdata::noconverse_Q());
    CHECK(w1.is_W());
    CHECK(w1.reduced);
    CHECK(w1.positive_ref);

    // the obstructed submatrix from the no-bundle example
    IntMat Qp{{1, 1, 0}, {0, 1, 1}};
    WeightMatrixFlags w2 = check_W(Qp);
    CHECK_FALSE(w2.is_W());
    CHECK_FALSE(w2.no_mixed_pair);
    REQUIRE(w2.witness.has_value());
    CHECK((*w2.witness == IntVec{Int(1), Int(0), Int(-1)} ||
           *w2.witness == IntVec{Int(-1), Int(0), Int(1)}));

    WeightMatrixFlags w3 = check_W(IntMat::identity(2));
    CHECK_FALSE(w3.is_W());
    CHECK_FALSE(w3.no_unit_vector);

    for (const IntMat& q : {testdata::ptb_Q(), testdata::nototmaxbord_Q(), testdata::nowptb_Q(),
                            testdata::wptb_b_Q(), testdata::wptb_c_Q()})
        CHECK(check_W(q).is_W());
}

TEST_CASE("gale duality reproduces all reference matrix pairs") {
    struct Pair {
        IntMat V, Q;
    };
    std::vector<Pair> pairs = {
        {testdata::noconverse_V(), testdata::noconverse_Q()},
        {testdata::ptb_V(), testdata::ptb_Q()},
        {testdata::nototmaxbord_V(), testdata::nototmaxbord_Q()},
        {testdata::nowptb_V(), testdata::nowptb_Q()},
        {testdata::wptb_b_V(), testdata::wptb_b_Q()},
        {testdata::wptb_c_V(), testdata::wptb_c_Q()},
    };
    for (const Pair& p : pairs) {
        CHECK(lattice_equal(gale_dual(p.V), p.Q));
        // the reference fan matrices are the canonical kernels of their Q
        CHECK(gale_dual(p.Q) == p.V);
    }
    // the non-CF example: its Gale dual carries the lattice of the case (b)
    // weight matrix and its 1-covering fan matrix is the case (b) fan matrix
    CHECK(lattice_equal(gale_dual(testdata::quot_V()), testdata::wptb_b_Q()));
    CHECK(gale_dual(positive_ref(gale_dual(testdata::quot_V()))) == testdata::wptb_b_V());
}

TEST_CASE("positive REF form") {
    // fixed point
    CHECK(positive_ref(testdata::ptb_Q()) == testdata::ptb_Q());

    // the kernel rows of the torsion example admit the reference positive form
    IntMat K = gale_dual(testdata::quot_V());
    IntMat P = positive_ref(K);
    CHECK(lattice_equal(P, testdata::wptb_b_Q()));
    CHECK(is_positive_matrix(P));
    CHECK(is_ref(P));

    CHECK(positive_ref(IntMat{{1, -1, 0}, {0, 1, 1}}) == IntMat{{1, 0, 1}, {0, 1, 1}});
    CHECK_FALSE(try_positive_ref(IntMat{{1, -1}}).has_value());

    // output of positive_ref passes check_W when the input does
    for (const IntMat& q : {testdata::ptb_Q(), testdata::wptb_b_Q(), testdata::wptb_c_Q()}) {
        IntMat p = positive_ref(q);
        CHECK(check_W(p).is_W());
        CHECK(lattice_equal(p, q));
    }
}

TEST_CASE("reduction divides columns by their content") {
    IntMat V{{1, 0, -1, 2}, {0, 1, -2, 2}};
    auto [vr, qr] = reduce_fan(V);
    CHECK(vr == IntMat{{1, 0, -1, 1}, {0, 1, -2, 1}});
    CHECK(lattice_equal(qr, gale_dual(vr)));
    CHECK(is_positive_matrix(qr));

    auto [vr2, qr2] = reduce_fan(testdata::noconverse_V());
    CHECK(vr2 == testdata::noconverse_V());
}

TEST_CASE("bordering transform fixed point and permutation") {
    IntMat Q = testdata::ptb_Q();

    // H_3 with inward normal (0,0,1): already normalized
    BorderingTransform t3 = transform_bordering(Q, IntVec{Int(0), Int(0), Int(1)});
    CHECK(t3.alpha == IntMat::identity(3));
    CHECK(t3.Q_new == Q);
    CHECK(t3.column_order == std::vector<int>{0, 1, 2, 3, 4, 5});

    // H_2: the columns on the hyperplane move to the front; the bottom row
    // of the result is supported on the original columns 3 and 4
    BorderingTransform t2 = transform_bordering(Q, IntVec{Int(0), Int(1), Int(0)});
    CHECK(t2.column_order == std::vector<int>{0, 1, 4, 5, 2, 3});
    CHECK(is_positive_matrix(t2.Q_new));
    CHECK(is_ref(t2.Q_new));
    for (int j = 0; j < 4; ++j) CHECK(t2.Q_new(2, j) == 0);
    for (int j = 4; j < 6; ++j) CHECK(t2.Q_new(2, j) > 0);
    CHECK(t2.alpha.mul(Q.cols_selected(t2.column_order)) == t2.Q_new);

    CHECK_THROWS(transform_bordering(Q, IntVec{Int(1), Int(1), Int(1)}));
}

TEST_CASE("bordering transform on the broken-symmetry example") {
    IntMat Q = testdata::wptb_c_Q();
    // the facet cut by the first coordinate hyperplane
    BorderingTransform t = transform_bordering(Q, IntVec{Int(1), Int(0), Int(0)});
    CHECK(t.column_order == std::vector<int>{3, 4, 5, 6, 0, 1, 2});
    CHECK(is_positive_matrix(t.Q_new));
    CHECK(is_ref(t.Q_new));
    for (int j = 0; j < 4; ++j) CHECK(t.Q_new(2, j) == 0);
    IntVec w = {t.Q_new(2, 4), t.Q_new(2, 5), t.Q_new(2, 6)};
    CHECK(w == IntVec{Int(1), Int(1), Int(1)});
    CHECK(lattice_equal(t.Q_new, Q.cols_selected(t.column_order)));
}

TEST_CASE("determinant correspondence over all column subsets") {
    // delta * |det Q_J| == |det V^J|, delta == 1 iff V is a CF-matrix
    struct Row {
        IntMat V, Q;
        Int delta;
    };
    std::vector<Row> rows = {
        {testdata::noconverse_V(), testdata::noconverse_Q(), Int(1)},
        {testdata::ptb_V(), testdata::ptb_Q(), Int(1)},
        {testdata::nototmaxbord_V(), testdata::nototmaxbord_Q(), Int(1)},
        {testdata::nowptb_V(), testdata::nowptb_Q(), Int(1)},
        {testdata::wptb_b_V(), testdata::wptb_b_Q(), Int(1)},
        {testdata::wptb_c_V(), testdata::wptb_c_Q(), Int(1)},
        {testdata::quot_V(), testdata::wptb_b_Q(), Int(30)},
    };
    for (const Row& row : rows) {
        int r = row.Q.rows(), c = row.Q.cols();
        std::vector<int> J(r);
        std::function<void(int, int)> rec = [&](int pos, int start) {
            if (pos == r) {
                Int dq = det_abs(row.Q.cols_selected(J));
                Int dv = det_abs(row.V.cols_dropped(J));
                CHECK(row.delta * dq == dv);
                return;
            }
            for (int j = start; j < c; ++j) {
                J[pos] = j;
                rec(pos + 1, j + 1);
            }
        };
        rec(0, 0);
    }
}
