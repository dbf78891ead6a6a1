#pragma once

#include "galekit/secfan.hpp"

namespace galekit {

// Optional externally supplied transformation matrices. Every intermediate
// of the torsion trace that is only unique up to a unimodular choice can be
// pinned; each pin is validated against the unique normal form it produces.
struct PinnedTransforms {
    std::optional<IntMat> U;     // row HNF transform of V
    std::optional<IntMat> Uhat;  // row HNF transform of Vhat
    std::optional<IntMat> mu, nu;  // SNF transforms of beta
    std::optional<IntMat> W;     // HNF transform of (^sV')^T
    std::optional<IntMat> U_G;   // HNF transform of G^T
};

struct QuotientReport {
    IntMat V;      // input fan matrix
    IntMat Q;      // positive REF Gale dual
    IntMat Vhat;   // fan matrix of the universal 1-covering, a CF-matrix
    IntVec torsion_factors;  // nontrivial invariant factors of beta
    int s = 0;
    IntMat Gamma;  // s x (n+r); row i lives mod torsion_factors[i]
    bool experimental_multifactor = false;

    // trace
    IntMat H, U, Hhat, Uhat, beta_H, beta, Delta, mu, nu;
    IntMat Vprime, Vhatprime, W, G, U_G;
};

// Q = Gale dual (positive REF whenever the column order admits one) and
// the CF fan matrix of the 1-covering.
inline std::pair<IntMat, IntMat> universal_covering(const IntMat& V) {
    FanMatrixFlags f = check_F(V);
    if (!f.is_F()) throw std::invalid_argument("universal_covering: input is not an F-matrix");
    IntMat K = gale_dual(V);
    auto pos = try_positive_ref(K);
    IntMat Q = pos ? *pos : K;
    IntMat Vhat = gale_dual(Q);
    return {Q, Vhat};
}

namespace detail {

inline void validate_pin(const IntMat& pinned, const IntMat& target, const IntMat& normal_form,
                         const char* name) {
    if (!is_unimodular(pinned)) throw std::invalid_argument(std::string(name) + ": pin not unimodular");
    if (pinned.mul(target) != normal_form)
        throw std::invalid_argument(std::string(name) + ": pin does not produce the normal form");
}

}  // namespace detail

// The torsion trace: H = HNF(V), beta assembled from its pivot columns,
// Delta = SNF(beta), then the residue matrix Gamma read off through the
// HNF transforms of the upper rows of V' = mu V against the lower rows of
// Vhat' = nu^{-1} Vhat. With s > 1 nontrivial factors the same block recipe
// is applied; that generalization is reported as experimental.
inline QuotientReport torsion_pipeline(const IntMat& V, const PinnedTransforms& pins = {}) {
    QuotientReport rep;
    rep.V = V;
    auto [Q, Vhat] = universal_covering(V);
    rep.Q = Q;
    rep.Vhat = Vhat;
    int n = V.rows(), c = V.cols();

    HnfResult hv = hnf_rows(V);
    rep.H = hv.H;
    rep.U = hv.U;
    if (pins.U) {
        detail::validate_pin(*pins.U, V, rep.H, "U");
        rep.U = *pins.U;
    }
    HnfResult hvh = hnf_rows(Vhat);
    rep.Hhat = hvh.H;
    rep.Uhat = hvh.U;
    if (pins.Uhat) {
        detail::validate_pin(*pins.Uhat, Vhat, rep.Hhat, "Uhat");
        rep.Uhat = *pins.Uhat;
    }

    if (hv.pivot_cols != hvh.pivot_cols)
        throw std::runtime_error("torsion_pipeline: pivot columns of V and Vhat disagree");
    rep.beta_H = rep.H.cols_selected(hv.pivot_cols);
    IntMat beta_H_hat = rep.Hhat.cols_selected(hvh.pivot_cols);
    // beta expresses V = beta * Vhat; the pivot-column factor of Hhat is the
    // identity in the worked example but not in general
    RatMat br = RatMat::from_int(inverse_unimodular(rep.U))
                    .mul(RatMat::from_int(rep.beta_H))
                    .mul(inverse(beta_H_hat))
                    .mul(RatMat::from_int(rep.Uhat));
    if (!br.is_integral()) throw std::runtime_error("torsion_pipeline: beta is not integral");
    rep.beta = br.to_int();
    if (rep.beta.mul(rep.Vhat) != V)
        throw std::runtime_error("torsion_pipeline: beta does not factor V through Vhat");

    SnfResult sb = snf(rep.beta);
    rep.Delta = sb.D;
    rep.mu = sb.mu;
    rep.nu = sb.nu;
    if (pins.mu || pins.nu) {
        if (!(pins.mu && pins.nu))
            throw std::invalid_argument("torsion_pipeline: mu and nu must be pinned together");
        if (!is_unimodular(*pins.mu) || !is_unimodular(*pins.nu))
            throw std::invalid_argument("torsion_pipeline: pinned SNF transforms not unimodular");
        if (pins.mu->mul(rep.beta).mul(*pins.nu) != rep.Delta)
            throw std::invalid_argument("torsion_pipeline: pinned transforms do not give the SNF");
        rep.mu = *pins.mu;
        rep.nu = *pins.nu;
    }

    rep.torsion_factors = IntVec{};
    for (int i = 0; i < n; ++i)
        if (rep.Delta(i, i) != 1) rep.torsion_factors.push_back(rep.Delta(i, i));
    rep.s = int(rep.torsion_factors.size());
    if (rep.s == 0) return rep;
    rep.experimental_multifactor = (rep.s > 1);

    // both primed matrices are bases of the covering lattice: the reference
    // trace applies mu to the covering fan matrix, not to V itself
    rep.Vprime = rep.mu.mul(Vhat);
    rep.Vhatprime = inverse_unimodular(rep.nu).mul(Vhat);

    IntMat upper = rep.Vprime.top_rows(rep.s);  // ^sV'
    HnfResult hw = hnf_rows(upper.transpose());
    rep.W = hw.U;
    if (pins.W) {
        detail::validate_pin(*pins.W, upper.transpose(), hw.H, "W");
        rep.W = *pins.W;
    }

    IntMat lowW = rep.W.bottom_rows(c - rep.s);          // _{n+r-s}W
    rep.G = rep.Vhatprime.bottom_rows(rep.s).mul(lowW.transpose());

    HnfResult hg = hnf_rows(rep.G.transpose());
    rep.U_G = hg.U;
    if (pins.U_G) {
        detail::validate_pin(*pins.U_G, rep.G.transpose(), hg.H, "U_G");
        rep.U_G = *pins.U_G;
    }

    IntMat raw = rep.U_G.top_rows(rep.s).mul(lowW);  // ^sU_G . _{n+r-s}W
    rep.Gamma = IntMat(rep.s, c);
    for (int i = 0; i < rep.s; ++i) {
        const Int& tau = rep.torsion_factors[i];
        for (int j = 0; j < c; ++j) {
            Int v = raw(i, j) % tau;
            if (v < 0) v += tau;
            rep.Gamma(i, j) = v;
        }
        // the torsion action must be faithful on the coordinates
        Int g = tau;
        for (int j = 0; j < c; ++j) g = gcd(g, rep.Gamma(i, j));
        if (g != 1) throw std::runtime_error("torsion_pipeline: torsion row acts unfaithfully");
    }
    return rep;
}

inline IntVec torsion_invariants(const IntMat& V) {
    return torsion_pipeline(V).torsion_factors;
}

struct CoxPresentation {
    IntMat free_weights;     // rows of Q: exponents of the torus factors
    IntMat torsion_rows;     // Gamma
    IntVec torsion_moduli;   // one modulus per torsion row
};

inline CoxPresentation cox_presentation(const QuotientReport& rep) {
    CoxPresentation cox;
    cox.free_weights = rep.Q;
    cox.torsion_rows = rep.Gamma;
    cox.torsion_moduli = rep.torsion_factors;
    return cox;
}

// Human readable quotient action, one factor per Cox coordinate.
inline std::string render_cox_action(const CoxPresentation& cox) {
    std::string out = "(";
    int c = cox.free_weights.cols();
    for (int j = 0; j < c; ++j) {
        if (j) out += ", ";
        std::string term;
        for (int i = 0; i < cox.free_weights.rows(); ++i) {
            const Int& e = cox.free_weights(i, j);
            if (e == 0) continue;
            if (!term.empty()) term += "*";
            term += "t" + std::to_string(i + 1);
            if (e != 1) term += "^" + e.str();
        }
        for (int i = 0; i < cox.torsion_rows.rows(); ++i) {
            const Int& e = cox.torsion_rows(i, j);
            if (e == 0) continue;
            if (!term.empty()) term += "*";
            term += "e" + std::to_string(i + 1);
            if (e != 1) term += "^" + e.str();
        }
        if (term.empty()) term = "1";
        out += term + " x" + std::to_string(j + 1);
    }
    out += ")";
    return out;
}

}  // namespace galekit
