#pragma once
// Finite-precision detection of homomorphisms and endomorphism rings through
// linear coefficients: a candidate c is accepted exactly when the series u
// with log_G(u(X)) = c * log_F(X) has integral coefficients. The solve runs
// degree by degree over the ring, so denominators never stack beyond the
// logarithms' own, and every verdict carries its certified precision.

#include <set>

#include "fgl/formal_group.hpp"

namespace fgl {

struct CIntegralResult {
    enum class Verdict { integral, non_integral, undecidable };
    Verdict verdict = Verdict::undecidable;
    std::optional<Series> witness;  // the homomorphism, when integral
    int witness_prec = 0;           // certified digits of the witness
    long long degree = -1;          // first offending degree otherwise
    int prec_at_degree = 0;         // certified digits at that coefficient
};

// Integrality of the candidate homomorphism F -> G with linear coefficient c.
CIntegralResult c_integral_test(const FormalModule& F, const FormalModule& G,
                                const RingElement& c);

struct HomReport {
    bool nonzero = false;
    std::optional<Series> witness;
    // p^(h * v_p(c)), a heuristic finite-kernel size from the linear
    // coefficient's valuation; not certified
    long long kernel_size_hint = 1;
};

HomReport hom_detect(const FormalModule& F, const FormalModule& G, const RingElement& c);

struct EndoRingReport {
    const UnramifiedRing* ring = nullptr;
    int m = 0;                         // detection depth: residues taken mod p^m
    std::vector<RingElement> found_c;  // canonical lifts, sorted by digits
    int residue_degree = 0;            // F_p-degree of the residue ring generated
    bool full_height = false;          // residue_degree == h
    bool saturated = false;
    int height_h = 0;
};

// Exhaustively tests every residue c mod p^m (the unit candidates are the
// Teichmuller-digit patterns w(1 + p t); testing all residues keeps the run
// self-validating). Ring closure of the detected set is asserted.
EndoRingReport endo_ring(const FormalModule& F, int depth_m = 3);

// Finite-precision proxy for "integrally closed with unramified fraction
// field": p-divisible elements divide down into the set, and the set
// contains the Teichmuller lifts of its own residues.
bool saturation_check(const EndoRingReport& r);

struct IsoSearchResult {
    std::optional<Series> witness;
    std::optional<RingElement> c;  // linear coefficient of the witness
    enum class Absence { none, height_mismatch, no_candidate } absence = Absence::none;
    long long obstruction_degree = -1;  // smallest over the failed candidates
    int cert_prec = 0;
};

// Isomorphism search; delegates to the Lubin-Tate intertwiner when both
// modules carry Frobenius certificates for the same q, otherwise tests unit
// linear coefficients mod p^depth.
IsoSearchResult isomorphism_search(const FormalModule& F, const FormalModule& G, int depth = 3);

}  // namespace fgl
