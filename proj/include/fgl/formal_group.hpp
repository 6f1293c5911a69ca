#pragma once
// Formal group laws and formal modules over an unramified ring: axiom
// verification, group arithmetic on series, multiplication-by-k series,
// height, formal logarithm/exponential, and the solver that extends the
// multiplier action by a root-of-unity endomorphism.

#include <cstdint>
#include <optional>
#include <string>

#include "fgl/series.hpp"

namespace fgl {

struct AxiomViolation {
    enum class Kind { unit, commutativity, associativity };
    Kind kind;
    int i = 0, j = 0, k = 0;  // offending monomial (k only for associativity)
    std::string str() const;
};

// Checks F(X,0)=X and F(0,Y)=Y, F(X,Y)=F(Y,X), and associativity, all to cap.
std::optional<AxiomViolation> check_group_law(const Series2& F);

class FormalGroupLaw {
public:
    static FormalGroupLaw validate(const Series2& F);  // throws on axiom failure
    static FormalGroupLaw trusted(Series2 F);          // caller certifies the axioms

    const Series2& F() const { return F_; }
    const UnramifiedRing& ring() const { return F_.ring(); }
    int cap() const { return F_.cap(); }

private:
    explicit FormalGroupLaw(Series2 F) : F_(std::move(F)) {}
    Series2 F_;
};

struct HeightResult {
    bool exact = true;
    int h = 0;      // height when exact
    int lower = 0;  // "h > lower" bound otherwise

    std::string str() const {
        return exact ? std::to_string(h) : "> " + std::to_string(lower);
    }
    friend bool operator==(const HeightResult& a, const HeightResult& b) {
        return a.exact == b.exact && (a.exact ? a.h == b.h : a.lower == b.lower);
    }
};

// Height read off a multiplication-by-p series alone: p^h is the lowest
// index carrying a unit coefficient. Also asserts that the reduction mod p
// is a series in X^{p^h}.
HeightResult height_from_multiplier(const Series& pi_series);

class FormalModule {
public:
    // Validates: pi(0)=0, pi'(0)=p, pi an endomorphism of F; when omega is
    // present: Teichmuller linear coefficient, endomorphism, commutes with pi.
    FormalModule(FormalGroupLaw law, Series pi, std::optional<Series> omega = {});

    static FormalModule trusted(FormalGroupLaw law, Series pi, std::optional<Series> omega,
                                int cert_prec, std::optional<uint64_t> lt_q);

    const FormalGroupLaw& law() const { return law_; }
    const Series2& F() const { return law_.F(); }
    const Series& pi() const { return pi_; }
    const std::optional<Series>& omega() const { return omega_; }
    const UnramifiedRing& ring() const { return law_.ring(); }
    int cap() const { return law_.cap(); }

    // p-adic digits of every stored coefficient that are certified
    int cert_prec() const { return cert_prec_; }
    // set when pi is a validated Frobenius series for this q (Lubin-Tate case)
    std::optional<uint64_t> lt_q() const { return lt_q_; }

    HeightResult height() const;

private:
    FormalModule(FormalGroupLaw law, Series pi, std::optional<Series> omega, int cert_prec,
                 std::optional<uint64_t> lt_q)
        : law_(std::move(law)), pi_(std::move(pi)), omega_(std::move(omega)),
          cert_prec_(cert_prec), lt_q_(lt_q) {}

    FormalGroupLaw law_;
    Series pi_;
    std::optional<Series> omega_;
    int cert_prec_;
    std::optional<uint64_t> lt_q_;
    mutable std::optional<HeightResult> height_cache_;
};

// u(F(X,Y)) for a univariate outer series u with u(0)=0 allowed nonzero too.
Series2 compose_outer(const Series& u, const Series2& F);
// F(u(X), v(Y)) for univariate u, v with zero constant terms.
Series2 substitute_both(const Series2& F, const Series& u, const Series& v);

// F(a(X), b(X)); both arguments need zero constant terms.
Series fplus(const FormalGroupLaw& law, const Series& a, const Series& b);
Series fplus(const FormalModule& m, const Series& a, const Series& b);

// the series i with F(X, i(X)) = 0
Series formal_inverse(const FormalModule& m);

// [k](X): k-fold group sum of X (negative k through the formal inverse)
Series int_mult(const FormalModule& m, long long k);

// formal logarithm (integral of dX / (dF/dY)(X,0), normalized log'(0)=1) and
// its compositional inverse, both over the fraction field
QSeries flog(const FormalGroupLaw& law);
QSeries flog(const FormalModule& m);
QSeries fexp(const FormalModule& m);

// Degree-by-degree intertwiner solve: the unique u with u(0)=0, u'(0)=c and
// u(f(X)) = g(f... u∘f = g∘u, when it exists. Fails with the first degree at
// which the required division is impossible.
struct IntertwineResult {
    std::optional<Series> u;
    long long obstructed_degree = -1;
    int division_loss = 0;  // worst divisor valuation crossed
    // Digits (relative to the working precision) at which the computed u is
    // guaranteed to agree with the exact solution, from a valuation-damped
    // first-order error ledger over the solve.
    int cert_floor = 0;
};
IntertwineResult solve_intertwine(const Series& f, const Series& g, const RingElement& c);

// Attempts the extra endomorphism [omega] with omega a primitive (q-1)-st
// root of unity: succeeds exactly when the module carries the larger ring
// action. Requires (q-1) | p^f - 1 so the root of unity exists in the ring.
struct StructureSolveResult {
    std::optional<Series> omega_series;
    RingElement omega;                  // the Teichmuller coefficient attempted
    long long obstructed_degree = -1;   // set when absent
    int cert_prec = 0;                  // digits at which the witness commutes
};
StructureSolveResult module_structure_solve(const FormalModule& m, uint64_t q);

// Change of coordinates along u (unit linear coefficient):
// law u(F(u^{-1}X, u^{-1}Y)), multiplier u . pi . u^{-1}.
FormalModule transport(const FormalModule& m, const Series& u);

// stock examples
FormalModule multiplicative_module(const UnramifiedRing& ring, int cap);
FormalModule additive_module(const UnramifiedRing& ring, int cap);

}  // namespace fgl
