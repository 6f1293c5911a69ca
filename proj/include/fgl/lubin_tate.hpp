#pragma once
// Lubin-Tate formal modules for the parameter p over an unramified ring:
// Frobenius-series validation, the inductive construction of the group law,
// the [a]-series family, and canonical isomorphisms between two Frobenius
// series for the same q.

#include "fgl/formal_group.hpp"

namespace fgl {

class FrobeniusSeries {
public:
    // f must satisfy f(X) = pX mod degree 2 and f(X) = X^q mod p up to the
    // cap; cap must be at least q. Throws naming the violated congruence.
    static FrobeniusSeries validate(const Series& f, uint64_t q);
    // the stock choice pX + X^q
    static FrobeniusSeries canonical(const UnramifiedRing& ring, uint64_t q, int cap);

    const Series& series() const { return f_; }
    const UnramifiedRing& ring() const { return f_.ring(); }
    uint64_t q() const { return q_; }
    int h() const { return h_; }  // q = p^h

private:
    FrobeniusSeries(Series f, uint64_t q, int h) : f_(std::move(f)), q_(q), h_(h) {}
    Series f_;
    uint64_t q_;
    int h_;
};

// The unique group law with F = X + Y mod degree 2 and f(F(X,Y)) =
// F(f(X), f(Y)) up to the cap. The returned module has pi = f and carries
// the Frobenius certificate. The inductive solver divides by p^d - p at
// step d; it runs at padded internal precision so that those divisions do
// not eat into the requested digits, and cert_prec() on the result reports
// the precision ledger's honest floor.
FormalModule lt_group(const FrobeniusSeries& f);

// the endomorphism [a] of F_f with linear coefficient a; [p] = f, [1] = X.
// cert_out, when given, receives the certified digits of the result.
Series lt_bracket(const FrobeniusSeries& f, const RingElement& a, int* cert_out = nullptr);

// the isomorphism u: F_f -> F_g with u'(0) = 1, u(f(X)) = g(u(X))
Series lt_iso(const FrobeniusSeries& f, const FrobeniusSeries& g, int* cert_out = nullptr);

// Largest precision exponent usable for this p under the word-kernel bound.
int max_precision_for(uint32_t p);

}  // namespace fgl
