#pragma once
// Exact arithmetic in O_E, the ring of integers of the unramified extension
// of degree f over the p-adic numbers, truncated at precision p^N.
//
// Elements are coordinate vectors over the basis 1, g, ..., g^{f-1}, each
// coordinate reduced into [0, p^N), where g is a root of a fixed monic
// polynomial that is irreducible mod p. The modulus is chosen canonically
// (lexicographically smallest, low-degree coefficients first) so rings are
// reproducible without external tables. p^N must stay below 2^31 so the
// word kernels apply.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgl/errors.hpp"

namespace fgl {

class RingElement;

// Exact valuation, or the lower bound "v >= bound" when the element is
// indistinguishable from zero at working precision.
struct Valuation {
    bool exact = true;
    long long v = 0;  // exact value, or the bound if !exact

    std::string str() const {
        return exact ? std::to_string(v) : ">= " + std::to_string(v);
    }
    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.exact == b.exact && a.v == b.v;
    }
};

class UnramifiedRing {
public:
    UnramifiedRing(uint32_t p, int f, int N);

    uint32_t p() const { return p_; }
    int f() const { return f_; }
    int N() const { return N_; }
    uint32_t pn() const { return pn_; }          // p^N
    uint64_t q() const { return q_; }            // p^f, residue field size
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    bool compatible(const UnramifiedRing& o) const {
        return p_ == o.p_ && f_ == o.f_ && N_ == o.N_ && modulus_ == o.modulus_;
    }
    // Same (p, f, modulus); precisions may differ.
    bool same_tower(const UnramifiedRing& o) const {
        return p_ == o.p_ && f_ == o.f_ && modulus_ == o.modulus_;
    }

    RingElement zero() const;
    RingElement one() const;
    RingElement generator() const;               // g; equals 0 when f = 1
    RingElement from_int(long long k) const;
    RingElement from_coeffs(const std::vector<long long>& c) const;
    RingElement element(std::vector<uint32_t> digits) const;  // takes reduced digits

    // The unique (q-1)-st root of unity congruent to r mod p. r must have
    // nonzero residue.
    RingElement teichmuller(const RingElement& r) const;

    // Canonical residue-field generator: the first element in digit order
    // whose residue generates the multiplicative group of order q-1.
    RingElement residue_mult_generator() const;

    uint32_t p_pow(int k) const;                 // p^k mod nothing, k <= N
    uint32_t inverse_of_int(uint32_t u) const;   // inverse of a unit mod p^N

    // Raw-span helpers for the series layer. Arrays have length f.
    void raw_mul(const uint32_t* a, const uint32_t* b, uint32_t* dst) const;
    // Row-major f x f matrix M with (a*x)_i = sum_j M[i*f+j] * x_j.
    void raw_mul_matrix(const uint32_t* a, uint32_t* M) const;

    std::string describe() const;  // e.g. "Z_2[g]/(g^2+g+1) at precision 2^4"

private:
    uint32_t p_;
    int f_;
    int N_;
    uint32_t pn_;
    uint64_t q_;
    std::vector<uint32_t> modulus_;    // length f+1, monic, entries in [0, p)
    std::vector<uint32_t> red_rows_;   // g^{f+j} reduced, j = 0..f-2, row-major

    friend class RingElement;
};

class RingElement {
public:
    RingElement() = default;
    RingElement(const UnramifiedRing* ring, std::vector<uint32_t> digits)
        : ring_(ring), c_(std::move(digits)) {}

    const UnramifiedRing& ring() const { return *ring_; }
    const std::vector<uint32_t>& digits() const { return c_; }
    uint32_t digit(int i) const { return c_[i]; }

    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator*(const RingElement& o) const;
    RingElement operator-() const;
    RingElement pow(uint64_t e) const;
    RingElement scaled(long long k) const;       // k * (*this)

    bool is_zero() const;
    bool is_unit() const;                        // nonzero residue
    bool is_one() const;
    Valuation valuation() const;

    RingElement inverse() const;                 // unit argument required
    RingElement divide_exact_p(int k) const;     // throws unless p^k divides
    RingElement times_p(int k) const;
    RingElement reduced_mod_p_pow(int k) const;  // digits taken mod p^k
    RingElement change_ring(const UnramifiedRing& target) const;  // truncate to target.N

    std::string str() const;                     // "c0 + c1*g + ... (mod p^N)"

    friend bool operator==(const RingElement& a, const RingElement& b) {
        return a.c_ == b.c_;
    }

private:
    const UnramifiedRing* ring_ = nullptr;
    std::vector<uint32_t> c_;

    void check_same(const RingElement& o) const;
};

// Parses the canonical text form produced by RingElement::str().
RingElement parse_element(const UnramifiedRing& ring, const std::string& text);

// Valuation bound used for exact zeros (effectively infinite, but small
// enough that sums of bounds never overflow).
inline constexpr long long exact_zero_bound = 1LL << 30;

// An element of the fraction field at finite precision: p^val * unit with the
// unit part known to `known_prec` significant digits, or an
// indistinguishable-from-zero marker whose `val` is a lower bound.
class FieldElement {
public:
    static FieldElement from_ring(const RingElement& a);
    static FieldElement from_ring_with_prec(const RingElement& a, int prec);
    static FieldElement from_integer(const UnramifiedRing& ring, long long k);
    static FieldElement zero_marker(const UnramifiedRing& ring, long long bound);

    bool is_zero_marker() const { return zero_; }
    long long val() const { return val_; }       // exact, or the bound if marker
    int known_prec() const { return prec_; }
    const UnramifiedRing& ring() const { return *ring_; }
    const std::vector<uint32_t>& unit_digits() const { return unit_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator/(const FieldElement& o) const;

    enum class ValSign { nonneg, negative, undecidable };
    ValSign val_sign() const;

    // Integral value as a ring element (val >= 0 required); digits above
    // integer_prec() are canonical zero-fill.
    RingElement to_ring() const;
    int integer_prec() const;  // digits of the integer value that are certified

    std::string str() const;

private:
    const UnramifiedRing* ring_ = nullptr;
    bool zero_ = true;
    long long val_ = 0;
    std::vector<uint32_t> unit_;
    int prec_ = 0;

    static FieldElement normalize(const UnramifiedRing& ring, long long base_val,
                                  std::vector<uint32_t> coords, int rel_prec);
    friend class QSeries;
};

}  // namespace fgl
