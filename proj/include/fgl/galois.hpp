#pragma once
// Finite-level unit-group images realized as matrix groups over Z/p^n via
// the regular representation on the basis 1, g, ..., g^{h-1}, plus a generic
// closure/derived-series engine for hand-supplied generator sets.

#include <cstdint>
#include <vector>

#include "fgl/padic.hpp"

namespace fgl {

class MatZ {
public:
    MatZ() = default;
    MatZ(int h, uint32_t mod) : h_(h), mod_(mod), a_(size_t(h) * h, 0) {}
    static MatZ identity(int h, uint32_t mod);

    int dim() const { return h_; }
    uint32_t mod() const { return mod_; }
    uint32_t at(int i, int j) const { return a_[size_t(i) * h_ + j]; }
    void set(int i, int j, uint32_t v) { a_[size_t(i) * h_ + j] = v % mod_; }

    MatZ operator*(const MatZ& o) const;
    MatZ inverse() const;            // needs an invertible reduction mod p
    MatZ reduced(uint32_t new_mod) const;
    bool is_identity() const;

    friend bool operator==(const MatZ& a, const MatZ& b) { return a.a_ == b.a_; }
    friend bool operator<(const MatZ& a, const MatZ& b) { return a.a_ < b.a_; }

private:
    int h_ = 0;
    uint32_t mod_ = 1;
    std::vector<uint32_t> a_;
};

struct FiniteMatrixGroup {
    uint32_t p = 2;
    int h = 1;
    int n = 1;
    uint32_t mod = 2;  // p^n
    std::vector<MatZ> elements;  // sorted, closed under products and inverses
    std::vector<MatZ> generators;

    uint64_t order() const { return elements.size(); }
    bool contains(const MatZ& m) const;
};

// The unit group of the unramified degree-h ring mod p^n acting by
// multiplication on the power basis. Guarded by p^{hn} <= size_guard.
FiniteMatrixGroup unit_group_image(uint32_t p, int h, int n, uint64_t size_guard = 1u << 16);

// Closure of a generator set under products (finite invertible matrices, so
// inverses come along automatically).
FiniteMatrixGroup group_from_generators(uint32_t p, int h, int n, std::vector<MatZ> gens);

// order-6 contrast case: all invertible 2x2 matrices over F_2
FiniteMatrixGroup gl2_f2();

// entrywise reduction mod p^{n-1}
FiniteMatrixGroup reduce_level(const FiniteMatrixGroup& G);

struct GaloisLevelReport {
    uint64_t order = 0;
    bool abelian = false;
    std::vector<uint64_t> derived_lengths;  // |G|, |[G,G]|, ... down to 1 or stable
    bool solvable_at_level = false;
    uint64_t ab_quotient_order = 0;
};

GaloisLevelReport derived_series(const FiniteMatrixGroup& G);

// true exactly when G equals its own commutator subgroup
bool almost_semisimple_check(const FiniteMatrixGroup& G);

}  // namespace fgl
