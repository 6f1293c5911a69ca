#pragma once
// Dense truncated power series over an unramified ring (one and two
// variables) and over its fraction field.
//
// Ring-coefficient series store one contiguous uint32 plane per ring
// coordinate (structure-of-arrays); products and accumulations run through
// the mod-m word kernels. Bivariate series are stored by homogeneous layer,
// which turns every product into short one-dimensional convolutions.

#include <optional>
#include <string>
#include <vector>

#include "fgl/padic.hpp"

namespace fgl {

class Series {
public:
    Series() = default;
    Series(const UnramifiedRing& ring, int cap);  // zero series

    static Series x(const UnramifiedRing& ring, int cap);
    static Series from_int_coeffs(const UnramifiedRing& ring, int cap,
                                  const std::vector<long long>& coeffs);

    const UnramifiedRing& ring() const { return *ring_; }
    int cap() const { return cap_; }

    RingElement coeff(int k) const;
    void set_coeff(int k, const RingElement& v);
    bool is_zero() const;
    bool coeff_is_zero(int k) const;
    int lowest_nonzero() const;  // -1 when zero

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator-() const;
    Series scaled(const RingElement& w) const;
    void add_scaled(const RingElement& w, const Series& src);  // this += w*src

    // outer(inner); inner must have zero constant term
    Series compose(const Series& inner) const;
    Series derivative() const;
    Series truncated(int new_cap) const;
    // compositional inverse: needs zero constant term and unit linear coefficient
    Series reversion() const;
    // multiplicative inverse: needs unit constant term
    Series mul_inverse() const;

    Series change_ring(const UnramifiedRing& target) const;
    bool congruent(const Series& o, int digits) const;  // equal mod p^digits

    std::string str(const std::string& var = "X") const;

    // raw access for the series kernels
    uint32_t* plane(int i) { return w_.data() + size_t(i) * (cap_ + 1); }
    const uint32_t* plane(int i) const { return w_.data() + size_t(i) * (cap_ + 1); }

    friend bool operator==(const Series& a, const Series& b) {
        return a.cap_ == b.cap_ && a.w_ == b.w_;
    }

private:
    const UnramifiedRing* ring_ = nullptr;
    int cap_ = 0;
    std::vector<uint32_t> w_;

    void check_compat(const Series& o) const;
};

// coefficient k of A*B without forming the whole product
RingElement convolution_coeff(const Series& a, const Series& b, int k);

class Series2 {
public:
    Series2() = default;
    Series2(const UnramifiedRing& ring, int cap);

    const UnramifiedRing& ring() const { return *ring_; }
    int cap() const { return cap_; }

    RingElement get(int i, int j) const;  // coefficient of X^i Y^j
    void set(int i, int j, const RingElement& v);
    bool is_zero() const;

    Series2 operator+(const Series2& o) const;
    Series2 operator-(const Series2& o) const;
    Series2 operator*(const Series2& o) const;
    void add_scaled(const RingElement& w, const Series2& src);

    // this.layer(d) += sum_{a+b=d} A.layer(a) * B.layer(b)
    void accumulate_product_layer(const Series2& a, const Series2& b, int d);
    // this += e * u(X) * v(Y)
    void add_outer_product(const RingElement& e, const Series& u, const Series& v);

    bool symmetric() const;
    Series slice_y0() const;          // F(X, 0) as a series in X
    Series y_partial_at_zero() const; // coefficient series of Y^1

    Series2 truncated(int new_cap) const;
    Series2 change_ring(const UnramifiedRing& target) const;
    bool congruent(const Series2& o, int digits) const;

    static size_t layer_offset(int d) { return size_t(d) * (d + 1) / 2; }
    size_t table_size() const { return layer_offset(cap_ + 1); }
    uint32_t* plane(int i) { return w_.data() + size_t(i) * table_size(); }
    const uint32_t* plane(int i) const { return w_.data() + size_t(i) * table_size(); }

    friend bool operator==(const Series2& a, const Series2& b) {
        return a.cap_ == b.cap_ && a.w_ == b.w_;
    }

private:
    const UnramifiedRing* ring_ = nullptr;
    int cap_ = 0;
    std::vector<uint32_t> w_;

    void check_compat(const Series2& o) const;
};

// Series over the fraction field, with per-coefficient precision ledger.
class QSeries {
public:
    QSeries() = default;
    QSeries(const UnramifiedRing& ring, int cap);
    static QSeries from_series(const Series& a);

    const UnramifiedRing& ring() const { return *ring_; }
    int cap() const { return cap_; }

    const FieldElement& coeff(int k) const { return c_[k]; }
    void set_coeff(int k, FieldElement v);

    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries scaled(const FieldElement& w) const;

    QSeries compose(const Series& inner) const;   // integral inner, inner(0)=0
    QSeries compose(const QSeries& inner) const;  // inner constant term ~ 0
    QSeries derivative() const;
    QSeries reversion() const;  // zero constant term, exactly invertible linear coeff
    QSeries truncated(int new_cap) const;

    // minimum known precision across value coefficients (N when all markers)
    int min_known_prec() const;
    // every coefficient congruent to the other's mod p^digits
    bool agrees_with(const QSeries& o, int digits) const;

    std::string str(const std::string& var = "X") const;

private:
    const UnramifiedRing* ring_ = nullptr;
    int cap_ = 0;
    std::vector<FieldElement> c_;
};

// term-wise calculus; integration divides coefficient k by k+1 in the
// fraction field and records the precision loss
QSeries integrate(const Series& a);
QSeries integrate(const QSeries& a);

// Cap needed for a torsion analysis at level n over residue field size q.
long long required_cap_for_level(uint64_t q, int level);

}  // namespace fgl
