#include "fgl/series.hpp"

#include <algorithm>
#include <sstream>

#include "fgl/kernels.hpp"

namespace fgl {
namespace {

// gather the digits of coefficient k from plane storage
inline void gather(const uint32_t* base, size_t stride, int f, int k, uint32_t* out) {
    for (int i = 0; i < f; ++i) out[i] = base[size_t(i) * stride + k];
}

constexpr int kMaxF = 16;

}  // namespace

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

Series::Series(const UnramifiedRing& ring, int cap) : ring_(&ring), cap_(cap) {
    if (cap < 0) throw std::invalid_argument("series: cap must be >= 0");
    w_.assign(size_t(ring.f()) * (cap + 1), 0);
}

Series Series::x(const UnramifiedRing& ring, int cap) {
    Series s(ring, cap);
    if (cap >= 1) s.plane(0)[1] = 1 % ring.pn();
    return s;
}

Series Series::from_int_coeffs(const UnramifiedRing& ring, int cap,
                               const std::vector<long long>& coeffs) {
    Series s(ring, cap);
    for (size_t k = 0; k < coeffs.size() && k <= size_t(cap); ++k)
        s.set_coeff(static_cast<int>(k), ring.from_int(coeffs[k]));
    return s;
}

void Series::check_compat(const Series& o) const {
    if (cap_ != o.cap_) throw std::invalid_argument("series: cap mismatch");
    if (ring_ != o.ring_ && !ring_->compatible(*o.ring_))
        throw std::invalid_argument("series: scalar domain mismatch");
}

RingElement Series::coeff(int k) const {
    std::vector<uint32_t> c(ring_->f());
    gather(w_.data(), cap_ + 1, ring_->f(), k, c.data());
    return RingElement(ring_, std::move(c));
}

void Series::set_coeff(int k, const RingElement& v) {
    for (int i = 0; i < ring_->f(); ++i) plane(i)[k] = v.digits()[i];
}

bool Series::is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](uint32_t x) { return x == 0; });
}

bool Series::coeff_is_zero(int k) const {
    for (int i = 0; i < ring_->f(); ++i)
        if (plane(i)[k] != 0) return false;
    return true;
}

int Series::lowest_nonzero() const {
    for (int k = 0; k <= cap_; ++k)
        if (!coeff_is_zero(k)) return k;
    return -1;
}

Series Series::operator+(const Series& o) const {
    check_compat(o);
    Series r(*ring_, cap_);
    const auto& K = kern::active();
    for (int i = 0; i < ring_->f(); ++i)
        K.add(r.plane(i), plane(i), o.plane(i), cap_ + 1, ring_->pn());
    return r;
}

Series Series::operator-(const Series& o) const {
    check_compat(o);
    Series r(*ring_, cap_);
    const auto& K = kern::active();
    for (int i = 0; i < ring_->f(); ++i)
        K.sub(r.plane(i), plane(i), o.plane(i), cap_ + 1, ring_->pn());
    return r;
}

Series Series::operator-() const {
    Series r(*ring_, cap_);
    const auto& K = kern::active();
    for (int i = 0; i < ring_->f(); ++i)
        K.sub(r.plane(i), r.plane(i), plane(i), cap_ + 1, ring_->pn());
    return r;
}

Series Series::operator*(const Series& o) const {
    check_compat(o);
    Series r(*ring_, cap_);
    const auto& K = kern::active();
    const int f = ring_->f();
    const uint32_t m = ring_->pn();
    uint32_t a[kMaxF], M[kMaxF * kMaxF];
    for (int k = 0; k <= cap_; ++k) {
        if (coeff_is_zero(k)) continue;
        gather(w_.data(), cap_ + 1, f, k, a);
        ring_->raw_mul_matrix(a, M);
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f; ++j)
                K.axpy(r.plane(i) + k, o.plane(j), cap_ + 1 - k, M[size_t(i) * f + j], m);
    }
    return r;
}

Series Series::scaled(const RingElement& w) const {
    Series r(*ring_, cap_);
    r.add_scaled(w, *this);
    return r;
}

void Series::add_scaled(const RingElement& w, const Series& src) {
    check_compat(src);
    const auto& K = kern::active();
    const int f = ring_->f();
    uint32_t M[kMaxF * kMaxF];
    ring_->raw_mul_matrix(w.digits().data(), M);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j)
            K.axpy(plane(i), src.plane(j), cap_ + 1, M[size_t(i) * f + j], ring_->pn());
}

Series Series::compose(const Series& inner) const {
    check_compat(inner);
    if (!inner.coeff_is_zero(0))
        throw std::invalid_argument("compose: inner series must have zero constant term");
    Series res(*ring_, cap_);
    res.set_coeff(0, coeff(cap_));
    for (int k = cap_ - 1; k >= 0; --k) {
        res = res * inner;
        res.set_coeff(0, res.coeff(0) + coeff(k));
    }
    return res;
}

Series Series::derivative() const {
    Series r(*ring_, cap_);
    for (int k = 0; k < cap_; ++k)
        r.set_coeff(k, coeff(k + 1).scaled(k + 1));
    return r;
}

Series Series::truncated(int new_cap) const {
    if (new_cap > cap_) throw std::invalid_argument("truncated: cap may only shrink");
    Series r(*ring_, new_cap);
    for (int i = 0; i < ring_->f(); ++i)
        std::copy(plane(i), plane(i) + new_cap + 1, r.plane(i));
    return r;
}

Series Series::reversion() const {
    if (!coeff_is_zero(0))
        throw std::invalid_argument("reversion: series must have zero constant term");
    if (cap_ < 1 || !coeff(1).is_unit())
        throw std::domain_error("reversion: linear coefficient must be a unit");
    RingElement a1_inv = coeff(1).inverse();
    Series b(*ring_, cap_);
    b.set_coeff(1, a1_inv);
    // powers of b, extended one degree at a time
    std::vector<Series> pw(cap_ + 1, Series(*ring_, cap_));
    pw[1] = b;
    for (int d = 2; d <= cap_; ++d) {
        // layer d of b^k for k >= 2 depends only on b_{<d}
        for (int k = 2; k <= d; ++k)
            pw[k].set_coeff(d, convolution_coeff(b, pw[k - 1], d));
        RingElement acc = ring_->zero();
        for (int k = 2; k <= d; ++k)
            acc = acc + coeff(k) * pw[k].coeff(d);
        RingElement bd = -(a1_inv * acc);
        b.set_coeff(d, bd);
        pw[1].set_coeff(d, bd);
    }
    return b;
}

Series Series::mul_inverse() const {
    if (!coeff(0).is_unit())
        throw std::domain_error("mul_inverse: constant term must be a unit");
    RingElement c0_inv = coeff(0).inverse();
    Series b(*ring_, cap_);
    b.set_coeff(0, c0_inv);
    for (int k = 1; k <= cap_; ++k) {
        RingElement acc = ring_->zero();
        for (int j = 1; j <= k; ++j)
            acc = acc + coeff(j) * b.coeff(k - j);
        b.set_coeff(k, -(c0_inv * acc));
    }
    return b;
}

Series Series::change_ring(const UnramifiedRing& target) const {
    Series r(target, cap_);
    for (int k = 0; k <= cap_; ++k)
        r.set_coeff(k, coeff(k).change_ring(target));
    return r;
}

bool Series::congruent(const Series& o, int digits) const {
    check_compat(o);
    uint32_t pk = 1;
    for (int i = 0; i < std::min(digits, ring_->N()); ++i) pk *= ring_->p();
    for (size_t i = 0; i < w_.size(); ++i)
        if (w_[i] % pk != o.w_[i] % pk) return false;
    return true;
}

std::string Series::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= cap_; ++k) {
        if (coeff_is_zero(k)) continue;
        if (!first) os << " + ";
        first = false;
        RingElement c = coeff(k);
        if (ring_->f() == 1) {
            os << c.digits()[0];
        } else {
            os << "(";
            for (int i = 0; i < ring_->f(); ++i) {
                if (i) os << " + ";
                os << c.digits()[i];
                if (i == 1) os << "*g";
                else if (i >= 2) os << "*g^" << i;
            }
            os << ")";
        }
        if (k >= 1) {
            os << "*" << var;
            if (k >= 2) os << "^" << k;
        }
    }
    if (first) os << "0";
    os << " + O(" << var << "^" << cap_ + 1 << ")";
    return os.str();
}

RingElement convolution_coeff(const Series& a, const Series& b, int k) {
    const UnramifiedRing& R = a.ring();
    const int f = R.f();
    uint32_t ai[kMaxF], bi[kMaxF], prod[kMaxF];
    std::vector<uint32_t> acc(f, 0);
    for (int i = 0; i <= k; ++i) {
        if (a.coeff_is_zero(i) || b.coeff_is_zero(k - i)) continue;
        gather(a.plane(0), a.cap() + 1, f, i, ai);
        gather(b.plane(0), b.cap() + 1, f, k - i, bi);
        R.raw_mul(ai, bi, prod);
        for (int t = 0; t < f; ++t) acc[t] = kern::add_mod(acc[t], prod[t], R.pn());
    }
    return RingElement(&R, std::move(acc));
}

// ---------------------------------------------------------------------------
// Series2
// ---------------------------------------------------------------------------

Series2::Series2(const UnramifiedRing& ring, int cap) : ring_(&ring), cap_(cap) {
    if (cap < 0) throw std::invalid_argument("series2: cap must be >= 0");
    w_.assign(size_t(ring.f()) * table_size(), 0);
}

void Series2::check_compat(const Series2& o) const {
    if (cap_ != o.cap_) throw std::invalid_argument("series2: cap mismatch");
    if (ring_ != o.ring_ && !ring_->compatible(*o.ring_))
        throw std::invalid_argument("series2: scalar domain mismatch");
}

RingElement Series2::get(int i, int j) const {
    if (i < 0 || j < 0 || i + j > cap_) throw std::out_of_range("series2: monomial out of range");
    size_t idx = layer_offset(i + j) + j;
    std::vector<uint32_t> c(ring_->f());
    for (int t = 0; t < ring_->f(); ++t) c[t] = plane(t)[idx];
    return RingElement(ring_, std::move(c));
}

void Series2::set(int i, int j, const RingElement& v) {
    if (i < 0 || j < 0 || i + j > cap_) throw std::out_of_range("series2: monomial out of range");
    size_t idx = layer_offset(i + j) + j;
    for (int t = 0; t < ring_->f(); ++t) plane(t)[idx] = v.digits()[t];
}

bool Series2::is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](uint32_t x) { return x == 0; });
}

Series2 Series2::operator+(const Series2& o) const {
    check_compat(o);
    Series2 r(*ring_, cap_);
    const auto& K = kern::active();
    for (int i = 0; i < ring_->f(); ++i)
        K.add(r.plane(i), plane(i), o.plane(i), table_size(), ring_->pn());
    return r;
}

Series2 Series2::operator-(const Series2& o) const {
    check_compat(o);
    Series2 r(*ring_, cap_);
    const auto& K = kern::active();
    for (int i = 0; i < ring_->f(); ++i)
        K.sub(r.plane(i), plane(i), o.plane(i), table_size(), ring_->pn());
    return r;
}

void Series2::add_scaled(const RingElement& w, const Series2& src) {
    check_compat(src);
    const auto& K = kern::active();
    const int f = ring_->f();
    uint32_t M[kMaxF * kMaxF];
    ring_->raw_mul_matrix(w.digits().data(), M);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j)
            K.axpy(plane(i), src.plane(j), table_size(), M[size_t(i) * f + j], ring_->pn());
}

void Series2::accumulate_product_layer(const Series2& a, const Series2& b, int d) {
    const auto& K = kern::active();
    const int f = ring_->f();
    const uint32_t m = ring_->pn();
    uint32_t av[kMaxF], M[kMaxF * kMaxF];
    for (int da = 0; da <= d; ++da) {
        int db = d - da;
        size_t off_a = layer_offset(da), off_b = layer_offset(db), off_d = layer_offset(d);
        for (int s = 0; s <= da; ++s) {
            bool zero = true;
            for (int t = 0; t < f; ++t) {
                av[t] = a.plane(t)[off_a + s];
                if (av[t] != 0) zero = false;
            }
            if (zero) continue;
            ring_->raw_mul_matrix(av, M);
            for (int i = 0; i < f; ++i)
                for (int j = 0; j < f; ++j)
                    K.axpy(plane(i) + off_d + s, b.plane(j) + off_b, db + 1,
                           M[size_t(i) * f + j], m);
        }
    }
}

Series2 Series2::operator*(const Series2& o) const {
    check_compat(o);
    Series2 r(*ring_, cap_);
    for (int d = 0; d <= cap_; ++d)
        r.accumulate_product_layer(*this, o, d);
    return r;
}

void Series2::add_outer_product(const RingElement& e, const Series& u, const Series& v) {
    const int f = ring_->f();
    const uint32_t m = ring_->pn();
    uint32_t us[kMaxF], vt[kMaxF], w[kMaxF], prod[kMaxF];
    for (int s = 0; s <= std::min(u.cap(), cap_); ++s) {
        if (u.coeff_is_zero(s)) continue;
        gather(u.plane(0), u.cap() + 1, f, s, us);
        ring_->raw_mul(e.digits().data(), us, w);
        for (int t = 0; t + s <= cap_ && t <= v.cap(); ++t) {
            if (v.coeff_is_zero(t)) continue;
            gather(v.plane(0), v.cap() + 1, f, t, vt);
            ring_->raw_mul(w, vt, prod);
            size_t idx = layer_offset(s + t) + t;
            for (int i = 0; i < f; ++i)
                plane(i)[idx] = kern::add_mod(plane(i)[idx], prod[i], m);
        }
    }
}

bool Series2::symmetric() const {
    for (int d = 0; d <= cap_; ++d) {
        size_t off = layer_offset(d);
        for (int j = 0; 2 * j <= d; ++j)
            for (int i = 0; i < ring_->f(); ++i)
                if (plane(i)[off + j] != plane(i)[off + d - j]) return false;
    }
    return true;
}

Series Series2::slice_y0() const {
    Series s(*ring_, cap_);
    for (int d = 0; d <= cap_; ++d) {
        size_t idx = layer_offset(d);
        for (int i = 0; i < ring_->f(); ++i) s.plane(i)[d] = plane(i)[idx];
    }
    return s;
}

Series Series2::y_partial_at_zero() const {
    Series s(*ring_, cap_);
    for (int d = 1; d <= cap_; ++d) {
        size_t idx = layer_offset(d) + 1;
        for (int i = 0; i < ring_->f(); ++i) s.plane(i)[d - 1] = plane(i)[idx];
    }
    return s;
}

Series2 Series2::truncated(int new_cap) const {
    if (new_cap > cap_) throw std::invalid_argument("truncated: cap may only shrink");
    Series2 r(*ring_, new_cap);
    for (int i = 0; i < ring_->f(); ++i)
        std::copy(plane(i), plane(i) + r.table_size(), r.plane(i));
    return r;
}

Series2 Series2::change_ring(const UnramifiedRing& target) const {
    Series2 r(target, cap_);
    for (size_t idx = 0; idx < table_size(); ++idx)
        for (int i = 0; i < ring_->f(); ++i)
            r.plane(i)[idx] = plane(i)[idx] % target.pn();
    return r;
}

bool Series2::congruent(const Series2& o, int digits) const {
    check_compat(o);
    uint32_t pk = 1;
    for (int i = 0; i < std::min(digits, ring_->N()); ++i) pk *= ring_->p();
    for (size_t i = 0; i < w_.size(); ++i)
        if (w_[i] % pk != o.w_[i] % pk) return false;
    return true;
}

// ---------------------------------------------------------------------------
// QSeries
// ---------------------------------------------------------------------------

QSeries::QSeries(const UnramifiedRing& ring, int cap) : ring_(&ring), cap_(cap) {
    c_.assign(cap + 1, FieldElement::zero_marker(ring, exact_zero_bound));
}

QSeries QSeries::from_series(const Series& a) {
    QSeries r(a.ring(), a.cap());
    for (int k = 0; k <= a.cap(); ++k)
        r.c_[k] = FieldElement::from_ring(a.coeff(k));
    return r;
}

void QSeries::set_coeff(int k, FieldElement v) { c_[k] = std::move(v); }

QSeries QSeries::operator+(const QSeries& o) const {
    if (cap_ != o.cap_) throw std::invalid_argument("qseries: cap mismatch");
    QSeries r(*ring_, cap_);
    for (int k = 0; k <= cap_; ++k) r.c_[k] = c_[k] + o.c_[k];
    return r;
}

QSeries QSeries::operator-(const QSeries& o) const {
    if (cap_ != o.cap_) throw std::invalid_argument("qseries: cap mismatch");
    QSeries r(*ring_, cap_);
    for (int k = 0; k <= cap_; ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
}

QSeries QSeries::operator*(const QSeries& o) const {
    if (cap_ != o.cap_) throw std::invalid_argument("qseries: cap mismatch");
    QSeries r(*ring_, cap_);
    for (int k = 0; k <= cap_; ++k) {
        FieldElement acc = c_[0] * o.c_[k];
        for (int i = 1; i <= k; ++i) acc = acc + c_[i] * o.c_[k - i];
        r.c_[k] = acc;
    }
    return r;
}

QSeries QSeries::scaled(const FieldElement& w) const {
    QSeries r(*ring_, cap_);
    for (int k = 0; k <= cap_; ++k) r.c_[k] = c_[k] * w;
    return r;
}

QSeries QSeries::compose(const Series& inner) const {
    return compose(QSeries::from_series(inner));
}

QSeries QSeries::compose(const QSeries& inner) const {
    if (inner.cap_ != cap_) throw std::invalid_argument("qseries compose: cap mismatch");
    if (!inner.c_[0].is_zero_marker())
        throw std::invalid_argument("qseries compose: inner constant term must vanish");
    QSeries res(*ring_, cap_);
    res.c_[0] = c_[cap_];
    for (int k = cap_ - 1; k >= 0; --k) {
        res = res * inner;
        res.c_[0] = res.c_[0] + c_[k];
    }
    return res;
}

QSeries QSeries::derivative() const {
    QSeries r(*ring_, cap_);
    for (int k = 0; k < cap_; ++k)
        r.c_[k] = c_[k + 1] * FieldElement::from_integer(*ring_, k + 1);
    return r;
}

QSeries QSeries::reversion() const {
    if (!c_[0].is_zero_marker() || c_[0].val() < ring_->N())
        throw std::invalid_argument("qseries reversion: constant term must vanish");
    if (cap_ < 1 || c_[1].is_zero_marker())
        throw std::domain_error("qseries reversion: linear coefficient must be exactly invertible");
    FieldElement one = FieldElement::from_integer(*ring_, 1);
    FieldElement a1_inv = one / c_[1];
    QSeries b(*ring_, cap_);
    b.c_[1] = a1_inv;
    std::vector<QSeries> pw(cap_ + 1, QSeries(*ring_, cap_));
    pw[1] = b;
    for (int d = 2; d <= cap_; ++d) {
        for (int k = 2; k <= d; ++k) {
            FieldElement acc = FieldElement::zero_marker(*ring_, exact_zero_bound);
            for (int i = 1; i <= d - 1; ++i)
                acc = acc + b.c_[i] * pw[k - 1].c_[d - i];
            pw[k].c_[d] = acc;
        }
        FieldElement acc = FieldElement::zero_marker(*ring_, exact_zero_bound);
        for (int k = 2; k <= d; ++k) acc = acc + c_[k] * pw[k].c_[d];
        FieldElement bd = -(a1_inv * acc);
        b.c_[d] = bd;
        pw[1].c_[d] = bd;
    }
    return b;
}

QSeries QSeries::truncated(int new_cap) const {
    if (new_cap > cap_) throw std::invalid_argument("truncated: cap may only shrink");
    QSeries r(*ring_, new_cap);
    for (int k = 0; k <= new_cap; ++k) r.c_[k] = c_[k];
    return r;
}

int QSeries::min_known_prec() const {
    int m = ring_->N();
    for (const auto& c : c_)
        if (!c.is_zero_marker()) m = std::min(m, c.known_prec());
    return m;
}

bool QSeries::agrees_with(const QSeries& o, int digits) const {
    for (int k = 0; k <= cap_; ++k) {
        FieldElement d = c_[k] - o.c_[k];
        if (d.val() < digits) return false;
    }
    return true;
}

std::string QSeries::str(const std::string& var) const {
    std::ostringstream os;
    for (int k = 0; k <= cap_; ++k) {
        if (k) os << " + ";
        os << "[" << c_[k].str() << "]";
        if (k >= 1) {
            os << "*" << var;
            if (k >= 2) os << "^" << k;
        }
    }
    return os.str();
}

QSeries integrate(const Series& a) {
    if (a.cap() < 1) throw std::invalid_argument("integrate: cap must be >= 1");
    QSeries r(a.ring(), a.cap());
    for (int k = 0; k + 1 <= a.cap(); ++k)
        r.set_coeff(k + 1, FieldElement::from_ring(a.coeff(k)) /
                               FieldElement::from_integer(a.ring(), k + 1));
    return r;
}

QSeries integrate(const QSeries& a) {
    if (a.cap() < 1) throw std::invalid_argument("integrate: cap must be >= 1");
    QSeries r(a.ring(), a.cap());
    for (int k = 0; k + 1 <= a.cap(); ++k)
        r.set_coeff(k + 1, a.coeff(k) / FieldElement::from_integer(a.ring(), k + 1));
    return r;
}

long long required_cap_for_level(uint64_t q, int level) {
    long long cap = 1;
    for (int i = 0; i < level; ++i) {
        if (cap > (1LL << 40) / static_cast<long long>(q))
            throw std::invalid_argument("torsion level out of range: q^n overflows the cap budget");
        cap *= static_cast<long long>(q);
    }
    return cap;
}

}  // namespace fgl
