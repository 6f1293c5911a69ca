#include "fgl/padic.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "fgl/kernels.hpp"

namespace fgl {
namespace {

bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int vp_u32(uint32_t x, uint32_t p) {
    int v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

uint32_t pow_u32_checked(uint32_t p, int e) {
    uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        r *= p;
        if (r >= kern::max_modulus_exclusive)
            throw std::invalid_argument("p^N must stay below 2^31; reduce the precision N");
    }
    return static_cast<uint32_t>(r);
}

uint32_t powmod_u32(uint32_t b, uint64_t e, uint32_t m) {
    uint64_t r = 1 % m, base = b % m;
    while (e) {
        if (e & 1) r = r * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return static_cast<uint32_t>(r);
}

// Inverse of a unit mod p^N by extended Euclid on int64.
uint32_t invmod_u32(uint32_t a, uint32_t m) {
    long long t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        long long quot = r / nr;
        std::swap(t -= quot * nt, nt);
        std::swap(r -= quot * nr, nr);
    }
    if (r != 1) throw std::domain_error("invmod: not a unit");
    return static_cast<uint32_t>(t < 0 ? t + m : t);
}

// --- polynomials over F_p (dense coefficient vectors, used only for the
// --- modulus search and residue-field arithmetic) ---

using Poly = std::vector<uint32_t>;

void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + uint64_t(a[i]) * b[j]) % p;
    // reduce by monic mod
    size_t deg = mod.size() - 1;
    for (size_t d = r.size(); d-- > deg;) {
        uint32_t c = r[d];
        if (c == 0) continue;
        r[d] = 0;
        for (size_t i = 0; i < deg; ++i)
            r[d - deg + i] = (r[d - deg + i] + uint64_t(c) * (p - mod[i] % p)) % p;
    }
    r.resize(deg);
    poly_trim(r);
    return r;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& mod, uint32_t p) {
    Poly r{1};
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, mod, p);
        base = poly_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // a mod b, b monicized on the fly
        uint32_t lead_inv = invmod_u32(b.back(), p);
        Poly r = a;
        while (r.size() >= b.size()) {
            uint32_t c = static_cast<uint32_t>(uint64_t(r.back()) * lead_inv % p);
            size_t off = r.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                r[off + i] = (r[off + i] + uint64_t(c) * (p - b[i])) % p;
            poly_trim(r);
            if (r.empty()) break;
        }
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// X^{p^k} mod m via iterated Frobenius.
Poly frobenius_power(const Poly& mod, uint32_t p, int k) {
    Poly y{0, 1};  // X
    for (int i = 0; i < k; ++i) y = poly_powmod(y, p, mod, p);
    return y;
}

bool poly_irreducible(const Poly& mod, uint32_t p) {
    int f = static_cast<int>(mod.size()) - 1;
    Poly xqf = frobenius_power(mod, p, f);
    Poly x{0, 1};
    if (xqf != x) {
        poly_trim(xqf);
        Poly xt = x;
        poly_trim(xt);
        if (xqf != xt) return false;
    }
    for (int l = 2; l <= f; ++l) {
        if (f % l != 0 || !is_prime_u32(l)) continue;
        Poly xq = frobenius_power(mod, p, f / l);
        // gcd(X^{p^{f/l}} - X, mod) must be trivial
        Poly diff = xq;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        Poly g = poly_gcd(diff, mod, p);
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// UnramifiedRing
// ---------------------------------------------------------------------------

UnramifiedRing::UnramifiedRing(uint32_t p, int f, int N) : p_(p), f_(f), N_(N) {
    if (!is_prime_u32(p)) throw std::invalid_argument("ring: p must be prime");
    if (f < 1) throw std::invalid_argument("ring: residue degree f must be >= 1");
    if (N < 1) throw std::invalid_argument("ring: precision N must be >= 1");
    pn_ = pow_u32_checked(p, N);
    q_ = 1;
    for (int i = 0; i < f; ++i) {
        if (q_ > (uint64_t(1) << 62) / p) throw std::invalid_argument("ring: residue field too large");
        q_ *= p;
    }

    if (f == 1) {
        modulus_ = {0, 1};  // X, by convention; arithmetic is plain mod p^N
    } else {
        // lexicographically smallest monic irreducible, low-degree coefficients
        // compared first
        std::vector<uint32_t> cand(f + 1, 0);
        cand[f] = 1;
        bool found = false;
        std::vector<uint32_t> idx(f, 0);
        for (;;) {
            for (int i = 0; i < f; ++i) cand[i] = idx[i];
            if (poly_irreducible(cand, p)) { found = true; break; }
            int pos = f - 1;
            while (pos >= 0 && ++idx[pos] == p) idx[pos--] = 0;
            if (pos < 0) break;
        }
        if (!found) throw std::logic_error("ring: no irreducible modulus found");
        modulus_ = cand;
    }

    // reduction rows g^{f+j}, j = 0..f-2 (only needed when f >= 2)
    if (f >= 2) {
        std::vector<uint32_t> gf(f);
        for (int i = 0; i < f; ++i) gf[i] = (pn_ - modulus_[i]) % pn_;
        red_rows_.assign(size_t(f - 1) * f, 0);
        std::vector<uint32_t> cur = gf;
        for (int j = 0; j + 1 < f; ++j) {
            std::copy(cur.begin(), cur.end(), red_rows_.begin() + size_t(j) * f);
            // next = cur * g
            std::vector<uint32_t> nxt(f, 0);
            uint32_t top = cur[f - 1];
            for (int i = f - 1; i >= 1; --i) nxt[i] = cur[i - 1];
            for (int i = 0; i < f; ++i)
                nxt[i] = kern::add_mod(nxt[i], kern::mul_mod(top, gf[i], pn_), pn_);
            cur = std::move(nxt);
        }
    }
}

uint32_t UnramifiedRing::p_pow(int k) const {
    if (k >= N_) return 0;  // p^k == 0 mod p^N once k >= N
    uint32_t r = 1;
    for (int i = 0; i < k; ++i) r *= p_;
    return r;
}

uint32_t UnramifiedRing::inverse_of_int(uint32_t u) const { return invmod_u32(u % pn_, pn_); }

void UnramifiedRing::raw_mul(const uint32_t* a, const uint32_t* b, uint32_t* dst) const {
    const int f = f_;
    const uint32_t m = pn_;
    if (f == 1) {
        dst[0] = kern::mul_mod(a[0], b[0], m);
        return;
    }
    uint32_t tmp[2 * 16];  // f is small; guard below
    if (f > 16) throw std::invalid_argument("ring: residue degree beyond supported limit");
    std::fill(tmp, tmp + 2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f; ++j)
            tmp[i + j] = static_cast<uint32_t>((tmp[i + j] + uint64_t(a[i]) * b[j]) % m);
    }
    for (int d = 2 * f - 2; d >= f; --d) {
        uint32_t c = tmp[d];
        if (c == 0) continue;
        tmp[d] = 0;
        const uint32_t* row = red_rows_.data() + size_t(d - f) * f;
        for (int i = 0; i < f; ++i)
            tmp[i] = kern::add_mod(tmp[i], kern::mul_mod(c, row[i], m), m);
    }
    std::copy(tmp, tmp + f, dst);
}

void UnramifiedRing::raw_mul_matrix(const uint32_t* a, uint32_t* M) const {
    const int f = f_;
    // column j of M is a * g^j
    std::vector<uint32_t> col(a, a + f);
    for (int j = 0; j < f; ++j) {
        for (int i = 0; i < f; ++i) M[size_t(i) * f + j] = col[i];
        if (j + 1 == f) break;
        // col *= g
        uint32_t top = col[f - 1];
        for (int i = f - 1; i >= 1; --i) col[i] = col[i - 1];
        col[0] = 0;
        if (top != 0 && f >= 2) {
            const uint32_t* gf = red_rows_.data();  // g^f
            for (int i = 0; i < f; ++i)
                col[i] = kern::add_mod(col[i], kern::mul_mod(top, gf[i], pn_), pn_);
        }
    }
}

RingElement UnramifiedRing::zero() const { return RingElement(this, std::vector<uint32_t>(f_, 0)); }

RingElement UnramifiedRing::one() const {
    std::vector<uint32_t> c(f_, 0);
    c[0] = 1 % pn_;
    return RingElement(this, std::move(c));
}

RingElement UnramifiedRing::generator() const {
    std::vector<uint32_t> c(f_, 0);
    if (f_ >= 2) c[1] = 1;
    return RingElement(this, std::move(c));
}

RingElement UnramifiedRing::from_int(long long k) const {
    long long r = k % static_cast<long long>(pn_);
    if (r < 0) r += pn_;
    std::vector<uint32_t> c(f_, 0);
    c[0] = static_cast<uint32_t>(r);
    return RingElement(this, std::move(c));
}

RingElement UnramifiedRing::from_coeffs(const std::vector<long long>& coeffs) const {
    if (static_cast<int>(coeffs.size()) > f_)
        throw std::invalid_argument("element: too many coordinates for this ring");
    std::vector<uint32_t> c(f_, 0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        long long r = coeffs[i] % static_cast<long long>(pn_);
        if (r < 0) r += pn_;
        c[i] = static_cast<uint32_t>(r);
    }
    return RingElement(this, std::move(c));
}

RingElement UnramifiedRing::element(std::vector<uint32_t> digits) const {
    if (static_cast<int>(digits.size()) != f_)
        throw std::invalid_argument("element: coordinate count must equal f");
    for (uint32_t d : digits)
        if (d >= pn_) throw std::invalid_argument("element: coordinate out of range");
    return RingElement(this, std::move(digits));
}

RingElement UnramifiedRing::teichmuller(const RingElement& r) const {
    if (!r.is_unit())
        throw std::invalid_argument("teichmuller: residue must be nonzero");
    std::vector<uint32_t> x(f_);
    for (int i = 0; i < f_; ++i) x[i] = r.digits()[i] % p_;
    RingElement cur(this, std::move(x));
    // x <- x^q doubles the number of correct digits each pass
    for (int it = 0; it < N_ + 4; ++it) {
        RingElement nxt = cur.pow(q_);
        if (nxt == cur) return cur;
        cur = nxt;
    }
    throw std::logic_error("teichmuller: iteration failed to stabilize");
}

RingElement UnramifiedRing::residue_mult_generator() const {
    uint64_t order = q_ - 1;
    if (order == 0) throw std::logic_error("residue field has no nonzero element");
    // prime divisors of q-1
    std::vector<uint64_t> primes;
    uint64_t t = order;
    for (uint64_t d = 2; d * d <= t; ++d)
        if (t % d == 0) {
            primes.push_back(d);
            while (t % d == 0) t /= d;
        }
    if (t > 1) primes.push_back(t);

    Poly mod_p(modulus_.begin(), modulus_.end());
    for (auto& c : mod_p) c %= p_;
    for (uint64_t idx = 1; idx < q_; ++idx) {
        Poly cand;
        uint64_t v = idx;
        for (int i = 0; i < f_; ++i) { cand.push_back(v % p_); v /= p_; }
        poly_trim(cand);
        bool ok = true;
        for (uint64_t l : primes) {
            Poly pw = f_ == 1 ? Poly{powmod_u32(cand.empty() ? 0 : cand[0], order / l, p_)}
                              : poly_powmod(cand, order / l, mod_p, p_);
            poly_trim(pw);
            if (pw == Poly{1}) { ok = false; break; }
        }
        if (ok) {
            std::vector<uint32_t> c(f_, 0);
            v = idx;
            for (int i = 0; i < f_; ++i) { c[i] = v % p_; v /= p_; }
            return RingElement(this, std::move(c));
        }
    }
    throw std::logic_error("no residue generator found");
}

std::string UnramifiedRing::describe() const {
    std::ostringstream os;
    os << "Z_" << p_;
    if (f_ >= 2) {
        os << "[g]/(";
        bool first = true;
        for (int i = f_; i >= 0; --i) {
            if (modulus_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (i == 0 || modulus_[i] != 1) os << modulus_[i];
            if (i >= 1) {
                if (i == 0 || modulus_[i] != 1) os << "*";
                os << "g";
                if (i >= 2) os << "^" << i;
            }
        }
        os << ")";
    }
    os << " at precision " << p_ << "^" << N_;
    return os.str();
}

// ---------------------------------------------------------------------------
// RingElement
// ---------------------------------------------------------------------------

void RingElement::check_same(const RingElement& o) const {
    if (ring_ == o.ring_) return;
    if (!ring_ || !o.ring_ || !ring_->compatible(*o.ring_))
        throw std::invalid_argument("ring elements have mismatched parent rings");
}

RingElement RingElement::operator+(const RingElement& o) const {
    check_same(o);
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) c[i] = kern::add_mod(c_[i], o.c_[i], ring_->pn_);
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::operator-(const RingElement& o) const {
    check_same(o);
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) c[i] = kern::sub_mod(c_[i], o.c_[i], ring_->pn_);
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::operator*(const RingElement& o) const {
    check_same(o);
    std::vector<uint32_t> c(ring_->f_);
    ring_->raw_mul(c_.data(), o.c_.data(), c.data());
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::operator-() const {
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) c[i] = kern::sub_mod(0, c_[i], ring_->pn_);
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::pow(uint64_t e) const {
    RingElement r = ring_->one();
    RingElement base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

RingElement RingElement::scaled(long long k) const {
    return *this * ring_->from_int(k);
}

bool RingElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](uint32_t x) { return x == 0; });
}

bool RingElement::is_unit() const {
    return std::any_of(c_.begin(), c_.end(), [&](uint32_t x) { return x % ring_->p_ != 0; });
}

bool RingElement::is_one() const { return *this == ring_->one(); }

Valuation RingElement::valuation() const {
    int best = ring_->N_;
    for (uint32_t x : c_)
        if (x != 0) best = std::min(best, vp_u32(x, ring_->p_));
    if (best >= ring_->N_) return Valuation{false, ring_->N_};
    return Valuation{true, best};
}

RingElement RingElement::inverse() const {
    if (!is_unit()) throw std::domain_error("inverse: element is not a unit");
    const UnramifiedRing& R = *ring_;
    // inverse of the residue, then Newton lifting x <- x(2 - a x)
    RingElement x = R.zero();
    if (R.f_ == 1) {
        x = RingElement(ring_, {invmod_u32(c_[0] % R.p_, R.p_)});
    } else {
        Poly mod_p(R.modulus_.begin(), R.modulus_.end());
        Poly a;
        for (int i = 0; i < R.f_; ++i) a.push_back(c_[i] % R.p_);
        poly_trim(a);
        // extended Euclid over F_p[x]: find u with a*u = 1 mod modulus
        Poly r0 = mod_p, r1 = a, s0 = {}, s1 = {1};
        while (!r1.empty()) {
            uint32_t lead_inv = invmod_u32(r1.back(), R.p_);
            Poly quo;
            Poly rem = r0;
            while (rem.size() >= r1.size() && !rem.empty()) {
                uint32_t cq = static_cast<uint32_t>(uint64_t(rem.back()) * lead_inv % R.p_);
                size_t off = rem.size() - r1.size();
                if (quo.size() < off + 1) quo.resize(off + 1, 0);
                quo[off] = cq;
                for (size_t i = 0; i < r1.size(); ++i)
                    rem[off + i] = (rem[off + i] + uint64_t(cq) * (R.p_ - r1[i])) % R.p_;
                poly_trim(rem);
            }
            // s2 = s0 - quo*s1
            Poly qs(quo.size() + s1.size(), 0);
            for (size_t i = 0; i < quo.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j)
                    qs[i + j] = (qs[i + j] + uint64_t(quo[i]) * s1[j]) % R.p_;
            Poly s2 = s0;
            if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
            for (size_t i = 0; i < qs.size(); ++i)
                s2[i] = (s2[i] + uint64_t(R.p_ - qs[i] % R.p_)) % R.p_;
            poly_trim(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is the gcd (a nonzero constant since a is a unit); normalize
        uint32_t norm = invmod_u32(r0.empty() ? 1 : r0[0], R.p_);
        std::vector<uint32_t> xi(R.f_, 0);
        for (size_t i = 0; i < s0.size() && i < size_t(R.f_); ++i)
            xi[i] = static_cast<uint32_t>(uint64_t(s0[i]) * norm % R.p_);
        x = RingElement(ring_, std::move(xi));
    }
    RingElement two = R.from_int(2);
    for (int k = 1; k < R.N_; k *= 2)
        x = x * (two - *this * x);
    return x;
}

RingElement RingElement::divide_exact_p(int k) const {
    if (k == 0) return *this;
    uint32_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= ring_->p_;
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) {
        if (c_[i] % pk != 0)
            throw std::domain_error("divide_exact_p: element not divisible by p^" + std::to_string(k));
        c[i] = c_[i] / pk;
    }
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::times_p(int k) const {
    uint32_t pk = ring_->p_pow(k);
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) c[i] = kern::mul_mod(c_[i], pk, ring_->pn_);
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::reduced_mod_p_pow(int k) const {
    if (k >= ring_->N_) return *this;
    uint32_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= ring_->p_;
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) c[i] = c_[i] % pk;
    return RingElement(ring_, std::move(c));
}

RingElement RingElement::change_ring(const UnramifiedRing& target) const {
    if (!ring_->same_tower(target))
        throw std::invalid_argument("change_ring: incompatible rings");
    if (target.N() > ring_->N_)
        throw std::invalid_argument("change_ring: cannot lift to higher precision");
    std::vector<uint32_t> c(ring_->f_);
    for (int i = 0; i < ring_->f_; ++i) c[i] = c_[i] % target.pn();
    return target.element(std::move(c));
}

std::string RingElement::str() const {
    std::ostringstream os;
    for (int i = 0; i < ring_->f_; ++i) {
        if (i) os << " + ";
        os << c_[i];
        if (i == 1) os << "*g";
        else if (i >= 2) os << "*g^" << i;
    }
    os << " (mod " << ring_->pn_ << ")";
    return os.str();
}

RingElement parse_element(const UnramifiedRing& ring, const std::string& text) {
    std::string body = text;
    uint64_t declared_mod = 0;
    auto mpos = body.find("(mod");
    if (mpos != std::string::npos) {
        std::string modpart = body.substr(mpos + 4);
        auto close = modpart.find(')');
        if (close == std::string::npos) throw std::invalid_argument("element parse: unterminated (mod ...)");
        declared_mod = std::stoull(modpart.substr(0, close));
        body = body.substr(0, mpos);
        if (declared_mod != ring.pn())
            throw std::invalid_argument("element parse: modulus does not match the ring");
    }
    std::vector<uint32_t> c(ring.f(), 0);
    std::string term;
    auto flush = [&](const std::string& t) {
        if (t.empty()) return;
        uint64_t coeff = 0;
        int power = 0;
        auto star = t.find('*');
        std::string num = star == std::string::npos ? t : t.substr(0, star);
        coeff = std::stoull(num);
        if (star != std::string::npos) {
            std::string gp = t.substr(star + 1);
            if (gp.empty() || gp[0] != 'g') throw std::invalid_argument("element parse: bad term " + t);
            power = gp.size() > 1 && gp[1] == '^' ? std::stoi(gp.substr(2)) : 1;
        }
        if (power >= ring.f()) throw std::invalid_argument("element parse: power of g out of range");
        if (coeff >= ring.pn()) throw std::invalid_argument("element parse: coefficient out of range");
        c[power] = static_cast<uint32_t>(coeff);
    };
    for (char ch : body) {
        if (ch == ' ' || ch == '\t') continue;
        if (ch == '+') { flush(term); term.clear(); continue; }
        term += ch;
    }
    flush(term);
    return ring.element(std::move(c));
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

FieldElement FieldElement::normalize(const UnramifiedRing& ring, long long base_val,
                                     std::vector<uint32_t> coords, int rel_prec) {
    FieldElement e;
    e.ring_ = &ring;
    rel_prec = std::min(rel_prec, ring.N());
    if (rel_prec <= 0) {
        e.zero_ = true;
        e.val_ = base_val;
        e.prec_ = 0;
        return e;
    }
    uint32_t mask_mod = 1;
    for (int i = 0; i < rel_prec; ++i) mask_mod *= ring.p();
    int s = rel_prec;
    for (auto& x : coords) {
        x %= mask_mod;
        if (x != 0) s = std::min(s, vp_u32(x, ring.p()));
    }
    if (s >= rel_prec) {
        e.zero_ = true;
        e.val_ = base_val + rel_prec;
        e.prec_ = 0;
        return e;
    }
    uint32_t ps = 1;
    for (int i = 0; i < s; ++i) ps *= ring.p();
    for (auto& x : coords) x /= ps;
    e.zero_ = false;
    e.val_ = base_val + s;
    e.prec_ = rel_prec - s;
    // canonical form: digits above the certified window are zero
    uint32_t keep = 1;
    for (int i = 0; i < e.prec_; ++i) keep *= ring.p();
    for (auto& x : coords) x %= keep;
    e.unit_ = std::move(coords);
    return e;
}

FieldElement FieldElement::from_ring(const RingElement& a) {
    return normalize(a.ring(), 0, a.digits(), a.ring().N());
}

FieldElement FieldElement::from_ring_with_prec(const RingElement& a, int prec) {
    return normalize(a.ring(), 0, a.digits(), prec);
}

FieldElement FieldElement::from_integer(const UnramifiedRing& ring, long long k) {
    if (k == 0) return zero_marker(ring, exact_zero_bound);
    long long a = k < 0 ? -k : k;
    long long v = 0;
    while (a % ring.p() == 0) { a /= ring.p(); ++v; }
    FieldElement e;
    e.ring_ = &ring;
    e.zero_ = false;
    e.val_ = v;
    e.prec_ = ring.N();
    e.unit_ = ring.from_int(k < 0 ? -a : a).digits();
    return e;
}

FieldElement FieldElement::zero_marker(const UnramifiedRing& ring, long long bound) {
    FieldElement e;
    e.ring_ = &ring;
    e.zero_ = true;
    e.val_ = bound;
    e.prec_ = 0;
    return e;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    const UnramifiedRing& R = *ring_;
    if (zero_ && o.zero_) return zero_marker(R, std::min(val_, o.val_));
    if (zero_ || o.zero_) {
        const FieldElement& value = zero_ ? o : *this;
        long long bound = zero_ ? val_ : o.val_;
        // digits of `value` at or above the bound are polluted by the marker
        int rel = static_cast<int>(std::min<long long>(value.prec_, bound - value.val_));
        if (rel <= 0) return zero_marker(R, std::min(bound, value.val_));
        std::vector<uint32_t> coords = value.unit_;
        return normalize(R, value.val_, std::move(coords), rel);
    }
    long long v0 = std::min(val_, o.val_);
    long long sa = val_ - v0, sb = o.val_ - v0;
    int rel = static_cast<int>(std::min(sa + prec_, sb + o.prec_));
    std::vector<uint32_t> coords(R.f(), 0);
    uint32_t pa = sa >= R.N() ? 0 : [&] { uint32_t r = 1; for (long long i = 0; i < sa; ++i) r *= R.p(); return r; }();
    uint32_t pb = sb >= R.N() ? 0 : [&] { uint32_t r = 1; for (long long i = 0; i < sb; ++i) r *= R.p(); return r; }();
    for (int i = 0; i < R.f(); ++i) {
        uint64_t s = uint64_t(kern::mul_mod(unit_[i], pa, R.pn())) + kern::mul_mod(o.unit_[i], pb, R.pn());
        coords[i] = static_cast<uint32_t>(s % R.pn());
    }
    return normalize(R, v0, std::move(coords), rel);
}

FieldElement FieldElement::operator-() const {
    if (zero_) return *this;
    FieldElement e = *this;
    uint32_t keep = 1;
    for (int i = 0; i < prec_; ++i) keep *= ring_->p();
    for (auto& x : e.unit_) x = (keep - x) % keep;
    return e;
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    const UnramifiedRing& R = *ring_;
    if (zero_ || o.zero_) return zero_marker(R, val_ + o.val_);
    FieldElement e;
    e.ring_ = ring_;
    e.zero_ = false;
    e.val_ = val_ + o.val_;
    e.prec_ = std::min(prec_, o.prec_);
    e.unit_.assign(R.f(), 0);
    R.raw_mul(unit_.data(), o.unit_.data(), e.unit_.data());
    uint32_t keep = 1;
    for (int i = 0; i < e.prec_; ++i) keep *= R.p();
    for (auto& x : e.unit_) x %= keep;
    return e;
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    const UnramifiedRing& R = *ring_;
    if (o.zero_)
        throw precision_error("division by an element indistinguishable from zero", -1, o.prec_);
    if (zero_) return zero_marker(R, val_ - o.val_);
    RingElement u(&R, o.unit_);
    RingElement inv = u.inverse();
    FieldElement e;
    e.ring_ = ring_;
    e.zero_ = false;
    e.val_ = val_ - o.val_;
    e.prec_ = std::min(prec_, o.prec_);
    e.unit_.assign(R.f(), 0);
    R.raw_mul(unit_.data(), inv.digits().data(), e.unit_.data());
    uint32_t keep = 1;
    for (int i = 0; i < e.prec_; ++i) keep *= R.p();
    for (auto& x : e.unit_) x %= keep;
    return e;
}

FieldElement::ValSign FieldElement::val_sign() const {
    if (zero_) return val_ >= 0 ? ValSign::nonneg : ValSign::undecidable;
    if (prec_ < 1) return ValSign::undecidable;
    return val_ >= 0 ? ValSign::nonneg : ValSign::negative;
}

RingElement FieldElement::to_ring() const {
    const UnramifiedRing& R = *ring_;
    if (zero_) {
        if (val_ < 0) throw std::domain_error("to_ring: negative valuation bound");
        return R.zero();
    }
    if (val_ < 0) throw std::domain_error("to_ring: element has negative valuation");
    RingElement u(&R, unit_);
    return u.times_p(static_cast<int>(std::min<long long>(val_, R.N())));
}

int FieldElement::integer_prec() const {
    if (zero_) return static_cast<int>(std::min<long long>(val_, ring_->N()));
    return static_cast<int>(std::min<long long>(val_ + prec_, ring_->N()));
}

std::string FieldElement::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "O(" << ring_->p() << "^" << val_ << ")";
        return os.str();
    }
    os << ring_->p() << "^" << val_ << "*(";
    for (int i = 0; i < ring_->f(); ++i) {
        if (i) os << " + ";
        os << unit_[i];
        if (i == 1) os << "*g";
        else if (i >= 2) os << "*g^" << i;
    }
    os << ") [" << prec_ << " digits]";
    return os.str();
}

}  // namespace fgl
