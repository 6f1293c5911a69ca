#include "fgl/formal_group.hpp"

#include <sstream>

namespace fgl {
namespace {

std::vector<Series> powers_of(const Series& a, int up_to) {
    std::vector<Series> pw;
    pw.reserve(up_to + 1);
    Series one(a.ring(), a.cap());
    one.set_coeff(0, a.ring().one());
    pw.push_back(one);
    for (int k = 1; k <= up_to; ++k) pw.push_back(pw.back() * a);
    return pw;
}

int vp_u32_local(long long k, uint32_t p) {
    int v = 0;
    while (k % p == 0) { k /= p; ++v; }
    return v;
}

}  // namespace

std::string AxiomViolation::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::unit: os << "unit axiom fails at monomial (" << i << "," << j << ")"; break;
        case Kind::commutativity:
            os << "commutativity fails at monomial (" << i << "," << j << ")";
            break;
        case Kind::associativity:
            os << "associativity fails at monomial (" << i << "," << j << "," << k << ")";
            break;
    }
    return os.str();
}

std::optional<AxiomViolation> check_group_law(const Series2& F) {
    const int D = F.cap();
    if (D < 2) throw std::invalid_argument("group law check needs cap >= 2");

    // unit: F(X,0) = X and F(0,Y) = Y
    for (int i = 0; i <= D; ++i) {
        RingElement c = F.get(i, 0);
        bool want_one = (i == 1);
        if (want_one ? !c.is_one() : !c.is_zero())
            return AxiomViolation{AxiomViolation::Kind::unit, i, 0, 0};
    }
    for (int j = 0; j <= D; ++j) {
        RingElement c = F.get(0, j);
        bool want_one = (j == 1);
        if (want_one ? !c.is_one() : !c.is_zero())
            return AxiomViolation{AxiomViolation::Kind::unit, 0, j, 0};
    }

    // commutativity
    for (int d = 0; d <= D; ++d)
        for (int j = 0; 2 * j <= d; ++j)
            if (!(F.get(d - j, j) == F.get(j, d - j)))
                return AxiomViolation{AxiomViolation::Kind::commutativity, d - j, j, 0};

    // associativity: compare F(F(X,Y),Z) against F(X,F(Y,Z)).
    // With S = F, collect A_z = sum_d c_{d-j,j} S^{d-j} (coefficient of Z^z)
    // and B_x = sum_j c_{x,j} S^j (coefficient of X^x); both sides then live
    // in bivariate tables and no trivariate arithmetic is needed.
    std::vector<Series2> sp;
    sp.reserve(D + 1);
    {
        Series2 one(F.ring(), D);
        one.set(0, 0, F.ring().one());
        sp.push_back(one);
        for (int k = 1; k <= D; ++k) sp.push_back(sp.back() * F);
    }
    std::vector<Series2> A(D + 1, Series2(F.ring(), D)), B(D + 1, Series2(F.ring(), D));
    for (int d = 0; d <= D; ++d)
        for (int j = 0; j <= d; ++j) {
            RingElement c = F.get(d - j, j);
            if (c.is_zero()) continue;
            A[j].add_scaled(c, sp[d - j]);  // c * S^{d-j} * Z^j
            B[d - j].add_scaled(c, sp[j]);  // X^{d-j} * c * S^j
        }
    for (int x = 0; x <= D; ++x)
        for (int y = 0; x + y <= D; ++y)
            for (int z = 0; x + y + z <= D; ++z)
                if (!(A[z].get(x, y) == B[x].get(y, z)))
                    return AxiomViolation{AxiomViolation::Kind::associativity, x, y, z};
    return std::nullopt;
}

FormalGroupLaw FormalGroupLaw::validate(const Series2& F) {
    if (auto v = check_group_law(F))
        throw std::domain_error("not a formal group law: " + v->str());
    return FormalGroupLaw(F);
}

FormalGroupLaw FormalGroupLaw::trusted(Series2 F) { return FormalGroupLaw(std::move(F)); }

HeightResult height_from_multiplier(const Series& pi) {
    const UnramifiedRing& R = pi.ring();
    const uint32_t p = R.p();
    int first_unit = -1;
    for (int k = 0; k <= pi.cap(); ++k) {
        if (pi.coeff(k).is_unit()) { first_unit = k; break; }
    }
    if (first_unit < 0) {
        int lower = 0;
        long long pw = p;
        while (pw <= pi.cap()) { ++lower; pw *= p; }
        return HeightResult{false, 0, lower};
    }
    if (first_unit <= 1)
        throw std::domain_error("multiplier series has a unit coefficient below degree 2");
    int h = 0;
    long long v = first_unit;
    while (v % p == 0) { v /= p; ++h; }
    if (v != 1)
        throw std::domain_error("first unit coefficient of the multiplier sits at index " +
                                std::to_string(first_unit) + ", not a power of p");
    // mod p the multiplier must be a series in X^{p^h}
    long long ph = first_unit;
    for (int k = 0; k <= pi.cap(); ++k)
        if (pi.coeff(k).is_unit() && k % ph != 0)
            throw std::domain_error("multiplier mod p is not a series in X^(p^h): unit at index " +
                                    std::to_string(k));
    return HeightResult{true, h, 0};
}

Series2 compose_outer(const Series& u, const Series2& F) {
    const int D = F.cap();
    if (u.cap() != D) throw std::invalid_argument("compose_outer: cap mismatch");
    Series2 res(F.ring(), D);
    res.set(0, 0, u.coeff(D));
    for (int k = D - 1; k >= 0; --k) {
        res = res * F;
        res.set(0, 0, res.get(0, 0) + u.coeff(k));
    }
    return res;
}

Series2 substitute_both(const Series2& F, const Series& u, const Series& v) {
    const int D = F.cap();
    if (!u.coeff_is_zero(0) || !v.coeff_is_zero(0))
        throw std::invalid_argument("substitute_both: arguments need zero constant terms");
    std::vector<Series> U = powers_of(u, D), V = powers_of(v, D);
    Series2 res(F.ring(), D);
    for (int d = 0; d <= D; ++d)
        for (int j = 0; j <= d; ++j) {
            RingElement c = F.get(d - j, j);
            if (c.is_zero()) continue;
            res.add_outer_product(c, U[d - j], V[j]);
        }
    return res;
}

FormalModule::FormalModule(FormalGroupLaw law, Series pi, std::optional<Series> omega)
    : law_(std::move(law)), pi_(std::move(pi)), omega_(std::move(omega)),
      cert_prec_(law_.ring().N()) {
    const UnramifiedRing& R = law_.ring();
    if (pi_.cap() != law_.cap()) throw std::invalid_argument("module: pi cap mismatch");
    if (!pi_.coeff_is_zero(0)) throw std::invalid_argument("module: pi must have zero constant term");
    if (!(pi_.coeff(1) == R.from_int(R.p())))
        throw std::invalid_argument("module: linear coefficient of pi must equal p");
    if (!(compose_outer(pi_, F()) == substitute_both(F(), pi_, pi_)))
        throw std::domain_error("module: pi is not an endomorphism of the group law");
    if (omega_) {
        const Series& w = *omega_;
        if (w.cap() != law_.cap()) throw std::invalid_argument("module: omega cap mismatch");
        RingElement lin = w.coeff(1);
        if (!lin.is_unit() || !(lin.pow(R.q() - 1).is_one()))
            throw std::domain_error("module: omega linear coefficient is not a Teichmuller unit");
        if (!(w.compose(pi_) == pi_.compose(w)))
            throw std::domain_error("module: omega does not commute with pi");
        if (!(compose_outer(w, F()) == substitute_both(F(), w, w)))
            throw std::domain_error("module: omega is not an endomorphism of the group law");
        // omega iterated (order of its root of unity) times must be the identity
        uint64_t ord = 1;
        RingElement t = lin;
        while (!t.is_one()) { t = t * lin; ++ord; }
        Series it = Series::x(R, law_.cap());
        for (uint64_t i = 0; i < ord; ++i) it = w.compose(it);
        if (!(it == Series::x(R, law_.cap())))
            throw std::domain_error("module: omega iterated ord(omega) times is not the identity");
    }
}

FormalModule FormalModule::trusted(FormalGroupLaw law, Series pi, std::optional<Series> omega,
                                   int cert_prec, std::optional<uint64_t> lt_q) {
    return FormalModule(std::move(law), std::move(pi), std::move(omega), cert_prec, lt_q);
}

HeightResult FormalModule::height() const {
    if (!height_cache_) height_cache_ = height_from_multiplier(pi_);
    return *height_cache_;
}

Series fplus(const FormalGroupLaw& law, const Series& a, const Series& b) {
    const int D = law.cap();
    if (a.cap() != D || b.cap() != D) throw std::invalid_argument("fplus: cap mismatch");
    if (!a.coeff_is_zero(0) || !b.coeff_is_zero(0))
        throw std::invalid_argument("fplus: arguments need zero constant terms");
    std::vector<Series> A = powers_of(a, D);
    // inner sums I_j = sum_i F_{i,j} a^i, then Horner in b
    std::vector<Series> I(D + 1, Series(law.ring(), D));
    for (int d = 0; d <= D; ++d)
        for (int j = 0; j <= d; ++j) {
            RingElement c = law.F().get(d - j, j);
            if (c.is_zero()) continue;
            I[j].add_scaled(c, A[d - j]);
        }
    Series res = I[D];
    for (int j = D - 1; j >= 0; --j) res = res * b + I[j];
    return res;
}

Series fplus(const FormalModule& m, const Series& a, const Series& b) {
    return fplus(m.law(), a, b);
}

Series formal_inverse(const FormalModule& m) {
    const int D = m.cap();
    const UnramifiedRing& R = m.ring();
    const Series2& F = m.F();
    Series inv(R, D);
    if (D < 1) return inv;
    inv.set_coeff(1, -R.one());
    std::vector<Series> pw(D + 1, Series(R, D));
    pw[1] = inv;
    for (int d = 2; d <= D; ++d) {
        for (int b = 2; b <= d; ++b)
            pw[b].set_coeff(d, convolution_coeff(inv, pw[b - 1], d));
        RingElement known = R.zero();
        // coefficient of X^d in F(X, inv(X)), excluding the (0,1) slot
        for (int a = 0; a <= d; ++a)
            for (int b = (a == 0 ? 2 : 1); a + b <= m.cap() && b <= d - a; ++b) {
                RingElement c = F.get(a, b);
                if (c.is_zero()) continue;
                known = known + c * pw[b].coeff(d - a);
            }
        known = known + F.get(d, 0);  // zero unless d == 1 by the unit axiom
        RingElement vd = -known;
        inv.set_coeff(d, vd);
        pw[1].set_coeff(d, vd);
    }
    return inv;
}

Series int_mult(const FormalModule& m, long long k) {
    const UnramifiedRing& R = m.ring();
    Series x = Series::x(R, m.cap());
    if (k == 0) return Series(R, m.cap());
    long long n = k < 0 ? -k : k;
    Series acc = x;
    for (long long i = 1; i < n; ++i) acc = fplus(m, acc, x);
    if (k < 0) acc = formal_inverse(m).compose(acc);
    return acc;
}

QSeries flog(const FormalGroupLaw& law) {
    Series g = law.F().y_partial_at_zero();
    if (!g.coeff(0).is_one())
        throw std::domain_error("flog: dF/dY(X,0) must have constant term 1");
    return integrate(g.mul_inverse());
}

QSeries flog(const FormalModule& m) { return flog(m.law()); }

QSeries fexp(const FormalModule& m) { return flog(m).reversion(); }

IntertwineResult solve_intertwine(const Series& f, const Series& g, const RingElement& c) {
    const UnramifiedRing& R = f.ring();
    const int D = f.cap();
    const int NW = R.N();
    if (g.cap() != D) throw std::invalid_argument("solve_intertwine: cap mismatch");
    if (!f.coeff_is_zero(0) || !g.coeff_is_zero(0))
        throw std::invalid_argument("solve_intertwine: series need zero constant terms");
    RingElement lf = f.coeff(1), lg = g.coeff(1);

    IntertwineResult out;
    Series u(R, D);
    if (D >= 1) u.set_coeff(1, c);
    std::vector<Series> fpow = powers_of(f, D);
    std::vector<Series> upow(D + 1, Series(R, D));
    if (D >= 1) upow[1] = u;

    auto vp_of = [&](const RingElement& e) {
        Valuation v = e.valuation();
        return static_cast<int>(v.exact ? v.v : NW);
    };
    // error ledger: certU[d] = digits at which u_d agrees with the exact
    // solution, certUpow[k][d] likewise for (u^k)_d; the sensitivity of
    // (u^k)_d to u_a is k * (u^{k-1})_{d-a}, which supplies the damping.
    std::vector<int> certU(D + 1, NW);
    std::vector<std::vector<int>> certUpow(D + 1, std::vector<int>(D + 1, NW));
    std::vector<std::vector<int>> vUpow(D + 1, std::vector<int>(D + 1, NW));
    if (D >= 1) vUpow[1][1] = vp_of(c);

    for (int d = 2; d <= D; ++d) {
        for (int k = 2; k <= d; ++k) {
            RingElement val = convolution_coeff(u, upow[k - 1], d);
            upow[k].set_coeff(d, val);
            vUpow[k][d] = vp_of(val);
            int vpk = vp_u32_local(k, R.p());
            int cert = NW;
            for (int a = 2; a <= d - k + 1; ++a)
                cert = std::min(cert, certU[a] + vpk + vUpow[k - 1][d - a]);
            certUpow[k][d] = std::min(cert, NW);
        }
        RingElement lhs = R.zero();  // [u(f)]_d without the u_d * lf^d part
        int certT = NW;
        for (int k = 1; k <= d - 1; ++k) {
            RingElement uk = u.coeff(k);
            if (uk.is_zero() && certU[k] >= NW) continue;
            RingElement fk = fpow[k].coeff(d);
            if (!uk.is_zero() && !fk.is_zero()) lhs = lhs + uk * fk;
            certT = std::min(certT, certU[k] + vp_of(fk));
        }
        RingElement rhs = R.zero();  // [g(u)]_d without the lg * u_d part
        for (int k = 2; k <= d; ++k) {
            RingElement gk = g.coeff(k);
            if (gk.is_zero()) continue;
            RingElement uk = upow[k].coeff(d);
            if (!uk.is_zero()) rhs = rhs + gk * uk;
            certT = std::min(certT, certUpow[k][d] + vp_of(gk));
        }
        RingElement t = rhs - lhs;
        RingElement divisor = lf.pow(d) - lg;
        Valuation dv = divisor.valuation();
        if (!dv.exact)
            throw precision_error("intertwine: divisor vanishes at working precision", d, 0);
        int v = static_cast<int>(dv.v);
        if (v > 0) {
            // obstruction test: t must be divisible by p^v
            uint32_t pv = R.p_pow(v);
            for (uint32_t digit : t.digits())
                if (digit % pv != 0) {
                    out.obstructed_degree = d;
                    return out;
                }
        }
        RingElement ud = R.zero();
        if (!t.is_zero())
            ud = t.divide_exact_p(v) * divisor.divide_exact_p(v).inverse();
        out.division_loss = std::max(out.division_loss, v);
        certU[d] = std::max(0, certT - v);
        u.set_coeff(d, ud);
        upow[1].set_coeff(d, ud);
        vUpow[1][d] = vp_of(ud);
    }
    out.cert_floor = NW;
    for (int d = 2; d <= D; ++d) out.cert_floor = std::min(out.cert_floor, certU[d]);
    out.u = std::move(u);
    return out;
}

StructureSolveResult module_structure_solve(const FormalModule& m, uint64_t q) {
    const UnramifiedRing& R = m.ring();
    // q must be a power of p
    uint64_t t = q;
    while (t > 1 && t % R.p() == 0) t /= R.p();
    if (t != 1 || q < 2) throw std::invalid_argument("module_structure_solve: q must be a power of p");
    if ((R.q() - 1) % (q - 1) != 0)
        throw std::invalid_argument(
            "module_structure_solve: ring too small, the (q-1)-st roots of unity are missing "
            "(need (q-1) | p^f - 1)");

    StructureSolveResult res{std::nullopt, R.one(), -1, 0};
    if (q == 2) {
        // omega = 1 and [1] is the identity
        res.omega_series = Series::x(R, m.cap());
        res.cert_prec = m.cert_prec();
        return res;
    }
    RingElement gamma = R.residue_mult_generator();
    RingElement omega = R.teichmuller(gamma).pow((R.q() - 1) / (q - 1));
    res.omega = omega;

    IntertwineResult it = solve_intertwine(m.pi(), m.pi(), omega);
    if (!it.u) {
        res.obstructed_degree = it.obstructed_degree;
        return res;
    }
    res.omega_series = std::move(*it.u);
    res.cert_prec = std::min(m.cert_prec(), it.cert_floor);
    return res;
}

FormalModule transport(const FormalModule& m, const Series& u) {
    if (!u.coeff_is_zero(0) || !u.coeff(1).is_unit())
        throw std::invalid_argument("transport: u needs zero constant term and unit linear coefficient");
    Series uinv = u.reversion();
    Series2 G = compose_outer(u, substitute_both(m.F(), uinv, uinv));
    Series pi2 = u.compose(m.pi().compose(uinv));
    std::optional<Series> om;
    if (m.omega()) om = u.compose(m.omega()->compose(uinv));
    return FormalModule::trusted(FormalGroupLaw::trusted(std::move(G)), std::move(pi2),
                                 std::move(om), m.cert_prec(), std::nullopt);
}

FormalModule multiplicative_module(const UnramifiedRing& ring, int cap) {
    if (cap < 2) throw std::invalid_argument("multiplicative_module: cap must be >= 2");
    if (ring.p() > 61) throw std::invalid_argument("multiplicative_module: p too large for the binomial table");
    Series2 F(ring, cap);
    F.set(1, 0, ring.one());
    F.set(0, 1, ring.one());
    F.set(1, 1, ring.one());
    // [p](X) = (1+X)^p - 1
    Series pi(ring, cap);
    uint64_t binom = 1;
    for (uint32_t k = 1; k <= ring.p() && static_cast<int>(k) <= cap; ++k) {
        binom = binom * (ring.p() - k + 1) / k;
        pi.set_coeff(static_cast<int>(k), ring.from_int(static_cast<long long>(binom % ring.pn())));
    }
    return FormalModule::trusted(FormalGroupLaw::trusted(std::move(F)), std::move(pi),
                                 std::nullopt, ring.N(), ring.p());
}

FormalModule additive_module(const UnramifiedRing& ring, int cap) {
    if (cap < 2) throw std::invalid_argument("additive_module: cap must be >= 2");
    Series2 F(ring, cap);
    F.set(1, 0, ring.one());
    F.set(0, 1, ring.one());
    Series pi(ring, cap);
    pi.set_coeff(1, ring.from_int(ring.p()));
    return FormalModule::trusted(FormalGroupLaw::trusted(std::move(F)), std::move(pi),
                                 std::nullopt, ring.N(), std::nullopt);
}

}  // namespace fgl
