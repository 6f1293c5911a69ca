#include "fgl/lubin_tate.hpp"

#include <algorithm>

#include "fgl/kernels.hpp"

namespace fgl {
namespace {

int vp_int(long long k, uint32_t p) {
    int v = 0;
    while (k % p == 0) { k /= p; ++v; }
    return v;
}

// Lift a series into a higher-precision ring of the same tower; the digits
// are taken as exact, since the series defines the object being built.
Series lift_exact(const Series& s, const UnramifiedRing& target) {
    Series r(target, s.cap());
    for (int k = 0; k <= s.cap(); ++k)
        r.set_coeff(k, target.element(s.coeff(k).digits()));
    return r;
}

int vp_of(const RingElement& e, int cap_at) {
    Valuation v = e.valuation();
    return static_cast<int>(v.exact ? std::min<long long>(v.v, cap_at) : cap_at);
}

}  // namespace

int max_precision_for(uint32_t p) {
    int e = 0;
    uint64_t v = 1;
    while (v * p < kern::max_modulus_exclusive) { v *= p; ++e; }
    return e;
}

FrobeniusSeries FrobeniusSeries::validate(const Series& f, uint64_t q) {
    const UnramifiedRing& R = f.ring();
    uint64_t t = q;
    int h = 0;
    while (t > 1 && t % R.p() == 0) { t /= R.p(); ++h; }
    if (t != 1 || h < 1) throw std::invalid_argument("frobenius: q must be a positive power of p");
    if (static_cast<uint64_t>(f.cap()) < q)
        throw std::invalid_argument("frobenius: cap must be at least q = " + std::to_string(q));
    if (!f.coeff_is_zero(0))
        throw std::invalid_argument("frobenius: constant term must vanish");
    if (!(f.coeff(1) == R.from_int(R.p())))
        throw std::invalid_argument("frobenius: linear coefficient must equal p");
    for (int k = 2; k <= f.cap(); ++k) {
        RingElement c = f.coeff(k);
        if (static_cast<uint64_t>(k) == q) {
            Valuation w = (c - R.one()).valuation();
            if (w.exact && w.v < 1)
                throw std::invalid_argument("frobenius: coefficient of X^q must be 1 mod p");
        } else if (c.is_unit()) {
            throw std::invalid_argument("frobenius: f = X^q mod p violated at degree " +
                                        std::to_string(k) + " (unit coefficient)");
        }
    }
    return FrobeniusSeries(f, q, h);
}

FrobeniusSeries FrobeniusSeries::canonical(const UnramifiedRing& ring, uint64_t q, int cap) {
    if (static_cast<uint64_t>(cap) < q)
        throw std::invalid_argument("frobenius: cap must be at least q");
    Series f(ring, cap);
    f.set_coeff(1, ring.from_int(ring.p()));
    f.set_coeff(static_cast<int>(q), ring.one());
    return validate(f, q);
}

FormalModule lt_group(const FrobeniusSeries& fs) {
    const UnramifiedRing& R = fs.ring();
    const int D = fs.series().cap();
    const int N = R.N();
    const uint32_t p = R.p();

    // Padded working precision: the per-degree division by p^d - p costs one
    // digit, and the error can be re-injected along q-power degree chains; a
    // fixed pad covers every cap this library is used at.
    const int NW = std::max(N, std::min(max_precision_for(p), N + 8));
    UnramifiedRing RW(p, R.f(), NW);
    Series fW = lift_exact(fs.series(), RW);

    int K = 1;  // largest exponent with a nonzero f-coefficient
    for (int k = 2; k <= D; ++k)
        if (!fW.coeff_is_zero(k)) K = k;
    if (K < 2) throw std::invalid_argument("lt_group: Frobenius series has no tail");
    if (double(K + 1) * double(Series2::layer_offset(D + 1)) * R.f() * 4 > double(1u << 31))
        throw std::invalid_argument("lt_group: Frobenius series too dense at this cap");

    const int INF = NW;
    Series2 F(RW, D);
    F.set(1, 0, RW.one());
    F.set(0, 1, RW.one());
    // G accumulates F(f(X), f(Y)); layer 1 of F contributes f(X) + f(Y)
    Series2 G(RW, D);
    Series one_series(RW, D);
    one_series.set_coeff(0, RW.one());
    G.add_outer_product(RW.one(), fW, one_series);
    G.add_outer_product(RW.one(), one_series, fW);

    std::vector<Series> fpow;
    fpow.reserve(D + 1);
    fpow.push_back(one_series);
    for (int k = 1; k <= D; ++k) fpow.push_back(fpow.back() * fW);
    std::vector<std::vector<int>> vfp(D + 1, std::vector<int>(D + 1, INF));
    for (int i = 0; i <= D; ++i)
        for (int s = 0; s <= D; ++s) vfp[i][s] = vp_of(fpow[i].coeff(s), INF);

    std::vector<Series2> P(K + 1, Series2(RW, D));  // P[k] = F^k by layers, k >= 2
    std::vector<int> certE(D + 1, INF), certG(D + 1, INF);
    std::vector<std::vector<int>> mvP(K + 1, std::vector<int>(D + 1, INF));
    std::vector<std::vector<int>> certP(K + 1, std::vector<int>(D + 1, INF));
    std::vector<int> mvF(D + 1, INF);
    mvF[1] = 0;

    auto layer_min_val = [&](const Series2& S, int layer) {
        size_t off = Series2::layer_offset(layer);
        int best = INF;
        for (int t = 0; t < RW.f(); ++t) {
            const uint32_t* pl = S.plane(t) + off;
            for (int j = 0; j <= layer; ++j)
                if (pl[j] != 0) best = std::min(best, vp_int(pl[j], p));
        }
        return best;
    };

    for (int d = 2; d <= D; ++d) {
        // extend the maintained powers by layer d (uses only layers < d of F)
        for (int k = 2; k <= K; ++k) {
            const Series2& base = (k == 2) ? F : P[k - 1];
            P[k].accumulate_product_layer(base, F, d);
            mvP[k][d] = layer_min_val(P[k], d);
            // sensitivity of (F^k)_d to the layer E_a is k * (F^{k-1})_{d-a}
            int vpk = vp_int(k, p);
            int cert = INF;
            for (int a = 2; a <= d - (k - 1); ++a) {
                int mv = (k == 2) ? mvF[d - a] : mvP[k - 1][d - a];
                cert = std::min(cert, certE[a] + vpk + mv);
            }
            certP[k][d] = std::min(cert, INF);
        }
        // r_d = sum_{k>=2} f_k (F^k)_d - G_d  (the f_1 term vanishes: F has no
        // layer-d part yet)
        std::vector<RingElement> r(d + 1, RW.zero());
        int certR = certG[d];
        size_t off = Series2::layer_offset(d);
        for (int k = 2; k <= K; ++k) {
            RingElement fk = fW.coeff(k);
            if (fk.is_zero()) continue;
            for (int j = 0; j <= d; ++j) {
                std::vector<uint32_t> digs(RW.f());
                for (int t = 0; t < RW.f(); ++t) digs[t] = P[k].plane(t)[off + j];
                RingElement pkj(&RW, std::move(digs));
                if (!pkj.is_zero()) r[j] = r[j] + fk * pkj;
            }
            certR = std::min(certR, certP[k][d] + vp_of(fk, INF));
        }
        for (int j = 0; j <= d; ++j) {
            std::vector<uint32_t> digs(RW.f());
            for (int t = 0; t < RW.f(); ++t) digs[t] = G.plane(t)[off + j];
            RingElement gj(&RW, std::move(digs));
            if (!gj.is_zero()) r[j] = r[j] - gj;
        }
        // E_d = r_d / (p^d - p); the divisor is p times the unit p^{d-1} - 1
        uint32_t pdm1 = 1;
        for (int i = 0; i < std::min(d - 1, NW); ++i) pdm1 = kern::mul_mod(pdm1, p, RW.pn());
        uint32_t unit_inv = RW.inverse_of_int(kern::sub_mod(pdm1, 1, RW.pn()));
        for (int j = 0; j <= d; ++j) {
            if (r[j].is_zero()) continue;
            RingElement e;
            try {
                e = r[j].divide_exact_p(1);
            } catch (const std::domain_error&) {
                throw std::logic_error(
                    "lt_group: functional-equation solver obstruction at degree " +
                    std::to_string(d) + " (internal consistency failure)");
            }
            std::vector<uint32_t> digs = e.digits();
            for (auto& x : digs) x = kern::mul_mod(x, unit_inv, RW.pn());
            F.set(d - j, j, RW.element(std::move(digs)));
        }
        certE[d] = std::max(0, certR - 1);
        mvF[d] = layer_min_val(F, d);

        // fold the new layer into G, with its error flowing through the exact
        // f-power cofactors
        for (int j = 0; j <= d; ++j) {
            RingElement e = F.get(d - j, j);
            if (!e.is_zero()) G.add_outer_product(e, fpow[d - j], fpow[j]);
            if (certE[d] >= INF) continue;
            for (int s = d - j; s <= D; ++s) {
                if (vfp[d - j][s] >= INF) continue;
                for (int t2 = j; s + t2 <= D; ++t2) {
                    if (vfp[j][t2] >= INF) continue;
                    certG[s + t2] =
                        std::min(certG[s + t2], certE[d] + vfp[d - j][s] + vfp[j][t2]);
                }
            }
        }
    }

    int cert = N;
    for (int d = 2; d <= D; ++d) cert = std::min(cert, certE[d]);
    cert = std::max(cert, 0);

    Series2 Fr = F.change_ring(R);
    return FormalModule::trusted(FormalGroupLaw::trusted(std::move(Fr)), fs.series(),
                                 std::nullopt, cert, fs.q());
}

Series lt_bracket(const FrobeniusSeries& fs, const RingElement& a, int* cert_out) {
    const UnramifiedRing& R = fs.ring();
    const int N = R.N();
    const int NW = std::max(N, std::min(max_precision_for(R.p()), N + 8));
    UnramifiedRing RW(R.p(), R.f(), NW);
    Series fW = lift_exact(fs.series(), RW);
    RingElement aW = RW.element(a.digits());

    IntertwineResult res = solve_intertwine(fW, fW, aW);
    if (!res.u)
        throw std::logic_error("lt_bracket: solver obstruction at degree " +
                               std::to_string(res.obstructed_degree) +
                               " (internal consistency failure)");
    if (cert_out) *cert_out = std::min(N, res.cert_floor);
    return res.u->change_ring(R);
}

Series lt_iso(const FrobeniusSeries& fs, const FrobeniusSeries& gs, int* cert_out) {
    const UnramifiedRing& R = fs.ring();
    if (!R.compatible(gs.ring()))
        throw std::invalid_argument("lt_iso: the two series live over different rings");
    if (fs.q() != gs.q()) throw std::invalid_argument("lt_iso: mismatched q");
    const int N = R.N();
    const int NW = std::max(N, std::min(max_precision_for(R.p()), N + 8));
    UnramifiedRing RW(R.p(), R.f(), NW);
    Series fW = lift_exact(fs.series(), RW);
    Series gW = lift_exact(gs.series(), RW);

    IntertwineResult res = solve_intertwine(fW, gW, RW.one());
    if (!res.u)
        throw std::logic_error("lt_iso: solver obstruction at degree " +
                               std::to_string(res.obstructed_degree) +
                               " (internal consistency failure)");
    if (cert_out) *cert_out = std::min(N, res.cert_floor);
    return res.u->change_ring(R);
}

}  // namespace fgl
