#include "fgl/endo.hpp"

#include <algorithm>
#include <map>

#include "fgl/lubin_tate.hpp"

namespace fgl {
namespace {

void check_same_ring(const FormalModule& F, const FormalModule& G) {
    if (!F.ring().compatible(G.ring()))
        throw std::invalid_argument("the two modules live over different rings");
    if (F.cap() != G.cap())
        throw std::invalid_argument("the two modules have different caps");
}

}  // namespace

CIntegralResult c_integral_test(const FormalModule& F, const FormalModule& G,
                                const RingElement& c) {
    check_same_ring(F, G);
    const UnramifiedRing& R = F.ring();
    const int D = F.cap();

    QSeries lf = flog(F), lg = flog(G);
    FieldElement cQ = FieldElement::from_ring(c);

    CIntegralResult out;
    Series u(R, D);
    if (D >= 1) u.set_coeff(1, c);
    std::vector<Series> upow(D + 1, Series(R, D));
    if (D >= 1) upow[1] = u;

    // Window ledger: each placed u_j agrees with the exact solution to at
    // least `window` absolute digits. An error in u_j enters degree d as
    // lg_k * k * (u^{k-1})_{d-j} * eps, and v(lg_k) >= -v_p(k) cancels
    // against v_p(k) from the derivative, so the window never decays below
    // the worst single-degree figure; no per-degree compounding happens.
    int window = R.N();

    for (int d = 2; d <= D; ++d) {
        for (int k = 2; k <= d; ++k)
            upow[k].set_coeff(d, convolution_coeff(u, upow[k - 1], d));
        // u_d = c*lf_d - sum_{k>=2} lg_k (u^k)_d
        FieldElement acc = cQ * lf.coeff(d);
        for (int k = 2; k <= d; ++k) {
            RingElement uk = upow[k].coeff(d);
            if (uk.is_zero()) continue;
            acc = acc - lg.coeff(k) * FieldElement::from_ring(uk);
        }
        // certified absolute digits of the true u_d
        long long numeric = acc.is_zero_marker()
                                ? acc.val()
                                : std::min<long long>(acc.val() + acc.known_prec(), R.N());
        int eff = static_cast<int>(std::min<long long>(window, numeric));
        if (acc.is_zero_marker() || acc.val() >= eff) {
            // the computed value vanishes within the certified window
            if (eff <= 0) {
                out.verdict = CIntegralResult::Verdict::undecidable;
                out.degree = d;
                out.prec_at_degree = eff;
                return out;
            }
            // true valuation >= eff > 0: integral at this degree
            RingElement ud = acc.is_zero_marker() ? R.zero() : acc.to_ring();
            u.set_coeff(d, ud);
            upow[1].set_coeff(d, ud);
            window = eff;
            continue;
        }
        // the computed valuation is visible inside the window
        if (acc.val() < 0) {
            out.verdict = CIntegralResult::Verdict::non_integral;
            out.degree = d;
            out.prec_at_degree = eff;
            return out;
        }
        RingElement ud = acc.to_ring();
        u.set_coeff(d, ud);
        upow[1].set_coeff(d, ud);
        window = eff;
    }
    out.verdict = CIntegralResult::Verdict::integral;
    out.witness = std::move(u);
    out.witness_prec = window;
    return out;
}

HomReport hom_detect(const FormalModule& F, const FormalModule& G, const RingElement& c) {
    HomReport rep;
    if (c.is_zero()) return rep;
    CIntegralResult r = c_integral_test(F, G, c);
    if (r.verdict == CIntegralResult::Verdict::undecidable)
        throw precision_error("hom_detect: undecidable at degree " + std::to_string(r.degree),
                              r.degree, r.prec_at_degree);
    if (r.verdict != CIntegralResult::Verdict::integral) return rep;
    rep.nonzero = true;
    rep.witness = std::move(r.witness);
    HeightResult h = F.height();
    Valuation vc = c.valuation();
    if (h.exact && vc.exact) {
        long long hint = 1;
        for (long long i = 0; i < h.h * vc.v; ++i) hint *= F.ring().p();
        rep.kernel_size_hint = hint;
    }
    return rep;
}

EndoRingReport endo_ring(const FormalModule& F, int depth_m) {
    const UnramifiedRing& R = F.ring();
    if (depth_m < 1 || depth_m > R.N())
        throw std::invalid_argument("endo_ring: depth must satisfy 1 <= m <= N");
    HeightResult h = F.height();
    if (!h.exact)
        throw precision_error("endo_ring: module height is only bounded at this cap (h " +
                              h.str() + ")");

    uint32_t pm = 1;
    for (int i = 0; i < depth_m; ++i) pm *= R.p();
    double count = 1;
    for (int i = 0; i < R.f(); ++i) count *= pm;
    if (count > double(1 << 20))
        throw std::invalid_argument("endo_ring: candidate space p^(f*m) too large");

    EndoRingReport rep;
    rep.ring = &R;
    rep.m = depth_m;
    rep.height_h = h.h;

    std::set<std::vector<uint32_t>> found;
    std::vector<uint32_t> digs(R.f(), 0);
    for (;;) {
        RingElement c = R.element(digs);
        CIntegralResult r = c_integral_test(F, F, c);
        if (r.verdict == CIntegralResult::Verdict::undecidable)
            throw precision_error("endo_ring: undecidable candidate at degree " +
                                      std::to_string(r.degree),
                                  r.degree, r.prec_at_degree);
        if (r.verdict == CIntegralResult::Verdict::integral) found.insert(digs);
        // next digit tuple, each coordinate below p^m
        int pos = 0;
        while (pos < R.f() && ++digs[pos] == pm) digs[pos++] = 0;
        if (pos == R.f()) break;
    }

    // ring-closure assertions on the detected residue set
    auto reduce = [&](const RingElement& e) {
        std::vector<uint32_t> d(R.f());
        for (int i = 0; i < R.f(); ++i) d[i] = e.digits()[i] % pm;
        return d;
    };
    if (!found.count(reduce(R.one())))
        throw std::logic_error("endo_ring: detected set does not contain 1");
    for (const auto& a : found) {
        for (const auto& b : found) {
            RingElement ea = R.element(a), eb = R.element(b);
            if (!found.count(reduce(ea + eb)))
                throw std::logic_error("endo_ring: detected set is not closed under addition");
            if (!found.count(reduce(ea * eb)))
                throw std::logic_error("endo_ring: detected set is not closed under multiplication");
        }
        if (!found.count(reduce(R.element(a).scaled(R.p()))))
            throw std::logic_error("endo_ring: detected set is not closed under p*");
    }

    for (const auto& d : found) rep.found_c.push_back(R.element(d));

    // residue degree: dimension of the F_p-algebra generated by the residues
    const uint32_t p = R.p();
    auto inv_mod_p = [&](uint32_t a) {
        uint32_t r = 1, base = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = static_cast<uint32_t>(uint64_t(r) * base % p);
            base = static_cast<uint32_t>(uint64_t(base) * base % p);
            e >>= 1;
        }
        return r;
    };
    std::vector<std::vector<uint32_t>> lead_row(R.f());  // echelon rows by pivot index
    auto insert_vec = [&](std::vector<uint32_t> v) {
        for (int i = 0; i < R.f(); ++i) {
            if (v[i] == 0) continue;
            if (lead_row[i].empty()) {
                lead_row[i] = std::move(v);
                return true;
            }
            uint32_t factor =
                static_cast<uint32_t>(uint64_t(v[i]) * inv_mod_p(lead_row[i][i]) % p);
            for (int t = 0; t < R.f(); ++t)
                v[t] = static_cast<uint32_t>((v[t] + uint64_t(p - factor) * lead_row[i][t]) % p);
        }
        return false;
    };
    std::vector<std::vector<uint32_t>> residues;
    for (const auto& d : found) {
        std::vector<uint32_t> v(R.f());
        for (int i = 0; i < R.f(); ++i) v[i] = d[i] % p;
        residues.push_back(v);
    }
    std::vector<uint32_t> onev(R.f(), 0);
    onev[0] = 1;
    insert_vec(onev);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<uint32_t>> snapshot;
        for (const auto& row : lead_row)
            if (!row.empty()) snapshot.push_back(row);
        for (const auto& r : residues)
            for (const auto& b : snapshot) {
                RingElement prod = R.element(r) * R.element(b);
                std::vector<uint32_t> v(R.f());
                for (int i = 0; i < R.f(); ++i) v[i] = prod.digits()[i] % p;
                if (insert_vec(std::move(v))) grew = true;
            }
    }
    int dim = 0;
    for (const auto& row : lead_row)
        if (!row.empty()) ++dim;
    rep.residue_degree = dim;
    rep.full_height = (rep.residue_degree == h.h);
    rep.saturated = depth_m >= 2 ? saturation_check(rep) : false;
    return rep;
}

bool saturation_check(const EndoRingReport& rep) {
    if (rep.m < 2) throw std::invalid_argument("saturation_check: needs depth m >= 2");
    const UnramifiedRing& R = *rep.ring;
    uint32_t pm = 1, pm1 = 1;
    for (int i = 0; i < rep.m; ++i) pm *= R.p();
    for (int i = 0; i < rep.m - 1; ++i) pm1 *= R.p();

    std::set<std::vector<uint32_t>> at_m, at_m1;
    for (const auto& c : rep.found_c) {
        std::vector<uint32_t> dm(R.f()), dm1(R.f());
        for (int i = 0; i < R.f(); ++i) {
            dm[i] = c.digits()[i] % pm;
            dm1[i] = c.digits()[i] % pm1;
        }
        at_m.insert(dm);
        at_m1.insert(dm1);
    }
    for (const auto& c : rep.found_c) {
        bool div = true;
        for (int i = 0; i < R.f(); ++i)
            if (c.digits()[i] % R.p() != 0) { div = false; break; }
        if (div) {
            std::vector<uint32_t> q(R.f());
            for (int i = 0; i < R.f(); ++i) q[i] = (c.digits()[i] / R.p()) % pm1;
            if (!at_m1.count(q)) return false;
        }
        // Teichmuller lift of the residue must be detected
        std::vector<uint32_t> res(R.f());
        bool zero = true;
        for (int i = 0; i < R.f(); ++i) {
            res[i] = c.digits()[i] % R.p();
            if (res[i]) zero = false;
        }
        if (zero) continue;  // lift of 0 is 0, always present
        RingElement w = R.teichmuller(R.element(res));
        std::vector<uint32_t> wm(R.f());
        for (int i = 0; i < R.f(); ++i) wm[i] = w.digits()[i] % pm;
        if (!at_m.count(wm)) return false;
    }
    return true;
}

IsoSearchResult isomorphism_search(const FormalModule& F, const FormalModule& G, int depth) {
    check_same_ring(F, G);
    const UnramifiedRing& R = F.ring();
    IsoSearchResult out;

    HeightResult hF = F.height(), hG = G.height();
    if (hF.exact && hG.exact) {
        if (hF.h != hG.h) {
            out.absence = IsoSearchResult::Absence::height_mismatch;
            return out;
        }
    } else if (hF.exact != hG.exact) {
        const HeightResult& ex = hF.exact ? hF : hG;
        const HeightResult& bd = hF.exact ? hG : hF;
        if (ex.h <= bd.lower) {
            out.absence = IsoSearchResult::Absence::height_mismatch;
            return out;
        }
        throw precision_error("isomorphism_search: a height is only bounded at this cap");
    } else {
        throw precision_error("isomorphism_search: both heights are only bounded at this cap");
    }

    if (F.lt_q() && G.lt_q() && *F.lt_q() == *G.lt_q()) {
        FrobeniusSeries ff = FrobeniusSeries::validate(F.pi(), *F.lt_q());
        FrobeniusSeries gg = FrobeniusSeries::validate(G.pi(), *G.lt_q());
        int cert = 0;
        Series u = lt_iso(ff, gg, &cert);
        out.witness = u;
        out.c = R.one();
        out.cert_prec = cert;
        return out;
    }

    if (depth < 1 || depth > R.N())
        throw std::invalid_argument("isomorphism_search: depth must satisfy 1 <= depth <= N");
    uint32_t pm = 1;
    for (int i = 0; i < depth; ++i) pm *= R.p();
    double count = 1;
    for (int i = 0; i < R.f(); ++i) count *= pm;
    if (count > double(1 << 20))
        throw std::invalid_argument("isomorphism_search: candidate space too large");

    std::vector<uint32_t> digs(R.f(), 0);
    long long first_obstruction = -1;
    for (;;) {
        RingElement c = R.element(digs);
        if (c.is_unit()) {
            CIntegralResult r = c_integral_test(F, G, c);
            if (r.verdict == CIntegralResult::Verdict::undecidable)
                throw precision_error("isomorphism_search: undecidable candidate at degree " +
                                          std::to_string(r.degree),
                                      r.degree, r.prec_at_degree);
            if (r.verdict == CIntegralResult::Verdict::integral) {
                out.witness = std::move(r.witness);
                out.c = c;
                out.cert_prec = r.witness_prec;
                return out;
            }
            if (first_obstruction < 0 || r.degree < first_obstruction)
                first_obstruction = r.degree;
        }
        int pos = 0;
        while (pos < R.f() && ++digs[pos] == pm) digs[pos++] = 0;
        if (pos == R.f()) break;
    }
    out.absence = IsoSearchResult::Absence::no_candidate;
    out.obstruction_degree = first_obstruction;
    return out;
}

}  // namespace fgl
