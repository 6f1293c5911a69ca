#include "fgl/galois.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fgl {
namespace {

uint32_t invmod_local(uint32_t a, uint32_t m) {
    long long t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        long long quot = r / nr;
        std::swap(t -= quot * nt, nt);
        std::swap(r -= quot * nr, nr);
    }
    if (r != 1) throw std::domain_error("matrix inverse: pivot is not a unit");
    return static_cast<uint32_t>(t < 0 ? t + m : t);
}

uint32_t prime_of(uint32_t mod) {
    for (uint32_t d = 2;; ++d)
        if (mod % d == 0) return d;
}

std::vector<MatZ> close_under_products(std::vector<MatZ> gens, size_t limit) {
    std::set<MatZ> seen(gens.begin(), gens.end());
    std::vector<MatZ> work(gens.begin(), gens.end());
    while (!work.empty()) {
        MatZ m = work.back();
        work.pop_back();
        for (const MatZ& g : seen) {
            for (const MatZ& prod : {m * g, g * m}) {
                if (!seen.count(prod)) {
                    if (seen.size() >= limit)
                        throw std::invalid_argument("group closure exceeded the size guard");
                    seen.insert(prod);
                    work.push_back(prod);
                }
            }
        }
    }
    return std::vector<MatZ>(seen.begin(), seen.end());
}

}  // namespace

MatZ MatZ::identity(int h, uint32_t mod) {
    MatZ m(h, mod);
    for (int i = 0; i < h; ++i) m.set(i, i, 1);
    return m;
}

MatZ MatZ::operator*(const MatZ& o) const {
    MatZ r(h_, mod_);
    for (int i = 0; i < h_; ++i)
        for (int j = 0; j < h_; ++j) {
            uint64_t acc = 0;
            for (int k = 0; k < h_; ++k)
                acc = (acc + uint64_t(at(i, k)) * o.at(k, j)) % mod_;
            r.set(i, j, static_cast<uint32_t>(acc));
        }
    return r;
}

MatZ MatZ::inverse() const {
    const uint32_t p = prime_of(mod_);
    MatZ a = *this;
    MatZ inv = identity(h_, mod_);
    for (int col = 0; col < h_; ++col) {
        int pivot = -1;
        for (int row = col; row < h_; ++row)
            if (a.at(row, col) % p != 0) { pivot = row; break; }
        if (pivot < 0) throw std::domain_error("matrix inverse: not invertible mod p");
        if (pivot != col)
            for (int j = 0; j < h_; ++j) {
                uint32_t t = a.at(col, j);
                a.set(col, j, a.at(pivot, j));
                a.set(pivot, j, t);
                t = inv.at(col, j);
                inv.set(col, j, inv.at(pivot, j));
                inv.set(pivot, j, t);
            }
        uint32_t scale = invmod_local(a.at(col, col), mod_);
        for (int j = 0; j < h_; ++j) {
            a.set(col, j, static_cast<uint32_t>(uint64_t(a.at(col, j)) * scale % mod_));
            inv.set(col, j, static_cast<uint32_t>(uint64_t(inv.at(col, j)) * scale % mod_));
        }
        for (int row = 0; row < h_; ++row) {
            if (row == col) continue;
            uint32_t factor = a.at(row, col);
            if (factor == 0) continue;
            for (int j = 0; j < h_; ++j) {
                uint32_t sub_a = static_cast<uint32_t>(uint64_t(factor) * a.at(col, j) % mod_);
                uint32_t sub_i = static_cast<uint32_t>(uint64_t(factor) * inv.at(col, j) % mod_);
                a.set(row, j, (a.at(row, j) + mod_ - sub_a) % mod_);
                inv.set(row, j, (inv.at(row, j) + mod_ - sub_i) % mod_);
            }
        }
    }
    return inv;
}

MatZ MatZ::reduced(uint32_t new_mod) const {
    MatZ r(h_, new_mod);
    for (int i = 0; i < h_; ++i)
        for (int j = 0; j < h_; ++j) r.set(i, j, at(i, j) % new_mod);
    return r;
}

bool MatZ::is_identity() const { return *this == identity(h_, mod_); }

bool FiniteMatrixGroup::contains(const MatZ& m) const {
    return std::binary_search(elements.begin(), elements.end(), m);
}

FiniteMatrixGroup unit_group_image(uint32_t p, int h, int n, uint64_t size_guard) {
    if (h < 1 || n < 1) throw std::invalid_argument("unit_group_image: h, n must be >= 1");
    uint64_t qn = 1;
    for (int i = 0; i < h * n; ++i) {
        qn *= p;
        if (qn > size_guard)
            throw std::invalid_argument("unit_group_image: p^(hn) exceeds the size guard");
    }
    UnramifiedRing R(p, h, n);  // precision n gives exactly Z/p^n coordinates
    const uint32_t mod = R.pn();

    FiniteMatrixGroup G;
    G.p = p;
    G.h = h;
    G.n = n;
    G.mod = mod;

    std::vector<uint32_t> digs(h, 0);
    std::vector<uint32_t> M(size_t(h) * h);
    for (;;) {
        RingElement e = R.element(digs);
        if (e.is_unit()) {
            R.raw_mul_matrix(digs.data(), M.data());
            MatZ m(h, mod);
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < h; ++j) m.set(i, j, M[size_t(i) * h + j]);
            G.elements.push_back(m);
        }
        int pos = 0;
        while (pos < h && ++digs[pos] == mod) digs[pos++] = 0;
        if (pos == h) break;
    }
    std::sort(G.elements.begin(), G.elements.end());

    // generators: a Teichmuller lift of a residue-field generator plus the
    // standard one-units
    RingElement gamma = R.teichmuller(R.residue_mult_generator());
    R.raw_mul_matrix(gamma.digits().data(), M.data());
    MatZ mg(h, mod);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) mg.set(i, j, M[size_t(i) * h + j]);
    G.generators.push_back(mg);
    if (n >= 2) {
        // one-units 1 + p g^t; for p = 2 the squares only reach half of the
        // level-4 graded piece, so the 1 + 4 g^t layer joins the set
        int deepest = (p == 2 && n >= 3) ? 2 : 1;
        for (int lvl = 1; lvl <= deepest; ++lvl) {
            uint32_t pl = 1;
            for (int i = 0; i < lvl; ++i) pl *= p;
            for (int t = 0; t < h; ++t) {
                std::vector<uint32_t> u(h, 0);
                u[0] = 1;
                u[t] = (u[t] + pl) % mod;
                R.raw_mul_matrix(u.data(), M.data());
                MatZ mu(h, mod);
                for (int i = 0; i < h; ++i)
                    for (int j = 0; j < h; ++j) mu.set(i, j, M[size_t(i) * h + j]);
                G.generators.push_back(mu);
            }
        }
    }
    return G;
}

FiniteMatrixGroup group_from_generators(uint32_t p, int h, int n, std::vector<MatZ> gens) {
    uint32_t mod = 1;
    for (int i = 0; i < n; ++i) mod *= p;
    FiniteMatrixGroup G;
    G.p = p;
    G.h = h;
    G.n = n;
    G.mod = mod;
    G.generators = gens;
    gens.push_back(MatZ::identity(h, mod));
    G.elements = close_under_products(std::move(gens), 1u << 20);
    return G;
}

FiniteMatrixGroup gl2_f2() {
    MatZ s(2, 2), t(2, 2);
    s.set(0, 1, 1);
    s.set(1, 0, 1);
    t.set(0, 0, 1);
    t.set(0, 1, 1);
    t.set(1, 1, 1);
    return group_from_generators(2, 2, 1, {s, t});
}

FiniteMatrixGroup reduce_level(const FiniteMatrixGroup& G) {
    if (G.n < 2) throw std::invalid_argument("reduce_level: already at level 1");
    uint32_t new_mod = G.mod / G.p;
    std::set<MatZ> seen;
    for (const MatZ& m : G.elements) seen.insert(m.reduced(new_mod));
    FiniteMatrixGroup R;
    R.p = G.p;
    R.h = G.h;
    R.n = G.n - 1;
    R.mod = new_mod;
    R.elements.assign(seen.begin(), seen.end());
    for (const MatZ& g : G.generators) R.generators.push_back(g.reduced(new_mod));
    return R;
}

GaloisLevelReport derived_series(const FiniteMatrixGroup& G) {
    if (G.order() > 5000)
        throw std::invalid_argument("derived_series: group too large for the pairwise pass");
    GaloisLevelReport rep;
    rep.order = G.order();

    std::vector<MatZ> cur = G.elements;
    rep.derived_lengths.push_back(cur.size());
    rep.solvable_at_level = true;
    while (cur.size() > 1) {
        std::set<MatZ> comms;
        comms.insert(MatZ::identity(G.h, G.mod));
        std::vector<MatZ> inv(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) inv[i] = cur[i].inverse();
        for (size_t i = 0; i < cur.size(); ++i)
            for (size_t j = 0; j < cur.size(); ++j)
                comms.insert(cur[i] * cur[j] * inv[i] * inv[j]);
        std::vector<MatZ> next =
            close_under_products(std::vector<MatZ>(comms.begin(), comms.end()), 1u << 20);
        if (next.size() == cur.size()) {
            rep.derived_lengths.push_back(next.size());
            rep.solvable_at_level = false;  // chain stabilized above the trivial group
            break;
        }
        rep.derived_lengths.push_back(next.size());
        cur = std::move(next);
    }
    rep.abelian = rep.derived_lengths.size() < 2 ? rep.order == 1 : rep.derived_lengths[1] == 1;
    uint64_t g1 = rep.derived_lengths.size() >= 2 ? rep.derived_lengths[1] : 1;
    rep.ab_quotient_order = rep.order / g1;
    return rep;
}

bool almost_semisimple_check(const FiniteMatrixGroup& G) {
    GaloisLevelReport rep = derived_series(G);
    uint64_t g1 = rep.derived_lengths.size() >= 2 ? rep.derived_lengths[1] : 1;
    return g1 == rep.order;
}

}  // namespace fgl
