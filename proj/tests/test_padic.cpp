#include <doctest.h>

#include <random>
#include <tuple>

#include "fgl/padic.hpp"

using namespace fgl;

namespace {

RingElement random_element(const UnramifiedRing& R, std::mt19937_64& rng) {
    std::vector<uint32_t> d(R.f());
    for (auto& x : d) x = static_cast<uint32_t>(rng() % R.pn());
    return R.element(std::move(d));
}

// exhaustive root check over F_p, used as the irreducibility oracle for
// quadratics
bool quadratic_has_root(uint32_t c0, uint32_t c1, uint32_t p) {
    for (uint32_t x = 0; x < p; ++x)
        if ((x * x + c1 * x + c0) % p == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("f = 1 degenerates to plain integers mod p^N") {
    UnramifiedRing R(2, 1, 8);
    CHECK(R.pn() == 256);
    CHECK(R.from_int(300).digits()[0] == 44);
    RingElement a = R.from_int(123);
    CHECK(a + R.zero() == a);
    CHECK(a * R.one() == a);
    CHECK((R.from_int(200) + R.from_int(100)).digits()[0] == 44);
}

TEST_CASE("modulus is the unique irreducible quadratic over F_2") {
    UnramifiedRing R(2, 2, 4);
    // oracle: X^2 + X + 1 is the only monic quadratic over F_2 without a root
    int count = 0;
    uint32_t found_c0 = 9, found_c1 = 9;
    for (uint32_t c0 = 0; c0 < 2; ++c0)
        for (uint32_t c1 = 0; c1 < 2; ++c1)
            if (!quadratic_has_root(c0, c1, 2)) {
                ++count;
                found_c0 = c0;
                found_c1 = c1;
            }
    REQUIRE(count == 1);
    CHECK(R.modulus() == std::vector<uint32_t>{found_c0, found_c1, 1});
    CHECK(R.modulus() == std::vector<uint32_t>{1, 1, 1});
}

TEST_CASE("modulus for p = 3 is the first irreducible quadratic in low-degree order") {
    UnramifiedRing R(3, 2, 4);
    // oracle: enumerate all 9 monic quadratics in (c0, c1) order and take the
    // first without a root in F_3
    std::vector<uint32_t> expect;
    for (uint32_t c0 = 0; c0 < 3 && expect.empty(); ++c0)
        for (uint32_t c1 = 0; c1 < 3 && expect.empty(); ++c1)
            if (!quadratic_has_root(c0, c1, 3)) expect = {c0, c1, 1};
    REQUIRE(!expect.empty());
    CHECK(R.modulus() == expect);
    CHECK(R.modulus() == std::vector<uint32_t>{1, 0, 1});  // X^2 + 1
}

TEST_CASE("generator multiplication reduces through the modulus") {
    UnramifiedRing R(2, 2, 4);
    RingElement g = R.generator();
    // g^2 = -g - 1 from X^2 + X + 1, which is g + 1 mod 2
    RingElement gg = g * g;
    CHECK(gg == R.from_coeffs({15, 15}));
    CHECK(gg.reduced_mod_p_pow(1) == R.from_coeffs({1, 1}));
}

TEST_CASE("ring construction rejects bad parameters") {
    CHECK_THROWS_AS(UnramifiedRing(4, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(UnramifiedRing(2, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(UnramifiedRing(2, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(UnramifiedRing(2, 1, 40), std::invalid_argument);  // p^N >= 2^31
}

TEST_CASE("valuations") {
    UnramifiedRing R(3, 1, 4);
    CHECK(R.from_int(18).valuation() == Valuation{true, 2});
    CHECK(R.from_int(3).valuation() == Valuation{true, 1});
    CHECK(R.zero().valuation() == Valuation{false, 4});
    UnramifiedRing R2(2, 2, 6);
    CHECK((R2.generator().scaled(4)).valuation() == Valuation{true, 2});
}

TEST_CASE("teichmuller lifts") {
    UnramifiedRing R5(5, 1, 2);
    CHECK(R5.teichmuller(R5.one()) == R5.one());
    // Hensel-lift x^4 = 1 from x = 2: the lift is 7 mod 25
    RingElement w = R5.teichmuller(R5.from_int(2));
    CHECK(w == R5.from_int(7));
    CHECK(w.pow(4) == R5.one());

    UnramifiedRing R4(2, 2, 10);
    RingElement wg = R4.teichmuller(R4.generator());
    CHECK(wg.pow(3) == R4.one());
    CHECK(wg.reduced_mod_p_pow(1) == R4.generator());

    CHECK_THROWS_AS(R5.teichmuller(R5.from_int(10)), std::invalid_argument);
}

TEST_CASE("teichmuller lifts are (q-1)-st roots of unity for every residue") {
    const std::tuple<uint32_t, int, int> cfgs[] = {{2, 2, 8}, {3, 2, 6}, {5, 1, 8}, {2, 3, 9}};
    for (auto [p, f, N] : cfgs) {
        UnramifiedRing R(p, f, N);
        std::vector<uint32_t> digs(R.f(), 0);
        for (;;) {
            int pos = 0;
            while (pos < R.f() && ++digs[pos] == p) digs[pos++] = 0;
            if (pos == R.f()) break;
            RingElement r = R.element(digs);
            if (r.is_zero()) continue;
            RingElement w = R.teichmuller(r);
            CHECK(w.pow(R.q() - 1) == R.one());
            CHECK(w.reduced_mod_p_pow(1) == r);
        }
    }
}

TEST_CASE("ring axioms hold exactly on random elements") {
    std::mt19937_64 rng(2024);
    const std::tuple<uint32_t, int, int> cfgs[] = {{2, 1, 12}, {2, 2, 12}, {3, 2, 12}, {5, 2, 10}};
    for (auto [p, f, N] : cfgs) {
        UnramifiedRing R(p, f, N);
        for (int t = 0; t < 100; ++t) {
            RingElement a = random_element(R, rng);
            RingElement b = random_element(R, rng);
            RingElement c = random_element(R, rng);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK(a - a == R.zero());
        }
    }
}

TEST_CASE("valuation is additive below the precision ceiling") {
    std::mt19937_64 rng(7);
    UnramifiedRing R(3, 2, 12);
    for (int t = 0; t < 200; ++t) {
        RingElement a = random_element(R, rng);
        RingElement b = random_element(R, rng);
        Valuation va = a.valuation(), vb = b.valuation();
        if (!va.exact || !vb.exact || va.v + vb.v >= R.N()) continue;
        Valuation vab = (a * b).valuation();
        CHECK(vab.exact);
        CHECK(vab.v == va.v + vb.v);
    }
}

TEST_CASE("reduction to lower precision commutes with arithmetic") {
    std::mt19937_64 rng(11);
    UnramifiedRing R(2, 2, 12), S(2, 2, 7);
    REQUIRE(R.same_tower(S));
    for (int t = 0; t < 100; ++t) {
        RingElement a = random_element(R, rng);
        RingElement b = random_element(R, rng);
        CHECK((a * b).change_ring(S) == a.change_ring(S) * b.change_ring(S));
        CHECK((a + b).change_ring(S) == a.change_ring(S) + b.change_ring(S));
    }
}

TEST_CASE("unit inversion") {
    std::mt19937_64 rng(5);
    UnramifiedRing R(3, 2, 10);
    for (int t = 0; t < 100; ++t) {
        RingElement a = random_element(R, rng);
        if (!a.is_unit()) continue;
        CHECK(a * a.inverse() == R.one());
    }
    CHECK_THROWS_AS(R.from_int(3).inverse(), std::domain_error);
}

TEST_CASE("element text form round-trips") {
    UnramifiedRing R(2, 2, 4);
    RingElement a = R.from_coeffs({3, 12});
    CHECK(a.str() == "3 + 12*g (mod 16)");
    CHECK(parse_element(R, a.str()) == a);
    UnramifiedRing S(3, 1, 4);
    CHECK(S.from_int(80).str() == "80 (mod 81)");
    CHECK(parse_element(S, "80 (mod 81)") == S.from_int(80));
    CHECK_THROWS_AS(parse_element(S, "3 (mod 27)"), std::invalid_argument);
    UnramifiedRing T(2, 3, 4);
    RingElement b = T.from_coeffs({1, 0, 9});
    CHECK(b.str() == "1 + 0*g + 9*g^2 (mod 16)");
    CHECK(parse_element(T, b.str()) == b);
}

TEST_CASE("field elements track valuation and precision") {
    UnramifiedRing R(3, 1, 6);
    FieldElement a = FieldElement::from_integer(R, 18);  // 2 * 3^2
    CHECK(!a.is_zero_marker());
    CHECK(a.val() == 2);
    CHECK(a.unit_digits()[0] == 2);
    CHECK(a.known_prec() == 6);

    FieldElement b = FieldElement::from_integer(R, -18);
    FieldElement s = a + b;
    CHECK(s.is_zero_marker());  // exact cancellation at working precision

    FieldElement inv3 = FieldElement::from_integer(R, 1) / FieldElement::from_integer(R, 3);
    CHECK(inv3.val() == -1);
    CHECK((inv3 * FieldElement::from_integer(R, 3) - FieldElement::from_integer(R, 1))
              .is_zero_marker());

    // division by something indistinguishable from zero is a precision error
    FieldElement z = FieldElement::from_ring(R.zero());
    CHECK_THROWS_AS(a / z, precision_error);

    // sign-of-valuation decisions
    CHECK(a.val_sign() == FieldElement::ValSign::nonneg);
    CHECK(inv3.val_sign() == FieldElement::ValSign::negative);
    CHECK(FieldElement::zero_marker(R, -1).val_sign() == FieldElement::ValSign::undecidable);
    CHECK(FieldElement::zero_marker(R, 0).val_sign() == FieldElement::ValSign::nonneg);
}

TEST_CASE("field element addition clips precision on misaligned markers") {
    UnramifiedRing R(2, 1, 10);
    // value 1 plus something only known to vanish to 2^3
    FieldElement v = FieldElement::from_integer(R, 1);
    FieldElement m = FieldElement::zero_marker(R, 3);
    FieldElement s = v + m;
    CHECK(!s.is_zero_marker());
    CHECK(s.val() == 0);
    CHECK(s.known_prec() == 3);
}
