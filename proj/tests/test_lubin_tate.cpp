#include <doctest.h>

#include <random>
#include <tuple>

#include "fgl/lubin_tate.hpp"

using namespace fgl;

namespace {

RingElement random_element(const UnramifiedRing& R, std::mt19937_64& rng) {
    std::vector<uint32_t> d(R.f());
    for (auto& x : d) x = static_cast<uint32_t>(rng() % R.pn());
    return R.element(std::move(d));
}

}  // namespace

TEST_CASE("frobenius-series validation") {
    UnramifiedRing R2(2, 1, 12);
    CHECK_NOTHROW(FrobeniusSeries::canonical(R2, 2, 8));
    // extra coefficients divisible by p are fine
    CHECK_NOTHROW(
        FrobeniusSeries::validate(Series::from_int_coeffs(R2, 8, {0, 2, 1, 2}), 2));

    UnramifiedRing R3(3, 2, 12);
    // unit coefficient below q is rejected and names the degree
    Series bad = Series::from_int_coeffs(R3, 10, {0, 3, 1, 0, 0, 0, 0, 0, 0, 1});
    CHECK_THROWS_WITH_AS(FrobeniusSeries::validate(bad, 9),
                         doctest::Contains("degree 2"), std::invalid_argument);
    // wrong linear coefficient
    CHECK_THROWS_AS(FrobeniusSeries::validate(Series::from_int_coeffs(R3, 10, {0, 1}), 9),
                    std::invalid_argument);
    // cap below q
    CHECK_THROWS_AS(FrobeniusSeries::canonical(R3, 9, 5), std::invalid_argument);
}

TEST_CASE("the q = 2 canonical series yields exactly the multiplicative law") {
    UnramifiedRing R(2, 1, 12);
    FormalModule m = lt_group(FrobeniusSeries::canonical(R, 2, 32));
    CHECK(m.F().get(1, 1) == R.one());
    for (int d = 3; d <= 32; ++d)
        for (int j = 0; j <= d; ++j) CHECK(m.F().get(d - j, j).is_zero());
    CHECK(m.cert_prec() == 12);
    CHECK(m.lt_q() == 2);
    CHECK(m.height() == HeightResult{true, 1, 0});
}

TEST_CASE("construction always seeds with X + Y") {
    UnramifiedRing R(3, 2, 10);
    FormalModule m = lt_group(FrobeniusSeries::canonical(R, 9, 12));
    CHECK(m.F().get(1, 0) == R.one());
    CHECK(m.F().get(0, 1) == R.one());
    CHECK(m.F().get(0, 0).is_zero());
    CHECK(m.height() == HeightResult{true, 2, 0});
}

TEST_CASE("functional-equation residual vanishes at full precision") {
    // independent recomputation of f(F) - F(f,f), not reusing solver state
    const std::tuple<uint32_t, int, uint64_t, int> cases[] = {
        {2, 1, 2, 30}, {3, 1, 3, 30}, {2, 2, 4, 24}};
    for (auto [p, f, q, D] : cases) {
        UnramifiedRing R(p, f, 12);
        FrobeniusSeries fs = FrobeniusSeries::canonical(R, q, D);
        FormalModule m = lt_group(fs);
        CHECK(m.cert_prec() == 12);
        Series2 lhs = compose_outer(fs.series(), m.F());
        Series2 rhs = substitute_both(m.F(), fs.series(), fs.series());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("bracket series") {
    UnramifiedRing R(2, 1, 12);
    FrobeniusSeries fs = FrobeniusSeries::canonical(R, 2, 10);

    CHECK(lt_bracket(fs, R.one()) == Series::x(R, 10));
    CHECK(lt_bracket(fs, R.from_int(2)) == fs.series());
    // [3] on the multiplicative law is (1+X)^3 - 1
    CHECK(lt_bracket(fs, R.from_int(3)) == Series::from_int_coeffs(R, 10, {0, 3, 3, 1}));

    FormalModule m = lt_group(fs);
    // Exactly representable inputs make the homomorphism identities exact:
    // small nonnegative integers survive the lift to working precision.
    std::mt19937_64 rng(8);
    for (int t = 0; t < 8; ++t) {
        long long a = static_cast<long long>(rng() % 50);
        long long b = static_cast<long long>(rng() % 50);
        Series ua = lt_bracket(fs, R.from_int(a)), ub = lt_bracket(fs, R.from_int(b));
        CHECK(ua.compose(ub) == lt_bracket(fs, R.from_int(a * b)));
        CHECK(fplus(m, ua, ub) == lt_bracket(fs, R.from_int(a + b)));
    }
    // For arbitrary residues the bracket depends on the unrepresented digits
    // of its coefficient through the solver's divisions, so the identities
    // hold at slightly reduced precision.
    for (int t = 0; t < 6; ++t) {
        RingElement a = random_element(R, rng);
        RingElement b = random_element(R, rng);
        Series ua = lt_bracket(fs, a), ub = lt_bracket(fs, b);
        CHECK(ua.compose(ub).congruent(lt_bracket(fs, a * b), 9));
        CHECK(fplus(m, ua, ub).congruent(lt_bracket(fs, a + b), 9));
    }
}

TEST_CASE("bracket family over the quadratic ring realizes every coefficient") {
    UnramifiedRing R(3, 2, 12);
    FrobeniusSeries fs = FrobeniusSeries::canonical(R, 9, 12);
    FormalModule m = lt_group(fs);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 6; ++t) {
        RingElement a = random_element(R, rng);
        int cert = 0;
        Series ua = lt_bracket(fs, a, &cert);
        CHECK(cert >= 10);
        CHECK(ua.coeff(1) == a);
        // endomorphism property, checked through the group law
        CHECK(compose_outer(ua, m.F()).congruent(substitute_both(m.F(), ua, ua), cert));
    }
}

TEST_CASE("canonical isomorphisms between Frobenius series") {
    UnramifiedRing R(2, 1, 12);
    FrobeniusSeries f = FrobeniusSeries::canonical(R, 2, 32);
    CHECK(lt_iso(f, f) == Series::x(R, 32));

    FrobeniusSeries g =
        FrobeniusSeries::validate(Series::from_int_coeffs(R, 32, {0, 2, 1, 2}), 2);
    int cert = 0;
    Series u = lt_iso(f, g, &cert);
    CHECK(cert == 12);
    CHECK(u.coeff(1) == R.one());
    // intertwines the multipliers exactly
    CHECK(u.compose(f.series()) == g.series().compose(u));
    // and transports the group laws onto each other
    FormalModule mf = lt_group(f), mg = lt_group(g);
    CHECK(compose_outer(u, mf.F()) == substitute_both(mg.F(), u, u));
    // two-sided inverse
    Series v = lt_iso(g, f);
    CHECK(u.compose(v) == Series::x(R, 32));
    CHECK(v.compose(u) == Series::x(R, 32));
}

TEST_CASE("lt_group runs are deterministic") {
    UnramifiedRing R(3, 1, 10);
    FrobeniusSeries fs = FrobeniusSeries::canonical(R, 3, 20);
    FormalModule a = lt_group(fs), b = lt_group(fs);
    CHECK(a.F() == b.F());
}

TEST_CASE("mismatched q or ring is rejected by lt_iso") {
    UnramifiedRing R(2, 1, 12);
    FrobeniusSeries f2 = FrobeniusSeries::canonical(R, 2, 8);
    FrobeniusSeries f4 = FrobeniusSeries::canonical(R, 4, 8);
    CHECK_THROWS_AS(lt_iso(f2, f4), std::invalid_argument);
}
