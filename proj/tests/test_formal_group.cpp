#include <doctest.h>

#include <random>
#include <tuple>

#include "fgl/formal_group.hpp"
#include "fgl/lubin_tate.hpp"

using namespace fgl;

namespace {

Series random_zero_const(const UnramifiedRing& R, int cap, std::mt19937_64& rng) {
    Series s(R, cap);
    for (int k = 1; k <= cap; ++k) {
        std::vector<uint32_t> d(R.f());
        for (auto& x : d) x = static_cast<uint32_t>(rng() % R.pn());
        s.set_coeff(k, R.element(std::move(d)));
    }
    return s;
}

}  // namespace

TEST_CASE("group-law axioms accept the stock laws") {
    UnramifiedRing R(2, 1, 8);
    CHECK(!check_group_law(additive_module(R, 8).F()));
    CHECK(!check_group_law(multiplicative_module(R, 8).F()));
}

TEST_CASE("group-law axioms reject X + Y + X^2 at the unit axiom") {
    UnramifiedRing R(2, 1, 8);
    Series2 F(R, 6);
    F.set(1, 0, R.one());
    F.set(0, 1, R.one());
    F.set(2, 0, R.one());
    auto v = check_group_law(F);
    REQUIRE(v.has_value());
    CHECK(v->kind == AxiomViolation::Kind::unit);
    CHECK(v->i == 2);
    CHECK(v->j == 0);
    CHECK_THROWS_AS(FormalGroupLaw::validate(F), std::domain_error);
}

TEST_CASE("group-law axioms catch broken commutativity and associativity") {
    UnramifiedRing R(3, 1, 8);
    Series2 F(R, 4);
    F.set(1, 0, R.one());
    F.set(0, 1, R.one());
    F.set(2, 1, R.one());  // X^2 Y without the mirror term
    auto v = check_group_law(F);
    REQUIRE(v.has_value());
    CHECK(v->kind == AxiomViolation::Kind::commutativity);

    // symmetric but not associative: F = X + Y + X^2 Y^2 fails at degree 5
    Series2 G(R, 6);
    G.set(1, 0, R.one());
    G.set(0, 1, R.one());
    G.set(2, 2, R.one());
    auto w = check_group_law(G);
    REQUIRE(w.has_value());
    CHECK(w->kind == AxiomViolation::Kind::associativity);
}

TEST_CASE("formal sums against the multiplicative law") {
    UnramifiedRing R(2, 1, 10);
    FormalModule m = multiplicative_module(R, 8);
    Series x = Series::x(R, 8);
    CHECK(fplus(m, x, Series(R, 8)) == x);
    CHECK(fplus(m, x, x) == Series::from_int_coeffs(R, 8, {0, 2, 1}));

    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
        Series a = random_zero_const(R, 8, rng);
        Series inv_at_a = formal_inverse(m).compose(a);
        CHECK(fplus(m, a, inv_at_a).is_zero());
    }
}

TEST_CASE("integer multiplication series") {
    UnramifiedRing R(2, 1, 10);
    FormalModule m = multiplicative_module(R, 4);
    CHECK(int_mult(m, 1) == Series::x(R, 4));
    CHECK(int_mult(m, 2) == Series::from_int_coeffs(R, 4, {0, 2, 1}));
    // [-1] = (1+X)^{-1} - 1 = -X + X^2 - X^3 + X^4
    CHECK(int_mult(m, -1) == Series::from_int_coeffs(R, 4, {0, -1, 1, -1, 1}));
    // linear coefficient is k
    UnramifiedRing R3(3, 1, 10);
    FormalModule m3 = multiplicative_module(R3, 6);
    for (long long k : {-3, -1, 2, 5})
        CHECK(int_mult(m3, k).coeff(1) == R3.from_int(k));
}

TEST_CASE("height reads the first unit coefficient index") {
    UnramifiedRing R3(3, 1, 12);
    CHECK(height_from_multiplier(Series::from_int_coeffs(R3, 6, {0, 3, 0, 1})) ==
          HeightResult{true, 1, 0});

    UnramifiedRing R2(2, 1, 12);
    CHECK(height_from_multiplier(Series::from_int_coeffs(R2, 6, {0, 2, 0, 0, 1})) ==
          HeightResult{true, 2, 0});

    // no unit up to the cap: only the bound h > floor(log_p D) can be claimed
    Series bounded3 = Series::from_int_coeffs(R3, 10, {0, 3, 3});
    CHECK(height_from_multiplier(bounded3) == HeightResult{false, 0, 2});
    Series bounded2 = Series::from_int_coeffs(R2, 20, {0, 2, 2});
    CHECK(height_from_multiplier(bounded2) == HeightResult{false, 0, 4});

    // unit index off the p-power grid marks a corrupted module
    CHECK_THROWS_AS(height_from_multiplier(Series::from_int_coeffs(R2, 6, {0, 2, 0, 1})),
                    std::domain_error);

    CHECK(multiplicative_module(R2, 8).height() == HeightResult{true, 1, 0});
    CHECK(additive_module(R2, 8).height() == HeightResult{false, 0, 3});
}

TEST_CASE("formal logarithm of the multiplicative law") {
    UnramifiedRing R(2, 1, 12);
    FormalModule m = multiplicative_module(R, 4);
    QSeries lg = flog(m);
    // X - X^2/2 + X^3/3 - X^4/4
    CHECK(lg.coeff(1).val() == 0);
    CHECK(lg.coeff(1).unit_digits()[0] == 1);
    CHECK(lg.coeff(2).val() == -1);
    CHECK(lg.coeff(2).unit_digits()[0] == R.pn() - 1);  // -1/2
    CHECK(lg.coeff(3).val() == 0);
    FieldElement three_lg3 = lg.coeff(3) * FieldElement::from_integer(R, 3);
    CHECK((three_lg3 - FieldElement::from_integer(R, 1)).val() >= 10);
    CHECK(lg.coeff(4).val() == -2);
}

TEST_CASE("exp inverts log for Lubin-Tate modules") {
    // fexp carries denominators that grow with the cap, so the honest
    // certification floor depends on (p, D); these combinations keep five
    // digits in hand at N = 12
    const std::tuple<uint32_t, int> cases[] = {{2, 8}, {3, 16}};
    for (auto [p, D] : cases) {
        UnramifiedRing R(p, 1, 12);
        FormalModule m = lt_group(FrobeniusSeries::canonical(R, p, D));
        QSeries lg = flog(m);
        QSeries ex = fexp(m);
        QSeries both = ex.compose(lg);
        QSeries xq = QSeries::from_series(Series::x(R, D));
        CHECK(both.agrees_with(xq, 5));
        CHECK(lg.compose(ex.compose(lg)).agrees_with(lg, 5));
    }
}

TEST_CASE("log linearizes the integer multiplications") {
    UnramifiedRing R(3, 1, 12);
    FormalModule m = multiplicative_module(R, 10);
    QSeries lg = flog(m);
    for (long long k = -5; k <= 5; ++k) {
        if (k == 0) continue;
        QSeries lhs = lg.compose(int_mult(m, k));
        QSeries rhs = lg.scaled(FieldElement::from_integer(R, k));
        CHECK(lhs.agrees_with(rhs, 7));
    }
}

TEST_CASE("multiplier endomorphism validation in the module constructor") {
    UnramifiedRing R(2, 1, 10);
    FormalModule m = multiplicative_module(R, 8);
    // re-validate through the checking constructor
    CHECK_NOTHROW(FormalModule(FormalGroupLaw::trusted(m.F()), m.pi()));

    // a broken multiplier is rejected
    Series bad = Series::from_int_coeffs(R, 8, {0, 2, 3});
    CHECK_THROWS_AS(FormalModule(FormalGroupLaw::trusted(m.F()), bad), std::domain_error);
    // wrong linear coefficient is rejected early
    Series bad2 = Series::from_int_coeffs(R, 8, {0, 3, 1});
    CHECK_THROWS_AS(FormalModule(FormalGroupLaw::trusted(m.F()), bad2), std::invalid_argument);
}

TEST_CASE("intertwiner solve reproduces the binomial endomorphisms") {
    UnramifiedRing R(2, 1, 12);
    FormalModule m = multiplicative_module(R, 8);
    // u with u(pi(X)) = pi(u(X)) and u'(0) = 3 is (1+X)^3 - 1
    IntertwineResult r = solve_intertwine(m.pi(), m.pi(), R.from_int(3));
    REQUIRE(r.u.has_value());
    CHECK(*r.u == Series::from_int_coeffs(R, 8, {0, 3, 3, 1}));
    CHECK(r.division_loss == 1);
}

TEST_CASE("module structure solver") {
    SUBCASE("Lubin-Tate modules carry the extra root-of-unity action") {
        for (uint32_t p : {2u, 3u}) {
            UnramifiedRing R(p, 2, 12);
            uint64_t q = uint64_t(p) * p;
            FormalModule m = lt_group(FrobeniusSeries::canonical(R, q, static_cast<int>(q) + 4));
            StructureSolveResult res = module_structure_solve(m, q);
            REQUIRE(res.omega_series.has_value());
            CHECK(res.omega_series->coeff(1) == res.omega);
            CHECK(res.omega.pow(q - 1) == R.one());
            CHECK(!res.omega.is_one());
            // the witness matches the bracket series of the same coefficient
            FrobeniusSeries fs = FrobeniusSeries::canonical(R, q, static_cast<int>(q) + 4);
            Series bracket = lt_bracket(fs, res.omega);
            CHECK(res.omega_series->congruent(bracket, res.cert_prec));
            // commutes with pi and is an endomorphism of F
            CHECK(res.omega_series->compose(m.pi())
                      .congruent(m.pi().compose(*res.omega_series), res.cert_prec));
            CHECK(compose_outer(*res.omega_series, m.F())
                      .congruent(substitute_both(m.F(), *res.omega_series, *res.omega_series),
                                 res.cert_prec));
        }
    }

    SUBCASE("multiplicative law over Z_2 only carries the trivial action") {
        UnramifiedRing R(2, 1, 12);
        FormalModule m = multiplicative_module(R, 8);
        StructureSolveResult res = module_structure_solve(m, 2);
        REQUIRE(res.omega_series.has_value());
        CHECK(*res.omega_series == Series::x(R, 8));
    }

    SUBCASE("multiplicative law over the quadratic ring rejects q = 4") {
        UnramifiedRing R(2, 2, 12);
        FormalModule m = multiplicative_module(R, 16);
        StructureSolveResult res = module_structure_solve(m, 4);
        CHECK(!res.omega_series.has_value());
        CHECK(res.obstructed_degree == 2);
    }

    SUBCASE("missing roots of unity are a domain error") {
        UnramifiedRing R(2, 1, 12);
        FormalModule m = multiplicative_module(R, 8);
        CHECK_THROWS_AS(module_structure_solve(m, 4), std::invalid_argument);
    }
}

TEST_CASE("module constructor accepts a solved omega") {
    UnramifiedRing R(2, 2, 12);
    FormalModule m = lt_group(FrobeniusSeries::canonical(R, 4, 10));
    StructureSolveResult res = module_structure_solve(m, 4);
    REQUIRE(res.omega_series.has_value());
    CHECK_NOTHROW(FormalModule(FormalGroupLaw::trusted(m.F()), m.pi(), res.omega_series));
}

TEST_CASE("omega commutation is part of the stored-module contract") {
    UnramifiedRing R(2, 2, 12);
    FormalModule m = lt_group(FrobeniusSeries::canonical(R, 4, 10));
    StructureSolveResult res = module_structure_solve(m, 4);
    REQUIRE(res.omega_series.has_value());
    FormalModule full(FormalGroupLaw::trusted(m.F()), m.pi(), res.omega_series);
    CHECK(full.omega()->compose(full.pi()) == full.pi().compose(*full.omega()));
}

TEST_CASE("height is invariant under transport") {
    std::mt19937_64 rng(17);
    UnramifiedRing R(2, 1, 12);
    FormalModule m = multiplicative_module(R, 10);
    for (int t = 0; t < 5; ++t) {
        Series u = random_zero_const(R, 10, rng);
        u.set_coeff(1, R.one());  // unit linear coefficient
        FormalModule moved = transport(m, u);
        CHECK(moved.height() == m.height());
        CHECK(!check_group_law(moved.F()));
    }
}

TEST_CASE("multiplier congruence: mod p the multiplier lives in X^(p^h)") {
    UnramifiedRing R(3, 2, 10);
    FormalModule m = lt_group(FrobeniusSeries::canonical(R, 9, 12));
    Series pi_mod_p = m.pi();
    HeightResult h = m.height();
    REQUIRE(h.exact);
    long long ph = 1;
    for (int i = 0; i < h.h; ++i) ph *= R.p();
    for (int k = 0; k <= pi_mod_p.cap(); ++k)
        if (pi_mod_p.coeff(k).is_unit()) CHECK(k % ph == 0);
}
