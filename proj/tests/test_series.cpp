#include <doctest.h>

#include <random>

#include "fgl/series.hpp"

using namespace fgl;

namespace {

// independent reference arithmetic for f = 1 rings: plain vectors mod m
using Vec = std::vector<long long>;

Vec naive_mul(const Vec& a, const Vec& b, int cap, long long m) {
    Vec r(cap + 1, 0);
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; i + j <= cap; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    return r;
}

Vec naive_compose(const Vec& outer, const Vec& inner, int cap, long long m) {
    Vec r(cap + 1, 0);
    r[0] = outer[cap] % m;
    for (int k = cap - 1; k >= 0; --k) {
        r = naive_mul(r, inner, cap, m);
        r[0] = (r[0] + outer[k]) % m;
    }
    return r;
}

Vec to_vec(const Series& s) {
    Vec v(s.cap() + 1);
    for (int k = 0; k <= s.cap(); ++k) v[k] = s.coeff(k).digits()[0];
    return v;
}

Series random_series(const UnramifiedRing& R, int cap, std::mt19937_64& rng,
                     bool zero_const = false) {
    Series s(R, cap);
    for (int k = zero_const ? 1 : 0; k <= cap; ++k) {
        std::vector<uint32_t> d(R.f());
        for (auto& x : d) x = static_cast<uint32_t>(rng() % R.pn());
        s.set_coeff(k, R.element(std::move(d)));
    }
    return s;
}

}  // namespace

TEST_CASE("products truncate at the cap") {
    UnramifiedRing R(5, 1, 6);
    Series a = Series::from_int_coeffs(R, 4, {1, 1});   // 1 + X
    Series b = Series::from_int_coeffs(R, 4, {1, -1});  // 1 - X
    CHECK(a * b == Series::from_int_coeffs(R, 4, {1, 0, -1}));

    Series x1 = Series::x(R, 1);
    CHECK((x1 * x1).is_zero());  // X*X dies at cap 1
}

TEST_CASE("multiplication matches the reference convolution") {
    std::mt19937_64 rng(42);
    for (auto [p, N] : {std::pair<uint32_t, int>{2, 12}, {3, 10}, {7, 8}}) {
        UnramifiedRing R(p, 1, N);
        for (int t = 0; t < 25; ++t) {
            Series a = random_series(R, 20, rng);
            Series b = random_series(R, 20, rng);
            Series c = a * b;
            Vec ref = naive_mul(to_vec(a), to_vec(b), 20, R.pn());
            CHECK(to_vec(c) == ref);
            CHECK(a * b == b * a);
        }
    }
}

TEST_CASE("multiplication over an extension ring reduces by the modulus") {
    std::mt19937_64 rng(43);
    UnramifiedRing R(2, 2, 8);
    for (int t = 0; t < 25; ++t) {
        Series a = random_series(R, 12, rng);
        Series b = random_series(R, 12, rng);
        Series c = a * b;
        // coefficient-by-coefficient reference through ring arithmetic
        for (int k = 0; k <= 12; ++k) {
            RingElement acc = R.zero();
            for (int i = 0; i <= k; ++i) acc = acc + a.coeff(i) * b.coeff(k - i);
            CHECK(c.coeff(k) == acc);
        }
    }
}

TEST_CASE("composition") {
    UnramifiedRing R(3, 1, 8);
    Series outer = Series::from_int_coeffs(R, 4, {0, 0, 1});  // X^2
    Series inner = Series::from_int_coeffs(R, 4, {0, 1, 1});  // X + X^2
    CHECK(outer.compose(inner) == Series::from_int_coeffs(R, 4, {0, 0, 1, 2, 1}));

    // identity outer passes the inner through
    Series id = Series::x(R, 4);
    CHECK(id.compose(inner) == inner);

    // nonzero inner constant term is rejected
    Series bad = Series::from_int_coeffs(R, 4, {1, 1});
    CHECK_THROWS_AS(outer.compose(bad), std::invalid_argument);
}

TEST_CASE("composition matches the reference and associates") {
    std::mt19937_64 rng(4242);
    UnramifiedRing R(3, 1, 12);
    for (int t = 0; t < 15; ++t) {
        Series a = random_series(R, 14, rng);
        Series b = random_series(R, 14, rng, true);
        Series c = random_series(R, 14, rng, true);
        CHECK(to_vec(a.compose(b)) == naive_compose(to_vec(a), to_vec(b), 14, R.pn()));
        CHECK(a.compose(b).compose(c) == a.compose(b.compose(c)));
    }
}

TEST_CASE("reversion") {
    UnramifiedRing R(5, 1, 6);
    CHECK(Series::x(R, 4).reversion() == Series::x(R, 4));

    // reversion of X + X^2 carries the signed Catalan numbers
    Series a = Series::from_int_coeffs(R, 4, {0, 1, 1});
    CHECK(a.reversion() == Series::from_int_coeffs(R, 4, {0, 1, -1, 2, -5}));

    CHECK_THROWS_AS(Series::from_int_coeffs(R, 4, {0, 5, 1}).reversion(), std::domain_error);
    CHECK_THROWS_AS(Series::from_int_coeffs(R, 4, {1, 1}).reversion(), std::invalid_argument);
}

TEST_CASE("reversion is a two-sided compositional inverse and an involution") {
    std::mt19937_64 rng(77);
    for (auto [p, f] : {std::pair<uint32_t, int>{2, 1}, {3, 2}}) {
        UnramifiedRing R(p, f, 10);
        for (int t = 0; t < 20; ++t) {
            Series a = random_series(R, 12, rng, true);
            if (!a.coeff(1).is_unit()) {
                a.set_coeff(1, R.one());
            }
            Series r = a.reversion();
            CHECK(a.compose(r) == Series::x(R, 12));
            CHECK(r.compose(a) == Series::x(R, 12));
            CHECK(r.reversion() == a);
        }
    }
}

TEST_CASE("derivative and integral") {
    UnramifiedRing R(3, 1, 6);
    Series x3 = Series::from_int_coeffs(R, 4, {0, 0, 0, 1});
    CHECK(x3.derivative() == Series::from_int_coeffs(R, 4, {0, 0, 3}));

    Series one = Series::from_int_coeffs(R, 4, {1});
    QSeries ix = integrate(one);
    CHECK(ix.coeff(1).val() == 0);
    CHECK(ix.coeff(1).unit_digits()[0] == 1);
    CHECK(ix.coeff(2).is_zero_marker());

    // integrating X^{p-1} forces a pole of valuation -1 on the X^p slot
    Series xp1 = Series::from_int_coeffs(R, 4, {0, 0, 1});  // X^2, p = 3
    QSeries ixp = integrate(xp1);
    CHECK(ixp.coeff(3).val() == -1);
    CHECK(ixp.coeff(3).unit_digits()[0] == 1);
}

TEST_CASE("derivative undoes integrate") {
    std::mt19937_64 rng(99);
    UnramifiedRing R(2, 1, 12);
    for (int t = 0; t < 20; ++t) {
        Series a = random_series(R, 10, rng);
        QSeries back = integrate(a).derivative();
        QSeries expect = QSeries::from_series(a);
        // the top slot is lost to the cap on the way through
        for (int k = 0; k + 1 <= 10; ++k) {
            FieldElement diff = back.coeff(k) - expect.coeff(k);
            CHECK(diff.val() >= 8);
        }
    }
}

TEST_CASE("truncation coherence") {
    std::mt19937_64 rng(123);
    UnramifiedRing R(3, 2, 10);
    for (int t = 0; t < 20; ++t) {
        Series a = random_series(R, 16, rng);
        Series b = random_series(R, 16, rng);
        CHECK((a * b).truncated(9) == a.truncated(9) * b.truncated(9));
        Series ac = random_series(R, 16, rng, true);
        CHECK(a.compose(ac).truncated(9) == a.truncated(9).compose(ac.truncated(9)));
    }
}

TEST_CASE("cap mismatches are rejected") {
    UnramifiedRing R(2, 1, 8);
    Series a(R, 4), b(R, 5);
    CHECK_THROWS_AS(a * b, std::invalid_argument);
    CHECK_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("series text form") {
    UnramifiedRing R(2, 1, 8);
    Series s = Series::from_int_coeffs(R, 3, {1, 0, 2});
    CHECK(s.str() == "1 + 2*X^2 + O(X^4)");
    CHECK(Series(R, 2).str() == "0 + O(X^3)");
}

TEST_CASE("bivariate tables multiply like their univariate slices") {
    std::mt19937_64 rng(321);
    UnramifiedRing R(3, 2, 8);
    const int D = 10;
    for (int t = 0; t < 10; ++t) {
        Series2 A(R, D), B(R, D);
        for (int i = 0; i <= D; ++i)
            for (int j = 0; i + j <= D; ++j) {
                std::vector<uint32_t> d1(R.f()), d2(R.f());
                for (auto& x : d1) x = static_cast<uint32_t>(rng() % R.pn());
                for (auto& x : d2) x = static_cast<uint32_t>(rng() % R.pn());
                A.set(i, j, R.element(std::move(d1)));
                B.set(i, j, R.element(std::move(d2)));
            }
        Series2 C = A * B;
        // reference: coefficient of X^i Y^j by direct double convolution
        for (int i = 0; i <= D; ++i)
            for (int j = 0; i + j <= D; ++j) {
                RingElement acc = R.zero();
                for (int a = 0; a <= i; ++a)
                    for (int b = 0; b <= j; ++b)
                        acc = acc + A.get(a, b) * B.get(i - a, j - b);
                CHECK(C.get(i, j) == acc);
            }
        // setting Y = 0 commutes with multiplication
        CHECK(C.slice_y0() == A.slice_y0() * B.slice_y0());
    }
}

TEST_CASE("outer products accumulate into the right monomials") {
    UnramifiedRing R(2, 1, 8);
    Series2 T(R, 5);
    Series u = Series::from_int_coeffs(R, 5, {0, 1, 1});  // X + X^2
    Series v = Series::from_int_coeffs(R, 5, {0, 2});     // 2Y
    T.add_outer_product(R.one(), u, v);
    CHECK(T.get(1, 1) == R.from_int(2));
    CHECK(T.get(2, 1) == R.from_int(2));
    CHECK(T.get(1, 2) == R.zero());
}

TEST_CASE("cap helper enforces the q^n rule") {
    CHECK(required_cap_for_level(3, 2) == 9);
    CHECK(required_cap_for_level(2, 6) == 64);
    CHECK_THROWS_AS(required_cap_for_level(81, 12), std::invalid_argument);
}

TEST_CASE("qseries arithmetic carries the precision ledger") {
    UnramifiedRing R(2, 1, 10);
    Series a = Series::from_int_coeffs(R, 4, {0, 1, 1});
    QSeries qa = QSeries::from_series(a);
    QSeries prod = qa * qa;
    CHECK(prod.coeff(2).val() == 0);
    CHECK(prod.coeff(3).unit_digits()[0] == 1);  // 2X^3 -> unit 1 at val 1
    CHECK(prod.coeff(3).val() == 1);
    CHECK(prod.min_known_prec() == 9);  // the 2X^3 slot: valuation 1 costs one unit digit

    QSeries rev = qa.reversion();
    QSeries idq = rev.compose(a);
    QSeries xq = QSeries::from_series(Series::x(R, 4));
    CHECK(idq.agrees_with(xq, 8));
}
