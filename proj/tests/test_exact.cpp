#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kissing/matrix.hpp"
#include "kissing/rational.hpp"

using kissing::Integer;
using kissing::Rational;
using kissing::RationalMatrix;

namespace {

Rational rat(long p, long q = 1) { return Rational(p, q); }

RationalMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    RationalMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = Rational(rows[i][j]);
    return m;
}

std::mt19937 rng(20240811);

Rational random_rational() {
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 60);
    return Rational(num(rng), den(rng));
}

} // namespace

TEST_CASE("rational arithmetic basics") {
    CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
    CHECK(rat(16, 3) < rat(11, 2)); // 32/6 < 33/6
    CHECK(rat(36, 5) * rat(5, 6) == rat(6));
    CHECK((rat(3, 4) / rat(3, 2)) == rat(1, 2));
    CHECK_THROWS_AS(rat(1) / rat(0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational canonical form") {
    Rational r(36, -48);
    CHECK(r.num() == Integer(-3));
    CHECK(r.den() == Integer(4));
    CHECK(r.to_string() == "-3/4");
    CHECK(Rational(10, 5).to_string() == "2");
    for (int i = 0; i < 500; ++i) {
        const Rational a = random_rational();
        const Rational b = random_rational();
        CHECK((a + b) - b == a);
        CHECK(a.den().get_si() >= 1);
        Integer g;
        mpz_gcd(g.get_mpz_t(), a.num().get_mpz_t(), a.den().get_mpz_t());
        CHECK(g == 1);
    }
}

TEST_CASE("rational order matches cross multiplication") {
    for (int i = 0; i < 500; ++i) {
        const Rational a = random_rational();
        const Rational b = random_rational();
        const Integer lhs = a.num() * b.den();
        const Integer rhs = b.num() * a.den();
        CHECK((a < b) == (lhs < rhs));
        CHECK((a == b) == (lhs == rhs));
    }
}

TEST_CASE("rational string round trip") {
    for (const char* s : {"0", "7", "-7", "22/7", "-355/113"}) {
        CHECK(Rational::from_string(s).to_string() == s);
    }
    CHECK(Rational::from_string("4/2").to_string() == "2");
    CHECK_THROWS(Rational::from_string("x"));
    CHECK_THROWS(Rational::from_string("1/0"));
    CHECK(Rational(5, 2).floor() == Integer(2));
    CHECK(Rational(-5, 2).floor() == Integer(-3));
}

TEST_CASE("determinant of integer matrices") {
    CHECK(from_rows({{1, 0, -1}, {0, 1, 0}, {1, 1, 2}}).det() == rat(3));
    CHECK(from_rows({{1, 0, 0}, {1, 2, -1}, {1, 1, 2}}).det() == rat(5));
    for (int n = 1; n <= 8; ++n) CHECK(RationalMatrix::identity(n).det() == rat(1));
    CHECK(from_rows({{2, 0}, {4, 0}}).det() == rat(0));
    RationalMatrix notsquare(2, 3);
    CHECK_THROWS_AS(notsquare.det(), std::invalid_argument);
}

TEST_CASE("determinant is multiplicative") {
    std::uniform_int_distribution<long> entry(-9, 9);
    for (int t = 0; t < 100; ++t) {
        RationalMatrix a(3, 3), b(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                a(i, j) = Rational(entry(rng));
                b(i, j) = Rational(entry(rng));
            }
        CHECK((a * b).det() == a.det() * b.det());
    }
}

TEST_CASE("rational elimination agrees with Bareiss") {
    // scale a rational matrix to integers; det scales by the product of row factors
    std::uniform_int_distribution<long> entry(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    for (int t = 0; t < 50; ++t) {
        RationalMatrix a(4, 4);
        Rational factor(1);
        std::vector<long> rowden(4);
        for (int i = 0; i < 4; ++i) {
            rowden[i] = den(rng);
            factor *= Rational(rowden[i]);
            for (int j = 0; j < 4; ++j) a(i, j) = Rational(entry(rng), rowden[i]);
        }
        RationalMatrix scaled(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) scaled(i, j) = a(i, j) * Rational(rowden[i]);
        REQUIRE(scaled.is_integral());
        CHECK(a.det() * factor == scaled.det());
    }
}

TEST_CASE("matrix inverse is exact") {
    RationalMatrix a = from_rows({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}});
    const RationalMatrix inv = a.inverse();
    CHECK(a * inv == RationalMatrix::identity(3));
    CHECK(inv(0, 0) == rat(3, 4));
    CHECK_THROWS_AS(from_rows({{1, 1}, {1, 1}}).inverse(), std::domain_error);
}

TEST_CASE("solve3 exact") {
    const auto id = RationalMatrix::identity(3);
    const auto x = kissing::solve3(id, {rat(1), rat(2), rat(3)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == rat(1));
    CHECK((*x)[2] == rat(3));

    auto dup = from_rows({{1, 2, 3}, {1, 2, 3}, {0, 0, 1}});
    CHECK_FALSE(kissing::solve3(dup, {rat(1), rat(1), rat(1)}).has_value());

    auto diag = from_rows({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}});
    const auto y = kissing::solve3(diag, {rat(2), rat(0), rat(0)});
    REQUIRE(y.has_value());
    CHECK((*y)[0] == rat(1));
    CHECK((*y)[1] == rat(0));
}

TEST_CASE("solve3 floating point") {
    const std::array<std::array<double, 3>, 3> id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto x = kissing::solve3(id, {1.0, 2.0, 3.0});
    REQUIRE(x.has_value());
    CHECK((*x)[1] == Catch::Approx(2.0));
    const std::array<std::array<double, 3>, 3> sing{{{1, 2, 3}, {2, 4, 6}, {0, 0, 1}}};
    CHECK_FALSE(kissing::solve3(sing, {1.0, 1.0, 1.0}).has_value());
}
