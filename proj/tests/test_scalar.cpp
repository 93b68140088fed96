#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spintower/scalar.hpp"

using namespace spintower;

TEST_CASE("gaussian rational field axioms on samples") {
    GaussianRational a(Rational(3, 4), Rational(-2, 5));
    GaussianRational b(Rational(-1, 3), Rational(7, 2));
    CHECK(a * b == b * a);
    CHECK(a * a.inverse() == GaussianRational(1));
    CHECK((a + b) * a.inverse() == GaussianRational(1) + b * a.inverse());
    CHECK(a.conj() * a == GaussianRational(a.re * a.re + a.im * a.im));
}

TEST_CASE("laurent arithmetic is exact") {
    ExactScalar x = ExactScalar::lambda(2) + ExactScalar::lambda(-1) * ExactScalar(3);
    ExactScalar y = ExactScalar::lambda(1, GaussianRational(0, 1));  // i*lambda
    ExactScalar p = (x + y) * (x - y);
    CHECK(p == x * x - y * y);
    CHECK((x - x).is_zero());
    CHECK(ExactScalar::unit_i() * ExactScalar::unit_i() == -ExactScalar::one());
}

TEST_CASE("monomial inverse round-trips; non-monomial inverse throws") {
    ExactScalar m = ExactScalar::lambda(-3, GaussianRational(Rational(2, 7), Rational(1, 7)));
    CHECK(m * m.inverse() == ExactScalar::one());
    ExactScalar s = ExactScalar::one() + ExactScalar::lambda();
    CHECK_THROWS_AS(s.inverse(), ScalarError);
}

TEST_CASE("parser accepts the grammar and parse(str()) is the identity") {
    const char* samples[] = {
        "0", "1", "-1", "i", "-i", "lambda", "2*i*lambda^2", "1/2 + 3/4*lambda^-1",
        "(1+i)*(1-i)", "2*i*lambda^2 - lambda + 5",
    };
    for (const char* s : samples) {
        ExactScalar v = parse_scalar(s);
        CHECK(parse_scalar(v.str()) == v);
    }
    CHECK(parse_scalar("(1+i)*(1-i)") == ExactScalar(2));
    CHECK(parse_scalar("2*i*lambda^2") == ExactScalar::lambda(2, GaussianRational(0, 2)));
    CHECK_THROWS_AS(parse_scalar("lambda^"), ScalarError);
    CHECK_THROWS_AS(parse_scalar("2 +"), ScalarError);
    CHECK_THROWS_AS(parse_scalar("(1+i"), ScalarError);
}

TEST_CASE("numeric evaluation matches exact arithmetic") {
    ExactScalar v = parse_scalar("2*i*lambda^2 - 1/3*lambda^-1 + 5");
    auto [re, im] = v.eval(2.0, 0.0);
    CHECK(re == doctest::Approx(5.0 - 1.0 / 6.0).epsilon(1e-14));
    CHECK(im == doctest::Approx(8.0).epsilon(1e-14));
}
