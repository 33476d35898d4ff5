#include <doctest.h>

#include "flowcert/rational.hpp"

using namespace flowcert;

TEST_CASE("rational parsing and formatting") {
    CHECK(rat_str(rat_parse("3/7")) == "3/7");
    CHECK(rat_str(rat_parse("-2/4")) == "-1/2");
    CHECK(rat_str(rat_parse("5")) == "5");
    CHECK(rat_parse("-0.125") == Rat(-1, 8));
    CHECK(rat_parse("0.5") == Rat(1, 2));
    CHECK_THROWS(rat_parse("1.2.3"));
}

TEST_CASE("doubles embed exactly") {
    CHECK(rat_from_double(0.25) == Rat(1, 4));
    CHECK(rat_from_double(-3.0) == Rat(-3));
    double x = 0.1;
    Rat q = rat_from_double(x);
    CHECK(rat_to_double(q) == x);  // round trip is exact for any double
}

TEST_CASE("rounding helpers") {
    CHECK(rat_round(rat_parse("7/2")) == 4);
    CHECK(rat_round(rat_parse("-7/2")) == -3);
    CHECK(rat_floor(rat_parse("-1/3")) == -1);
    CHECK(rat_ceil(rat_parse("-1/3")) == 0);
}

TEST_CASE("rational gcd") {
    CHECK(rat_gcd(rat_parse("-2"), rat_parse("0")) == 2);
    CHECK(rat_gcd(rat_parse("1/6"), rat_parse("1/4")) == Rat(1, 12));
    CHECK(rat_gcd(rat_parse("0"), rat_parse("0")) == 0);
}

TEST_CASE("quantization is exact on the grid") {
    Rat q = rat_quantize(0.5);
    CHECK(q == Rat(1, 2));
    // error bounded by 2^-41
    double x = 0.1234567890123;
    CHECK(rat_abs(rat_quantize(x) - rat_from_double(x)) <= Rat(1, (long(1) << 41)));
}
