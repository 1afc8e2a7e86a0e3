#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "prodmeas/bounds.hpp"

using namespace prodmeas;

namespace {

// Floating point is allowed here: it is the independent oracle the certified
// enclosures are checked against, never part of them.
long double to_ld(const Rat& q) {
    return static_cast<long double>(rat_num(q).convert_to<double>()) /
           static_cast<long double>(rat_den(q).convert_to<double>());
}

bool encloses(const RatInterval& iv, long double reference) {
    long double slack = 1e-12L * std::max(1.0L, std::fabs(reference));
    return to_ld(iv.lo) <= reference + slack && reference - slack <= to_ld(iv.hi);
}

}  // namespace

TEST_CASE("exp enclosures") {
    const Rat eps(1, 1000000000);
    CHECK(exp_bounds(Rat(0), eps).is_point());
    CHECK(exp_bounds(Rat(0), eps).lo == 1);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        Rat x(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(rng() % 100) + 50);
        RatInterval iv = exp_bounds(x, eps);
        CHECK(iv.width() <= eps);
        CHECK(iv.lo > 0);
        CHECK(encloses(iv, std::exp(to_ld(x))));
    }
}

TEST_CASE("log enclosures") {
    const Rat eps(1, 1000000000);
    CHECK(log_bounds(Rat(1), eps).is_point());

    std::mt19937_64 rng(13);
    for (int i = 0; i < 40; ++i) {
        Rat x(static_cast<long>(rng() % 5000) + 1, static_cast<long>(rng() % 500) + 1);
        RatInterval iv = log_bounds(x, eps);
        CHECK(iv.width() <= eps);
        CHECK(encloses(iv, std::log(to_ld(x))));
    }
    CHECK_THROWS_AS(log_bounds(Rat(0), eps), precondition_error);
    CHECK_THROWS_AS(log_bounds(Rat(-1), eps), precondition_error);
}

TEST_CASE("exp and log are mutually consistent") {
    const Rat eps(1, Int(1) << 48);
    for (long n = 1; n <= 20; ++n) {
        Rat x(n, 7);
        RatInterval e = exp_bounds(x, eps);
        RatInterval back = log_bounds(e.lo, eps);
        CHECK(back.lo <= x);
        CHECK(x <= log_bounds(e.hi, eps).hi);
    }
}

TEST_CASE("sqrt enclosures") {
    const Rat eps(1, 1000000000);
    RatInterval exact = sqrt_bounds(Rat(9, 4), eps);
    CHECK(exact.is_point());
    CHECK(exact.lo == Rat(3, 2));
    CHECK(sqrt_bounds(Rat(0), eps).lo == 0);

    RatInterval iv = sqrt_bounds(Rat(2), eps);
    CHECK(!iv.is_point());
    CHECK(iv.width() <= eps);
    CHECK(iv.lo * iv.lo <= 2);
    CHECK(iv.hi * iv.hi >= 2);
}

TEST_CASE("rational power enclosures") {
    const Rat eps(1, 1000000);
    CHECK(pow_bounds(Rat(3, 2), Rat(3), eps).is_point());
    CHECK(pow_bounds(Rat(3, 2), Rat(3), eps).lo == Rat(27, 8));
    CHECK(pow_bounds(Rat(0), Rat(5, 2), eps).lo == 0);
    CHECK_THROWS_AS(pow_bounds(Rat(0), Rat(0), eps), precondition_error);

    RatInterval iv = pow_bounds(Rat(2), Rat(1, 2), eps);
    CHECK(iv.width() <= eps);
    CHECK(encloses(iv, std::sqrt(2.0L)));

    RatInterval p = pow_bounds(Rat(5, 3), Rat(7, 3), eps);
    CHECK(p.width() <= eps);
    CHECK(encloses(p, std::pow(5.0L / 3.0L, 7.0L / 3.0L)));
}

TEST_CASE("interval arithmetic basics") {
    RatInterval a(Rat(1), Rat(2)), b(Rat(3), Rat(4));
    CHECK((a + b).lo == 4);
    CHECK((a + b).hi == 6);
    CHECK((Rat(-2) * a).lo == -4);
    CHECK((Rat(-2) * a).hi == -2);
    CHECK(mul_nonneg(a, b).lo == 3);
    CHECK(mul_nonneg(a, b).hi == 8);
    CHECK_THROWS_AS(RatInterval(Rat(2), Rat(1)), precondition_error);
}
