#include <doctest.h>

#include <boost/math/special_functions/polygamma.hpp>
#include <cmath>
#include <numbers>

#include "mlebound/errors.hpp"
#include "mlebound/specfun.hpp"

using namespace mlebound;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double euler = 0.57721566490153286060651209;
double fact(int m) { return std::tgamma(m + 1.0); }
}  // namespace

TEST_CASE("closed values") {
    CHECK(polygamma(1, 1.0) == doctest::Approx(pi * pi / 6).epsilon(1e-13));
    CHECK(std::fabs(polygamma(1, 1.0) - pi * pi / 6) < 1e-10);
    CHECK(std::fabs(polygamma(3, 1.0) - std::pow(pi, 4) / 15) < 1e-10);
    CHECK(std::fabs(polygamma(1, 0.5) - pi * pi / 2) < 1e-10);
    CHECK(std::fabs(digamma(1.0) + euler) < 1e-10);
    CHECK(std::fabs(digamma(2.0) - (1.0 - euler)) < 1e-10);
    CHECK(std::fabs(digamma(0.5) - (-euler - 2.0 * std::log(2.0))) < 1e-10);
}

TEST_CASE("mpmath reference values") {
    // oracles/specfun_values.py
    struct Ref {
        int m;
        double z, v;
    };
    const Ref refs[] = {
        {1, 2.5, 0.4903577561002348649728011},   {1, 0.1, 101.433299150792747704652},
        {1, 37.25, 0.0272092058039555751996249}, {2, 7.0, -0.02353047298585523746614299},
        {2, 0.3, -75.27253658872603891730031},   {3, 0.3, 743.1417646550497770878481},
        {3, 5.0, 0.02142782819275507502194811},  {4, 1.75, -1.664803346281670069786547},
        {3, 2.0, 0.4939394022668291490960222},   {3, 3.0, 0.1189394022668291490960222},
    };
    for (const auto& r : refs) {
        CAPTURE(r.m);
        CAPTURE(r.z);
        CHECK(std::fabs(polygamma(r.m, r.z) - r.v) <= 1e-12 + 1e-13 * std::fabs(r.v));
    }
    const double dz[][2] = {{3.7, 1.167153539361511440947651},
                            {0.01, -100.5608854578686724154753},
                            {12.5, 2.48519565127491204815044},
                            {0.001, -1000.575571931810279654757},
                            {150.0, 5.00729825707567926996406}};
    for (const auto& r : dz) CHECK(std::fabs(digamma(r[0]) - r[1]) <= 1e-12 * std::max(1.0, std::fabs(r[1])));
}

TEST_CASE("agrees with boost on a grid") {
    for (int m = 1; m <= 4; ++m)
        for (double z = 0.05; z < 60.0; z *= 1.37) {
            const double ref = boost::math::polygamma(m, z);
            CHECK(std::fabs(polygamma(m, z) - ref) <= 1e-12 + 2e-14 * std::fabs(ref));
        }
}

TEST_CASE("recurrence, sign and monotonicity") {
    const PolyGammaConfig cfg;
    for (int m : {1, 2, 3})
        for (double z : {0.5, 1.0, 2.5, 7.0}) {
            const double lhs = polygamma(m, z + 1.0, cfg);
            const double rhs = polygamma(m, z, cfg) + std::pow(-1.0, m) * fact(m) * std::pow(z, -(m + 1));
            CHECK(std::fabs(lhs - rhs) <= 10.0 * cfg.abs_tol);
        }
    for (int m = 1; m <= 5; ++m)
        for (double z = 0.01; z < 1e3; z *= 2.3) CHECK(std::pow(-1.0, m + 1) * polygamma(m, z) > 0.0);
    double prev = trigamma(0.05);
    for (double z = 0.1; z < 200.0; z += 0.05) {
        const double v = trigamma(z);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("tolerance knob") {
    PolyGammaConfig loose{1, 1e-6};
    CHECK(std::fabs(polygamma(2, 0.7, loose) - boost::math::polygamma(2, 0.7)) <= 1e-6);
    PolyGammaConfig many{50, 1e-14};
    CHECK(std::fabs(polygamma(1, 3.0, many) - (pi * pi / 6 - 1.25)) <= 1e-13);
}

TEST_CASE("domain errors") {
    auto kind = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    CHECK(kind([] { polygamma(0, 1.0); }) == ErrorKind::Domain);
    CHECK(kind([] { polygamma(1, 0.0); }) == ErrorKind::Domain);
    CHECK(kind([] { polygamma(2, -1.5); }) == ErrorKind::Domain);
    CHECK(kind([] { digamma(0.0); }) == ErrorKind::Domain);
    CHECK(kind([] { polygamma(1, 1.0, {0, 1e-12}); }) == ErrorKind::Domain);
    CHECK(kind([] { polygamma(1, 1.0, {8, 0.0}); }) == ErrorKind::Domain);
}

TEST_CASE("zeta(3) upper value") {
    CHECK(zeta3_upper() == 1.21);
    CHECK(zeta3_upper() > 1.2020569031595942);
}
