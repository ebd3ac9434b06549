#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "lyatel/csv.hpp"
#include "lyatel/orbit.hpp"

using namespace lyatel;
using C = std::complex<double>;

TEST_CASE("iterate at the repelling fixed point of z^2-2") {
    MapSpec map = MapSpec::unicritical(2, {-2.0, 0.0});
    Orbit o = iterate(map, {2.0, 0.0}, 5);
    REQUIRE(o.status == OrbitStatus::Complete);
    REQUIRE(o.z.size() == 6);
    for (const auto& z : o.z) CHECK(z == C{2.0, 0.0});
    CHECK(std::abs(o.chi() - std::log(4.0)) < 1e-15);
    for (int k = 1; k <= 5; ++k)
        CHECK(std::abs(o.chi_prefix[k] * k - (o.chi_prefix[1] * 1) * k) < 1e-12);
}

TEST_CASE("iterate walks the exact 2-cycle of z^2+i") {
    MapSpec map = MapSpec::unicritical(2, {0.0, 1.0});
    Orbit o = iterate(map, {0.0, -1.0}, 4);
    REQUIRE(o.status == OrbitStatus::Complete);
    std::vector<C> want = {{0, -1}, {-1, 1}, {0, -1}, {-1, 1}, {0, -1}};
    for (int i = 0; i <= 4; ++i) CHECK(o.z[i] == want[i]);
    // chi at even n equals half the log-modulus of the cycle multiplier 4+4i
    CHECK(std::abs(o.chi() - 0.5 * std::log(4.0 * std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("orbit attracted to the fixed point of z^2-0.5") {
    MapSpec map = MapSpec::unicritical(2, {-0.5, 0.0});
    const double zstar = (1.0 - std::sqrt(3.0)) / 2.0;
    Orbit o = iterate(map, {0.1, 0.0}, 10000);
    REQUIRE(o.status == OrbitStatus::Complete);
    CHECK(std::abs(o.z.back() - C{zstar, 0.0}) < 1e-12);
    CHECK(std::abs(o.chi() - std::log(std::sqrt(3.0) - 1.0)) < 1e-3);

    // cycle-limit property at 1e-6 needs a start near the cycle
    Orbit near = iterate(map, {zstar + 1e-4, 0.0}, 10000);
    CHECK(std::abs(near.chi() - std::log(std::sqrt(3.0) - 1.0)) < 1e-6);
}

TEST_CASE("chi_prefix is the Birkhoff average") {
    MapSpec map = MapSpec::unicritical(2, {0.0, 1.0});
    Orbit o = iterate(map, {0.3, 0.2}, 50);
    double sum = 0.0;
    for (int k = 1; k <= o.steps(); ++k) {
        sum += o.log_abs_deriv[k - 1];
        CHECK(std::abs(o.chi_prefix[k] * k - sum) <= 1e-12 * std::max(1.0, std::abs(sum)));
    }
}

TEST_CASE("iterate stops on overflow and singular hits") {
    MapSpec e = MapSpec::exponential({1.0, 0.0}, {0.0, 0.0});
    Orbit o = iterate(e, {5.0, 0.0}, 50, {});
    CHECK(o.status == OrbitStatus::Overflowed);
    CHECK(o.fail_step > 0);

    MapSpec q = MapSpec::unicritical(2, {-2.0, 0.0});
    Orbit h = iterate(q, {0.0, 0.0}, 10); // z1 = -2 = singular value
    CHECK(h.status == OrbitStatus::HitSingular);
    CHECK(h.fail_step == 1);
}

TEST_CASE("geometry constants for the z^2-2 fixed orbit") {
    MapSpec map = MapSpec::unicritical(2, {-2.0, 0.0});
    Orbit o = iterate(map, {2.0, 0.0}, 10);
    GeometryConstants g = geometry_constants(map, o, 2.0);
    CHECK(g.delta_n == 0.5); // d(2, -2) = 4 capped at 1/2
    CHECK(g.D_n == 3.0);
    CHECK(g.rho_n == 40.0);
    CHECK(g.m_max == doctest::Approx(5.6888794541139363).epsilon(1e-15));
    CHECK(g.S_f == 3.0);
    CHECK(g.rho_tilde_n == doctest::Approx(4.0 * 5.0 / 0.5).epsilon(1e-15));
}

TEST_CASE("geometry constants for the z^2+i Misiurewicz orbit") {
    MapSpec map = MapSpec::unicritical(2, {0.0, 1.0});
    Orbit o = iterate(map, {0.0, -1.0}, 10);
    const double mf = 1.6932054646237973;
    GeometryConstants g = geometry_constants(map, o, mf);
    CHECK(g.delta_n == 0.5); // d(-1+i, i) = 1, d(-i, i) = 2, capped at 1/2
    CHECK(g.D_n == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-15));
    CHECK(g.S_f == 2.0);
    CHECK(g.rho_tilde_n == doctest::Approx(8.0 * (2.0 + mf)).epsilon(1e-14));
    CHECK(g.rho_n >= 16.0);
}

TEST_CASE("degenerate orbits are refused") {
    MapSpec map = MapSpec::unicritical(2, {-2.0, 0.0});
    Orbit h = iterate(map, {0.0, 0.0}, 10);
    CHECK_THROWS_AS(geometry_constants(map, h, 2.0), DegenerateOrbit);
}

TEST_CASE("delta_i and D_i are monotone along prefixes") {
    MapSpec map = MapSpec::exponential({1.0, 0.0}, {-1.0, 0.0});
    Orbit o = iterate(map, {-0.9, 0.0}, 40);
    REQUIRE(o.status == OrbitStatus::Complete);
    double prev_delta = 1e300, prev_D = 0.0;
    for (int n = 1; n <= o.steps(); ++n) {
        Orbit prefix = iterate(map, {-0.9, 0.0}, n);
        GeometryConstants g = geometry_constants(map, prefix, 1.0);
        CHECK(g.delta_n <= prev_delta + 1e-15);
        CHECK(g.D_n >= prev_D - 1e-15);
        CHECK(g.rho_n >= 16.0);
        prev_delta = g.delta_n;
        prev_D = g.D_n;
    }
}

TEST_CASE("slow decay check") {
    auto mk = [](double delta, double D) {
        GeometryConstants g;
        g.delta_n = delta;
        g.D_n = D;
        return g;
    };
    std::vector<std::pair<int, GeometryConstants>> flat;
    for (int n = 1; n <= 100; ++n) flat.push_back({n, mk(0.5, 3.0)});
    auto r = slow_decay_check(flat, 0.1, 0.4, false);
    CHECK(r.ok);
    CHECK(r.first_violation_n == -1);

    std::vector<std::pair<int, GeometryConstants>> decay;
    for (int n = 1; n <= 100; ++n) decay.push_back({n, mk(1.0 / n, 1.0)});
    r = slow_decay_check(decay, 1.0, 0.4, true);
    CHECK(!r.ok);
    CHECK(r.first_violation_n == 2); // 1/n < n^{-0.4} from n = 2 on

    std::vector<std::pair<int, GeometryConstants>> boundary;
    for (int n = 1; n <= 100; ++n) boundary.push_back({n, mk(0.3 * std::pow(n, -0.3), 1.0)});
    r = slow_decay_check(boundary, 0.3, 0.3, true);
    CHECK(r.ok); // equality everywhere

    CHECK_THROWS_AS(slow_decay_check(flat, 0.0, 0.4, false), DomainError);
    CHECK_THROWS_AS(slow_decay_check(flat, 1.0, 0.5, false), DomainError);
}

TEST_CASE("chi window minimum") {
    MapSpec map = MapSpec::unicritical(2, {-2.0, 0.0});
    Orbit o = iterate(map, {2.0, 0.0}, 30);
    CHECK(o.chi_window_min() == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(o.chi_window_min(30) <= o.chi() + 1e-15);
}

TEST_CASE("orbit CSV is deterministic and round-trips at 17 digits") {
    MapSpec map = MapSpec::unicritical(2, {0.0, 1.0});
    Orbit o = iterate(map, {0.0, -1.0}, 8);
    std::string csv = orbit_csv(map, o);
    CHECK(csv == orbit_csv(map, o));

    std::vector<std::string> lines;
    std::string cur;
    for (char ch : csv) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else
            cur += ch;
    }
    REQUIRE(lines.size() == 10); // header + 9 rows
    CHECK(lines[0] == "i,re_z,im_z,log_abs_deriv,chi_i,delta_i,D_i");
    for (int i = 0; i <= 8; ++i) {
        auto f = csv_split(lines[i + 1]);
        REQUIRE(f.size() == 7);
        CHECK(std::strtod(f[1].c_str(), nullptr) == o.z[i].real());
        CHECK(std::strtod(f[2].c_str(), nullptr) == o.z[i].imag());
        if (i < 8) CHECK(std::strtod(f[3].c_str(), nullptr) == o.log_abs_deriv[i]);
        else CHECK(f[3].empty());
        CHECK(std::strtod(f[4].c_str(), nullptr) == o.chi_prefix[i]);
    }
}
