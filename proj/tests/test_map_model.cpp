#include <random>

#include "doctest.h"
#include "lyatel/map_model.hpp"

using namespace lyatel;
using C = std::complex<double>;

TEST_CASE("eval matches the two families") {
    MapSpec q = MapSpec::unicritical(2, {-2.0, 0.0});
    CHECK(eval(q, {2.0, 0.0}) == C{2.0, 0.0}); // fixed point of z^2-2

    MapSpec qi = MapSpec::unicritical(2, {0.0, 1.0});
    C w = eval(qi, {-1.0, 1.0});
    CHECK(w.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(w.imag() == doctest::Approx(-1.0).epsilon(1e-15));

    MapSpec e = MapSpec::exponential({1.0, 0.0}, {0.0, 0.0});
    CHECK(eval(e, {0.0, 0.0}) == C{1.0, 0.0});
}

TEST_CASE("deriv matches the two families") {
    MapSpec q = MapSpec::unicritical(2, {-2.0, 0.0});
    CHECK(deriv(q, {2.0, 0.0}) == C{4.0, 0.0});
    MapSpec qi = MapSpec::unicritical(2, {0.0, 1.0});
    CHECK(deriv(qi, {0.0, -1.0}) == C{0.0, -2.0});
    MapSpec e = MapSpec::exponential({1.0, 0.0}, {0.0, 0.0});
    CHECK(deriv(e, {0.0, 0.0}) == C{1.0, 0.0});
}

TEST_CASE("eval signals overflow as a non-finite value") {
    MapSpec e = MapSpec::exponential({1.0, 0.0}, {0.0, 0.0});
    C big = eval(e, {1e4, 0.0});
    CHECK(!std::isfinite(big.real()));
}

TEST_CASE("singular_set is the unique critical / asymptotic value") {
    SingularSet s = singular_set(MapSpec::unicritical(2, {-2.0, 0.0}));
    REQUIRE(s.points.size() == 1);
    CHECK(s.points[0] == C{-2.0, 0.0});
    CHECK(s.S_f == 3.0);

    s = singular_set(MapSpec::exponential({1.0, 0.0}, {0.0, 0.0}));
    REQUIRE(s.points.size() == 1);
    CHECK(s.points[0] == C{0.0, 0.0});
    CHECK(s.S_f == 1.0);

    s = singular_set(MapSpec::unicritical(3, {0.0, 0.0}));
    CHECK(s.points[0] == C{0.0, 0.0});
    CHECK(s.S_f == 1.0);

    // {c} regardless of degree
    for (int d = 2; d <= 7; ++d) {
        s = singular_set(MapSpec::unicritical(d, {0.25, -0.5}));
        REQUIRE(s.points.size() == 1);
        CHECK(s.points[0] == C{0.25, -0.5});
    }
}

TEST_CASE("pull_back_step picks the continuity branch") {
    MapSpec q = MapSpec::unicritical(2, {-2.0, 0.0});
    InverseBranchState br{{2.0, 0.0}, 0};

    auto r1 = pull_back_step(q, br, {2.0, 0.0});
    CHECK(std::abs(r1.current_point - C{2.0, 0.0}) < 1e-15);
    CHECK(r1.level == 1);

    auto r2 = pull_back_step(q, br, {2.25, 0.0});
    CHECK(r2.current_point.real() == doctest::Approx(2.0615528128088303).epsilon(1e-14));
    CHECK(r2.current_point.imag() == 0.0);

    MapSpec qi = MapSpec::unicritical(2, {0.0, 1.0});
    InverseBranchState bi{{0.0, -1.0}, 3};
    auto r3 = pull_back_step(qi, bi, {-1.0, 1.0}); // sqrt(-1) resolved by continuity to -i
    CHECK(std::abs(r3.current_point - C{0.0, -1.0}) < 1e-12);
    CHECK(r3.level == 4);
}

TEST_CASE("pull_back_step error contracts") {
    MapSpec q = MapSpec::unicritical(2, {0.0, 0.0});
    InverseBranchState equidistant{{0.0, 1.0}, 0}; // i is equidistant from +-1
    CHECK_THROWS_AS(pull_back_step(q, equidistant, {1.0, 0.0}), AmbiguousBranch);

    InverseBranchState br{{1.0, 0.0}, 0};
    CHECK_THROWS_AS(pull_back_step(q, br, {0.0, 0.0}), SingularHit); // target = singular value
}

TEST_CASE("pullback round trip under eval") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<MapSpec> maps = {MapSpec::unicritical(2, {-0.3, 0.4}),
                                 MapSpec::unicritical(5, {0.1, -0.2}),
                                 MapSpec::exponential({0.7, 0.2}, {-1.0, 0.0})};
    for (const auto& map : maps) {
        int ok = 0, tried = 0;
        for (int k = 0; k < 200; ++k) {
            C z{u(rng), u(rng)};
            C fz = eval(map, z);
            C target = fz + 0.01 * (1.0 + std::abs(fz)) * C{u(rng), u(rng)} / 2.0;
            ++tried;
            try {
                auto st = pull_back_step(map, InverseBranchState{z, 0}, target);
                CHECK(std::abs(eval(map, st.current_point) - target) <=
                      1e-9 * (1.0 + std::abs(target)));
                ++ok;
            } catch (const Error&) {
                // ambiguous / singular targets are allowed to refuse
            }
        }
        CHECK(ok > tried * 3 / 4);
    }
}

TEST_CASE("deriv agrees with central differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double h = 1e-5;
    std::vector<MapSpec> maps = {MapSpec::unicritical(2, {0.3, -0.1}),
                                 MapSpec::unicritical(4, {-1.0, 0.2}),
                                 MapSpec::exponential({1.0, 0.0}, {0.0, 0.0})};
    for (const auto& map : maps) {
        for (int k = 0; k < 100; ++k) {
            C z{u(rng), u(rng)};
            if (std::abs(z) > 3.0) continue;
            C fd = (eval(map, z + C{h, 0.0}) - eval(map, z - C{h, 0.0})) / (2.0 * h);
            C d = deriv(map, z);
            CHECK(std::abs(d - fd) <= 1e-7 * std::max(1.0, std::abs(d)));
        }
    }
}

TEST_CASE("map grammar parses and round-trips") {
    MapSpec m = parse_map("poly:d=2,c=-2");
    CHECK(m.family == MapFamily::UnicriticalPoly);
    CHECK(m.degree == 2);
    CHECK(m.c == C{-2.0, 0.0});

    m = parse_map("poly:d=3,c=0.25+0.5i");
    CHECK(m.degree == 3);
    CHECK(m.c == C{0.25, 0.5}); // exact decimal literals

    m = parse_map("exp:a=1,c=0");
    CHECK(m.family == MapFamily::Exponential);
    CHECK(m.a == C{1.0, 0.0});

    m = parse_map("exp:a=0.5-0.25i,c=-1");
    CHECK(m.a == C{0.5, -0.25});
    CHECK(parse_map(format_map(m)).a == m.a);

    CHECK(parse_complex("2-i") == C{2.0, -1.0});
    CHECK(parse_complex("1e-3+2e2i") == C{0.001, 200.0});

    CHECK_THROWS_AS(parse_map("poly:d=1,c=0"), ParseError);
    CHECK_THROWS_AS(parse_map("poly:d=2"), ParseError);
    CHECK_THROWS_AS(parse_map("rat:d=2,c=0"), ParseError);
    CHECK_THROWS_AS(parse_map("poly:d=2,c=zzz"), ParseError);
    CHECK_THROWS_AS(parse_map("exp:a=0,c=0"), ParseError);
    CHECK_THROWS_AS(parse_complex("1+2j"), ParseError);
}
