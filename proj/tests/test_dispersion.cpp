#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "oracles.hpp"
#include "wavemera/dispersion.hpp"
#include "wavemera/error.hpp"

using namespace wavemera;
using oracle::pi;

TEST_CASE("harmonic values")
{
    CHECK(harmonic(0.0)(pi) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(harmonic(0.0)(0.0) == 0.0);
    CHECK(harmonic(1.0)(pi) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(harmonic(0.3).at_pi() == doctest::Approx(std::sqrt(1.09)));
    try {
        harmonic(-0.1);
        FAIL("expected NegativeMass");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NegativeMass);
    }
}

TEST_CASE("renormalize against the closed form")
{
    // massless: sin(k/4) cos(k/4) = sin(k/2) / 2
    Dispersion r0 = renormalize(harmonic(0.0));
    double dev0 = 0.0, devshape = 0.0;
    for (double k : k_grid(4096)) {
        dev0 = std::max(dev0, std::abs(r0(k) - 0.5 * std::abs(std::sin(k / 2))));
        devshape = std::max(devshape, std::abs(r0(k) / r0(pi) - std::abs(std::sin(k / 2))));
    }
    CHECK(dev0 < 1e-12);
    CHECK(devshape < 1e-12);
    CHECK(r0.at_pi() == doctest::Approx(0.5).epsilon(1e-14));

    // m = 1: (m² + sin²(k/4))(m² + cos²(k/4)) = m⁴ + m² + sin²(k/2)/4
    const double m = 1.0, mp = 2 * std::sqrt(2.0);
    Dispersion r1 = renormalize(harmonic(m));
    double dev1 = 0.0;
    for (double k : k_grid(4096)) {
        double want = 0.5 * std::sqrt(mp * mp + std::pow(std::sin(k / 2), 2)) / (m * m + 1);
        dev1 = std::max(dev1, std::abs(r1(k) - want));
    }
    CHECK(dev1 < 1e-12);

    Dispersion f = renormalize(Dispersion::flat(3.0));
    for (double k : {0.0, 1.0, pi})
        CHECK(f(k) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("renormalize preserves symmetry")
{
    Dispersion d = renormalize(harmonic(0.7), 3);
    CHECK(d.level() == 3);
    for (double k : k_grid(512))
        CHECK(std::abs(d(k) - d(-k)) < 1e-12);
}

TEST_CASE("mass_flow")
{
    auto z = mass_flow(0.0, 4);
    CHECK(z.size() == 5);
    for (double v : z)
        CHECK(v == 0.0);
    CHECK(mass_flow(1.0, 1)[1] == doctest::Approx(2.8284271247461903).epsilon(1e-14));
    auto f = mass_flow(0.1, 3);
    double m = 0.1;
    for (int l = 1; l <= 3; ++l) {
        m = 2 * std::sqrt(m * m + m * m * m * m);
        CHECK(f[l] == doctest::Approx(m).epsilon(1e-14));
        CHECK(f[l] > f[l - 1]);
        CHECK(fitted_mass(renormalize(harmonic(0.1), l)) == doctest::Approx(m).epsilon(1e-8));
    }
}

TEST_CASE("flow_report")
{
    FlowReport r = flow_report(harmonic(0.0), 4);
    for (const auto& lv : r.levels)
        if (lv.l > 0)
            CHECK(lv.omega_pi == doctest::Approx(0.5).epsilon(1e-13));
    FlowReport flat = flow_report(Dispersion::flat(1.0), 3);
    CHECK(flat.Omega() == doctest::Approx(1.0));

    // the flow approaches a flat dispersion for m > 0
    FlowReport mr = flow_report(harmonic(0.5), 5);
    for (std::size_t l = 1; l < mr.levels.size(); ++l)
        CHECK(mr.levels[l].flatness < mr.levels[l - 1].flatness);
    // by level 4 the mass is ~7e5 and the sin² term sits at 1e-12 of ω², beyond what a fit resolves
    FlowReport one = flow_report(harmonic(1.0), 3);
    auto masses = mass_flow(1.0, 3);
    for (const auto& lv : one.levels) {
        REQUIRE(lv.fitted_mass);
        CHECK(*lv.fitted_mass == doctest::Approx(masses[lv.l]).epsilon(1e-8));
    }
}

TEST_CASE("massless shape detection")
{
    CHECK(is_massless_shape(harmonic(0.0)));
    CHECK(is_massless_shape(renormalize(harmonic(0.0), 3)));
    CHECK_FALSE(is_massless_shape(harmonic(0.01)));
}

TEST_CASE("parse and tabulated")
{
    CHECK(Dispersion::parse("harmonic:m=0.25").at_pi() == doctest::Approx(std::sqrt(1.0625)));
    CHECK_THROWS_AS(Dispersion::parse("harmonic:0.25"), std::invalid_argument);
    CHECK_THROWS_AS(Dispersion::parse("bogus"), std::invalid_argument);

    std::string path = "wavemera_tab_test.csv";
    {
        std::ofstream out(path);
        for (int i = 0; i <= 256; ++i) {
            double k = pi * i / 256;
            out << k << "," << std::sqrt(0.04 + std::pow(std::sin(k / 2), 2)) << "\n";
        }
    }
    Dispersion t = Dispersion::parse("tabulated:" + path);
    for (double k : {0.0, 0.5, -1.3, 2.9})
        CHECK(t(k) == doctest::Approx(harmonic(0.2)(k)).epsilon(1e-4));
    std::remove(path.c_str());
}
