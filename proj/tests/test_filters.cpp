#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wavemera/error.hpp"
#include "wavemera/filters.hpp"

using namespace wavemera;
using oracle::pi;

namespace {

FilterPair random_pr_free_pair(std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> g(5), h(3);
    for (auto& x : g)
        x = u(rng);
    for (auto& x : h)
        x = u(rng);
    return derive_wavelet(FirFilter(-2, g), FirFilter(0, h));
}

} // namespace

TEST_CASE("fourier_eval conventions")
{
    const double s = 1 / std::sqrt(2.0);
    FirFilter haar(0, {s, s});
    CHECK(std::abs(fourier_eval(haar, 0.0) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(fourier_eval(haar, pi)) < 1e-15);
    auto d3 = FirFilter::delta(3);
    CHECK(std::abs(fourier_eval(d3, pi / 2) - std::exp(cplx(0, -3 * pi / 2))) < 1e-15);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> c(9);
    for (auto& x : c)
        x = u(rng);
    FirFilter f(-4, c);
    for (double k : {-2.9, -0.3, 0.0, 1.1, 3.0}) {
        CHECK(std::abs(fourier_eval(f, k) - oracle::fourier(f, k)) < 1e-13);
        CHECK(std::abs(fourier_eval(f, -k) - std::conj(fourier_eval(f, k))) < 1e-13);
    }
}

TEST_CASE("FirFilter trimming and algebra")
{
    FirFilter f(-2, {0.0, 0.0, 1.0, 2.0, 0.0});
    CHECK(f.offset() == 0);
    CHECK(f.size() == 2);
    FirFilter g(1, {1.0, -1.0});
    FirFilter p = f * g;
    CHECK(p.offset() == 1);
    CHECK(p[1] == 1.0);
    CHECK(p[2] == 1.0);
    CHECK(p[3] == -2.0);
    for (double k : {0.3, 1.7})
        CHECK(std::abs(fourier_eval(p, k) - fourier_eval(f, k) * fourier_eval(g, k)) < 1e-14);
    CHECK(FirFilter::max_diff(f.shifted(3).shifted(-3), f) == 0.0);
    auto b = FirFilter::binomial(3);
    CHECK(b.offset() == -3);
    CHECK(std::abs(fourier_eval(b, 0.4) - std::pow(1.0 + std::exp(cplx(0, 0.4)), 3)) < 1e-13);
}

TEST_CASE("derive_wavelet")
{
    const double s = 1 / std::sqrt(2.0);
    FilterPair h = haar_pair();
    CHECK(h.g_w.offset() == 0);
    CHECK(h.g_w[0] == doctest::Approx(-s).epsilon(1e-15));
    CHECK(h.g_w[1] == doctest::Approx(s).epsilon(1e-15));
    CHECK(FirFilter::max_diff(h.g_w, h.h_w) == 0.0);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        FilterPair p = random_pr_free_pair(rng);
        for (int n = -8; n <= 8; ++n) {
            double sign = ((1 - n) % 2 == 0) ? 1.0 : -1.0;
            CHECK(p.g_w[n] == doctest::Approx(sign * p.h_s[1 - n]));
            CHECK(p.h_w[n] == doctest::Approx(sign * p.g_s[1 - n]));
        }
        for (int i = 0; i < 64; ++i) {
            double k = -pi + 2 * pi * i / 64;
            cplx want = std::exp(cplx(0, -k)) * std::conj(oracle::fourier(p.h_s, k + pi));
            CHECK(std::abs(oracle::fourier(p.g_w, k) - want) < 1e-12);
        }
    }
}

TEST_CASE("pr_residual")
{
    CHECK(pr_residual(haar_pair()) < 1e-15);
    FilterPair bad = derive_wavelet(FirFilter(0, {1.0, 1.0}), FirFilter(0, {1.0, 1.0}));
    CHECK(pr_residual(bad) == doctest::Approx(2.0).epsilon(1e-12));
    std::mt19937 rng(3);
    FilterPair r = random_pr_free_pair(rng);
    CHECK(pr_residual(r) >= oracle::pr_fourier(r.g_s, r.h_s) - 1e-12);
    CHECK(pr_residual_time(r.g_s, r.h_s) == doctest::Approx(oracle::pr_time(r.g_s, r.h_s)).epsilon(1e-12));
    CHECK(pr_residual(swap_channels(haar_pair())) < 1e-15);
}

TEST_CASE("decomposition_map: Haar N=4 by hand")
{
    const double s = 1 / std::sqrt(2.0);
    RowMatrix want(4, 4);
    want << s, s, 0, 0, 0, 0, s, s, -s, s, 0, 0, 0, 0, -s, s;
    auto W = decomposition_map(haar_pair(), Channel::g, 4);
    CHECK((W.m - want).cwiseAbs().maxCoeff() < 1e-15);

    // δ_0 at N=8, brute force over l
    auto W8 = decomposition_map(haar_pair(), Channel::g, 8);
    Eigen::VectorXd d0 = Eigen::VectorXd::Zero(8);
    d0[0] = 1.0;
    Eigen::VectorXd out = W8.m * d0;
    CHECK(out[0] == doctest::Approx(s));
    CHECK(out[4] == doctest::Approx(-s));
    CHECK(out.cwiseAbs().sum() == doctest::Approx(2 * s));
}

TEST_CASE("decomposition_map rejects small lattices")
{
    CHECK_THROWS_AS(decomposition_map(haar_pair(), Channel::g, 7), Error);
    FilterPair p = oracle::massless(2, 2).pair;
    try {
        decomposition_map(p, Channel::g, 2 * p.extent());
        FAIL("expected LatticeTooSmall");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LatticeTooSmall);
    }
}

TEST_CASE("inverse identity for designed pairs")
{
    for (auto [K, L] : {std::pair{1, 1}, {2, 2}, {3, 1}}) {
        const FilterPair& p = oracle::massless(K, L).pair;
        auto Wg = decomposition_map(p, Channel::g, 64).m;
        auto Wh = decomposition_map(p, Channel::h, 64).m;
        RowMatrix I = RowMatrix::Identity(64, 64);
        CHECK((Wh.transpose() * Wg - I).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((Wg.transpose() * Wh - I).cwiseAbs().maxCoeff() < 1e-10);
        FilterPair sw = swap_channels(p);
        CHECK(pr_residual(sw) < 1e-10);
    }
}

TEST_CASE("multi_layer_map")
{
    FilterPair h = haar_pair();
    auto one = multi_layer_map({h}, Channel::g, 16);
    CHECK((one.map.m - decomposition_map(h, Channel::g, 16).m).cwiseAbs().maxCoeff() < 1e-15);

    auto three = multi_layer_map({h, h, h}, Channel::g, 8);
    Eigen::VectorXd d0 = Eigen::VectorXd::Zero(8);
    d0[0] = 1.0;
    Eigen::VectorXd out = three.map.m * d0;
    CHECK(out[0] == doctest::Approx(std::pow(2.0, -1.5)));
    // explicit three-fold product; the last layer is the 2-site Haar butterfly
    RowMatrix W1 = decomposition_map(h, Channel::g, 8).m;
    RowMatrix W2 = RowMatrix::Identity(8, 8), W3 = RowMatrix::Identity(8, 8);
    W2.topLeftCorner(4, 4) = decomposition_map(h, Channel::g, 4).m;
    W3.topLeftCorner(2, 2) << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    CHECK((three.map.m - W3 * W2 * W1).cwiseAbs().maxCoeff() < 1e-14);
    for (int L = 1; L <= 4; ++L) {
        std::vector<FilterPair> st(L, h);
        CHECK(multi_layer_map(st, Channel::g, 32).op_norm == doctest::Approx(1.0).epsilon(1e-9));
    }
}
