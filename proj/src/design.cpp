#include "wavemera/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wavemera/error.hpp"

namespace wavemera {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_symmetric(const FirFilter& f, double tol = 1e-12)
{
    if (f.empty())
        return true;
    if (f.offset() != -f.last())
        return false;
    double s = std::max(1.0, f.max_abs());
    for (int n = 0; n <= f.last(); ++n)
        if (std::abs(f[n] - f[-n]) > tol * s)
            return false;
    return true;
}

cplx horner(const std::vector<double>& c, cplx z)
{
    cplx v = 0.0;
    for (double x : c)
        v = v * z + x;
    return v;
}

cplx horner_deriv(const std::vector<double>& c, cplx z)
{
    cplx v = 0.0;
    int D = static_cast<int>(c.size()) - 1;
    for (int i = 0; i < D; ++i)
        v = v * z + c[i] * static_cast<double>(D - i);
    return v;
}

} // namespace

double DesignReport::stability_max_abs(Channel c) const
{
    const auto& e = c == Channel::g ? stability_eigs_g : stability_eigs_h;
    double m = 0.0;
    for (const auto& z : e)
        m = std::max(m, std::abs(z));
    return m;
}

bool DesignReport::stable() const
{
    return stability_max_abs(Channel::g) < 2.0 && stability_max_abs(Channel::h) < 2.0;
}

FirFilter thiran_allpass(int L)
{
    if (L < 1)
        throw std::invalid_argument("all-pass degree must be at least 1");
    double tau = L / 2.0 - 0.25;
    // maximal flatness: sum_n d[n] (n - tau)^{2j+1} = 0 for j < L, with d[0] = 1
    Eigen::MatrixXd A(L, L);
    Eigen::VectorXd rhs(L);
    for (int j = 0; j < L; ++j) {
        for (int n = 1; n <= L; ++n)
            A(j, n - 1) = std::pow(n - tau, 2 * j + 1);
        rhs[j] = -std::pow(-tau, 2 * j + 1);
    }
    Eigen::VectorXd x = A.fullPivLu().solve(rhs);
    std::vector<double> d{1.0};
    for (int n = 0; n < L; ++n)
        d.push_back(x[n]);
    return FirFilter(0, d);
}

double allpass_phase_error(const FirFilter& d, int L, int grid)
{
    double m = 0.0;
    for (double k : k_grid(grid)) {
        if (std::abs(k) > 0.9 * kPi)
            continue;
        cplx dk = d(k);
        cplx A = std::polar(1.0, -L * k) * std::conj(dk) / dk;
        m = std::max(m, std::abs(A - std::polar(1.0, -k / 2.0)));
    }
    return m;
}

std::pair<FirFilter, FirFilter> rational_approx_massless(int L)
{
    FirFilter d = thiran_allpass(L);
    FirFilter dd = d * d;
    FirFilter a = (dd.shifted(-L) + dd.reversed().shifted(L)) * 0.5;
    FirFilter b = d * d.reversed();
    return {a, b};
}

std::pair<FirFilter, FirFilter> rational_approx_fit(const Dispersion& d, int L, int K, int grid)
{
    if (L == 0)
        return {FirFilter::delta(0), FirFilter::delta(0)};
    auto ks = k_grid(grid);
    double wp = d.at_pi();
    const double lambda = 1e-12;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(grid + 2 * L, 2 * L);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(grid + 2 * L);
    for (int i = 0; i < grid; ++i) {
        double k = ks[i];
        double t = d(k + kPi) / wp;
        double w = std::sqrt(std::pow(std::cos(k / 2.0), 2 * K));
        for (int j = 1; j <= L; ++j) {
            double cj = 2.0 * (std::cos(j * k) - 1.0);
            A(i, j - 1) = w * cj;
            A(i, L + j - 1) = -w * t * cj;
        }
        y[i] = -w * (1.0 - t);
    }
    for (int j = 0; j < 2 * L; ++j)
        A(grid + j, j) = std::sqrt(lambda);
    Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(y);
    auto build = [&](int base) {
        std::vector<double> c(2 * L + 1);
        double s = 0.0;
        for (int j = 1; j <= L; ++j) {
            c[L + j] = c[L - j] = x[base + j - 1];
            s += x[base + j - 1];
        }
        c[L] = 1.0 - 2.0 * s;
        return FirFilter(-L, c);
    };
    return {build(0), build(L)};
}

double halfband_residual(const FirFilter& s, const FirFilter& r)
{
    FirFilter t = s * r;
    double m = std::abs(t[0] - 1.0);
    for (int n = t.offset(); n <= t.last(); ++n)
        if (n != 0 && n % 2 == 0)
            m = std::max(m, std::abs(t[n]));
    return m;
}

HalfbandResult halfband_solve(const FirFilter& s, double tol, int max_growth)
{
    if (!is_symmetric(s))
        throw std::invalid_argument("halfband_solve needs a symmetric filter");
    int S = s.last();
    double best = std::numeric_limits<double>::infinity();
    for (int R = 0; R <= std::max(0, S - 1) + max_growth; ++R) {
        int rows = (S + R) / 2 + 1;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, R + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
        rhs[0] = 1.0;
        for (int n = 0; n < rows; ++n)
            for (int l = -R; l <= R; ++l)
                A(n, std::abs(l)) += s[2 * n - l];
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
        Eigen::VectorXd x = cod.solve(rhs);
        for (int it = 0; it < 2; ++it)
            x += cod.solve(rhs - A * x);
        std::vector<double> c(2 * R + 1);
        for (int l = -R; l <= R; ++l)
            c[l + R] = x[std::abs(l)];
        FirFilter r(-R, c);
        double res = halfband_residual(s, r);
        best = std::min(best, res);
        if (res < tol)
            return {r, res};
    }
    throw Error(ErrorKind::NoSolution, "half-band system has no solution within the support limit",
                {{"best_residual", best}, {"max_halfwidth", std::max(0, S - 1) + max_growth}});
}

std::vector<cplx> laurent_roots(const FirFilter& p)
{
    const auto& c = p.coeffs();
    int D = p.size() - 1;
    if (D <= 0)
        return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(D, D);
    for (int i = 0; i < D; ++i)
        C(0, i) = -c[i + 1] / c[0];
    for (int i = 1; i < D; ++i)
        C(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    std::vector<cplx> roots;
    for (int i = 0; i < D; ++i) {
        cplx z = es.eigenvalues()[i];
        // Newton polish against the original coefficients
        for (int it = 0; it < 3; ++it) {
            cplx dv = horner_deriv(c, z);
            if (std::abs(dv) == 0.0)
                break;
            cplx step = horner(c, z) / dv;
            cplx zn = z - step;
            if (std::abs(horner(c, zn)) < std::abs(horner(c, z)))
                z = zn;
            else
                break;
        }
        roots.push_back(z);
    }
    return roots;
}

FirFilter spectral_factorize(const FirFilter& r, double tol_positivity, int grid)
{
    if (!is_symmetric(r, 1e-10))
        throw std::invalid_argument("spectral_factorize needs a symmetric filter");
    double rmin = std::numeric_limits<double>::infinity(), kmin = 0.0;
    for (double k : k_grid(grid)) {
        double v = r(k).real();
        if (v < rmin) {
            rmin = v;
            kmin = k;
        }
    }
    if (r.empty() || rmin < -tol_positivity)
        throw Error(ErrorKind::NotNonnegative, "r(k) takes negative values", {{"min_r", rmin}, {"k", kmin}});
    int R = r.last();
    if (R == 0)
        return FirFilter::delta(0, std::sqrt(r[0]));

    auto roots = laurent_roots(r);
    std::vector<cplx> pick, circle;
    const double ptol = 1e-7;
    for (const auto& z : roots) {
        double a = std::abs(z);
        if (std::abs(a - 1.0) <= ptol)
            circle.push_back(z);
        else if (a < 1.0)
            pick.push_back(z);
    }
    std::sort(circle.begin(), circle.end(), [](cplx x, cplx y) { return std::arg(x) < std::arg(y); });
    for (std::size_t i = 0; i < circle.size(); i += 2)
        pick.push_back(circle[i]);
    if (static_cast<int>(pick.size()) != R || circle.size() % 2 != 0)
        throw Error(ErrorKind::NotNonnegative, "roots do not split into reciprocal pairs",
                    {{"inside", pick.size()}, {"on_circle", circle.size()}, {"expected", R}, {"min_r", rmin}, {"k", kmin}});

    std::vector<cplx> c{1.0};
    for (const auto& z : pick) {
        std::vector<cplx> nc(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            nc[j] += c[j];
            nc[j + 1] -= z * c[j];
        }
        c = std::move(nc);
    }
    std::vector<double> fc;
    for (const auto& v : c)
        fc.push_back(v.real());
    FirFilter f(0, fc);
    f = f * std::sqrt(r[0] / f.norm2());
    if (f.sum() < 0.0)
        f = f * -1.0;

    // Newton steps on f * f(-.) = r; the roots above lose accuracy when they crowd the unit circle
    auto lag_residual = [&](const FirFilter& g) {
        FirFilter e = r - g * g.reversed();
        double m = 0.0;
        for (int n = 0; n <= R; ++n)
            m = std::max(m, std::abs(e[n]));
        return std::make_pair(e, m);
    };
    auto [err, res] = lag_residual(f);
    for (int it = 0; it < 3 && res > 0.0; ++it) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(R + 1, R + 1);
        Eigen::VectorXd rhs(R + 1);
        for (int n = 0; n <= R; ++n) {
            for (int i = 0; i + n <= R; ++i) {
                J(n, i + n) += f[i];
                J(n, i) += f[i + n];
            }
            rhs[n] = err[n];
        }
        Eigen::VectorXd dx = J.partialPivLu().solve(rhs);
        std::vector<double> nc(R + 1);
        for (int i = 0; i <= R; ++i)
            nc[i] = f[i] + dx[i];
        FirFilter g(0, nc);
        auto [e2, r2] = lag_residual(g);
        if (!(r2 < res))
            break;
        f = g;
        err = e2;
        res = r2;
    }
    return f;
}

double epsilon_of(const FilterPair& pair, const Dispersion& d, int grid)
{
    double wp = d.at_pi();
    double m = 0.0;
    for (double k : k_grid(grid))
        m = std::max(m, std::abs(pair.g_w(k) - (d(k) / wp) * pair.h_w(k)));
    return m;
}

std::vector<cplx> stability_spectrum(const FirFilter& a_s, int M, double tol)
{
    double api = std::abs(a_s(kPi));
    if (api > tol * std::max(1.0, a_s.max_abs()))
        throw Error(ErrorKind::NotAdmissible, "filter does not vanish at k = π", {{"a_pi", api}});
    FirFilter c = a_s * a_s.reversed();
    int D = 4 * M + 1;
    Eigen::MatrixXd T(D, D);
    for (int n = -2 * M; n <= 2 * M; ++n)
        for (int m = -2 * M; m <= 2 * M; ++m)
            T(n + 2 * M, m + 2 * M) = 2.0 * c[2 * n - m];
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(D, D - 1);
    for (int i = 0; i < D - 1; ++i) {
        B(i, i) = 1.0;
        B(i + 1, i) = -1.0;
    }
    Eigen::MatrixXd X = B.colPivHouseholderQr().solve(T * B);
    Eigen::EigenSolver<Eigen::MatrixXd> es(X, false);
    std::vector<cplx> ev;
    for (int i = 0; i < X.rows(); ++i)
        ev.push_back(es.eigenvalues()[i]);
    std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    return ev;
}

DesignResult design_from_rational(const FirFilter& a, const FirFilter& b, const Dispersion& d, const DesignParams& p)
{
    DesignResult out;
    DesignReport& rep = out.report;
    rep.K = p.K;
    rep.L = p.L;
    rep.L_eff = a.last();
    double a0 = a(0.0).real(), b0 = b(0.0).real();
    if (!(a0 > 0.0) || !(b0 > 0.0))
        throw Error(ErrorKind::NormalizationFailure, "rational approximation must be positive at k = 0",
                    {{"a0", a0}, {"b0", b0}});
    FirFilter q = FirFilter::binomial(p.K);
    FirFilter s = a * b * q * q.reversed();
    auto hb = halfband_solve(s, p.tol_linear_system, p.max_halfband_growth);
    rep.halfband_residual = hb.residual;

    rep.positivity_min = std::numeric_limits<double>::infinity();
    for (double k : k_grid(p.grid_size)) {
        double v = hb.r(k).real();
        if (v < rep.positivity_min) {
            rep.positivity_min = v;
            rep.positivity_argmin = k;
        }
    }
    FirFilter f = spectral_factorize(hb.r, p.tol_positivity, p.grid_size);
    for (double k : k_grid(p.grid_size))
        rep.factor_residual = std::max(rep.factor_residual, std::abs(f(k) * std::conj(f(k)) - hb.r(k)));

    FirFilter g = b * q * f;
    FirFilter h = a * q * f;
    rep.alpha = std::sqrt(2.0) / g.sum();
    g = g * rep.alpha;
    h = h * (1.0 / rep.alpha);
    out.pair = derive_wavelet(g, h);
    rep.g0 = g.sum();
    rep.h0 = h.sum();
    rep.M = out.pair.M;
    rep.pr_residual = out.pair.pr_residual;
    if (!(rep.pr_residual < p.tol_pr))
        throw Error(ErrorKind::NoSolution, "assembled pair fails perfect reconstruction",
                    {{"pr_residual", rep.pr_residual}, {"min_r", rep.positivity_min}});
    rep.epsilon = epsilon_of(out.pair, d, p.grid_size);
    rep.stability_eigs_g = stability_spectrum(out.pair.g_s, out.pair.M);
    rep.stability_eigs_h = stability_spectrum(out.pair.h_s, out.pair.M);
    return out;
}

DesignResult design_pair(const Dispersion& d, const DesignParams& p)
{
    if (p.K < 1 || p.L < 1)
        throw std::invalid_argument("design needs K >= 1 and L >= 1");
    if (is_massless_shape(d, p.grid_size)) {
        auto [a, b] = rational_approx_massless(p.L);
        DesignResult r = design_from_rational(a, b, d, p);
        r.report.method = "allpass";
        return r;
    }
    std::optional<DesignResult> best;
    std::optional<Error> last_err;
    for (int Lp = 0; Lp <= p.L; ++Lp) {
        try {
            auto [a, b] = rational_approx_fit(d, Lp, p.K, p.grid_size);
            DesignResult r = design_from_rational(a, b, d, p);
            r.report.method = "pade";
            r.report.L_eff = Lp;
            bool better = !best || (r.report.stable() && !best->report.stable()) ||
                          (r.report.stable() == best->report.stable() && r.report.epsilon < best->report.epsilon);
            if (better)
                best = std::move(r);
        } catch (const Error& e) {
            last_err = e;
        }
    }
    if (!best)
        throw *last_err;
    return *best;
}

} // namespace wavemera
