#include "wavemera/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wavemera/design.hpp"
#include "wavemera/error.hpp"

namespace wavemera {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

long floor_div(long a, long b)
{
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

std::vector<cplx> eigenvalues(const Eigen::MatrixXd& A)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    std::vector<cplx> ev;
    for (int i = 0; i < A.rows(); ++i)
        ev.push_back(es.eigenvalues()[i]);
    return ev;
}

double nearest(const std::vector<cplx>& ev, double t)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : ev)
        best = std::min(best, std::abs(z - t));
    return best;
}

// integer samples of the scaling function of a on [lo, hi]: the eigenvalue-1 vector of
// T[j, i] = √2 a[2j - i], normalized to unit sum
std::vector<double> integer_samples(const FirFilter& a, int lo, int hi)
{
    int n = hi - lo + 1;
    Eigen::MatrixXd T(n, n);
    for (int j = lo; j <= hi; ++j)
        for (int i = lo; i <= hi; ++i)
            T(j - lo, i - lo) = kSqrt2 * a[2 * j - i];
    auto ev = eigenvalues(T);
    double dist = nearest(ev, 1.0);
    if (dist > 1e-8)
        throw Error(ErrorKind::NoUnitEigenvalue, "refinement matrix lacks eigenvalue 1", {{"distance", dist}});

    Eigen::MatrixXd S = T - Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int k = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] < 1e-8 * std::max(1.0, sv[0]))
            ++k;
    k = std::max(k, 1);
    Eigen::MatrixXd Nsp = svd.matrixV().rightCols(k);

    Eigen::VectorXd v;
    if (k == 1) {
        v = Nsp.col(0);
    } else {
        // degenerate unit eigenvalue: pin the sum and the first moment Σ j φ(j) = Σ n a[n] / √2
        double mu = 0.0;
        for (int m = a.offset(); m <= a.last(); ++m)
            mu += m * a[m];
        mu /= kSqrt2;
        Eigen::MatrixXd C(2, k);
        Eigen::Vector2d rhs(1.0, mu);
        for (int c = 0; c < k; ++c) {
            double s0 = 0.0, s1 = 0.0;
            for (int j = 0; j < n; ++j) {
                s0 += Nsp(j, c);
                s1 += (lo + j) * Nsp(j, c);
            }
            C(0, c) = s0;
            C(1, c) = s1;
        }
        Eigen::VectorXd coef = C.completeOrthogonalDecomposition().solve(rhs);
        v = Nsp * coef;
    }
    double s = v.sum();
    if (std::abs(s) < 1e-14)
        throw Error(ErrorKind::NoUnitEigenvalue, "unit eigenvector has zero sum", {});
    v /= s;
    return std::vector<double>(v.data(), v.data() + n);
}

// one dyadic refinement: prev holds φ_next at level s-1 on [lo, hi], returns φ at level s
std::vector<double> refine(const std::vector<double>& prev, const FirFilter& a, int lo, int hi, int s)
{
    long half = 1L << (s - 1);
    long n_new = static_cast<long>(hi - lo) * (1L << s) + 1;
    long n_prev = static_cast<long>(prev.size());
    std::vector<double> out(n_new, 0.0);
    for (long i = 0; i < n_new; ++i) {
        double acc = 0.0;
        for (int t = a.offset(); t <= a.last(); ++t) {
            long pos = i - static_cast<long>(t - lo) * half;
            if (pos >= 0 && pos < n_prev)
                acc += a[t] * prev[pos];
        }
        out[i] = kSqrt2 * acc;
    }
    return out;
}

void check_stable(const FirFilter& a_s)
{
    double a0 = a_s.sum();
    if (std::abs(a0 - kSqrt2) > 1e-9)
        throw Error(ErrorKind::NotAdmissible, "scaling filter must sum to √2", {{"a0", a0}});
    int M = (a_s.extent() + 2) / 2;
    auto ev = stability_spectrum(a_s, M);
    double m = 0.0;
    for (const auto& z : ev)
        m = std::max(m, std::abs(z));
    if (m >= 2.0)
        throw Error(ErrorKind::UnstableFilter, "transfer operator has an eigenvalue of modulus >= 2",
                    {{"max_abs_eig", m}});
}

} // namespace

double SampledFunction::h() const { return std::ldexp(1.0, -J); }
double SampledFunction::x(std::size_t i) const { return std::ldexp(static_cast<double>(origin + static_cast<long>(i)), -J); }
double SampledFunction::lo() const { return std::ldexp(static_cast<double>(origin), -J); }
double SampledFunction::hi() const { return x(v.empty() ? 0 : v.size() - 1); }

double SampledFunction::at(long num, int lev) const
{
    if (lev > J)
        throw std::invalid_argument("sample point finer than the function grid");
    long idx = num * (1L << (J - lev)) - origin;
    if (idx < 0 || idx >= static_cast<long>(v.size()))
        return 0.0;
    return v[idx];
}

double SampledFunction::sup_norm() const
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

SampledFunction SampledFunction::coarsened(int level) const
{
    if (level >= J)
        return *this;
    long f = 1L << (J - level);
    SampledFunction out;
    out.J = level;
    out.origin = ceil_div(origin, f);
    for (long X = out.origin;; ++X) {
        long idx = X * f - origin;
        if (idx >= static_cast<long>(v.size()))
            break;
        out.v.push_back(v[idx]);
    }
    return out;
}

SampledFunction cascade(const FirFilter& a_s, int J)
{
    check_stable(a_s);
    int lo = a_s.offset(), hi = a_s.last();
    std::vector<double> vals = integer_samples(a_s, lo, hi);
    for (int s = 1; s <= J; ++s)
        vals = refine(vals, a_s, lo, hi, s);
    SampledFunction out;
    out.J = J;
    out.origin = static_cast<long>(lo) << J;
    out.v = std::move(vals);
    return out;
}

double refinement_residual(const SampledFunction& phi, const FirFilter& a_s)
{
    if (phi.J < 1)
        return 0.0;
    int lev = phi.J - 1;
    long step = 1L << (phi.J - lev);
    long first = ceil_div(phi.origin, step) - 1;
    long last = floor_div(phi.origin + static_cast<long>(phi.v.size()) - 1, step) + 1;
    double m = 0.0;
    for (long X = first; X <= last; ++X) {
        // φ(x) at x = X / 2^lev against √2 Σ a[n] φ(2x - n), 2x - n = (X - n 2^{lev-1}) / 2^{lev-1}
        double rhs = 0.0;
        for (int n = a_s.offset(); n <= a_s.last(); ++n)
            rhs += a_s[n] * phi.at(X - n * (1L << (lev - 1)), lev - 1);
        m = std::max(m, std::abs(phi.at(X, lev) - kSqrt2 * rhs));
    }
    return m;
}

SampledFunction wavelet_from(const SampledFunction& phi, const FirFilter& a_w)
{
    // ψ at level phi.J + 1
    int J = phi.J + 1;
    long half = 1L << (J - 1);
    long n_phi = static_cast<long>(phi.v.size());
    long lo = phi.origin + a_w.offset() * half;
    long hi = phi.origin + n_phi - 1 + a_w.last() * half;
    SampledFunction out;
    out.J = J;
    out.origin = lo;
    out.v.assign(hi - lo + 1, 0.0);
    for (long X = lo; X <= hi; ++X) {
        double acc = 0.0;
        for (int n = a_w.offset(); n <= a_w.last(); ++n) {
            long idx = X - n * half - phi.origin;
            if (idx >= 0 && idx < n_phi)
                acc += a_w[n] * phi.v[idx];
        }
        out.v[X - lo] = kSqrt2 * acc;
    }
    return out;
}

SampledFunction wavelet_function(const FilterPair& p, Channel c, int J)
{
    return wavelet_from(cascade(p.scaling(c), J - 1), p.wavelet(c));
}

double inner_product(const SampledFunction& f, const SampledFunction& g, int lf, long nf, int lg, long ng)
{
    if (f.v.empty() || g.v.empty())
        return 0.0;
    int Jx = std::min(f.J - lf, g.J - lg);
    double scale = std::ldexp(1.0, Jx);
    double a = std::max(std::ldexp(f.lo() + nf, lf), std::ldexp(g.lo() + ng, lg));
    double b = std::min(std::ldexp(f.hi() + nf, lf), std::ldexp(g.hi() + ng, lg));
    if (a > b)
        return 0.0;
    long X0 = static_cast<long>(std::ceil(a * scale - 1e-9));
    long X1 = static_cast<long>(std::floor(b * scale + 1e-9));
    int levf = Jx + lf, levg = Jx + lg;
    long sf = nf * (1L << levf), sg = ng * (1L << levg);
    double acc = 0.0;
    for (long X = X0; X <= X1; ++X)
        acc += f.at(X - sf, levf) * g.at(X - sg, levg);
    return acc * std::ldexp(1.0, -Jx) * std::ldexp(1.0, -(lf + lg)) * std::pow(2.0, (lf + lg) / 2.0);
}

Extrapolated inner_product_extrapolated(const SampledFunction& f, const SampledFunction& g, int lf, long nf, int lg,
                                        long ng)
{
    double s2 = inner_product(f, g, lf, nf, lg, ng);
    double s1 = inner_product(f.coarsened(f.J - 1), g.coarsened(g.J - 1), lf, nf, lg, ng);
    double s0 = inner_product(f.coarsened(f.J - 2), g.coarsened(g.J - 2), lf, nf, lg, ng);
    Extrapolated e;
    e.raw = s2;
    e.value = s2;
    double d1 = s1 - s0, d2 = s2 - s1;
    double den = d2 - d1;
    if (d1 != 0.0 && den != 0.0) {
        double rho = d2 / d1;
        if (std::abs(rho) < 0.9)
            e.value = s2 - d2 * d2 / den;
    }
    e.certificate = std::abs(e.value - e.raw);
    return e;
}

FirFilter scaling_gram(const FirFilter& a_s, const FirFilter& b_s)
{
    // Φ is the integer sampling of the autocorrelation, refinable with e[j] = c[-j] / √2,
    // c[j] = Σ_k a[k] b[k + j]
    FirFilter e = (a_s * b_s.reversed()) * (1.0 / kSqrt2);
    int lo = a_s.offset() - b_s.last(), hi = a_s.last() - b_s.offset();
    std::vector<double> v = integer_samples(e, lo, hi);
    return FirFilter(lo, v);
}

namespace {

// coefficients of Σ_m v[m] f_{j,m} over the level j-1 scaling functions
FirFilter descend(const FirFilter& v, const FirFilter& a)
{
    std::vector<double> up(2 * v.size() - 1, 0.0);
    for (int i = 0; i < v.size(); ++i)
        up[2 * i] = v.coeffs()[i];
    return FirFilter(2 * v.offset(), up) * a;
}

double gram_pair(const FirFilter& cg, const FirFilter& ch, const FirFilter& phi)
{
    double acc = 0.0;
    for (int a = cg.offset(); a <= cg.last(); ++a)
        for (int b = ch.offset(); b <= ch.last(); ++b)
            acc += cg[a] * ch[b] * phi[b - a];
    return acc;
}

} // namespace

double wavelet_inner_product_exact(const FilterPair& p, int l, long n, int lp, long np)
{
    FirFilter phi = scaling_gram(p.g_s, p.h_s);
    FirFilter cg = p.g_w.shifted(static_cast<int>(2 * n));
    FirFilter ch = p.h_w.shifted(static_cast<int>(2 * np));
    for (int j = l; j > std::min(l, lp); --j)
        cg = descend(cg, p.g_s);
    for (int j = lp; j > std::min(l, lp); --j)
        ch = descend(ch, p.h_s);
    return gram_pair(cg, ch, phi);
}

DualBasisReport dual_basis_check(const FilterPair& p, int J, int levels, int range)
{
    SampledFunction pg = wavelet_function(p, Channel::g, J);
    SampledFunction ph = wavelet_function(p, Channel::h, J);
    FirFilter phi = scaling_gram(p.g_s, p.h_s);
    // ψ_{l,n} over the level 0 scaling functions (l counted from 1 here)
    auto expand = [&](int l, long n, Channel c) {
        FirFilter v = p.wavelet(c).shifted(static_cast<int>(2 * n));
        for (int j = l; j > 0; --j)
            v = descend(v, p.scaling(c));
        return v;
    };
    DualBasisReport r;
    for (int l = 0; l < levels; ++l)
        for (int lp = 0; lp < levels; ++lp)
            for (int n = -range; n <= range; ++n)
                for (int np = -range; np <= range; ++np) {
                    auto e = inner_product_extrapolated(pg, ph, l, n, lp, np);
                    double target = (l == lp && n == np) ? 1.0 : 0.0;
                    double ex = gram_pair(expand(l, n, Channel::g), expand(lp, np, Channel::h), phi) - target;
                    r.max_exact_error = std::max(r.max_exact_error, std::abs(ex));
                    r.max_error = std::max(r.max_error, std::abs(e.value - target));
                    r.max_raw_error = std::max(r.max_raw_error, std::abs(e.raw - target));
                    r.max_certificate = std::max(r.max_certificate, e.certificate);
                }
    return r;
}

DualBasisReport scaling_biorthogonality(const FilterPair& p, int J, int range)
{
    SampledFunction fg = cascade(p.g_s, J);
    SampledFunction fh = cascade(p.h_s, J);
    FirFilter phi = scaling_gram(p.g_s, p.h_s);
    DualBasisReport r;
    for (int n = -range; n <= range; ++n) {
        r.max_exact_error = std::max(r.max_exact_error, std::abs(phi[n] - (n == 0 ? 1.0 : 0.0)));
        auto e = inner_product_extrapolated(fg, fh, 0, 0, 0, n);
        double target = n == 0 ? 1.0 : 0.0;
        r.max_error = std::max(r.max_error, std::abs(e.value - target));
        r.max_raw_error = std::max(r.max_raw_error, std::abs(e.raw - target));
        r.max_certificate = std::max(r.max_certificate, e.certificate);
    }
    return r;
}

cplx sampled_fourier(const SampledFunction& f, double k)
{
    cplx acc = 0.0;
    cplx rot = std::polar(1.0, -k * f.h());
    cplx z = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        if (i % 128 == 0)
            z = std::polar(1.0, -k * f.x(i));
        acc += f.v[i] * z;
        z *= rot;
    }
    return acc * f.h();
}

double massless_relation_error(const FilterPair& p, int J, double k_max, int nk)
{
    SampledFunction pg = wavelet_function(p, Channel::g, J);
    SampledFunction ph = wavelet_function(p, Channel::h, J);
    double m = 0.0;
    for (int j = 0; j < nk; ++j) {
        double k = nk > 1 ? k_max * j / (nk - 1) : 0.0;
        m = std::max(m, std::abs(sampled_fourier(pg, k) - (std::abs(k) / 4.0) * sampled_fourier(ph, k)));
    }
    return m;
}

std::vector<cplx> ascending_spectrum(const FirFilter& a, double c, int pad)
{
    int lo = -a.last() - pad, hi = -a.offset() + pad;
    int n = hi - lo + 1;
    Eigen::MatrixXd Q(n, n);
    for (int i = lo; i <= hi; ++i)
        for (int m = lo; m <= hi; ++m)
            Q(i - lo, m - lo) = c * a[m - 2 * i];
    auto ev = eigenvalues(Q);
    std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    return ev;
}

SuperoperatorResult superoperator_check(const FilterPair& p, const std::vector<std::pair<long, int>>& xs, int N, int J)
{
    SampledFunction fh = cascade(p.h_s, J);
    SampledFunction fg = cascade(p.g_s, J);
    SuperoperatorResult r;
    for (auto [num, lev] : xs) {
        if (lev > J - 1)
            throw std::invalid_argument("sample point too fine for the cascade level");
        long unit = 1L << lev;
        for (int n = -N / 2; n < N / 2; ++n) {
            double lhs_h = 0.0, lhs_g = 0.0;
            for (int l = p.h_s.offset(); l <= p.h_s.last(); ++l)
                lhs_h += p.h_s[l] * fh.at(num - (2L * n + l) * unit, lev);
            for (int l = p.g_s.offset(); l <= p.g_s.last(); ++l)
                lhs_g += p.g_s[l] * fg.at(num - (2L * n + l) * unit, lev);
            double rh = fh.at(num - n * 2 * unit, lev + 1);
            double rg = fg.at(num - n * 2 * unit, lev + 1);
            r.res_phi = std::max(r.res_phi, std::abs(kSqrt2 * lhs_h - rh));
            r.res_pi = std::max(r.res_pi, std::abs(lhs_g / kSqrt2 - 0.5 * rg));
        }
    }
    r.eigs_phi = ascending_spectrum(p.h_s, kSqrt2);
    r.eigs_pi = ascending_spectrum(p.g_s, 1.0 / kSqrt2);
    r.unit_eig_error = nearest(r.eigs_phi, 1.0);
    r.half_eig_error = nearest(r.eigs_pi, 0.5);
    return r;
}

FirFilter divide_by_moment_factor(const FirFilter& f, int l, double* residual)
{
    // (1 + e^{ik}) is the filter δ_{-1} + δ_0; (p q)[n] = q[n + 1] + q[n]
    FirFilter cur = f;
    double worst = 0.0;
    double scale = std::max(1.0, f.max_abs());
    for (int step = 0; step < l; ++step) {
        if (cur.size() < 2) {
            worst = std::max(worst, cur.max_abs());
            cur = FirFilter();
            break;
        }
        int o = cur.offset();
        int n = cur.size();
        std::vector<double> q(n - 1);
        // q lives on [o + 1, o + n - 1]
        q[0] = cur[o];
        for (int i = 1; i < n - 1; ++i)
            q[i] = cur[o + i] - q[i - 1];
        worst = std::max(worst, std::abs(cur[o + n - 1] - q[n - 2]) / scale);
        cur = FirFilter(o + 1, q);
    }
    if (residual)
        *residual = worst;
    return cur;
}

double DescendantSpectrum::max_error() const
{
    double m = 0.0;
    for (const auto& l : lines)
        m = std::max(m, l.error);
    return m;
}

double DescendantSpectrum::distance_to(double target) const
{
    double best = std::numeric_limits<double>::infinity();
    for (double v : values)
        best = std::min(best, std::abs(v - target));
    return best;
}

DescendantSpectrum descendant_spectrum(const FilterPair& p, int K, int block_size)
{
    for (Channel c : {Channel::h, Channel::g}) {
        double res = 0.0;
        divide_by_moment_factor(p.scaling(c), K, &res);
        if (K < 1 || res > 1e-9)
            throw Error(ErrorKind::NotDivisible, "scaling filter is not divisible by the moment factor",
                        {{"K", K}, {"residual", res}, {"channel", c == Channel::g ? "g" : "h"}});
    }
    DescendantSpectrum out;
    for (int l = 0; l < K; ++l) {
        FirFilter hl = divide_by_moment_factor(p.h_s, l);
        FirFilter gl = divide_by_moment_factor(p.g_s, l);
        auto eh = ascending_spectrum(hl, kSqrt2, block_size);
        auto eg = ascending_spectrum(gl, 1.0 / kSqrt2, block_size);
        auto match = [&](const std::vector<cplx>& ev, double t, const char* sector) {
            cplx best = ev.front();
            for (const auto& z : ev)
                if (std::abs(z - t) < std::abs(best - t))
                    best = z;
            out.lines.push_back({l, sector, t, best.real(), std::abs(best - t)});
            out.values.push_back(best.real());
        };
        match(eh, std::ldexp(1.0, -l), "phi");
        match(eg, std::ldexp(1.0, -l - 1), "pi");
    }
    return out;
}

AdaptiveFamily adaptive_family(const std::vector<FilterPair>& stack, int J_prod, int J)
{
    if (stack.empty())
        throw std::invalid_argument("adaptive family needs at least one layer");
    int L = static_cast<int>(stack.size());
    int lo = 0, hi = 0;
    for (const auto& p : stack) {
        lo = std::min({lo, p.g_s.offset(), p.h_s.offset()});
        hi = std::max({hi, p.g_s.last(), p.h_s.last()});
    }
    AdaptiveFamily fam;
    fam.J_prod = J_prod;
    int P = std::max(J_prod, J);
    auto filter_at = [&](int l, int j, Channel c) -> const FirFilter& {
        int idx = std::min(l + std::min(j, J_prod) - 1, L - 1);
        return stack[std::max(idx, 0)].scaling(c);
    };
    SampledFunction tail_g = cascade(stack.back().g_s, J);
    SampledFunction tail_h = cascade(stack.back().h_s, J);

    for (int l = 0; l < L; ++l) {
        AdaptiveLevel lev;
        lev.l = l;
        for (Channel c : {Channel::g, Channel::h}) {
            check_stable(filter_at(l, P, c));
            std::vector<double> v = integer_samples(filter_at(l, P, c), lo, hi);
            // integer samples only down to level l + J
            for (int j = P - 1; j >= J; --j) {
                const FirFilter& f = filter_at(l, j + 1, c);
                std::vector<double> nv(v.size(), 0.0);
                for (int a = lo; a <= hi; ++a) {
                    double acc = 0.0;
                    for (int b = lo; b <= hi; ++b)
                        acc += f[2 * a - b] * v[b - lo];
                    nv[a - lo] = kSqrt2 * acc;
                }
                v = std::move(nv);
            }
            std::vector<double> next_level;
            for (int j = J - 1; j >= 0; --j) {
                if (j == 0)
                    next_level = v;
                v = refine(v, filter_at(l, j + 1, c), lo, hi, J - j);
            }
            SampledFunction phi{J, static_cast<long>(lo) << J, v};
            SampledFunction phi_next{J - 1, static_cast<long>(lo) << (J - 1), next_level};
            SampledFunction psi = wavelet_from(phi_next, stack[l].wavelet(c));
            const SampledFunction& tail = c == Channel::g ? tail_g : tail_h;
            double dev = 0.0;
            long X0 = std::min(phi.origin, tail.origin);
            long X1 = std::max(phi.origin + static_cast<long>(phi.v.size()), tail.origin + static_cast<long>(tail.v.size()));
            for (long X = X0; X < X1; ++X)
                dev = std::max(dev, std::abs(phi.at(X, J) - tail.at(X, J)));
            lev.tail_deviation = std::max(lev.tail_deviation, dev);
            if (c == Channel::g) {
                lev.phi_g = std::move(phi);
                lev.psi_g = std::move(psi);
            } else {
                lev.phi_h = std::move(phi);
                lev.psi_h = std::move(psi);
            }
        }
        for (int n = -3; n <= 3; ++n) {
            double t = n == 0 ? 1.0 : 0.0;
            auto e1 = inner_product_extrapolated(lev.phi_g, lev.phi_h, 0, 0, 0, n);
            auto e2 = inner_product_extrapolated(lev.psi_g, lev.psi_h, 0, 0, 0, n);
            lev.dual_residual = std::max({lev.dual_residual, std::abs(e1.value - t), std::abs(e2.value - t)});
        }
        fam.levels.push_back(std::move(lev));
    }
    return fam;
}

double LatticeVector::operator[](int n) const
{
    int i = n - first;
    return (i < 0 || i >= static_cast<int>(c.size())) ? 0.0 : c[i];
}

LatticeVector discretize_smeared(const SampledFunction& f, const SampledFunction& phi, int l, int N)
{
    LatticeVector out;
    out.first = -N / 2;
    out.c.assign(N, 0.0);
    if (f.v.empty() || phi.v.empty())
        return out;
    // φ_{l,n} is supported on 2^l ([phi.lo, phi.hi] + n)
    double a = std::ldexp(f.lo(), -l) - phi.hi();
    double b = std::ldexp(f.hi(), -l) - phi.lo();
    long n0 = std::max<long>(static_cast<long>(std::floor(a)), -N / 2);
    long n1 = std::min<long>(static_cast<long>(std::ceil(b)), N / 2 - 1);
    for (long n = n0; n <= n1; ++n)
        out.c[n + N / 2] = inner_product(phi, f, l, n, 0, 0);
    return out;
}

SampledFunction gaussian_bump(double sigma, int J, double cut)
{
    SampledFunction f;
    f.J = J;
    long half = static_cast<long>(std::ceil(cut * sigma * std::ldexp(1.0, J)));
    f.origin = -half;
    f.v.resize(2 * half + 1);
    for (long i = 0; i <= 2 * half; ++i) {
        double x = f.x(i);
        f.v[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    }
    return f;
}

double continuum_pi_correlator(const SampledFunction& f, double k_max, int nk)
{
    // even integrand: (1/π) ∫_0^{k_max} |f̂|^2 k/4 dk, trapezoid
    double h = k_max / (nk - 1);
    double acc = 0.0;
    for (int j = 0; j < nk; ++j) {
        double k = j * h;
        double w = (j == 0 || j == nk - 1) ? 0.5 : 1.0;
        acc += w * std::norm(sampled_fourier(f, k)) * k / 4.0;
    }
    return acc * h / std::numbers::pi;
}

} // namespace wavemera
