#include "wavemera/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavemera/error.hpp"

namespace wavemera {

FirFilter::FirFilter(int offset, std::vector<double> coeffs) : offset_(offset), c_(std::move(coeffs))
{
    trim();
}

void FirFilter::trim()
{
    std::size_t lo = 0;
    while (lo < c_.size() && c_[lo] == 0.0)
        ++lo;
    std::size_t hi = c_.size();
    while (hi > lo && c_[hi - 1] == 0.0)
        --hi;
    if (lo == hi) {
        c_.clear();
        offset_ = 0;
        return;
    }
    c_ = std::vector<double>(c_.begin() + lo, c_.begin() + hi);
    offset_ += static_cast<int>(lo);
}

FirFilter FirFilter::delta(int n, double v) { return FirFilter(n, {v}); }

FirFilter FirFilter::binomial(int K)
{
    std::vector<double> c{1.0};
    for (int i = 0; i < K; ++i) {
        std::vector<double> d(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            d[j] += c[j];
            d[j + 1] += c[j];
        }
        c = std::move(d);
    }
    return FirFilter(-K, c);
}

cplx FirFilter::operator()(double k) const
{
    cplx s = 0.0;
    for (int i = 0; i < size(); ++i)
        s += c_[i] * std::polar(1.0, -k * (offset_ + i));
    return s;
}

double FirFilter::sum() const
{
    double s = 0.0;
    for (double v : c_)
        s += v;
    return s;
}

double FirFilter::norm2() const
{
    double s = 0.0;
    for (double v : c_)
        s += v * v;
    return s;
}

double FirFilter::max_abs() const
{
    double m = 0.0;
    for (double v : c_)
        m = std::max(m, std::abs(v));
    return m;
}

FirFilter FirFilter::reversed() const
{
    std::vector<double> c(c_.rbegin(), c_.rend());
    return FirFilter(-last(), c);
}

FirFilter FirFilter::shifted(int s) const
{
    FirFilter f = *this;
    if (!f.empty())
        f.offset_ += s;
    return f;
}

FirFilter FirFilter::trimmed(double tol) const
{
    double cut = tol * max_abs();
    const std::vector<double>& c = c_;
    std::size_t lo = 0, hi = c.size();
    while (lo < hi && std::abs(c[lo]) <= cut)
        ++lo;
    while (hi > lo && std::abs(c[hi - 1]) <= cut)
        --hi;
    return FirFilter(offset_ + static_cast<int>(lo), std::vector<double>(c.begin() + lo, c.begin() + hi));
}

FirFilter FirFilter::operator*(const FirFilter& o) const
{
    if (empty() || o.empty())
        return {};
    std::vector<double> c(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            c[i + j] += c_[i] * o.c_[j];
    return FirFilter(offset_ + o.offset_, c);
}

FirFilter FirFilter::operator+(const FirFilter& o) const
{
    if (empty())
        return o;
    if (o.empty())
        return *this;
    int lo = std::min(offset_, o.offset_);
    int hi = std::max(last(), o.last());
    std::vector<double> c(hi - lo + 1);
    for (int n = lo; n <= hi; ++n)
        c[n - lo] = (*this)[n] + o[n];
    return FirFilter(lo, c);
}

FirFilter FirFilter::operator-(const FirFilter& o) const { return *this + o * -1.0; }

FirFilter FirFilter::operator*(double s) const
{
    std::vector<double> c = c_;
    for (double& v : c)
        v *= s;
    return FirFilter(offset_, c);
}

double FirFilter::max_diff(const FirFilter& a, const FirFilter& b)
{
    if (a.empty() && b.empty())
        return 0.0;
    int lo = a.empty() ? b.offset() : (b.empty() ? a.offset() : std::min(a.offset(), b.offset()));
    int hi = a.empty() ? b.last() : (b.empty() ? a.last() : std::max(a.last(), b.last()));
    double m = 0.0;
    for (int n = lo; n <= hi; ++n)
        m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

cplx fourier_eval(const FirFilter& a, double k) { return a(k); }

std::vector<double> k_grid(int n)
{
    std::vector<double> k(n);
    for (int j = 0; j < n; ++j)
        k[j] = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
    return k;
}

FirFilter wavelet_from_scaling(const FirFilter& s)
{
    if (s.empty())
        return {};
    // support of w is [1 - last, 1 - offset]
    int lo = 1 - s.last(), hi = 1 - s.offset();
    std::vector<double> c(hi - lo + 1);
    for (int n = lo; n <= hi; ++n)
        c[n - lo] = ((1 - n) % 2 == 0 ? 1.0 : -1.0) * s[1 - n];
    return FirFilter(lo, c);
}

int FilterPair::first() const
{
    return std::min({g_s.offset(), h_s.offset(), g_w.offset(), h_w.offset()});
}

int FilterPair::last() const { return std::max({g_s.last(), h_s.last(), g_w.last(), h_w.last()}); }

FilterPair derive_wavelet(const FirFilter& g_s, const FirFilter& h_s)
{
    FilterPair p;
    p.g_s = g_s;
    p.h_s = h_s;
    p.g_w = wavelet_from_scaling(h_s);
    p.h_w = wavelet_from_scaling(g_s);
    int lo = std::min(g_s.offset(), h_s.offset());
    int hi = std::max(g_s.last(), h_s.last());
    p.M = (hi - lo + 2) / 2;
    p.pr_residual = pr_residual(p);
    return p;
}

FilterPair swap_channels(const FilterPair& p) { return derive_wavelet(p.h_s, p.g_s); }

FilterPair haar_pair()
{
    double r = std::sqrt(0.5);
    return derive_wavelet(FirFilter(0, {r, r}), FirFilter(0, {r, r}));
}

double pr_residual_time(const FirFilter& g_s, const FirFilter& h_s)
{
    if (g_s.empty() || h_s.empty())
        return 1.0;
    // sum_l g[2n + l] h[l] is nonzero only for 2n in [g.off - h.last, g.last - h.off]
    int lo = g_s.offset() - h_s.last(), hi = g_s.last() - h_s.offset();
    int nlo = static_cast<int>(std::floor(lo / 2.0)) - 1, nhi = static_cast<int>(std::ceil(hi / 2.0)) + 1;
    double m = 0.0;
    for (int n = std::min(nlo, 0); n <= std::max(nhi, 0); ++n) {
        double s = 0.0;
        for (int l = h_s.offset(); l <= h_s.last(); ++l)
            s += g_s[2 * n + l] * h_s[l];
        m = std::max(m, std::abs(s - (n == 0 ? 1.0 : 0.0)));
    }
    return m;
}

double pr_residual(const FilterPair& p, int grid_size)
{
    double m = 0.0;
    for (double k : k_grid(grid_size)) {
        cplx v = p.g_s(k) * std::conj(p.h_s(k)) + p.g_s(k + std::numbers::pi) * std::conj(p.h_s(k + std::numbers::pi));
        m = std::max(m, std::abs(v - 2.0));
    }
    return std::max(m, pr_residual_time(p.g_s, p.h_s));
}

namespace {

inline int wrap(long v, int n)
{
    long r = v % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

void check_size(const FilterPair& p, int N)
{
    if (N % 2 != 0 || N <= 2 * p.extent())
        throw Error(ErrorKind::LatticeTooSmall, "lattice size must be even and exceed twice the filter extent",
                    {{"N", N}, {"extent", p.extent()}});
}

} // namespace

LatticeMap decomposition_map(const FilterPair& p, Channel c, int N)
{
    check_size(p, N);
    const FirFilter& s = p.scaling(c);
    const FirFilter& w = p.wavelet(c);
    LatticeMap out{N, RowMatrix::Zero(N, N)};
    int h = N / 2;
    for (int n = 0; n < h; ++n) {
        for (int l = s.offset(); l <= s.last(); ++l)
            out.m(n, wrap(2L * n + l, N)) += s[l];
        for (int l = w.offset(); l <= w.last(); ++l)
            out.m(h + n, wrap(2L * n + l, N)) += w[l];
    }
    return out;
}

void apply_layer_rows(const FilterPair& p, Channel c, RowMatrix& X, int n, double mult)
{
    const FirFilter& s = p.scaling(c);
    const FirFilter& w = p.wavelet(c);
    RowMatrix src = X.topRows(n);
    int h = n / 2;
    X.topRows(n).setZero();
    for (int i = 0; i < h; ++i) {
        for (int l = s.offset(); l <= s.last(); ++l)
            X.row(i) += (mult * s[l]) * src.row(wrap(2L * i + l, n));
        for (int l = w.offset(); l <= w.last(); ++l)
            X.row(h + i) += (mult * w[l]) * src.row(wrap(2L * i + l, n));
    }
}

double operator_norm(const RowMatrix& A, int max_iter, double tol)
{
    if (A.size() == 0)
        return 0.0;
    Eigen::VectorXd v(A.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = 1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i) + 0.2);
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd u = A.transpose() * (A * v);
        double nu = u.norm();
        if (nu == 0.0)
            return 0.0;
        double next = std::sqrt(nu);
        v = u / nu;
        if (std::abs(next - sigma) <= tol * next) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    return sigma;
}

MultiLayerMap multi_layer_map(const std::vector<FilterPair>& stack, Channel c, int N,
                              const std::vector<double>& multipliers, bool with_norm)
{
    int L = static_cast<int>(stack.size());
    if (L == 0 || N % (1 << L) != 0)
        throw Error(ErrorKind::LatticeTooSmall, "lattice size must be divisible by 2^layers", {{"N", N}, {"layers", L}});
    check_size(stack.front(), N);
    MultiLayerMap out;
    out.map.N = N;
    out.map.m = RowMatrix::Identity(N, N);
    int n = N;
    for (int l = 0; l < L; ++l) {
        double mult = l < static_cast<int>(multipliers.size()) ? multipliers[l] : 1.0;
        apply_layer_rows(stack[l], c, out.map.m, n, mult);
        n /= 2;
    }
    if (with_norm)
        out.op_norm = operator_norm(out.map.m);
    return out;
}

} // namespace wavemera
