#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace wavemera {

using cplx = std::complex<double>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kDefaultGrid = 4096;

// Finitely supported real sequence a[offset], ..., a[offset + size - 1].
// Exact zeros at either end are stripped on construction.
class FirFilter {
public:
    FirFilter() = default;
    FirFilter(int offset, std::vector<double> coeffs);

    static FirFilter delta(int n = 0, double v = 1.0);
    // (1 + e^{ik})^K, i.e. binomial coefficients on [-K, 0]
    static FirFilter binomial(int K);

    int offset() const { return offset_; }
    int last() const { return offset_ + static_cast<int>(c_.size()) - 1; }
    int size() const { return static_cast<int>(c_.size()); }
    int extent() const { return c_.empty() ? 0 : size() - 1; }
    bool empty() const { return c_.empty(); }
    const std::vector<double>& coeffs() const { return c_; }

    double operator[](int n) const
    {
        int i = n - offset_;
        return (i < 0 || i >= size()) ? 0.0 : c_[i];
    }

    cplx operator()(double k) const;
    double sum() const;
    double norm2() const;
    double max_abs() const;

    FirFilter reversed() const;
    FirFilter shifted(int s) const;
    // drop end coefficients below tol * max_abs
    FirFilter trimmed(double tol) const;

    FirFilter operator*(const FirFilter& o) const;
    FirFilter operator+(const FirFilter& o) const;
    FirFilter operator-(const FirFilter& o) const;
    FirFilter operator*(double s) const;

    // max |a[n] - b[n]| over the union of supports
    static double max_diff(const FirFilter& a, const FirFilter& b);

private:
    void trim();
    int offset_ = 0;
    std::vector<double> c_;
};

inline FirFilter operator*(double s, const FirFilter& f) { return f * s; }

cplx fourier_eval(const FirFilter& a, double k);

// uniform grid of n points on [-pi, pi)
std::vector<double> k_grid(int n);

// w[n] = (-1)^(1-n) s[1-n]
FirFilter wavelet_from_scaling(const FirFilter& s);

enum class Channel { g, h };

struct FilterPair {
    FirFilter g_s, g_w, h_s, h_w;
    double pr_residual = 0.0;
    int M = 0;

    const FirFilter& scaling(Channel c) const { return c == Channel::g ? g_s : h_s; }
    const FirFilter& wavelet(Channel c) const { return c == Channel::g ? g_w : h_w; }
    int first() const;
    int last() const;
    int extent() const { return last() - first(); }
};

FilterPair derive_wavelet(const FirFilter& g_s, const FirFilter& h_s);
FilterPair swap_channels(const FilterPair& p);
FilterPair haar_pair();

// max of the Fourier-grid and time-domain perfect reconstruction residuals
double pr_residual(const FilterPair& p, int grid_size = kDefaultGrid);
double pr_residual_time(const FirFilter& g_s, const FirFilter& h_s);

struct LatticeMap {
    int N = 0;
    RowMatrix m;
};

LatticeMap decomposition_map(const FilterPair& p, Channel c, int N);

struct MultiLayerMap {
    LatticeMap map;
    double op_norm = 0.0;
};

// Output blocks ordered (scaling L, wavelet L, ..., wavelet 1). Optional per-layer
// multipliers scale each layer's output (the squeeze factors of a MERA layer).
MultiLayerMap multi_layer_map(const std::vector<FilterPair>& stack, Channel c, int N,
                              const std::vector<double>& multipliers = {}, bool with_norm = true);

// Apply one periodized analysis step to the first n rows of X in place.
void apply_layer_rows(const FilterPair& p, Channel c, RowMatrix& X, int n, double mult = 1.0);

double operator_norm(const RowMatrix& A, int max_iter = 500, double tol = 1e-12);

} // namespace wavemera
