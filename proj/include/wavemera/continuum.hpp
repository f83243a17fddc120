#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavemera/filters.hpp"

namespace wavemera {

// Samples on the dyadic grid x_i = (origin + i) / 2^J.
struct SampledFunction {
    int J = 0;
    long origin = 0;
    std::vector<double> v;

    double h() const;
    double x(std::size_t i) const;
    double lo() const;
    double hi() const;
    // value at num / 2^lev (lev <= J); zero outside the support
    double at(long num, int lev) const;
    double sup_norm() const;
    SampledFunction coarsened(int level) const;
};

SampledFunction cascade(const FirFilter& a_s, int J);
// max over the level J-1 grid of |φ(x) - √2 Σ a[n] φ(2x - n)|
double refinement_residual(const SampledFunction& phi, const FirFilter& a_s);

// ψ(x) = √2 Σ a_w[n] φ(2x - n) sampled at level J (φ at level J-1)
SampledFunction wavelet_function(const FilterPair& p, Channel c, int J);
SampledFunction wavelet_from(const SampledFunction& phi, const FirFilter& a_w);

// ∫ f_{lf,nf} g_{lg,ng} dx with f_{l,n}(x) = 2^{-l/2} f(2^{-l} x - n), Riemann sum on the
// coarsest grid shared by both factors
double inner_product(const SampledFunction& f, const SampledFunction& g, int lf = 0, long nf = 0, int lg = 0,
                     long ng = 0);

struct Extrapolated {
    double value = 0.0;
    double raw = 0.0;         // Riemann sum at the finest level
    double certificate = 0.0; // |value - raw|
};

// Aitken extrapolation of the Riemann sums at levels J-2, J-1, J
Extrapolated inner_product_extrapolated(const SampledFunction& f, const SampledFunction& g, int lf = 0, long nf = 0,
                                        int lg = 0, long ng = 0);

// Φ(n) = ∫ φ^a(x) φ^b(x - n) dx, exact: the unit eigenvector of the autocorrelation refinement
FirFilter scaling_gram(const FirFilter& a_s, const FirFilter& b_s);

// <ψ^g_{l,n}, ψ^h_{l',n'}> from the two-scale relations and the scaling Gram sequence
double wavelet_inner_product_exact(const FilterPair& p, int l, long n, int lp, long np);

struct DualBasisReport {
    double max_exact_error = 0.0; // two-scale expansion with the Gram sequence
    double max_error = 0.0;       // extrapolated
    double max_raw_error = 0.0; // level-J Riemann sums
    double max_certificate = 0.0;
};

// <ψ^g_{l,n}, ψ^h_{l',n'}> against δ over l, l' in {0..levels-1}, |n|, |n'| <= range
DualBasisReport dual_basis_check(const FilterPair& p, int J = 12, int levels = 2, int range = 3);
// <φ^g, φ^h(. - n)> against δ_{0n}, |n| <= range
DualBasisReport scaling_biorthogonality(const FilterPair& p, int J = 12, int range = 3);

double massless_relation_error(const FilterPair& p, int J, double k_max, int nk = 257);

// ψ̂(k) = ∫ ψ(x) e^{-ikx} dx by the Riemann sum on the sample grid
cplx sampled_fourier(const SampledFunction& f, double k);

struct SuperoperatorResult {
    double res_phi = 0.0;
    double res_pi = 0.0;
    std::vector<cplx> eigs_phi, eigs_pi;
    double unit_eig_error = 0.0; // distance of the φ spectrum to 1
    double half_eig_error = 0.0; // distance of the π spectrum to 1/2
};

// dyadic sample points given as (numerator, level)
SuperoperatorResult superoperator_check(const FilterPair& p, const std::vector<std::pair<long, int>>& xs, int N,
                                        int J = 12);

// matrix Q[n, m] = c a[m - 2n] on the invariant index window, plus `pad` extra sites per side
std::vector<cplx> ascending_spectrum(const FirFilter& a, double c, int pad = 0);

FirFilter divide_by_moment_factor(const FirFilter& f, int l, double* residual = nullptr);

struct DescendantLine {
    int l = 0;
    std::string sector;
    double expected = 0.0;
    double found = 0.0;
    double error = 0.0;
};

struct DescendantSpectrum {
    std::vector<DescendantLine> lines;
    std::vector<double> values; // union of matched eigenvalues
    double max_error() const;
    // distance of the union of matched eigenvalues to 2^{-l}
    double distance_to(double target) const;
};

DescendantSpectrum descendant_spectrum(const FilterPair& p, int K, int block_size = 0);

struct AdaptiveLevel {
    int l = 0;
    SampledFunction phi_g, phi_h, psi_g, psi_h;
    double dual_residual = 0.0;
    double tail_deviation = 0.0; // sup |φ^a_l - cascade of the tail filter|
};

struct AdaptiveFamily {
    int J_prod = 0;
    std::vector<AdaptiveLevel> levels;
};

// level l uses stack[l + j - 1] at refinement step j (clamped to the last layer and to j <= J_prod)
AdaptiveFamily adaptive_family(const std::vector<FilterPair>& stack, int J_prod, int J);

struct LatticeVector {
    int first = 0;
    std::vector<double> c;
    double operator[](int n) const;
};

// c_n = <φ^a_{l,n}, f>, n restricted to the lattice window [-N/2, N/2)
LatticeVector discretize_smeared(const SampledFunction& f, const SampledFunction& phi, int l, int N);

SampledFunction gaussian_bump(double sigma, int J, double cut = 8.0);

// (1/2π) ∫ |f̂(k)|^2 w(k) dk for w(k) = |k|/4 using the sampled transform
double continuum_pi_correlator(const SampledFunction& f, double k_max, int nk);

} // namespace wavemera
