#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavemera/dispersion.hpp"
#include "wavemera/filters.hpp"

namespace wavemera {

struct DesignParams {
    int K = 2;
    int L = 4;
    double tol_positivity = 1e-12;
    double tol_linear_system = 1e-12;
    double tol_pr = 1e-8;
    int grid_size = kDefaultGrid;
    int max_halfband_growth = 8;
};

struct DesignReport {
    double epsilon = 0.0;
    double pr_residual = 0.0;
    std::vector<cplx> stability_eigs_g, stability_eigs_h;
    double positivity_min = 0.0;
    double positivity_argmin = 0.0;
    double g0 = 0.0, h0 = 0.0, alpha = 1.0;
    double halfband_residual = 0.0;
    double factor_residual = 0.0;
    int K = 0, L = 0, L_eff = 0, M = 0;
    std::string method; // "allpass" or "pade"

    double stability_max_abs(Channel c) const;
    bool stable() const;
};

struct DesignResult {
    FilterPair pair;
    DesignReport report;
};

FirFilter thiran_allpass(int L);
// max over |k| <= 0.9π of |e^{-iLk} d(-k)/d(k) - e^{-ik/2}|
double allpass_phase_error(const FirFilter& d, int L, int grid = kDefaultGrid);

std::pair<FirFilter, FirFilter> rational_approx_massless(int L);

// symmetric cosine polynomials a, b of degree L with a(0) = b(0) = 1 fitting
// a(k)/b(k) ≈ ω(k+π)/ω(π), weighted by cos^{2K}(k/2)
std::pair<FirFilter, FirFilter> rational_approx_fit(const Dispersion& d, int L, int K, int grid = kDefaultGrid);

struct HalfbandResult {
    FirFilter r;
    double residual = 0.0;
};
HalfbandResult halfband_solve(const FirFilter& s, double tol = 1e-12, int max_growth = 8);
double halfband_residual(const FirFilter& s, const FirFilter& r);

FirFilter spectral_factorize(const FirFilter& r, double tol_positivity = 1e-12, int grid = kDefaultGrid);

// assemble g_s = b q f, h_s = a q f with q = (1 + e^{ik})^K from a given (a, b)
DesignResult design_from_rational(const FirFilter& a, const FirFilter& b, const Dispersion& d, const DesignParams& p);

DesignResult design_pair(const Dispersion& d, const DesignParams& p);

double epsilon_of(const FilterPair& pair, const Dispersion& d, int grid = kDefaultGrid);

std::vector<cplx> stability_spectrum(const FirFilter& a_s, int M, double tol = 1e-8);

// zeros of a(k) in z = e^{ik}: roots of sum_i c_i z^{size-1-i}
std::vector<cplx> laurent_roots(const FirFilter& p);

} // namespace wavemera
