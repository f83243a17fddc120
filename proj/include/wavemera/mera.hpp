#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavemera/design.hpp"
#include "wavemera/dispersion.hpp"
#include "wavemera/filters.hpp"

namespace wavemera {

struct StackStrategy {
    enum class Kind { redesign_each_layer, fixed_after };
    Kind kind = Kind::redesign_each_layer;
    int l_star = 0;

    static StackStrategy redesign() { return {}; }
    static StackStrategy fixed_after(int l) { return {Kind::fixed_after, l}; }
    std::string describe() const;
};

struct Layer {
    FilterPair pair;
    Dispersion omega; // ω^{(l)}
    double omega_pi = 1.0;
    double squeeze = 1.0; // √ω^{(l)}(π)
    double epsilon = 0.0; // against ω^{(l)} / ω^{(l)}(π)
    int designed_at = 0;  // layer whose dispersion the pair was designed for
    std::optional<DesignReport> report;
};

struct LayerStack {
    std::vector<Layer> layers;
    Dispersion base;
    StackStrategy strategy;

    int size() const { return static_cast<int>(layers.size()); }
    std::vector<FilterPair> pairs() const;
    std::vector<double> squeezes() const;
    double max_epsilon() const;
    // support length of the widest scaling filter
    int support_length() const;
};

LayerStack build_stack(const Dispersion& d, const DesignParams& params, int L_layers,
                       StackStrategy strategy = StackStrategy::redesign());
// the same pair at every layer
LayerStack stack_from_pair(const FilterPair& pair, const Dispersion& d, int L_layers);

struct CovariancePair {
    int N = 0;
    RowMatrix q, p;
    bool regulated = false; // q holds γ^q_{nm} - γ^q_{nn}
    double quad_certificate = 0.0;
};

// γ^q = ½ R_hᵀ R_h, γ^p = ½ R_gᵀ R_g
CovariancePair mera_covariance(const LayerStack& stack, int N);

enum class QBlock { automatic, plain, regulated };

bool is_gapless(const Dispersion& d);

enum class Sector { p, q, q_regulated };

struct CorrelationTable {
    std::vector<double> value;       // indexed by separation r = 0..r_max
    std::vector<double> certificate; // |Richardson - finer trapezoid|
};

// (1/2π) ∫ γ(k) cos(kr) dk by trapezoids at Q and 2Q points with one Richardson step
CorrelationTable exact_correlations(const Dispersion& d, Sector s, int r_max, int quad_points);

// entries by ring distance, so the matrices are exactly circulant
CovariancePair exact_covariance(const Dispersion& d, int N, int quad_points = 1 << 16,
                                QBlock mode = QBlock::automatic);

// ground state of the finite ring of N sites (discrete momenta 2πj/N)
CovariancePair ring_covariance(const Dispersion& d, int N);

// ‖γ^q (δ_0 - δ_r)‖ (r > 0) or ‖γ^q δ_0‖ (r = 0) in the (1/2π)∫ convention
double q_norm(const Dispersion& d, int r, int quad_points = 1 << 16);

// min eigenvalue of γ^q γ^p (≥ 1/4 for a physical state); needs a plain q block
double uncertainty_min(const CovariancePair& c);

struct BoundConstants {
    double B = 0.0, D = 0.0, M = 0.0, Omega = 0.0, C = 0.0, epsilon = 0.0;
    int L_layers = 0;
};

struct TheoremBound {
    double bound_p = 0.0;
    double bound_q_prefactor = 0.0; // multiplies ‖γ^q δ_0‖ or ‖γ^q (δ_n - δ_m)‖
    double C = 0.0;
};

TheoremBound theorem_bound(double B, double D, double M, double Omega, double eps, int L_layers);

struct SeparationError {
    double measured = 0.0;
    double bound = 0.0;
    double q_norm = 0.0;
};

struct CorrelationRow {
    int n = 0, m = 0;
    double exact_p = 0.0, mera_p = 0.0, exact_q_reg = 0.0, mera_q_reg = 0.0;
};

struct ErrorReport {
    int N = 0;
    double delta_p = 0.0;
    std::optional<double> delta_q; // only for gapped dispersions
    std::map<int, SeparationError> delta_q_regulated;
    double bound_p = 0.0;
    std::optional<double> bound_q;
    BoundConstants constants;
    double omega_pi = 1.0;
    double quad_certificate = 0.0;
    std::vector<CorrelationRow> rows; // n = 0, m = 0..N/4
};

struct ErrorOptions {
    std::vector<int> separations{1, 4, 16};
    int cascade_level = 10; // for B
    int grid = kDefaultGrid;
};

ErrorReport error_report(const LayerStack& stack, int N, int quad_points = 1 << 16, const ErrorOptions& opt = {});

// max over contiguous sub-stacks and both channels of the largest singular value of the
// periodized multi-layer map at size N, by matrix-free power iteration
double substack_norm_bound(const std::vector<FilterPair>& pairs, int N);

// sup norm over levels of the level-dependent scaling functions
double scaling_sup_bound(const LayerStack& stack, int J);

// Per layer, max deviation of the wavelet-channel covariance blocks from I/2 after pushing
// the ring ground state through the layers (R_g on q, R_h on p).
std::vector<double> wavelet_channel_deviation(const LayerStack& stack, int N);

// Same deviation, but each layer acts on the ring ground state of its own ω^{(l)} at size N / 2^l,
// so inherited errors from earlier layers are excluded.
std::vector<double> layer_disentangling_deviation(const LayerStack& stack, int N);

} // namespace wavemera
