#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wavemera/filters.hpp"

namespace wavemera {

// even: pairs (2n, 2n+1); odd: pairs (2n-1, 2n)
enum class Parity { even, odd };

struct Gate2 {
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    Parity parity = Parity::even;
};

// Gates in application order a_1, ..., a_M. Input site 2n carries the scaling
// channel and 2n+1 the wavelet channel: A e_{2n} = g_s(. - 2n), A e_{2n+1} = g_w(. - 2n).
struct BinaryCircuit {
    std::vector<Gate2> gates;
    double squeeze = 1.0;
    int shift = 0; // canonical pair = original pair shifted by this amount
    int M() const { return static_cast<int>(gates.size()); }
};

struct CanonicalPair {
    FilterPair pair;
    int shift = 0;
    int M = 0;
};

CanonicalPair canonicalize_support(const FilterPair& p);

// tol_degenerate is relative to the largest coefficient
BinaryCircuit decompose(const FilterPair& p, double tol_degenerate = 1e-9);

struct ImpulseResponses {
    FirFilter g_s, g_w, h_s, h_w;
};
ImpulseResponses circuit_impulse_responses(const BinaryCircuit& c);

// pair in canonical position (the circuit's shift is not undone)
FilterPair compose(const BinaryCircuit& c);
// pair shifted back by the recorded shift
FilterPair compose_original(const BinaryCircuit& c);

double gate_alpha_identity_check(const Gate2& g);

std::pair<LatticeMap, LatticeMap> to_lattice_symplectic(const BinaryCircuit& c, int N);

} // namespace wavemera
