#include "wavemera/circuit.hpp"

#include <algorithm>
#include <cmath>

#include "wavemera/error.hpp"

namespace wavemera {

namespace {

Parity parity_for_layer(int j) { return j % 2 == 1 ? Parity::even : Parity::odd; }

// filter restricted to [lo, hi]
FirFilter window(const FirFilter& f, int lo, int hi)
{
    std::vector<double> c(hi - lo + 1);
    for (int n = lo; n <= hi; ++n)
        c[n - lo] = f[n];
    return FirFilter(lo, c);
}

// apply a gate layer blockwise to a finitely supported sequence on [lo, hi]
std::vector<double> apply_gate(const Eigen::Matrix2d& a, Parity par, const std::vector<double>& x, int lo)
{
    int hi = lo + static_cast<int>(x.size()) - 1;
    std::vector<double> y = x;
    int start = lo;
    bool even_start = ((start % 2) + 2) % 2 == 0;
    if ((par == Parity::even) != even_start)
        --start;
    for (int p = start; p <= hi; p += 2) {
        double x0 = (p >= lo) ? x[p - lo] : 0.0;
        double x1 = (p + 1 <= hi) ? x[p + 1 - lo] : 0.0;
        double y0 = a(0, 0) * x0 + a(0, 1) * x1;
        double y1 = a(1, 0) * x0 + a(1, 1) * x1;
        if (p >= lo)
            y[p - lo] = y0;
        if (p + 1 <= hi)
            y[p + 1 - lo] = y1;
    }
    return y;
}

} // namespace

CanonicalPair canonicalize_support(const FilterPair& p)
{
    int lo = std::min(p.g_s.offset(), p.h_s.offset());
    int hi = std::max(p.g_s.last(), p.h_s.last());
    int M = (hi - lo + 2) / 2;
    int shift = -M + 1 - lo;
    CanonicalPair out;
    out.pair = derive_wavelet(p.g_s.shifted(shift), p.h_s.shifted(shift));
    out.shift = shift;
    out.M = M;
    return out;
}

BinaryCircuit decompose(const FilterPair& p, double tol_degenerate)
{
    CanonicalPair cp = canonicalize_support(p);
    FirFilter g = cp.pair.g_s, h = cp.pair.h_s;
    const double scale = std::max(g.max_abs(), h.max_abs());
    const double tol = tol_degenerate * scale;
    std::vector<Gate2> peeled;

    for (int Mc = cp.M; Mc >= 2; --Mc) {
        // each column is visible at one end of g and, rotated, at the opposite end of h;
        // take the better resolved estimate
        Eigen::Vector2d v(g[Mc - 1], g[Mc]);
        Eigen::Vector2d vh(h[-Mc + 2], -h[-Mc + 1]);
        Eigen::Vector2d u(g[-Mc + 1], g[-Mc + 2]);
        Eigen::Vector2d uh(-h[Mc], h[Mc - 1]);
        Eigen::Vector2d d0 = v.norm() >= vh.norm() ? v : vh;
        Eigen::Vector2d d1 = u.norm() >= uh.norm() ? u : uh;
        if (d0.norm() == 0.0 || d1.norm() == 0.0)
            throw Error(ErrorKind::DegenerateFactorization, "outer coefficients vanish", {{"step", Mc}});
        d0.normalize();
        d1.normalize();
        double D = d0[0] * d1[1] - d1[0] * d0[1];
        if (std::abs(D) <= tol_degenerate)
            throw Error(ErrorKind::DegenerateFactorization, "peeling step has a singular outer block",
                        {{"step", Mc}, {"det", D}});
        Gate2 gate;
        gate.parity = parity_for_layer(Mc);
        // the split of the determinant between the columns is a gauge choice; use the symmetric one
        double s = 1.0 / std::sqrt(std::abs(D));
        gate.m.col(0) = d0 * s;
        gate.m.col(1) = d1 * (D > 0 ? s : -s);

        int lo = -Mc + 1, hi = Mc;
        std::vector<double> gx(hi - lo + 1), hx(hi - lo + 1);
        for (int n = lo; n <= hi; ++n) {
            gx[n - lo] = g[n];
            hx[n - lo] = h[n];
        }
        Eigen::Matrix2d inv = gate.m.inverse();
        gx = apply_gate(inv, gate.parity, gx, lo);
        hx = apply_gate(gate.m.transpose(), gate.parity, hx, lo);
        double spill = std::max({std::abs(gx.front()), std::abs(gx.back()), std::abs(hx.front()), std::abs(hx.back())});
        if (spill > 1e-9 * scale)
            throw Error(ErrorKind::DegenerateFactorization, "support did not shrink after peeling",
                        {{"step", Mc}, {"spill", spill}});
        g = window(FirFilter(lo, gx), lo + 1, hi - 1);
        h = window(FirFilter(lo, hx), lo + 1, hi - 1);
        double pr = pr_residual_time(g, h);
        if (pr > 1e-8)
            throw Error(ErrorKind::DegenerateFactorization, "intermediate pair lost perfect reconstruction",
                        {{"step", Mc}, {"pr_residual", pr}});
        peeled.push_back(gate);
    }

    FirFilter gw = wavelet_from_scaling(h);
    Gate2 base;
    base.parity = Parity::even;
    base.m << g[0], gw[0], g[1], gw[1];
    double det = base.m.determinant();
    if (!(det > tol))
        throw Error(ErrorKind::DegenerateFactorization, "base gate is singular", {{"step", 1}, {"det", det}});
    base.m /= std::sqrt(det);
    peeled.push_back(base);

    BinaryCircuit c;
    c.gates.assign(peeled.rbegin(), peeled.rend());
    c.shift = cp.shift;
    return c;
}

ImpulseResponses circuit_impulse_responses(const BinaryCircuit& c)
{
    int M = c.M();
    int lo = -M - 1, hi = M + 2;
    auto run = [&](int site, bool dual) {
        std::vector<double> x(hi - lo + 1, 0.0);
        x[site - lo] = 1.0;
        for (const auto& gate : c.gates) {
            Eigen::Matrix2d a = dual ? Eigen::Matrix2d(gate.m.inverse().transpose()) : gate.m;
            x = apply_gate(a, gate.parity, x, lo);
        }
        return FirFilter(lo, x).trimmed(1e-14);
    };
    return {run(0, false), run(1, false), run(0, true), run(1, true)};
}

FilterPair compose(const BinaryCircuit& c)
{
    auto r = circuit_impulse_responses(c);
    return derive_wavelet(r.g_s, r.h_s);
}

FilterPair compose_original(const BinaryCircuit& c)
{
    auto r = circuit_impulse_responses(c);
    return derive_wavelet(r.g_s.shifted(-c.shift), r.h_s.shifted(-c.shift));
}

double gate_alpha_identity_check(const Gate2& g)
{
    Eigen::Matrix2d alpha;
    alpha << 0.0, -1.0, 1.0, 0.0;
    // alpha^2 = -1 on the block, so alpha^{-1} = -alpha
    Eigen::Matrix2d rhs = alpha * g.m.transpose() * (-alpha);
    return (g.m.inverse() - rhs).cwiseAbs().maxCoeff();
}

std::pair<LatticeMap, LatticeMap> to_lattice_symplectic(const BinaryCircuit& c, int N)
{
    if (N % 2 != 0 || N < 2 * c.M())
        throw Error(ErrorKind::LatticeTooSmall, "lattice must be even and hold the circuit depth",
                    {{"N", N}, {"M", c.M()}});
    RowMatrix A = RowMatrix::Identity(N, N);
    RowMatrix B = RowMatrix::Identity(N, N);
    for (const auto& gate : c.gates) {
        Eigen::Matrix2d a = gate.m;
        Eigen::Matrix2d b = gate.m.inverse().transpose();
        int start = gate.parity == Parity::even ? 0 : N - 1;
        for (int i = 0; i < N / 2; ++i) {
            int p = (start + 2 * i) % N, q = (p + 1) % N;
            Eigen::RowVectorXd ap = A.row(p), aq = A.row(q);
            A.row(p) = a(0, 0) * ap + a(0, 1) * aq;
            A.row(q) = a(1, 0) * ap + a(1, 1) * aq;
            Eigen::RowVectorXd bp = B.row(p), bq = B.row(q);
            B.row(p) = b(0, 0) * bp + b(0, 1) * bq;
            B.row(q) = b(1, 0) * bp + b(1, 1) * bq;
        }
    }
    A *= c.squeeze;
    B /= c.squeeze;
    return {LatticeMap{N, A}, LatticeMap{N, B}};
}

} // namespace wavemera
