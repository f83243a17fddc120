// Acceptance criteria: one PASS/FAIL line each, details on the following indented lines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wavemera/circuit.hpp"
#include "wavemera/continuum.hpp"
#include "wavemera/design.hpp"
#include "wavemera/dispersion.hpp"
#include "wavemera/error.hpp"
#include "wavemera/mera.hpp"

using namespace wavemera;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void verdict(int id, bool ok, const std::string& what)
{
    std::printf("%s %2d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

void note(const char* fmt, auto... args)
{
    std::printf("    ");
    std::printf(fmt, args...);
    std::printf("\n");
}

struct Attempt {
    int K = 0, L = 0;
    std::optional<DesignResult> result;
    std::string error;
    bool error_ok = false;
};

std::vector<Attempt> sweep()
{
    std::vector<Attempt> out;
    for (int K = 1; K <= 3; ++K)
        for (int L = 1; L <= 4; ++L) {
            Attempt a{K, L};
            DesignParams p;
            p.K = K;
            p.L = L;
            try {
                a.result = design_pair(harmonic(0.0), p);
            } catch (const Error& e) {
                a.error = e.to_json().dump();
                a.error_ok = (e.kind() == ErrorKind::NotNonnegative || e.kind() == ErrorKind::NoSolution) &&
                             !e.details().empty();
            }
            out.push_back(std::move(a));
        }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main()
{
    const auto designs = sweep();
    auto accepted = [&] {
        std::vector<const Attempt*> v;
        for (const auto& a : designs)
            if (a.result)
                v.push_back(&a);
        return v;
    }();
    auto find = [&](int K, int L) -> const DesignResult* {
        for (const auto& a : designs)
            if (a.K == K && a.L == L && a.result)
                return &*a.result;
        return nullptr;
    };

    // 1
    {
        bool ok = true;
        for (const auto& a : designs) {
            if (a.result) {
                note("K=%d L=%d pr_residual %.3e", a.K, a.L, a.result->report.pr_residual);
                ok = ok && a.result->report.pr_residual < 1e-8 && pr_residual(a.result->pair) < 1e-8;
            } else {
                note("K=%d L=%d failed: %s", a.K, a.L, a.error.c_str());
                ok = ok && a.error_ok;
            }
        }
        verdict(1, ok, "perfect reconstruction over the K=1..3, L=1..4 massless sweep");
    }

    // 2
    {
        Dispersion w = harmonic(0.0), r = renormalize(w);
        double shape = 0.0, exact = 0.0, literal = 0.0;
        for (double k : k_grid(4096)) {
            double s = std::abs(std::sin(k / 2));
            shape = std::max(shape, std::abs(r(k) / r.at_pi() - w(k) / w.at_pi()));
            exact = std::max(exact, std::abs(r(k) - 0.5 * s));
            literal = std::max(literal, std::abs(r(k) - s));
        }
        note("sup |ω'/ω'(π) - ω/ω(π)| = %.3e, sup |ω' - |sin(k/2)|/2| = %.3e", shape, exact);
        note("unnormalized sup |ω' - |sin(k/2)|| = %.3e (ω'(π) = %.15g)", literal, r.at_pi());
        verdict(2, shape < 1e-12 && exact < 1e-12, "massless dispersion is a fixed point up to the squeeze");
    }

    // 3
    {
        double m1 = fitted_mass(renormalize(harmonic(1.0)));
        double want = 2 * std::sqrt(2.0);
        note("fitted m' = %.15g, 2√2 = %.15g, diff %.3e", m1, want, std::abs(m1 - want));
        verdict(3, std::abs(m1 - want) < 1e-8, "mass flow m=1 -> 2√2");
    }

    // 4
    {
        bool ok = true;
        double prev = 1e300;
        for (int L = 1; L <= 4; ++L) {
            const DesignResult* r = find(2, L);
            if (!r) {
                ok = false;
                note("K=2 L=%d missing", L);
                continue;
            }
            note("K=2 L=%d epsilon %.6e", L, r->report.epsilon);
            ok = ok && r->report.epsilon < prev;
            prev = r->report.epsilon;
        }
        double ratio = (find(2, 4) && find(2, 1)) ? find(2, 4)->report.epsilon / find(2, 1)->report.epsilon : 1.0;
        note("epsilon(2,4)/epsilon(2,1) = %.4e", ratio);
        verdict(4, ok && ratio < 0.1, "epsilon decreases in L at K=2 with a one-decade drop");
    }

    // 5
    {
        bool ok = !accepted.empty();
        for (const auto* a : accepted) {
            double g = a->result->report.stability_max_abs(Channel::g);
            double h = a->result->report.stability_max_abs(Channel::h);
            note("K=%d L=%d max|λ| g %.6f h %.6f", a->K, a->L, g, h);
            ok = ok && g < 2.0 && h < 2.0;
        }
        verdict(5, ok, "transfer-operator stability for every accepted design");
    }

    // 6
    {
        bool ok = true;
        for (const auto* a : accepted) {
            const FilterPair& p = a->result->pair;
            try {
                BinaryCircuit c = decompose(p);
                FilterPair q = compose_original(c);
                double rt = std::max({FirFilter::max_diff(q.g_s, p.g_s), FirFilter::max_diff(q.h_s, p.h_s),
                                      FirFilter::max_diff(q.g_w, p.g_w), FirFilter::max_diff(q.h_w, p.h_w)});
                double det = 0.0;
                for (const auto& g : c.gates)
                    det = std::max(det, std::abs(g.m.determinant() - 1.0));
                auto [A, B] = to_lattice_symplectic(c, 256);
                double sym = (A.m * B.m.transpose() - RowMatrix::Identity(256, 256)).cwiseAbs().maxCoeff();
                note("K=%d L=%d depth %d round trip %.3e det %.3e symplectic %.3e", a->K, a->L, c.M(), rt, det, sym);
                ok = ok && rt < 1e-10 && c.M() == a->K + 2 * a->L && det < 1e-12 && sym < 1e-12;
            } catch (const Error& e) {
                note("K=%d L=%d %s", a->K, a->L, e.to_json().dump().c_str());
                ok = false;
            }
        }
        verdict(6, ok, "circuit round trip, depth K+2L, unit determinants, symplectic identity at N=256");
    }

    // 7
    {
        auto t = exact_correlations(harmonic(0.0), Sector::p, 0, 1 << 16);
        double err = std::abs(t.value[0] - 1 / kPi);
        LayerStack haar = stack_from_pair(haar_pair(), Dispersion::flat(1.0), 1);
        auto c = mera_covariance(haar, 16);
        double dq = (c.q - 0.5 * RowMatrix::Identity(16, 16)).cwiseAbs().maxCoeff();
        double dp = (c.p - 0.5 * RowMatrix::Identity(16, 16)).cwiseAbs().maxCoeff();
        note("gamma^p_00 - 1/pi = %.3e (Richardson certificate %.3e)", err, t.certificate[0]);
        note("Haar/flat: max|gamma^q - I/2| = %.3e, max|gamma^p - I/2| = %.3e", dq, dp);
        verdict(7, err < 1e-9 && t.certificate[0] < 1e-9 && dq < 1e-12 && dp < 1e-12, "quadrature and product-state oracles");
    }

    // 8 and 9
    std::map<int, ErrorReport> k2l4;
    {
        const DesignResult* r = find(2, 4);
        bool ok = r != nullptr;
        bool dominance = ok, monotone = ok;
        double prev = 1e300;
        if (r) {
            for (int layers : {4, 6, 8}) {
                auto t0 = std::chrono::steady_clock::now();
                LayerStack st = stack_from_pair(r->pair, harmonic(0.0), layers);
                ErrorReport e = error_report(st, 2048);
                note("L_layers=%d delta_p %.6e bound_p %.4e (%.0f s)", layers, e.delta_p, e.bound_p, seconds_since(t0));
                note("  B %.4f D %.4f M %.0f Omega %.3f C %.2f eps %.3e quad cert %.2e", e.constants.B, e.constants.D,
                     e.constants.M, e.constants.Omega, e.constants.C, e.constants.epsilon, e.quad_certificate);
                dominance = dominance && e.delta_p <= e.bound_p;
                for (const auto& [sep, s] : e.delta_q_regulated) {
                    note("  |n-m|=%d delta~q %.4e bound %.4e", sep, s.measured, s.bound);
                    dominance = dominance && s.measured <= s.bound;
                }
                monotone = monotone && e.delta_p <= prev + 1e-9;
                prev = e.delta_p;
                k2l4.emplace(layers, std::move(e));
            }
        }
        note("dominance %s, monotone decrease in L_layers %s", dominance ? "holds" : "violated",
             monotone ? "holds" : "violated");
        verdict(8, dominance && monotone, "theorem dominance and layer monotonicity, K=2/L=4, N=2048");
    }
    {
        const DesignResult* r1 = find(2, 1);
        bool ok = r1 && k2l4.count(8);
        if (ok) {
            LayerStack st = stack_from_pair(r1->pair, harmonic(0.0), 8);
            ErrorReport e = error_report(st, 2048);
            note("delta_p K=2/L=4: %.6e, K=2/L=1: %.6e", k2l4.at(8).delta_p, e.delta_p);
            ok = k2l4.at(8).delta_p <= e.delta_p;
        }
        verdict(9, ok, "better filters give smaller delta_p at 8 layers");
    }

    // 10
    {
        bool ok = !accepted.empty();
        const std::vector<std::pair<long, int>> xs{{0, 0}, {1, 2}, {1, 1}};
        for (const auto* a : accepted) {
            const FilterPair& p = a->result->pair;
            double ref = std::max(refinement_residual(cascade(p.g_s, 12), p.g_s),
                                  refinement_residual(cascade(p.h_s, 12), p.h_s));
            SuperoperatorResult s = superoperator_check(p, xs, 64, 12);
            std::string desc = "-";
            bool desc_ok = true;
            if (a->K == 2) {
                double d = descendant_spectrum(p, 2).distance_to(0.25);
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.2e", d);
                desc = buf;
                desc_ok = d < 1e-6;
            }
            note("K=%d L=%d refinement %.2e res_phi %.2e res_pi %.2e |λ-1| %.2e |λ-1/2| %.2e |λ-1/4| %s", a->K, a->L, ref,
                 s.res_phi, s.res_pi, s.unit_eig_error, s.half_eig_error, desc.c_str());
            ok = ok && ref < 1e-8 && s.res_phi < 1e-8 && s.res_pi < 1e-8 && s.unit_eig_error < 1e-8 &&
                 s.half_eig_error < 1e-8 && desc_ok;
        }
        verdict(10, ok, "continuum refinement, superoperator and descendant identities");
    }

    // 11
    {
        bool ok = !accepted.empty();
        for (const auto* a : accepted) {
            DualBasisReport d = dual_basis_check(a->result->pair, 12);
            note("K=%d L=%d exact %.2e (Riemann J=12 %.2e, extrapolated %.2e, certificate %.2e)", a->K, a->L,
                 d.max_exact_error, d.max_raw_error, d.max_error, d.max_certificate);
            ok = ok && d.max_exact_error < 1e-6;
        }
        verdict(11, ok, "wavelet dual basis over l, l' in {0,1}, |n|, |n'| <= 3");
    }

    // 12
    {
        const DesignResult *r1 = find(2, 1), *r4 = find(2, 4);
        bool ok = r1 && r4;
        if (ok) {
            double e1 = massless_relation_error(r1->pair, 12, 2 * kPi);
            double e4 = massless_relation_error(r4->pair, 12, 2 * kPi);
            note("max |psi^g - (|k|/4) psi^h| over |k| <= 2pi: K=2/L=1 %.4e, K=2/L=4 %.4e", e1, e4);
            ok = e4 < e1;
        }
        verdict(12, ok, "massless continuum relation improves from L=1 to L=4");
    }

    // 13
    {
        DesignParams p;
        p.K = 2;
        p.L = 4;
        bool ok = true;
        try {
            LayerStack st = build_stack(harmonic(0.5), p, 5);
            auto flow = mass_flow(0.5, 4);
            for (int l = 0; l < st.size(); ++l) {
                double m = fitted_mass(st.layers[l].omega);
                note("layer %d fitted mass %.12g closed form %.12g eps %.2e", l, m, flow[l], st.layers[l].epsilon);
                ok = ok && std::abs(m - flow[l]) < 1e-6;
            }
            auto fresh = layer_disentangling_deviation(st, 1024);
            auto pushed = wavelet_channel_deviation(st, 1024);
            for (std::size_t l = 0; l < fresh.size(); ++l) {
                note("layer %zu wavelet-block deviation %.3e (pushed through earlier layers %.3e)", l, fresh[l],
                     pushed[l]);
                if (l > 0)
                    ok = ok && fresh[l] <= fresh[l - 1] + 1e-14;
            }
        } catch (const Error& e) {
            note("%s", e.to_json().dump().c_str());
            ok = false;
        }
        verdict(13, ok, "massive flow: per-layer masses and disentangling deviation decreasing with depth");
    }

    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
