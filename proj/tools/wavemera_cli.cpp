#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "wavemera/circuit.hpp"
#include "wavemera/continuum.hpp"
#include "wavemera/design.hpp"
#include "wavemera/dispersion.hpp"
#include "wavemera/error.hpp"
#include "wavemera/io.hpp"
#include "wavemera/mera.hpp"

using namespace wavemera;

namespace {

struct Globals {
    int grid = kDefaultGrid;
    double tol = 1e-8;
    int quad_points = 1 << 16;
    int threads = 1;
    int seed = 0;
    bool json_errors = false;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// "a..b" or a single integer
std::pair<int, int> parse_range(const std::string& s, const char* what)
{
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int v = std::stoi(s);
            return {v, v};
        }
        int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
        if (a > b)
            throw UsageError(std::string(what) + " range is empty: " + s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError(std::string("cannot parse ") + what + " range '" + s + "'");
    }
}

DesignParams design_params(const Globals& g, int K, int L)
{
    DesignParams p;
    p.K = K;
    p.L = L;
    p.grid_size = g.grid;
    p.tol_pr = g.tol;
    return p;
}

Dispersion parse_dispersion(const std::string& s)
{
    try {
        return Dispersion::parse(s);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad --dispersion: ") + e.what());
    }
}

std::string num(double v) { return format_double(v); }

int run_design(const Globals& g, const std::string& disp, int K, int L, const std::string& out,
               const std::string& report)
{
    Dispersion d = parse_dispersion(disp);
    DesignResult r = design_pair(d, design_params(g, K, L));
    json meta = {{"K", K}, {"L", L}, {"L_eff", r.report.L_eff}, {"dispersion", d.describe()},
                 {"epsilon", r.report.epsilon}, {"method", r.report.method}};
    json pj = pair_to_json(r.pair, "K" + std::to_string(K) + "L" + std::to_string(L), meta);
    if (out.empty() || out == "-")
        std::cout << pj.dump(2) << "\n";
    else
        write_json(out, pj);
    if (!report.empty())
        write_json(report, design_report_to_json(r.report));
    std::cerr << "epsilon " << num(r.report.epsilon) << " pr_residual " << num(r.report.pr_residual) << "\n";
    return 0;
}

int run_sweep(const Globals& g, const std::string& disp, const std::string& Ks, const std::string& Ls,
              const std::string& out, const std::string& gnuplot)
{
    auto [k0, k1] = parse_range(Ks, "--K");
    auto [l0, l1] = parse_range(Ls, "--L");
    if (k0 < 1 || l0 < 1)
        throw UsageError("--K and --L must be at least 1");
    Dispersion d = parse_dispersion(disp);
    CsvWriter csv(out);
    csv.header({"K", "L", "epsilon", "pr_residual", "stability_max_abs_eig", "positivity_min", "status"});
    for (int K = k0; K <= k1; ++K)
        for (int L = l0; L <= l1; ++L) {
            try {
                DesignResult r = design_pair(d, design_params(g, K, L));
                double stab = std::max(r.report.stability_max_abs(Channel::g), r.report.stability_max_abs(Channel::h));
                csv.row_mixed({std::to_string(K), std::to_string(L), num(r.report.epsilon), num(r.report.pr_residual),
                               num(stab), num(r.report.positivity_min), "ok"});
            } catch (const Error& e) {
                csv.row_mixed({std::to_string(K), std::to_string(L), "", "", "", "", to_string(e.kind())});
                std::cerr << e.to_json().dump() << "\n";
            }
        }
    csv.close();
    if (!gnuplot.empty()) {
        std::ofstream gp(gnuplot);
        if (!gp)
            throw UsageError("cannot write " + gnuplot);
        gp << "set datafile separator ','\nset logscale y\nset xlabel 'L'\nset ylabel 'epsilon'\n"
           << "plot for [K=" << k0 << ":" << k1 << "] '" << out
           << "' using ($1==K ? $2 : 1/0):3 skip 1 with linespoints title sprintf('K=%d', K)\n";
    }
    return 0;
}

int run_circuit(const std::string& in, const std::string& out, bool verify, double squeeze)
{
    FilterPair p = pair_from_json(read_json(in));
    BinaryCircuit c = decompose(p);
    c.squeeze = squeeze;
    json cj = circuit_to_json(c);
    if (out.empty() || out == "-")
        std::cout << cj.dump(2) << "\n";
    else
        write_json(out, cj);
    if (verify) {
        FilterPair q = compose_original(c);
        double res = std::max({FirFilter::max_diff(q.g_s, p.g_s), FirFilter::max_diff(q.h_s, p.h_s),
                               FirFilter::max_diff(q.g_w, p.g_w), FirFilter::max_diff(q.h_w, p.h_w)});
        double det = 0.0, alpha = 0.0;
        for (const auto& gate : c.gates) {
            det = std::max(det, std::abs(gate.m.determinant() - 1.0));
            alpha = std::max(alpha, gate_alpha_identity_check(gate));
        }
        std::cout << "depth " << c.M() << "\nround_trip_residual " << num(res) << "\nmax_det_error " << num(det)
                  << "\nmax_alpha_identity_error " << num(alpha) << "\n";
    }
    return 0;
}

int run_simulate(const Globals& g, const std::string& pair_path, int K, int L, int layers, int N,
                 const std::string& disp, const std::string& strategy, const std::string& report,
                 const std::string& csv_path)
{
    if (layers < 1 || layers > 30)
        throw UsageError("--layers must be between 1 and 30");
    if (N <= 0 || N % (1 << layers) != 0)
        throw UsageError("--N must be divisible by 2^layers (N=" + std::to_string(N) +
                         ", 2^layers=" + std::to_string(1 << layers) + ")");
    Dispersion d = parse_dispersion(disp);
    LayerStack st;
    if (!pair_path.empty()) {
        st = stack_from_pair(pair_from_json(read_json(pair_path)), d, layers);
    } else {
        StackStrategy s = StackStrategy::redesign();
        if (strategy.rfind("fixed_after:", 0) == 0)
            s = StackStrategy::fixed_after(std::stoi(strategy.substr(12)));
        else if (strategy != "redesign")
            throw UsageError("--strategy must be 'redesign' or 'fixed_after:<l>'");
        st = build_stack(d, design_params(g, K, L), layers, s);
    }
    ErrorReport r = error_report(st, N, g.quad_points);
    json rj = error_report_to_json(r);
    if (report.empty() || report == "-")
        std::cout << rj.dump(2) << "\n";
    else
        write_json(report, rj);
    if (!csv_path.empty()) {
        CsvWriter csv(csv_path);
        csv.header({"n", "m", "exact_p", "mera_p", "exact_q_reg", "mera_q_reg", "abs_err_p", "abs_err_q"});
        for (const auto& row : r.rows)
            csv.row_mixed({std::to_string(row.n), std::to_string(row.m), num(row.exact_p), num(row.mera_p),
                           num(row.exact_q_reg), num(row.mera_q_reg), num(std::abs(row.exact_p - row.mera_p)),
                           num(std::abs(row.exact_q_reg - row.mera_q_reg))});
        csv.close();
    }
    return 0;
}

int run_cascade(const std::string& pair_path, int J, const std::string& out)
{
    if (J < 1 || J > 20)
        throw UsageError("--J must be between 1 and 20");
    FilterPair p = pair_from_json(read_json(pair_path));
    SampledFunction fg = cascade(p.g_s, J), fh = cascade(p.h_s, J);
    SampledFunction wg = wavelet_function(p, Channel::g, J), wh = wavelet_function(p, Channel::h, J);
    long lo = std::min({fg.origin, fh.origin, wg.origin, wh.origin});
    long hi = 0;
    for (const auto* f : {&fg, &fh, &wg, &wh})
        hi = std::max(hi, f->origin + static_cast<long>(f->v.size()) - 1);
    CsvWriter csv(out);
    csv.header({"x", "phi_g", "phi_h", "psi_g", "psi_h"});
    for (long X = lo; X <= hi; ++X)
        csv.row({std::ldexp(static_cast<double>(X), -J), fg.at(X, J), fh.at(X, J), wg.at(X, J), wh.at(X, J)});
    csv.close();
    return 0;
}

int run_spectrum(const std::string& pair_path, int K)
{
    FilterPair p = pair_from_json(read_json(pair_path));
    auto print = [](const char* name, const std::vector<cplx>& ev) {
        std::cout << name;
        for (const auto& z : ev) {
            std::cout << " " << num(z.real());
            if (z.imag() != 0.0)
                std::cout << (z.imag() > 0 ? "+" : "") << num(z.imag()) << "i";
        }
        std::cout << "\n";
    };
    print("ascending_phi", ascending_spectrum(p.h_s, std::sqrt(2.0)));
    print("ascending_pi", ascending_spectrum(p.g_s, 1.0 / std::sqrt(2.0)));
    DescendantSpectrum ds = descendant_spectrum(p, K);
    std::cout << "l,sector,expected,found,error,scaling_dimension\n";
    for (const auto& l : ds.lines)
        std::cout << l.l << "," << l.sector << "," << num(l.expected) << "," << num(l.found) << "," << num(l.error)
                  << "," << num(-std::log2(l.found)) << "\n";
    return 0;
}

int run_flow(const Globals& g, const std::string& disp, int levels, const std::string& out)
{
    if (levels < 0)
        throw UsageError("--levels must be nonnegative");
    FlowReport r = flow_report(parse_dispersion(disp), levels, g.grid);
    json j = flow_report_to_json(r);
    if (out.empty() || out == "-")
        std::cout << j.dump(2) << "\n";
    else
        write_json(out, j);
    return 0;
}

int exit_code_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::LatticeTooSmall:
    case ErrorKind::NegativeMass:
    case ErrorKind::GaplessUnregulated:
        return 1;
    default:
        return 2;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"wavelet-based Gaussian MERA toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--grid", g.grid, "frequency grid size")->check(CLI::Range(64, 1 << 22));
    app.add_option("--tol", g.tol, "perfect reconstruction tolerance")->check(CLI::PositiveNumber);
    app.add_option("--quad-points", g.quad_points, "quadrature points")->check(CLI::Range(1 << 12, 1 << 24));
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--seed", g.seed, "seed for randomized checks");
    app.add_flag("--json-errors", g.json_errors, "report every error as JSON on stderr");

    std::string disp = "harmonic:m=0", out, report, in, pair, csv, Ks = "1..3", Ls = "1..5", strategy = "redesign",
                gnuplot;
    int K = 2, L = 4, layers = 8, N = 2048, J = 12, levels = 5;
    bool verify = false;
    double squeeze = 1.0;

    auto* design = app.add_subcommand("design", "design a filter pair");
    design->add_option("--dispersion", disp);
    design->add_option("--K", K)->check(CLI::Range(1, 16));
    design->add_option("--L", L)->check(CLI::Range(1, 16));
    design->add_option("--out", out);
    design->add_option("--report", report);
    std::string sweep_spec;
    design->add_option("--sweep", sweep_spec, "K=a..b,L=c..d; writes the sweep CSV to --out");

    auto* sweep = app.add_subcommand("sweep", "design over a K, L grid");
    sweep->add_option("--dispersion", disp);
    sweep->add_option("--K", Ks, "range a..b");
    sweep->add_option("--L", Ls, "range a..b");
    sweep->add_option("--out", out);
    sweep->add_option("--gnuplot", gnuplot, "write a gnuplot script for the CSV");

    auto* circuit = app.add_subcommand("circuit", "factor a pair into a binary circuit");
    circuit->add_option("--in", in)->required();
    circuit->add_option("--out", out);
    circuit->add_option("--squeeze", squeeze)->check(CLI::PositiveNumber);
    circuit->add_flag("--verify", verify);

    auto* simulate = app.add_subcommand("simulate", "compare MERA and exact covariances");
    simulate->add_option("--pair", pair, "fixed pair for every layer; otherwise designed per layer");
    simulate->add_option("--K", K)->check(CLI::Range(1, 16));
    simulate->add_option("--L", L)->check(CLI::Range(1, 16));
    simulate->add_option("--layers", layers);
    simulate->add_option("--N", N);
    simulate->add_option("--dispersion", disp);
    simulate->add_option("--strategy", strategy, "redesign | fixed_after:<l>");
    simulate->add_option("--report", report);
    simulate->add_option("--csv", csv);

    auto* casc = app.add_subcommand("cascade", "sample scaling and wavelet functions");
    casc->add_option("--pair", pair)->required();
    casc->add_option("--J", J);
    casc->add_option("--out", out);

    auto* spectrum = app.add_subcommand("spectrum", "ascending superoperator spectrum");
    spectrum->add_option("--pair", pair)->required();
    spectrum->add_option("--K", K)->check(CLI::Range(1, 16));

    auto* flow = app.add_subcommand("flow", "dispersion renormalization flow");
    flow->add_option("--dispersion", disp);
    flow->add_option("--levels", levels);
    flow->add_option("--out", out);

    auto usage = [&](const std::string& msg) {
        if (g.json_errors)
            std::cerr << json{{"error", "UsageError"}, {"message", msg}, {"details", json::object()}}.dump() << "\n";
        else
            std::cerr << "usage error: " << msg << "\n";
        return 1;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        if (g.json_errors)
            return usage(e.what());
        return app.exit(e) == 0 ? 0 : 1;
    }

    Eigen::setNbThreads(g.threads);
    try {
        if (*design && !sweep_spec.empty()) {
            auto comma = sweep_spec.find(',');
            if (sweep_spec.rfind("K=", 0) != 0 || comma == std::string::npos ||
                sweep_spec.compare(comma + 1, 2, "L=") != 0)
                throw UsageError("--sweep expects K=a..b,L=c..d, got " + sweep_spec);
            return run_sweep(g, disp, sweep_spec.substr(2, comma - 2), sweep_spec.substr(comma + 3), out, gnuplot);
        }
        if (*design)
            return run_design(g, disp, K, L, out, report);
        if (*sweep)
            return run_sweep(g, disp, Ks, Ls, out, gnuplot);
        if (*circuit)
            return run_circuit(in, out, verify, squeeze);
        if (*simulate)
            return run_simulate(g, pair, K, L, layers, N, disp, strategy, report, csv);
        if (*casc)
            return run_cascade(pair, J, out);
        if (*spectrum)
            return run_spectrum(pair, K);
        if (*flow)
            return run_flow(g, disp, levels, out);
    } catch (const Error& e) {
        int code = exit_code_for(e.kind());
        if (code == 1 && !g.json_errors)
            std::cerr << "usage error: " << e.what() << "\n";
        else
            std::cerr << e.to_json().dump() << "\n";
        return code;
    } catch (const std::invalid_argument& e) {
        return usage(e.what());
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "InternalError"}, {"message", e.what()}, {"details", json::object()}}.dump() << "\n";
        return 2;
    }
    return 1;
}
