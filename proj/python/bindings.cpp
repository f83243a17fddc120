#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wavemera/circuit.hpp"
#include "wavemera/continuum.hpp"
#include "wavemera/design.hpp"
#include "wavemera/dispersion.hpp"
#include "wavemera/error.hpp"
#include "wavemera/io.hpp"
#include "wavemera/mera.hpp"

namespace py = pybind11;
using namespace wavemera;

PYBIND11_MODULE(_wavemera, m)
{
    m.doc() = "Wavelet filter design and Gaussian MERA covariances";

    static py::exception<Error> exc(m, "WavemeraError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = exc;
            py::object inst = err(e.what());
            inst.attr("kind") = to_string(e.kind());
            inst.attr("details") = e.details().dump();
            PyErr_SetObject(err.ptr(), inst.ptr());
        }
    });

    py::enum_<Channel>(m, "Channel").value("g", Channel::g).value("h", Channel::h);

    py::class_<FirFilter>(m, "FirFilter")
        .def(py::init<int, std::vector<double>>(), py::arg("offset"), py::arg("coeffs"))
        .def_property_readonly("offset", &FirFilter::offset)
        .def_property_readonly("last", &FirFilter::last)
        .def_property_readonly("coeffs", &FirFilter::coeffs)
        .def("__call__", &FirFilter::operator())
        .def("__getitem__", &FirFilter::operator[])
        .def("__len__", &FirFilter::size)
        .def("sum", &FirFilter::sum)
        .def("reversed", &FirFilter::reversed)
        .def("shifted", &FirFilter::shifted)
        .def("__mul__", [](const FirFilter& a, const FirFilter& b) { return a * b; })
        .def("__repr__", [](const FirFilter& f) { return "FirFilter(offset=" + std::to_string(f.offset()) + ", size=" + std::to_string(f.size()) + ")"; });

    py::class_<FilterPair>(m, "FilterPair")
        .def_readonly("g_s", &FilterPair::g_s)
        .def_readonly("g_w", &FilterPair::g_w)
        .def_readonly("h_s", &FilterPair::h_s)
        .def_readonly("h_w", &FilterPair::h_w)
        .def_readonly("pr_residual", &FilterPair::pr_residual)
        .def_readonly("M", &FilterPair::M)
        .def("to_json", [](const FilterPair& p) { return pair_to_json(p).dump(); })
        .def_static("from_json", [](const std::string& s) { return pair_from_json(json::parse(s)); });

    m.def("derive_wavelet", &derive_wavelet, py::arg("g_s"), py::arg("h_s"));
    m.def("haar_pair", &haar_pair);
    m.def("pr_residual", &pr_residual, py::arg("pair"), py::arg("grid_size") = kDefaultGrid);
    m.def("decomposition_map", [](const FilterPair& p, Channel c, int N) { return decomposition_map(p, c, N).m; });

    py::class_<Dispersion>(m, "Dispersion")
        .def_static("harmonic", &Dispersion::harmonic, py::arg("m"))
        .def_static("flat", &Dispersion::flat, py::arg("c"))
        .def_static("tabulated", &Dispersion::tabulated, py::arg("k"), py::arg("w"))
        .def_static("parse", &Dispersion::parse)
        .def("__call__", &Dispersion::operator())
        .def("at_pi", &Dispersion::at_pi)
        .def("renormalized", &Dispersion::renormalized)
        .def("describe", &Dispersion::describe);
    m.def("mass_flow", &mass_flow, py::arg("m"), py::arg("levels"));
    m.def("fitted_mass", &fitted_mass, py::arg("d"), py::arg("grid") = 4096);

    py::class_<DesignParams>(m, "DesignParams")
        .def(py::init<>())
        .def_readwrite("K", &DesignParams::K)
        .def_readwrite("L", &DesignParams::L)
        .def_readwrite("tol_pr", &DesignParams::tol_pr)
        .def_readwrite("grid_size", &DesignParams::grid_size);
    py::class_<DesignReport>(m, "DesignReport")
        .def_readonly("epsilon", &DesignReport::epsilon)
        .def_readonly("pr_residual", &DesignReport::pr_residual)
        .def_readonly("positivity_min", &DesignReport::positivity_min)
        .def_readonly("L_eff", &DesignReport::L_eff)
        .def_readonly("M", &DesignReport::M)
        .def_readonly("method", &DesignReport::method)
        .def("stability_max_abs", &DesignReport::stability_max_abs);
    m.def(
        "design_pair",
        [](const Dispersion& d, int K, int L) {
            DesignParams p;
            p.K = K;
            p.L = L;
            DesignResult r = design_pair(d, p);
            return std::make_pair(r.pair, r.report);
        },
        py::arg("d"), py::arg("K") = 2, py::arg("L") = 4);
    m.def("epsilon_of", &epsilon_of, py::arg("pair"), py::arg("d"), py::arg("grid") = kDefaultGrid);
    m.def("thiran_allpass", &thiran_allpass);
    m.def("stability_spectrum", &stability_spectrum, py::arg("a_s"), py::arg("M"), py::arg("tol") = 1e-8);

    py::class_<BinaryCircuit>(m, "BinaryCircuit")
        .def_property_readonly("M", &BinaryCircuit::M)
        .def_readwrite("squeeze", &BinaryCircuit::squeeze)
        .def_readonly("shift", &BinaryCircuit::shift)
        .def("gates", [](const BinaryCircuit& c) {
            std::vector<Eigen::Matrix2d> out;
            for (const auto& g : c.gates)
                out.push_back(g.m);
            return out;
        });
    m.def("decompose", &decompose, py::arg("pair"), py::arg("tol_degenerate") = 1e-9);
    m.def("compose", &compose_original);
    m.def("to_lattice_symplectic", [](const BinaryCircuit& c, int N) {
        auto [A, B] = to_lattice_symplectic(c, N);
        return std::make_pair(A.m, B.m);
    });

    py::class_<SampledFunction>(m, "SampledFunction")
        .def_readonly("J", &SampledFunction::J)
        .def_readonly("origin", &SampledFunction::origin)
        .def_readonly("values", &SampledFunction::v)
        .def("x", [](const SampledFunction& f) {
            std::vector<double> x;
            for (std::size_t i = 0; i < f.v.size(); ++i)
                x.push_back(f.x(i));
            return x;
        });
    m.def("cascade", &cascade, py::arg("a_s"), py::arg("J") = 12);
    m.def("wavelet_function", &wavelet_function, py::arg("pair"), py::arg("channel"), py::arg("J") = 12);
    m.def("massless_relation_error", &massless_relation_error, py::arg("pair"), py::arg("J"), py::arg("k_max"),
          py::arg("nk") = 257);
    m.def("descendant_spectrum", [](const FilterPair& p, int K) { return descendant_spectrum(p, K).values; });
    m.def("dual_basis_error", [](const FilterPair& p, int J) { return dual_basis_check(p, J).max_exact_error; },
          py::arg("pair"), py::arg("J") = 12);

    py::class_<LayerStack>(m, "LayerStack")
        .def_property_readonly("size", &LayerStack::size)
        .def("squeezes", &LayerStack::squeezes)
        .def("epsilons", [](const LayerStack& s) {
            std::vector<double> e;
            for (const auto& l : s.layers)
                e.push_back(l.epsilon);
            return e;
        });
    m.def(
        "build_stack",
        [](const Dispersion& d, int K, int L, int layers, int fixed_after) {
            DesignParams p;
            p.K = K;
            p.L = L;
            return build_stack(d, p, layers,
                               fixed_after < 0 ? StackStrategy::redesign() : StackStrategy::fixed_after(fixed_after));
        },
        py::arg("d"), py::arg("K") = 2, py::arg("L") = 4, py::arg("layers") = 4, py::arg("fixed_after") = -1);
    m.def("stack_from_pair", &stack_from_pair);
    m.def("mera_covariance", [](const LayerStack& s, int N) {
        CovariancePair c = mera_covariance(s, N);
        return std::make_pair(c.q, c.p);
    });
    m.def(
        "exact_covariance",
        [](const Dispersion& d, int N, int Q) {
            CovariancePair c = exact_covariance(d, N, Q);
            return py::make_tuple(c.q, c.p, c.regulated);
        },
        py::arg("d"), py::arg("N"), py::arg("quad_points") = 1 << 16);
    m.def(
        "error_report",
        [](const LayerStack& s, int N, int Q) { return error_report_to_json(error_report(s, N, Q)).dump(); },
        py::arg("stack"), py::arg("N"), py::arg("quad_points") = 1 << 16);
    m.def("theorem_bound", [](double B, double D, double M, double Omega, double eps, int L) {
        TheoremBound t = theorem_bound(B, D, M, Omega, eps, L);
        return std::make_pair(t.bound_p, t.bound_q_prefactor);
    });
}
