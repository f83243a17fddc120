#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wavemera {

// Evaluable ω(k). Cheap to copy; renormalized levels share a memo cache.
class Dispersion {
public:
    enum class Kind { harmonic, tabulated, renormalized };

    Dispersion();

    static Dispersion harmonic(double m);
    // samples of (k, ω) with |k| covering [0, π]; ω(-k) = ω(k) is assumed
    static Dispersion tabulated(std::vector<double> k, std::vector<double> w);
    static Dispersion flat(double c);
    // "harmonic:m=<real>" or "tabulated:<csv path>"
    static Dispersion parse(const std::string& spec);

    double operator()(double k) const;
    double at_pi() const;

    Kind kind() const;
    int level() const;
    // mass of the harmonic base, if any
    std::optional<double> base_mass() const;
    std::string describe() const;

    Dispersion renormalized() const;

    struct Impl;

private:
    explicit Dispersion(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

Dispersion harmonic(double m);
Dispersion renormalize(const Dispersion& d);
Dispersion renormalize(const Dispersion& d, int levels);

std::vector<double> mass_flow(double m, int levels);

// least squares of ω(k)^2 against α + β sin^2(k/2); returns sqrt(α/β)
double fitted_mass(const Dispersion& d, int grid = 4096);

// sup_k |ω(k)/ω(π) - |sin(k/2)||
double massless_shape_deviation(const Dispersion& d, int grid = 4096);
bool is_massless_shape(const Dispersion& d, int grid = 4096, double tol = 1e-12);

struct FlowLevel {
    int l = 0;
    double omega_pi = 0.0;
    double sup_omega = 0.0;
    double flatness = 0.0; // sup_k |ω/ω(π) - 1|
    std::optional<double> fitted_mass;
    std::optional<double> closed_form_mass;
};

struct FlowReport {
    std::vector<FlowLevel> levels;
    double Omega() const;
};

FlowReport flow_report(const Dispersion& d, int levels, int grid = 4096);

} // namespace wavemera
