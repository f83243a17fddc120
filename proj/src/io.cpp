#include "wavemera/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace wavemera {

json filter_to_json(const FirFilter& f) { return {{"offset", f.offset()}, {"coeffs", f.coeffs()}}; }

FirFilter filter_from_json(const json& j)
{
    return FirFilter(j.at("offset").get<int>(), j.at("coeffs").get<std::vector<double>>());
}

json pair_to_json(const FilterPair& p, const std::string& name, const json& meta)
{
    json m = meta;
    m["pr_residual"] = p.pr_residual;
    return {{"name", name}, {"g_s", filter_to_json(p.g_s)}, {"h_s", filter_to_json(p.h_s)}, {"meta", m}};
}

void validate_pair_json(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("filter bank must be a JSON object");
    if (j.contains("name") && !j["name"].is_string())
        throw std::invalid_argument("'name' must be a string");
    for (const char* key : {"g_s", "h_s"}) {
        if (!j.contains(key) || !j[key].is_object())
            throw std::invalid_argument(std::string("missing filter '") + key + "'");
        const json& f = j[key];
        if (!f.contains("offset") || !f["offset"].is_number_integer())
            throw std::invalid_argument(std::string("'") + key + ".offset' must be an integer");
        if (!f.contains("coeffs") || !f["coeffs"].is_array() || f["coeffs"].empty())
            throw std::invalid_argument(std::string("'") + key + ".coeffs' must be a nonempty array");
        for (const auto& c : f["coeffs"])
            if (!c.is_number())
                throw std::invalid_argument(std::string("'") + key + ".coeffs' must hold numbers");
    }
    if (j.contains("meta") && !j["meta"].is_object())
        throw std::invalid_argument("'meta' must be an object");
}

FilterPair pair_from_json(const json& j)
{
    validate_pair_json(j);
    return derive_wavelet(filter_from_json(j["g_s"]), filter_from_json(j["h_s"]));
}

json design_report_to_json(const DesignReport& r)
{
    auto eigs = [](const std::vector<cplx>& v) {
        json a = json::array();
        for (const auto& z : v)
            a.push_back({z.real(), z.imag()});
        return a;
    };
    return {{"epsilon", r.epsilon},
            {"pr_residual", r.pr_residual},
            {"stability_max_abs_eig", {{"g", r.stability_max_abs(Channel::g)}, {"h", r.stability_max_abs(Channel::h)}}},
            {"stability_eigs", {{"g", eigs(r.stability_eigs_g)}, {"h", eigs(r.stability_eigs_h)}}},
            {"positivity_min", r.positivity_min},
            {"positivity_argmin", r.positivity_argmin},
            {"g0", r.g0},
            {"h0", r.h0},
            {"alpha", r.alpha},
            {"halfband_residual", r.halfband_residual},
            {"factor_residual", r.factor_residual},
            {"K", r.K},
            {"L", r.L},
            {"L_eff", r.L_eff},
            {"M", r.M},
            {"method", r.method}};
}

json circuit_to_json(const BinaryCircuit& c)
{
    json gates = json::array();
    for (const auto& g : c.gates)
        gates.push_back({{"parity", g.parity == Parity::even ? "even" : "odd"},
                         {"m", {{g.m(0, 0), g.m(0, 1)}, {g.m(1, 0), g.m(1, 1)}}}});
    return {{"M", c.M()},
            {"squeeze", c.squeeze},
            {"shift", c.shift},
            {"convention", "site 2n scaling, 2n+1 wavelet; gates in application order"},
            {"gates", gates}};
}

BinaryCircuit circuit_from_json(const json& j)
{
    BinaryCircuit c;
    c.squeeze = j.value("squeeze", 1.0);
    c.shift = j.value("shift", 0);
    for (const auto& g : j.at("gates")) {
        Gate2 gate;
        std::string par = g.at("parity").get<std::string>();
        if (par != "even" && par != "odd")
            throw std::invalid_argument("gate parity must be 'even' or 'odd'");
        gate.parity = par == "even" ? Parity::even : Parity::odd;
        const json& m = g.at("m");
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                gate.m(r, s) = m.at(r).at(s).get<double>();
        c.gates.push_back(gate);
    }
    if (j.contains("M") && j["M"].get<int>() != c.M())
        throw std::invalid_argument("'M' does not match the number of gates");
    return c;
}

json flow_report_to_json(const FlowReport& r)
{
    json levels = json::array();
    for (const auto& l : r.levels) {
        json e = {{"l", l.l}, {"omega_pi", l.omega_pi}, {"sup_omega", l.sup_omega}, {"flatness", l.flatness}};
        if (l.fitted_mass)
            e["fitted_mass"] = *l.fitted_mass;
        if (l.closed_form_mass)
            e["closed_form_mass"] = *l.closed_form_mass;
        levels.push_back(e);
    }
    return {{"levels", levels}, {"Omega", r.Omega()}};
}

json error_report_to_json(const ErrorReport& r)
{
    json sep = json::object();
    for (const auto& [s, e] : r.delta_q_regulated)
        sep[std::to_string(s)] = {{"measured", e.measured}, {"bound", e.bound}, {"q_norm", e.q_norm}};
    const BoundConstants& k = r.constants;
    json out = {{"N", r.N},
                {"delta_p", r.delta_p},
                {"bound_p", r.bound_p},
                {"delta_q_regulated", sep},
                {"omega_pi", r.omega_pi},
                {"quad_certificate", r.quad_certificate},
                {"constants",
                 {{"B", k.B}, {"D", k.D}, {"M", k.M}, {"Omega", k.Omega}, {"C", k.C}, {"epsilon", k.epsilon},
                  {"L_layers", k.L_layers}}}};
    if (r.delta_q)
        out["delta_q"] = *r.delta_q;
    if (r.bound_q)
        out["bound_q"] = *r.bound_q;
    return out;
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {}

void CsvWriter::header(const std::vector<std::string>& cols) { row_mixed(cols); }

void CsvWriter::row(const std::vector<double>& vals)
{
    std::vector<std::string> s;
    for (double v : vals)
        s.push_back(format_double(v));
    row_mixed(s);
}

void CsvWriter::row_mixed(const std::vector<std::string>& vals)
{
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i)
            buf_ += ',';
        buf_ += vals[i];
    }
    buf_ += '\n';
}

void CsvWriter::close()
{
    if (path_.empty() || path_ == "-") {
        std::fputs(buf_.c_str(), stdout);
        return;
    }
    std::ofstream out(path_);
    if (!out)
        throw std::invalid_argument("cannot write " + path_);
    out << buf_;
}

} // namespace wavemera
