#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wavemera/circuit.hpp"
#include "wavemera/continuum.hpp"
#include "wavemera/design.hpp"
#include "wavemera/dispersion.hpp"
#include "wavemera/mera.hpp"

namespace wavemera {

using json = nlohmann::json;

json filter_to_json(const FirFilter& f);
FirFilter filter_from_json(const json& j);

// {"name", "g_s", "h_s", "meta"}; wavelets are re-derived on load
json pair_to_json(const FilterPair& p, const std::string& name = "", const json& meta = json::object());
FilterPair pair_from_json(const json& j);

// throws std::invalid_argument naming the first schema violation
void validate_pair_json(const json& j);

json design_report_to_json(const DesignReport& r);
json circuit_to_json(const BinaryCircuit& c);
BinaryCircuit circuit_from_json(const json& j);
json flow_report_to_json(const FlowReport& r);
json error_report_to_json(const ErrorReport& r);

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

// shortest round-trip formatting, so CSV output is byte-stable
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void row_mixed(const std::vector<std::string>& vals);
    void close();

private:
    std::string path_;
    std::string buf_;
};

} // namespace wavemera
