#pragma once

#include "fluxcharge/analysis.hpp"
#include "fluxcharge/netlist.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fluxcharge::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(FLUXCHARGE_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline NetlistDocument load_fixture(const std::string& name) {
    return parse_netlist(slurp(fixture_path(name)));
}

inline AnalysisResult analyze_fixture(const std::string& name,
                                      const AnalyzeOptions& options = {}) {
    return analyze_circuit(load_fixture(name), options);
}

/// Parse "p/q" literals into an exact matrix; rows separated by ';',
/// entries by whitespace. Keeps expected values readable in tests.
inline RationalMatrix rational_matrix(const std::string& text) {
    std::vector<RationalVector> rows;
    std::stringstream row_stream(text);
    std::string row_text;
    std::size_t cols = 0;
    while (std::getline(row_stream, row_text, ';')) {
        RationalVector row;
        std::istringstream entries(row_text);
        std::string entry;
        while (entries >> entry) row.push_back(parse_rational(entry).value());
        cols = row.size();
        rows.push_back(std::move(row));
    }
    RationalMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    return m;
}

} // namespace fluxcharge::testing
