#pragma once

// JSON and CSV persistence of the library's reports. JSON numbers use the
// shortest round-trip representation; CSV numbers use 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "autores/asymptotics.hpp"
#include "autores/lyapunov.hpp"
#include "autores/perturbations.hpp"
#include "autores/simulation.hpp"

namespace autores {

using Json = nlohmann::ordered_json;

/// "%.17g"; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

/// Comma-separated table with a header row and '\n' line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    [[nodiscard]] std::string str() const;
    [[nodiscard]] std::size_t rows() const { return rows_; }

private:
    std::string text_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

/// Writes the file in binary mode, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);
/// Throws IoError when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Pretty-printed JSON text terminated by a newline.
std::string dump_json(const Json& j);

Json to_json(const ModelParams& p);
Json to_json(const IntegratorConfig& c);
Json to_json(const Distribution& d);
Json to_json(const SeriesCoeffs& s);
Json to_json(const CertificateReport& r);
Json to_json(const BranchClassification& c);
Json to_json(const MonteCarloReport& r);
Json to_json(const NuEstimate& e);
/// Summary only; the sample table goes to CSV.
Json to_json(const DuffingComparison& d);

/// Inverse of to_json(SeriesCoeffs). Throws ConfigError on malformed input.
SeriesCoeffs series_from_json(const Json& j);

}  // namespace autores
