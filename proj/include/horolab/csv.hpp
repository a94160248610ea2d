#pragma once

#include <string>
#include <vector>

namespace horolab {

/// Minimal RFC-4180 table: CRLF line endings, quoting only where needed.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 if absent
    std::vector<double> numeric_column(const std::string& name) const;
};

std::string write_csv(const CsvTable& table);
CsvTable read_csv(const std::string& text);

/// fixed %.12g rendering used for all CSV numeric cells
std::string format_num(double v);

} // namespace horolab
