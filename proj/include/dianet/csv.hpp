#pragma once

#include <string>
#include <vector>

namespace dianet {

// Minimal comma-separated reader/writer for the simple files this project
// exchanges: UTF-8, first row header, "." decimal point, no quoting.

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);

// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double v);

}  // namespace dianet
