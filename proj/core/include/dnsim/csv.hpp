#ifndef DNSIM_CSV_HPP
#define DNSIM_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace dnsim {

/// Exact, locale-independent formatting of a double: shortest representation
/// that round-trips bit-for-bit through parsing.
std::string format_double(double x);

double parse_double(const std::string& s);

/// Comma-separated writer with a fixed header row, '.' decimal separator and
/// LF line endings. Headers are stable; downstream tooling never parses
/// free text.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace dnsim

#endif
