#ifndef QGT_IO_HPP
#define QGT_IO_HPP

#include <string>
#include <vector>

namespace qgt {

// CSV payloads: header line first, floats at 17 significant digits so a
// write-then-read round trip is bit-exact.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string format_double(double v); // %.17g
std::string csv_to_string(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace qgt

#endif
