#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace tfem {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Comma-separated writer with a fixed header. Throws std::runtime_error when
/// the file cannot be opened or a row has the wrong width.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void row_with_id(std::size_t id, const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t width_;
};

} // namespace tfem
