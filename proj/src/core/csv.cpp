#include "core/csv.hpp"

namespace colhel {

CsvWriter::CsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
    if (!f_)
        throw std::runtime_error("cannot open output file: " + path);
}

CsvWriter::~CsvWriter() {
    if (f_)
        std::fclose(f_);
}

void CsvWriter::header(const std::string& line) {
    std::fprintf(f_, "%s\n", line.c_str());
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f_, i + 1 == values.size() ? "%.17g" : "%.17g,", values[i]);
    std::fputc('\n', f_);
}

void CsvWriter::raw_row(const std::string& line) {
    std::fprintf(f_, "%s\n", line.c_str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace colhel
