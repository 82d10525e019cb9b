#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace colhel {

// Minimal CSV emitter. Numbers are printed with %.17g so that identical runs
// produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::string& line);
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);

private:
    std::FILE* f_;
};

std::string format_double(double v);

} // namespace colhel
