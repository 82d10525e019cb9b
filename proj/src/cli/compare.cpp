#include "cli/compare.hpp"

#include "core/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace colhel::cli {

CompareReport compare_tables(const EnergyTable& computed, const EnergyTable& reference,
                             double rel_tolerance) {
    CompareReport report;
    report.all_pass = true;
    for (const auto& [key, ref] : reference) {
        auto it = computed.find(key);
        if (it == computed.end()) {
            report.missing_in_computed.push_back(key);
            report.all_pass = false;
            continue;
        }
        CompareReport::Row row;
        row.key = key;
        row.computed = it->second.binding;
        row.reference = ref.binding;
        row.abs_dev = std::abs(row.computed - row.reference);
        row.rel_dev = ref.binding != 0 ? row.abs_dev / std::abs(ref.binding) : row.abs_dev;
        row.pass = row.rel_dev <= rel_tolerance;
        if (!row.pass)
            report.all_pass = false;
        report.rows.push_back(row);
    }
    for (const auto& [key, val] : computed)
        if (!reference.count(key))
            report.missing_in_reference.push_back(key);
    return report;
}

EnergyTable read_energy_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open table: " + path);
    EnergyTable table;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        LevelKey key;
        LevelValue value;
        std::getline(ss, key.family, ',');
        std::getline(ss, field, ',');
        key.N = std::stoi(field);
        std::getline(ss, field, ',');
        key.n = std::stoi(field);
        std::getline(ss, field, ',');
        value.binding = std::stod(field);
        if (std::getline(ss, field, ','))
            value.converged = field == "1" || field == "true";
        if (std::getline(ss, field, ','))
            value.basis_size = std::stoi(field);
        table[key] = value;
    }
    return table;
}

void write_energy_table(const std::string& path, const EnergyTable& table) {
    CsvWriter csv(path);
    csv.header("family,N,n,binding_energy,converged,basis_size");
    for (const auto& [key, value] : table) {
        csv.raw_row(key.family + "," + std::to_string(key.N) + "," + std::to_string(key.n) + "," +
                    format_double(value.binding) + "," + (value.converged ? "1" : "0") + "," +
                    std::to_string(value.basis_size));
    }
}

void write_compare_report(const std::string& path, const CompareReport& report) {
    CsvWriter csv(path);
    csv.header("family,N,n,computed,reference,abs_dev,rel_dev,pass");
    for (const auto& row : report.rows) {
        csv.raw_row(row.key.family + "," + std::to_string(row.key.N) + "," +
                    std::to_string(row.key.n) + "," + format_double(row.computed) + "," +
                    format_double(row.reference) + "," + format_double(row.abs_dev) + "," +
                    format_double(row.rel_dev) + "," + (row.pass ? "1" : "0"));
    }
    for (const auto& key : report.missing_in_computed)
        csv.raw_row(key.family + "," + std::to_string(key.N) + "," + std::to_string(key.n) +
                    ",missing,,,,0");
}

} // namespace colhel::cli
