#pragma once

#include "qm/basis.hpp"

#include <map>
#include <string>
#include <vector>

namespace colhel::cli {

struct LevelKey {
    std::string family;
    int N = 0, n = 0;
    bool operator<(const LevelKey& o) const {
        return std::tie(family, N, n) < std::tie(o.family, o.N, o.n);
    }
};

struct LevelValue {
    double binding = 0;
    bool converged = true;
    int basis_size = 0;
};

using EnergyTable = std::map<LevelKey, LevelValue>;

struct CompareReport {
    struct Row {
        LevelKey key;
        double computed = 0, reference = 0, abs_dev = 0, rel_dev = 0;
        bool pass = false;
    };
    std::vector<Row> rows;
    std::vector<LevelKey> missing_in_computed;
    std::vector<LevelKey> missing_in_reference;
    bool all_pass = false;
};

// Per-level deviations of two binding-energy tables keyed by (family, N, n);
// missing levels are reported, never skipped silently.
CompareReport compare_tables(const EnergyTable& computed, const EnergyTable& reference,
                             double rel_tolerance);

// CSV schema: family,N,n,binding_energy,converged,basis_size
EnergyTable read_energy_table(const std::string& path);
void write_energy_table(const std::string& path, const EnergyTable& table);
void write_compare_report(const std::string& path, const CompareReport& report);

} // namespace colhel::cli
