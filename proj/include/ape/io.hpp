#pragma once

// Binary snapshot format:
//   magic "APEV1" (5 bytes + 3 pad), int32 n1, n2, n3, nfields, float64 time,
//   then per field: 16-byte zero-padded name, uint64 count, count float64
//   values in row-major (i3, i2, i1) order (boundary fields are one plane).
// CSV output is fixed-format (%.17g), no timestamps, fully deterministic.

#include "ape/grid.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ape {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Snapshot {
    int n1 = 0, n2 = 0, n3 = 0;
    double time = 0.0;
    std::vector<std::pair<std::string, std::vector<double>>> fields;

    const std::vector<double>& field(const std::string& name) const;
    bool has(const std::string& name) const;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    void flush();

  private:
    struct Impl;
    Impl* impl_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    int col(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

std::string format_double(double v);

} // namespace ape
