#include "ape/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ape {

const std::vector<double>& Snapshot::field(const std::string& name) const {
    for (const auto& [n, v] : fields)
        if (n == name) return v;
    throw IoError("snapshot has no field named " + name);
}

bool Snapshot::has(const std::string& name) const {
    for (const auto& [n, v] : fields)
        if (n == name) return true;
    return false;
}

void write_snapshot(const std::string& path, const Snapshot& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    char magic[8] = {'A', 'P', 'E', 'V', '1', 0, 0, 0};
    f.write(magic, 8);
    const std::int32_t dims[4] = {s.n1, s.n2, s.n3, static_cast<std::int32_t>(s.fields.size())};
    f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    f.write(reinterpret_cast<const char*>(&s.time), sizeof(double));
    for (const auto& [name, vals] : s.fields) {
        char nb[16] = {0};
        std::strncpy(nb, name.c_str(), 15);
        f.write(nb, 16);
        const std::uint64_t count = vals.size();
        f.write(reinterpret_cast<const char*>(&count), sizeof(count));
        f.write(reinterpret_cast<const char*>(vals.data()),
                static_cast<std::streamsize>(sizeof(double) * vals.size()));
    }
    if (!f) throw IoError("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, "APEV1", 5) != 0) throw IoError("bad snapshot magic: " + path);
    std::int32_t dims[4];
    f.read(reinterpret_cast<char*>(dims), sizeof(dims));
    Snapshot s;
    s.n1 = dims[0];
    s.n2 = dims[1];
    s.n3 = dims[2];
    f.read(reinterpret_cast<char*>(&s.time), sizeof(double));
    for (int i = 0; i < dims[3]; ++i) {
        char nb[16];
        f.read(nb, 16);
        std::uint64_t count = 0;
        f.read(reinterpret_cast<char*>(&count), sizeof(count));
        if (!f || count > (1ull << 32)) throw IoError("corrupt snapshot: " + path);
        std::vector<double> vals(count);
        f.read(reinterpret_cast<char*>(vals.data()),
               static_cast<std::streamsize>(sizeof(double) * count));
        s.fields.emplace_back(std::string(nb, strnlen(nb, 16)), std::move(vals));
    }
    if (!f) throw IoError("truncated snapshot: " + path);
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream f;
    std::size_t ncols;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->f.open(path);
    if (!impl_->f) {
        delete impl_;
        throw IoError("cannot open for writing: " + path);
    }
    impl_->ncols = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        impl_->f << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != impl_->ncols) throw IoError("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->f << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::flush() { impl_->f.flush(); }

int CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw IoError("csv has no column " + name);
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const int c = col(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(f, line)) throw IoError("empty csv: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.columns.size()) throw IoError("ragged csv: " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace ape
