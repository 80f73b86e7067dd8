#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pademor::experiment {

// 17 significant digits round-trips a double; '.' decimal regardless of locale
// because snprintf is only used with the "C" numeric conventions here.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt(long long v) { return std::to_string(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }

// One CSV table: '#' metadata lines, a header, rows.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }

    void row(std::vector<std::string> cells) {
        if (cells.size() != columns_.size())
            throw std::logic_error("CsvTable: row has " + std::to_string(cells.size()) + " cells, header has " +
                                   std::to_string(columns_.size()));
        rows_.push_back(std::move(cells));
    }

    std::string header() const {
        std::string h;
        for (std::size_t k = 0; k < columns_.size(); ++k) h += (k ? "," : "") + columns_[k];
        return h;
    }

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << '\n';
        out << header() << '\n';
        for (const auto& r : rows_) {
            for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
            out << '\n';
        }
        if (!out) throw std::runtime_error("write failed: " + path);
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace pademor::experiment
