#include "lplab/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lplab {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& provenance,
                     const std::vector<std::string>& header)
    : out_(path), path_(path), columns_(header.size()) {
    if (!out_) throw Error("cannot write '" + path + "'");
    out_ << "# " << provenance << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    row_.push_back(s);
    return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_number(x)); }

CsvWriter& CsvWriter::cell(long long x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
    if (row_.size() != columns_) throw Error("csv row width mismatch writing '" + path_ + "'");
    for (std::size_t i = 0; i < row_.size(); ++i) out_ << (i ? "," : "") << row_[i];
    out_ << '\n';
    row_.clear();
    if (!out_) throw Error("write failed for '" + path_ + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

Eigen::Index NumericTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<Eigen::Index>(i);
    throw Error("missing column '" + name + "'");
}

NumericTable read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    NumericTable t;
    std::vector<std::vector<double>> rows;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (t.names.empty()) {
            t.names = cells;
            continue;
        }
        if (cells.size() != t.names.size())
            throw Error(path + ": row " + std::to_string(lineno) + " has " +
                        std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(t.names.size()));
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || p != c.data() + c.size())
                throw Error(path + ": row " + std::to_string(lineno) + ": cannot parse '" + c + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (t.names.empty()) throw Error(path + ": missing header row");
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.names.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return t;
}

void write_path_csv(const SimulatedPath& path, const std::string& file, const std::string& provenance) {
    CsvWriter w(file, provenance, {"t", "y", "s", "u"});
    for (Eigen::Index t = 0; t < path.size(); ++t)
        w.cell(static_cast<long long>(t)).cell(path.y(t)).cell(path.s(t)).cell(path.u(t)).end_row();
}

void write_path_csv(const QvarPath& path, const std::string& file, const std::string& provenance) {
    const auto n = path.y.cols();
    std::vector<std::string> header{"t"};
    for (const char* base : {"y", "s", "u"})
        for (Eigen::Index c = 0; c < n; ++c) header.push_back(base + std::to_string(c + 1));
    CsvWriter w(file, provenance, header);
    for (Eigen::Index t = 0; t < path.size(); ++t) {
        w.cell(static_cast<long long>(t));
        for (const MatrixXd* m : {&path.y, &path.s, &path.u})
            for (Eigen::Index c = 0; c < n; ++c) w.cell((*m)(t, c));
        w.end_row();
    }
}

}  // namespace lplab
