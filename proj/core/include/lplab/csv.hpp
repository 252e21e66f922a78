#pragma once

#include "lplab/model.hpp"
#include "lplab/simulate.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace lplab {

// 12 significant digits.
std::string format_number(double x);

// CSV with a leading "# ..." provenance comment line.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& provenance,
              const std::vector<std::string>& header);

    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
    CsvWriter& cell(std::size_t x) { return cell(static_cast<long long>(x)); }
    void end_row();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t columns_;
    std::vector<std::string> row_;
};

struct NumericTable {
    std::vector<std::string> names;
    MatrixXd values;

    Eigen::Index column(const std::string& name) const;
};

// Reads a header plus numeric rows; lines starting with '#' are skipped.
NumericTable read_numeric_csv(const std::string& path);

void write_path_csv(const SimulatedPath& path, const std::string& file, const std::string& provenance);
void write_path_csv(const QvarPath& path, const std::string& file, const std::string& provenance);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace lplab
