#include "nlrlda/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlrlda {

Eigen::Index LabeledDataset::count(int label) const {
    Eigen::Index c = 0;
    for (int l : labels)
        if (l == label) ++c;
    return c;
}

void LabeledDataset::validate() const {
    if (static_cast<Eigen::Index>(labels.size()) != features.cols())
        throw dimension_mismatch("label count " + std::to_string(labels.size()) +
                                 " does not match sample count " + std::to_string(features.cols()));
    for (std::size_t j = 0; j < labels.size(); ++j)
        if (labels[j] != 0 && labels[j] != 1)
            throw input_error("label at sample " + std::to_string(j) + " is " +
                              std::to_string(labels[j]) + ", expected 0 or 1");
    if (!features.allFinite()) throw non_finite_data("dataset contains non-finite feature values");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, long row, long col) {
    const std::string cell = trim(raw);
    if (cell.empty()) throw parse_error("missing cell", row, col);
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw parse_error("cannot parse '" + cell + "' as a number", row, col);
    return value;
}

}  // namespace

LabeledDataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw io_error("'" + path + "': empty file, header row required");
    const auto header = split_csv_line(line);

    long label_col = -1;
    std::vector<std::string> names;
    std::vector<long> feature_cols;
    for (long c = 0; c < static_cast<long>(header.size()); ++c) {
        const std::string name = trim(header[c]);
        if (name == "label") {
            if (label_col >= 0) throw parse_error("duplicate 'label' column", 1, c + 1);
            label_col = c;
        } else {
            names.push_back(name);
            feature_cols.push_back(c);
        }
    }
    if (label_col < 0) throw io_error("'" + path + "': no column named 'label' in header");
    if (feature_cols.empty()) throw io_error("'" + path + "': no feature columns");

    std::vector<std::vector<double>> columns;  // one inner vector per observation
    std::vector<int> labels;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw parse_error("expected " + std::to_string(header.size()) + " cells, got " +
                                  std::to_string(cells.size()),
                              row, static_cast<long>(cells.size()));
        const double lab = parse_cell(cells[label_col], row, label_col + 1);
        if (lab != 0.0 && lab != 1.0)
            throw parse_error("label must be 0 or 1, got '" + trim(cells[label_col]) + "'", row,
                              label_col + 1);
        std::vector<double> x(feature_cols.size());
        for (std::size_t k = 0; k < feature_cols.size(); ++k) {
            x[k] = parse_cell(cells[feature_cols[k]], row, feature_cols[k] + 1);
            if (!std::isfinite(x[k])) throw parse_error("non-finite value", row, feature_cols[k] + 1);
        }
        columns.push_back(std::move(x));
        labels.push_back(static_cast<int>(lab));
    }

    LabeledDataset data;
    data.feature_names = std::move(names);
    data.labels = std::move(labels);
    data.features.resize(static_cast<Eigen::Index>(feature_cols.size()),
                         static_cast<Eigen::Index>(columns.size()));
    for (Eigen::Index j = 0; j < data.features.cols(); ++j)
        for (Eigen::Index i = 0; i < data.features.rows(); ++i)
            data.features(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    data.validate();
    return data;
}

void write_csv(const LabeledDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    const Eigen::Index p = data.dim();
    for (Eigen::Index i = 0; i < p; ++i) {
        if (i < static_cast<Eigen::Index>(data.feature_names.size()) &&
            !data.feature_names[static_cast<std::size_t>(i)].empty())
            out << data.feature_names[static_cast<std::size_t>(i)];
        else
            out << 'f' << i;
        out << ',';
    }
    out << "label\n";
    std::ostringstream line;
    line.precision(17);
    for (Eigen::Index j = 0; j < data.size(); ++j) {
        line.str("");
        for (Eigen::Index i = 0; i < p; ++i) line << data.features(i, j) << ',';
        line << data.labels[static_cast<std::size_t>(j)] << '\n';
        out << line.str();
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace nlrlda
