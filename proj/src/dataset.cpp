#include "gbsvr/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gbsvr/rng.hpp"

namespace gbsvr {

void validate(const Dataset& d) {
    if (d.rows() < 1 || d.cols() < 1) {
        throw DataError("dataset must have at least one row and one column");
    }
    if (d.targets.size() != d.rows()) {
        throw DataError("target count does not match feature row count");
    }
    if (!d.features.allFinite() || !d.targets.allFinite()) {
        throw DataError("dataset contains non-finite values");
    }
    if (!d.feature_names.empty() &&
        static_cast<Index>(d.feature_names.size()) != d.cols()) {
        throw DataError("feature name count does not match column count");
    }
}

Matrix Standardization::transform_features(const Matrix& x) const {
    return (x.rowwise() - feature_means.transpose()).array().rowwise() /
           feature_stds.transpose().array();
}

Matrix Standardization::inverse_features(const Matrix& x) const {
    return (x.array().rowwise() * feature_stds.transpose().array()).matrix().rowwise() +
           feature_means.transpose();
}

Vector Standardization::transform_targets(const Vector& y) const {
    return (y.array() - target_mean) / target_std;
}

Vector Standardization::inverse_targets(const Vector& y) const {
    return y.array() * target_std + target_mean;
}

Dataset Standardization::transform(const Dataset& d) const {
    return Dataset{transform_features(d.features), transform_targets(d.targets),
                   d.feature_names};
}

std::pair<Dataset, Standardization> fit_standardize(const Dataset& d) {
    validate(d);
    const Index m = d.rows();
    if (m < 2) {
        throw std::invalid_argument("fit_standardize needs at least 2 rows");
    }

    Standardization s;
    s.feature_means = d.features.colwise().mean();
    Matrix centered = d.features.rowwise() - s.feature_means.transpose();
    s.feature_stds =
        (centered.array().square().colwise().sum() / static_cast<double>(m)).sqrt();
    for (Index j = 0; j < s.feature_stds.size(); ++j) {
        if (s.feature_stds[j] <= 0.0) s.feature_stds[j] = 1.0; // constant column
    }

    s.target_mean = d.targets.mean();
    s.target_std = std::sqrt((d.targets.array() - s.target_mean).square().sum() /
                             static_cast<double>(m));
    if (s.target_std <= 0.0) s.target_std = 1.0;

    return {s.transform(d), s};
}

std::vector<int> FoldPlan::fold(int f) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == f) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> FoldPlan::complement(int f) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != f) out.push_back(static_cast<int>(i));
    }
    return out;
}

FoldPlan kfold(const Dataset& d, int k, std::uint64_t seed) {
    const auto m = static_cast<int>(d.rows());
    if (k < 2 || k > m) {
        throw std::invalid_argument("kfold: k must be in [2, m]");
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    FoldPlan plan;
    plan.fold_count = k;
    plan.assignments.assign(m, 0);
    for (int pos = 0; pos < m; ++pos) {
        plan.assignments[order[pos]] = pos % k;
    }
    return plan;
}

Dataset subset(const Dataset& d, const std::vector<int>& row_indices) {
    Dataset out;
    out.features.resize(static_cast<Index>(row_indices.size()), d.cols());
    out.targets.resize(static_cast<Index>(row_indices.size()));
    for (std::size_t i = 0; i < row_indices.size(); ++i) {
        out.features.row(static_cast<Index>(i)) = d.features.row(row_indices[i]);
        out.targets[static_cast<Index>(i)] = d.targets[row_indices[i]];
    }
    out.feature_names = d.feature_names;
    return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double train_fraction,
                                             bool shuffle, std::uint64_t seed) {
    const auto m = static_cast<int>(d.rows());
    const auto train_count = static_cast<int>(std::floor(train_fraction * m));
    if (train_count < 1 || train_count >= m) {
        throw std::invalid_argument("train_test_split: fraction yields an empty side");
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (shuffle) {
        Rng rng(seed);
        rng.shuffle(order);
    }
    std::vector<int> train_idx(order.begin(), order.begin() + train_count);
    std::vector<int> test_idx(order.begin() + train_count, order.end());
    return {subset(d, train_idx), subset(d, test_idx)};
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || cell.empty()) {
        throw DataError("non-numeric cell at row " + std::to_string(row) + ", column " +
                        std::to_string(col) + ": '" + cell + "'");
    }
    return value;
}

} // namespace

Dataset load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }

    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t data_row = 0;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        auto cells = split_cells(line);
        if (has_header && line_no == 1) {
            names = cells;
            continue;
        }
        ++data_row;
        if (width == 0) {
            width = cells.size();
            if (width < 2) {
                throw DataError("row " + std::to_string(data_row) +
                                " has fewer than 2 columns");
            }
        } else if (cells.size() != width) {
            throw DataError("ragged row " + std::to_string(data_row) + ": expected " +
                            std::to_string(width) + " columns, got " +
                            std::to_string(cells.size()));
        }
        std::vector<double> parsed(width);
        for (std::size_t c = 0; c < width; ++c) {
            parsed[c] = parse_cell(cells[c], data_row, c + 1);
        }
        rows.push_back(std::move(parsed));
    }

    if (rows.empty()) {
        throw DataError("no data rows in " + path);
    }

    Dataset d;
    const auto m = static_cast<Index>(rows.size());
    const auto l = static_cast<Index>(width - 1);
    d.features.resize(m, l);
    d.targets.resize(m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < l; ++j) d.features(i, j) = rows[i][j];
        d.targets[i] = rows[i][width - 1];
    }
    if (!names.empty() && names.size() == width) {
        d.feature_names.assign(names.begin(), names.end() - 1);
    }
    validate(d);
    return d;
}

void write_csv(const Dataset& d, const std::string& path, bool with_header) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    if (with_header || !d.feature_names.empty()) {
        for (Index j = 0; j < d.cols(); ++j) {
            const std::string name = d.feature_names.empty()
                                         ? "x" + std::to_string(j + 1)
                                         : d.feature_names[static_cast<std::size_t>(j)];
            out << name << ',';
        }
        out << "y\n";
    }
    char buf[64];
    for (Index i = 0; i < d.rows(); ++i) {
        for (Index j = 0; j < d.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.12g", d.features(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.12g", d.targets[i]);
        out << buf << '\n';
    }
}

} // namespace gbsvr
