#include "gbsvr/timeseries.hpp"

#include <charconv>
#include <fstream>

namespace gbsvr {

Dataset windowize(const Vector& series, const WindowSpec& spec) {
    if (spec.window < 1 || spec.horizon < 1) {
        throw std::invalid_argument("window and horizon must be >= 1");
    }
    const auto n = static_cast<int>(series.size());
    const int rows = n - spec.window - spec.horizon + 1;
    if (rows < 1) throw DataError("series too short for the requested window");

    Dataset d;
    d.features.resize(rows, spec.window);
    d.targets.resize(rows);
    for (int t = 0; t < rows; ++t) {
        for (int j = 0; j < spec.window; ++j) d.features(t, j) = series[t + j];
        d.targets[t] = series[t + spec.window + spec.horizon - 1];
    }
    for (int j = spec.window; j >= 1; --j) {
        d.feature_names.push_back("lag_" + std::to_string(j));
    }
    return d;
}

std::pair<Dataset, Dataset> chrono_split(const Dataset& d, double train_fraction) {
    return train_test_split(d, train_fraction, /*shuffle=*/false, /*seed=*/0);
}

Vector load_series_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (has_header && line_no == 1) continue;
        double v = 0.0;
        const char* begin = line.data();
        const char* end = begin + line.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || ptr != end) {
            throw DataError("non-numeric series value at line " +
                            std::to_string(line_no) + ": '" + line + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw DataError("no data rows in " + path);
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

} // namespace gbsvr
