#pragma once

#include <string>
#include <utility>

#include "gbsvr/dataset.hpp"
#include "gbsvr/types.hpp"

namespace gbsvr {

/// Lag-window layout for turning a series into supervised rows: `window`
/// consecutive values predict the value `horizon` steps past the window end.
struct WindowSpec {
    int window = 5;
    int horizon = 1;
};

/// Row t carries features (series[t], ..., series[t+window-1]) and target
/// series[t + window + horizon - 1]; rows stay in chronological order.
Dataset windowize(const Vector& series, const WindowSpec& spec);

/// Prefix split without shuffling, so training rows strictly precede test
/// rows in time.
std::pair<Dataset, Dataset> chrono_split(const Dataset& d, double train_fraction);

/// Single-column CSV of series values.
Vector load_series_csv(const std::string& path, bool has_header);

} // namespace gbsvr
