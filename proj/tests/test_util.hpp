#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gbsvr/dataset.hpp"
#include "gbsvr/rng.hpp"

namespace test_util {

/// Temporary file that removes itself.
class TempFile {
public:
    explicit TempFile(const std::string& contents = "") {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("gbsvr_test_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++)))
                    .string();
        if (!contents.empty()) {
            std::ofstream out(path_);
            out << contents;
        }
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline gbsvr::Dataset random_dataset(int m, int l, std::uint64_t seed) {
    gbsvr::Rng rng(seed);
    gbsvr::Dataset d;
    d.features.resize(m, l);
    d.targets.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < l; ++j) d.features(i, j) = rng.next_uniform(-3.0, 3.0);
        d.targets[i] = rng.next_uniform(-2.0, 2.0);
    }
    return d;
}

} // namespace test_util
