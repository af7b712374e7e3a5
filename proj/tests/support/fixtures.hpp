#pragma once

#include "nyts/schema/catalog.hpp"

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace fixtures {

inline const nyts::schema::question_catalog &shipped_catalog() {
    static const nyts::schema::question_catalog catalog = nyts::schema::load_catalog_file(std::filesystem::path{ NYTS_DATA_DIR } / "nyts2018.schema");
    return catalog;
}

/// Fresh directory under the system temp dir, removed on destruction.
class temp_dir {
  public:
    temp_dir() {
        static std::atomic<int> counter{ 0 };
        path_ = std::filesystem::temp_directory_path() / ("nyts-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~temp_dir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    temp_dir(const temp_dir &) = delete;
    temp_dir &operator=(const temp_dir &) = delete;

    [[nodiscard]] const std::filesystem::path &path() const noexcept { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

}  // namespace fixtures
