#pragma once

#include <algorithm>  // std::copy
#include <cassert>    // assert
#include <cstddef>  // std::size_t
#include <span>     // std::span
#include <vector>   // std::vector

namespace nyts {

/// Dense row-major matrix.
template <typename T>
class matrix {
  public:
    matrix() = default;

    matrix(const std::size_t rows, const std::size_t cols, const T init = T{}) :
        rows_{ rows },
        cols_{ cols },
        data_(rows * cols, init) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0; }

    T &operator()(const std::size_t r, const std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    const T &operator()(const std::size_t r, const std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::span<T> row(const std::size_t r) { return { data_.data() + r * cols_, cols_ }; }
    [[nodiscard]] std::span<const T> row(const std::size_t r) const { return { data_.data() + r * cols_, cols_ }; }

    void append_row(std::span<const T> values) {
        assert(values.size() == cols_ || rows_ == 0);
        if (rows_ == 0) {
            cols_ = values.size();
        }
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    /// Rows picked by index, in the given order.
    [[nodiscard]] matrix select_rows(std::span<const std::size_t> indices) const {
        matrix out{ indices.size(), cols_ };
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const auto src = row(indices[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    template <typename U>
    [[nodiscard]] matrix<U> cast() const {
        matrix<U> out{ rows_, cols_ };
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out.data()[i] = static_cast<U>(data_[i]);
        }
        return out;
    }

    [[nodiscard]] std::vector<T> &data() noexcept { return data_; }
    [[nodiscard]] const std::vector<T> &data() const noexcept { return data_; }

    bool operator==(const matrix &) const = default;

  private:
    std::size_t rows_{ 0 };
    std::size_t cols_{ 0 };
    std::vector<T> data_;
};

using code_matrix = matrix<int>;
using real_matrix = matrix<double>;

}  // namespace nyts
