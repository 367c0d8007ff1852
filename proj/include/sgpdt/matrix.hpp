#ifndef SGPDT_MATRIX_HPP
#define SGPDT_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace sgpdt {

// Dense case matrix stored column-major: one contiguous column per feature,
// which is the access pattern of a variable terminal during batch evaluation.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols);

    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t row, std::size_t col) const { return data_[col * rows_ + row]; }
    double& operator()(std::size_t row, std::size_t col) { return data_[col * rows_ + row]; }

    std::span<const double> column(std::size_t col) const
    {
        return {data_.data() + col * rows_, rows_};
    }

    FeatureMatrix select_rows(std::span<const std::size_t> indices) const;

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace sgpdt

#endif
