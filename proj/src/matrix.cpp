#include "sgpdt/matrix.hpp"

#include "sgpdt/error.hpp"

namespace sgpdt {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0)
{
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FeatureMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == cols, "FeatureMatrix::from_rows: ragged input");
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const
{
    FeatureMatrix out(indices.size(), cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t i = 0; i < indices.size(); ++i) {
            require(indices[i] < rows_, "FeatureMatrix::select_rows: row index out of range");
            out(i, c) = (*this)(indices[i], c);
        }
    }
    return out;
}

} // namespace sgpdt
