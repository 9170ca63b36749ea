#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kcgg {

/// Dense row-major tensor of 64-bit floats. Shapes are runtime vectors of
/// dimension sizes; rank 1 and 2 cover everything this library needs but
/// higher ranks are not rejected. Immutable-by-convention once handed to the
/// autodiff graph.
class Tensor {
public:
    Tensor() = default;

    /// Uninitialized-to-zero tensor of the given shape.
    static Tensor zeros(std::vector<std::size_t> shape);
    static Tensor full(std::vector<std::size_t> shape, double value);
    /// Rank-1 tensor of size 1 holding a single value.
    static Tensor scalar(double value);
    /// Constructs from external values; rejects NaN/Inf entries.
    static Tensor from_values(std::vector<std::size_t> shape, std::vector<double> values);
    /// Internal constructor that skips the finiteness scan. Use for values
    /// produced by library arithmetic, not for external input.
    static Tensor from_raw(std::vector<std::size_t> shape, std::vector<double> values);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    std::size_t rank() const { return shape_.size(); }
    /// Rows/cols of a rank-2 tensor (rank-1 is treated as a single row).
    std::size_t rows() const { return rank() == 2 ? shape_[0] : 1; }
    std::size_t cols() const { return rank() == 2 ? shape_[1] : size(); }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::span<const double> values() const { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(std::size_t r, std::size_t c) { return values_[r * shape_[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return values_[r * shape_[1] + c]; }

    bool is_scalar() const { return size() == 1; }
    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    /// True if every entry is finite.
    bool all_finite() const;

    /// "[2x3]" style rendering for error messages.
    std::string shape_str() const;

    static std::string shape_str(const std::vector<std::size_t>& shape);

private:
    Tensor(std::vector<std::size_t> shape, std::vector<double> values)
        : shape_(std::move(shape)), values_(std::move(values)) {}

    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

} // namespace kcgg
