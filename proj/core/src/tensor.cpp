#include "kcgg/tensor.hpp"

#include <cmath>
#include <sstream>

#include "kcgg/errors.hpp"

namespace kcgg {

namespace {
std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}
} // namespace

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
    std::size_t n = shape_product(shape);
    return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
    std::size_t n = shape_product(shape);
    return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::scalar(double value) {
    if (!std::isfinite(value)) {
        throw ShapeError("Tensor::scalar: non-finite value");
    }
    return Tensor({1}, {value});
}

Tensor Tensor::from_values(std::vector<std::size_t> shape, std::vector<double> values) {
    if (shape_product(shape) != values.size()) {
        std::ostringstream os;
        os << "Tensor::from_values: shape " << shape_str(shape) << " implies "
           << shape_product(shape) << " entries, got " << values.size();
        throw ShapeError(os.str());
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ShapeError("Tensor::from_values: non-finite entry rejected");
        }
    }
    return Tensor(std::move(shape), std::move(values));
}

Tensor Tensor::from_raw(std::vector<std::size_t> shape, std::vector<double> values) {
    if (shape_product(shape) != values.size()) {
        std::ostringstream os;
        os << "Tensor::from_raw: shape " << shape_str(shape) << " implies "
           << shape_product(shape) << " entries, got " << values.size();
        throw ShapeError(os.str());
    }
    return Tensor(std::move(shape), std::move(values));
}

bool Tensor::all_finite() const {
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string Tensor::shape_str() const { return shape_str(shape_); }

std::string Tensor::shape_str(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << "x";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

} // namespace kcgg
