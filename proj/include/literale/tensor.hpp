#ifndef LITERALE_TENSOR_HPP
#define LITERALE_TENSOR_HPP

#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "literale/errors.hpp"

namespace literale {

/// Dense row-major real array with an explicit shape. All math in the
/// library runs in 64-bit floating point.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(numel(shape), 0.0);
    }

    Tensor(std::vector<std::size_t> s, std::vector<double> d)
        : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != numel(shape))
            throw DimensionError("tensor data size does not match shape");
    }

    static std::size_t numel(const std::vector<std::size_t>& s) {
        std::size_t n = 1;
        for (std::size_t d : s) n *= d;
        return n;
    }

    std::size_t size() const { return data.size(); }

    std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
    std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

    double& at2(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
    double at2(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    std::string shape_str() const {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < shape.size(); ++i)
            os << (i ? "," : "") << shape[i];
        os << ")";
        return os.str();
    }
};

using Vec = std::vector<double>;

inline void require_same_length(const Vec& a, const Vec& b, const char* op) {
    if (a.size() != b.size())
        throw DimensionError(std::string(op) + ": length mismatch " +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

}  // namespace literale

#endif
