#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "reapp/common.hpp"

namespace reapp {

// Dense row-major tensor. Rank 1 and 2 are all the model needs.
template <typename T>
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<T> data;

    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shp) {
        Tensor t;
        std::size_t n = 1;
        for (auto d : shp) n *= d;
        t.shape = std::move(shp);
        t.data.assign(n, T{0});
        return t;
    }

    static Tensor vec(std::size_t n) { return zeros({n}); }
    static Tensor mat(std::size_t r, std::size_t c) { return zeros({r, c}); }

    static Tensor from(std::initializer_list<T> vals) {
        Tensor t;
        t.shape = {vals.size()};
        t.data.assign(vals);
        return t;
    }

    std::size_t numel() const { return data.size(); }
    std::size_t rows() const { return shape.at(0); }
    std::size_t cols() const { return shape.at(1); }

    T& operator()(std::size_t i) { return data[i]; }
    const T& operator()(std::size_t i) const { return data[i]; }
    T& operator()(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
    const T& operator()(std::size_t i, std::size_t j) const {
        return data[i * cols() + j];
    }

    T* row_ptr(std::size_t i) { return data.data() + i * cols(); }
    const T* row_ptr(std::size_t i) const { return data.data() + i * cols(); }

    bool finite() const {
        for (const T& v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

}  // namespace reapp
