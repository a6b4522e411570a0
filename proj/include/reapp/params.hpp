#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>

#include "reapp/tape.hpp"
#include "reapp/tensor.hpp"

namespace reapp {

// Named learned tensors with accumulated gradients. std::map keeps iteration
// order deterministic for the optimizer, checkpointing, and gradient checks.
template <typename T>
struct ParameterSet {
    struct Param {
        Tensor<T> value;
        Tensor<T> grad;
    };

    std::map<std::string, Param> items;

    Param& add(const std::string& name, Tensor<T> value) {
        if (items.count(name))
            throw ValidationError("duplicate parameter name: " + name);
        Param p;
        p.grad = Tensor<T>::zeros(value.shape);
        p.value = std::move(value);
        return items.emplace(name, std::move(p)).first->second;
    }

    Param& at(const std::string& name) {
        auto it = items.find(name);
        if (it == items.end())
            throw ValidationError("unknown parameter: " + name);
        return it->second;
    }
    const Param& at(const std::string& name) const {
        auto it = items.find(name);
        if (it == items.end())
            throw ValidationError("unknown parameter: " + name);
        return it->second;
    }

    void zero_grads() {
        for (auto& [name, p] : items) p.grad.fill(T{0});
    }

    T grad_norm() const {
        double sq = 0;
        for (const auto& [name, p] : items)
            for (const T& g : p.grad.data) sq += double(g) * double(g);
        return static_cast<T>(std::sqrt(sq));
    }

    void clip_grads(T max_norm) {
        const T norm = grad_norm();
        if (norm <= max_norm || norm == T{0}) return;
        const T s = max_norm / norm;
        for (auto& [name, p] : items)
            for (T& g : p.grad.data) g *= s;
    }

    std::size_t scalar_count() const {
        std::size_t n = 0;
        for (const auto& [name, p] : items) n += p.value.numel();
        return n;
    }

    template <typename U>
    ParameterSet<U> cast() const {
        ParameterSet<U> out;
        for (const auto& [name, p] : items) {
            Tensor<U> v = Tensor<U>::zeros(p.value.shape);
            for (std::size_t i = 0; i < v.numel(); ++i)
                v(i) = static_cast<U>(p.value(i));
            out.add(name, std::move(v));
        }
        return out;
    }
};

// Glorot-uniform fill for weight matrices.
template <typename T>
void init_glorot(Tensor<T>& t, std::size_t fan_in, std::size_t fan_out,
                 std::mt19937_64& rng) {
    const double bound = std::sqrt(6.0 / double(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (T& v : t.data) v = static_cast<T>(dist(rng));
}

// Bias-corrected Adam.
template <typename T>
struct AdamState {
    struct Moments {
        Tensor<T> m, v;
    };

    std::map<std::string, Moments> moments;
    std::int64_t step = 0;
    T lr = static_cast<T>(1e-3);
    T beta1 = static_cast<T>(0.9);
    T beta2 = static_cast<T>(0.999);
    T eps = static_cast<T>(1e-8);

    void init(const ParameterSet<T>& ps) {
        moments.clear();
        step = 0;
        for (const auto& [name, p] : ps.items)
            moments[name] = Moments{Tensor<T>::zeros(p.value.shape),
                                    Tensor<T>::zeros(p.value.shape)};
    }

    // Applies one update from the accumulated gradients. Gradients are left
    // untouched; the caller resets them.
    void update(ParameterSet<T>& ps) {
        if (moments.empty()) init(ps);
        ++step;
        const T bc1 = T{1} - std::pow(beta1, static_cast<T>(step));
        const T bc2 = T{1} - std::pow(beta2, static_cast<T>(step));
        for (auto& [name, p] : ps.items) {
            auto& mo = moments.at(name);
            for (std::size_t i = 0; i < p.value.numel(); ++i) {
                const T g = p.grad(i);
                mo.m(i) = beta1 * mo.m(i) + (T{1} - beta1) * g;
                mo.v(i) = beta2 * mo.v(i) + (T{1} - beta2) * g * g;
                const T mhat = mo.m(i) / bc1;
                const T vhat = mo.v(i) / bc2;
                p.value(i) -= lr * mhat / (std::sqrt(vhat) + eps);
            }
        }
    }
};

// Binds parameters to tape leaves for one forward/backward pass.
template <typename T>
class Graph {
  public:
    explicit Graph(ParameterSet<T>& params) : params_(&params) {}

    Tape<T>& tape() { return tape_; }

    // Leaf var for a named parameter; bound once per graph.
    Var p(const std::string& name) {
        auto it = bound_.find(name);
        if (it != bound_.end()) return it->second;
        Var v = tape_.leaf(params_->at(name).value);
        bound_.emplace(name, v);
        return v;
    }

    Var constant(Tensor<T> t) { return tape_.leaf(std::move(t)); }

    // Backward through the tape, then accumulate leaf gradients into the
    // parameter set.
    void backward(Var loss, T seed = T{1}) {
        tape_.backward(loss, seed);
        for (const auto& [name, v] : bound_) {
            auto& pg = params_->at(name).grad;
            const auto& tg = tape_.grad(v);
            kern::axpy(T{1}, tg.data.data(), pg.data.data(), pg.numel());
        }
    }

  private:
    Tape<T> tape_;
    ParameterSet<T>* params_;
    std::unordered_map<std::string, Var> bound_;
};

}  // namespace reapp
