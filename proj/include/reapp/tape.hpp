#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "reapp/kernels.hpp"
#include "reapp/tensor.hpp"

namespace reapp {

// Handle into a Tape.
struct Var {
    std::uint32_t i = 0;
};

namespace selu_const {
// Standard published selu constants.
inline constexpr double alpha = 1.6732632423543772848170429916717;
inline constexpr double lambda = 1.0507009873554804934193349852946;
}  // namespace selu_const

// Reverse-mode tape. Every op records a closure that scatters the output
// gradient back to its inputs; backward() replays them in reverse order.
// Ops throw NumericError if they produce a non-finite value.
template <typename T>
class Tape {
  public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var leaf(Tensor<T> v) {
        check(v, "leaf");
        return push(std::move(v), nullptr);
    }

    const Tensor<T>& val(Var v) const { return nodes_[v.i].value; }
    Tensor<T>& grad(Var v) { return nodes_[v.i].grad; }
    std::size_t size() const { return nodes_.size(); }

    void backward(Var root, T seed = T{1}) {
        if (val(root).numel() != 1)
            throw ValidationError("backward: root must be a scalar");
        nodes_[root.i].grad(0) += seed;
        for (std::size_t k = nodes_.size(); k-- > 0;) {
            if (nodes_[k].back) nodes_[k].back();
        }
    }

    // ---- primitives ----

    Var matvec(Var W, Var x) {
        const auto& w = val(W);
        const auto& xv = val(x);
        if (w.shape.size() != 2 || xv.numel() != w.cols())
            throw ValidationError("matvec: shape mismatch");
        const std::size_t m = w.rows(), n = w.cols();
        Tensor<T> y = Tensor<T>::vec(m);
        for (std::size_t i = 0; i < m; ++i)
            y(i) = kern::dot(w.row_ptr(i), xv.data.data(), n);
        return push(std::move(y), [this, W, x, m, n](Var out) {
            const auto& dy = grad(out);
            const auto& w = val(W);
            const auto& xv = val(x);
            auto& dw = grad(W);
            auto& dx = grad(x);
            for (std::size_t i = 0; i < m; ++i) {
                const T g = dy(i);
                if (g == T{0}) continue;
                kern::axpy(g, xv.data.data(), dw.row_ptr(i), n);
                kern::axpy(g, w.row_ptr(i), dx.data.data(), n);
            }
        }, "matvec");
    }

    Var add(Var a, Var b) {
        const auto& av = val(a);
        const auto& bv = val(b);
        if (!av.same_shape(bv)) throw ValidationError("add: shape mismatch");
        Tensor<T> y = av;
        kern::vadd(av.data.data(), bv.data.data(), y.data.data(), y.numel());
        return push(std::move(y), [this, a, b](Var out) {
            const auto& dy = grad(out);
            kern::axpy(T{1}, dy.data.data(), grad(a).data.data(), dy.numel());
            kern::axpy(T{1}, dy.data.data(), grad(b).data.data(), dy.numel());
        }, "add");
    }

    Var mul(Var a, Var b) {
        const auto& av = val(a);
        const auto& bv = val(b);
        if (!av.same_shape(bv)) throw ValidationError("mul: shape mismatch");
        Tensor<T> y = av;
        kern::vmul(av.data.data(), bv.data.data(), y.data.data(), y.numel());
        return push(std::move(y), [this, a, b](Var out) {
            const auto& dy = grad(out);
            const auto& av = val(a);
            const auto& bv = val(b);
            auto& da = grad(a);
            auto& db = grad(b);
            for (std::size_t i = 0; i < dy.numel(); ++i) {
                da(i) += dy(i) * bv(i);
                db(i) += dy(i) * av(i);
            }
        }, "mul");
    }

    Var scale(Var a, T c) {
        const auto& av = val(a);
        Tensor<T> y = av;
        kern::vscale(c, av.data.data(), y.data.data(), y.numel());
        return push(std::move(y), [this, a, c](Var out) {
            const auto& dy = grad(out);
            kern::axpy(c, dy.data.data(), grad(a).data.data(), dy.numel());
        }, "scale");
    }

    Var concat(const std::vector<Var>& parts) {
        std::size_t total = 0;
        for (Var p : parts) total += val(p).numel();
        Tensor<T> y = Tensor<T>::vec(total);
        std::size_t off = 0;
        for (Var p : parts) {
            const auto& pv = val(p);
            std::copy(pv.data.begin(), pv.data.end(), y.data.begin() + off);
            off += pv.numel();
        }
        return push(std::move(y), [this, parts](Var out) {
            const auto& dy = grad(out);
            std::size_t off = 0;
            for (Var p : parts) {
                auto& dp = grad(p);
                kern::axpy(T{1}, dy.data.data() + off, dp.data.data(),
                           dp.numel());
                off += dp.numel();
            }
        }, "concat");
    }

    Var slice(Var a, std::size_t off, std::size_t len) {
        const auto& av = val(a);
        if (off + len > av.numel()) throw ValidationError("slice: out of range");
        Tensor<T> y = Tensor<T>::vec(len);
        std::copy(av.data.begin() + off, av.data.begin() + off + len,
                  y.data.begin());
        return push(std::move(y), [this, a, off, len](Var out) {
            const auto& dy = grad(out);
            kern::axpy(T{1}, dy.data.data(), grad(a).data.data() + off, len);
        }, "slice");
    }

    Var tanh_(Var a) {
        Tensor<T> y = val(a);
        for (T& v : y.data) v = std::tanh(v);
        return push(std::move(y), [this, a](Var out) {
            const auto& dy = grad(out);
            const auto& yv = val(out);
            auto& da = grad(a);
            for (std::size_t i = 0; i < dy.numel(); ++i)
                da(i) += dy(i) * (T{1} - yv(i) * yv(i));
        }, "tanh");
    }

    Var sigmoid_(Var a) {
        Tensor<T> y = val(a);
        for (T& v : y.data) v = T{1} / (T{1} + std::exp(-v));
        return push(std::move(y), [this, a](Var out) {
            const auto& dy = grad(out);
            const auto& yv = val(out);
            auto& da = grad(a);
            for (std::size_t i = 0; i < dy.numel(); ++i)
                da(i) += dy(i) * yv(i) * (T{1} - yv(i));
        }, "sigmoid");
    }

    Var selu_(Var a) {
        const T al = static_cast<T>(selu_const::alpha);
        const T la = static_cast<T>(selu_const::lambda);
        Tensor<T> y = val(a);
        for (T& v : y.data)
            v = v > T{0} ? la * v : la * al * (std::exp(v) - T{1});
        return push(std::move(y), [this, a, al, la](Var out) {
            const auto& dy = grad(out);
            const auto& xv = val(a);
            auto& da = grad(a);
            for (std::size_t i = 0; i < dy.numel(); ++i) {
                const T d =
                    xv(i) > T{0} ? la : la * al * std::exp(xv(i));
                da(i) += dy(i) * d;
            }
        }, "selu");
    }

    // Softmax with hard masking: entries with keep[i]==0 get probability
    // exactly zero and receive no gradient.
    Var softmax_masked(Var logits, std::vector<char> keep) {
        const auto& x = val(logits);
        if (keep.size() != x.numel())
            throw ValidationError("softmax_masked: mask size mismatch");
        bool any = false;
        T mx = -std::numeric_limits<T>::infinity();
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (keep[i]) {
                any = true;
                mx = std::max(mx, x(i));
            }
        }
        if (!any) throw ValidationError("softmax_masked: all entries masked");
        Tensor<T> p = Tensor<T>::vec(x.numel());
        T z = T{0};
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (keep[i]) {
                p(i) = std::exp(x(i) - mx);
                z += p(i);
            }
        }
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (keep[i]) p(i) /= z;
        return push(std::move(p),
                    [this, logits, keep = std::move(keep)](Var out) {
            const auto& dy = grad(out);
            const auto& pv = val(out);
            auto& dx = grad(logits);
            T inner = T{0};
            for (std::size_t i = 0; i < keep.size(); ++i)
                if (keep[i]) inner += dy(i) * pv(i);
            for (std::size_t i = 0; i < keep.size(); ++i)
                if (keep[i]) dx(i) += pv(i) * (dy(i) - inner);
        }, "softmax_masked");
    }

    Var softmax(Var logits) {
        return softmax_masked(logits,
                              std::vector<char>(val(logits).numel(), 1));
    }

    Var gather_row(Var table, std::size_t row) {
        const auto& t = val(table);
        if (t.shape.size() != 2 || row >= t.rows())
            throw ValidationError("gather_row: bad row index");
        const std::size_t c = t.cols();
        Tensor<T> y = Tensor<T>::vec(c);
        std::copy(t.row_ptr(row), t.row_ptr(row) + c, y.data.begin());
        return push(std::move(y), [this, table, row, c](Var out) {
            const auto& dy = grad(out);
            kern::axpy(T{1}, dy.data.data(), grad(table).row_ptr(row), c);
        }, "gather_row");
    }

    // Elementwise max; ties route the gradient to the first argument.
    Var emax(Var a, Var b) {
        const auto& av = val(a);
        const auto& bv = val(b);
        if (!av.same_shape(bv)) throw ValidationError("emax: shape mismatch");
        Tensor<T> y = av;
        for (std::size_t i = 0; i < y.numel(); ++i)
            y(i) = std::max(av(i), bv(i));
        return push(std::move(y), [this, a, b](Var out) {
            const auto& dy = grad(out);
            const auto& av = val(a);
            const auto& bv = val(b);
            auto& da = grad(a);
            auto& db = grad(b);
            for (std::size_t i = 0; i < dy.numel(); ++i) {
                if (av(i) >= bv(i))
                    da(i) += dy(i);
                else
                    db(i) += dy(i);
            }
        }, "emax");
    }

    // Inverted dropout; identity when rate == 0.
    Var dropout(Var a, T rate, std::mt19937_64& rng) {
        if (rate == T{0}) return a;
        if (rate < T{0} || rate >= T{1})
            throw ValidationError("dropout: rate must be in [0, 1)");
        const auto& av = val(a);
        std::vector<T> mask(av.numel());
        std::bernoulli_distribution keep(1.0 - static_cast<double>(rate));
        const T inv = T{1} / (T{1} - rate);
        for (T& m : mask) m = keep(rng) ? inv : T{0};
        Tensor<T> y = av;
        kern::vmul(av.data.data(), mask.data(), y.data.data(), y.numel());
        return push(std::move(y), [this, a, mask = std::move(mask)](Var out) {
            const auto& dy = grad(out);
            auto& da = grad(a);
            for (std::size_t i = 0; i < dy.numel(); ++i)
                da(i) += dy(i) * mask[i];
        }, "dropout");
    }

    // out = sum_i alpha[i] * rows[i]
    Var weighted_sum(Var alpha, const std::vector<Var>& rows) {
        const auto& a = val(alpha);
        if (a.numel() != rows.size())
            throw ValidationError("weighted_sum: weight count mismatch");
        if (rows.empty()) throw ValidationError("weighted_sum: empty");
        const std::size_t d = val(rows[0]).numel();
        Tensor<T> y = Tensor<T>::vec(d);
        for (std::size_t i = 0; i < rows.size(); ++i)
            kern::axpy(a(i), val(rows[i]).data.data(), y.data.data(), d);
        return push(std::move(y), [this, alpha, rows, d](Var out) {
            const auto& dy = grad(out);
            const auto& a = val(alpha);
            auto& da = grad(alpha);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                da(i) += kern::dot(dy.data.data(), val(rows[i]).data.data(), d);
                kern::axpy(a(i), dy.data.data(), grad(rows[i]).data.data(), d);
            }
        }, "weighted_sum");
    }

    // Stack scalar vars into one vector.
    Var stack_scalars(const std::vector<Var>& xs) {
        Tensor<T> y = Tensor<T>::vec(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (val(xs[i]).numel() != 1)
                throw ValidationError("stack_scalars: non-scalar input");
            y(i) = val(xs[i])(0);
        }
        return push(std::move(y), [this, xs](Var out) {
            const auto& dy = grad(out);
            for (std::size_t i = 0; i < xs.size(); ++i)
                grad(xs[i])(0) += dy(i);
        }, "stack_scalars");
    }

    // -log(p[idx]); throws if the gold entry has zero probability.
    Var neg_log_pick(Var probs, std::size_t idx) {
        const auto& p = val(probs);
        if (idx >= p.numel()) throw ValidationError("neg_log_pick: bad index");
        if (!(p(idx) > T{0}))
            throw NumericError(
                "gold argument has zero probability (masked out at step "
                "distribution index " + std::to_string(idx) + ")");
        Tensor<T> y = Tensor<T>::vec(1);
        y(0) = -std::log(p(idx));
        return push(std::move(y), [this, probs, idx](Var out) {
            const T dy = grad(out)(0);
            grad(probs)(idx) -= dy / val(probs)(idx);
        }, "neg_log_pick");
    }

    Var sum_scalars(const std::vector<Var>& xs) {
        if (xs.empty()) throw ValidationError("sum_scalars: empty");
        Tensor<T> y = Tensor<T>::vec(1);
        for (Var x : xs) {
            if (val(x).numel() != 1)
                throw ValidationError("sum_scalars: non-scalar input");
            y(0) += val(x)(0);
        }
        return push(std::move(y), [this, xs](Var out) {
            const T dy = grad(out)(0);
            for (Var x : xs) grad(x)(0) += dy;
        }, "sum_scalars");
    }

  private:
    struct Node {
        Tensor<T> value;
        Tensor<T> grad;
        std::function<void()> back;
    };

    static void check(const Tensor<T>& t, const char* op) {
        if (!t.finite())
            throw NumericError(std::string("non-finite result in ") + op);
    }

    template <typename F>
    Var push(Tensor<T> v, F&& back_fn, const char* op = "leaf") {
        check(v, op);
        Var out{static_cast<std::uint32_t>(nodes_.size())};
        Node node;
        node.grad = Tensor<T>::zeros(v.shape);
        node.value = std::move(v);
        nodes_.push_back(std::move(node));
        if constexpr (!std::is_same_v<std::decay_t<F>, std::nullptr_t>) {
            nodes_.back().back = [fn = std::forward<F>(back_fn), out]() mutable {
                fn(out);
            };
        }
        return out;
    }

    std::vector<Node> nodes_;
};

}  // namespace reapp
