#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "molembed/nn/tape.hpp"

// Differentiable primitives. Each op validates shapes (ShapeError names the
// op kind and offending dims), computes the forward value, and registers a
// closure with the exact analytic gradient. Saved activations are kept by
// value in the closure when the backward pass needs them.
namespace molembed::nn {

namespace detail {

template <typename T>
TensorT<T> matmul_raw(const TensorT<T>& a, const TensorT<T>& b) {
    TensorT<T> c(a.rows(), b.cols());
    const size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (size_t i = 0; i < n; ++i) {
        const T* arow = a.data() + i * k;
        T* crow = c.data() + i * m;
        for (size_t p = 0; p < k; ++p) {
            const T aip = arow[p];
            if (aip == T(0)) continue;
            const T* brow = b.data() + p * m;
            for (size_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
        }
    }
    return c;
}

template <typename T>
TensorT<T> transpose_raw(const TensorT<T>& a) {
    TensorT<T> t(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ShapeError(msg);
}

} // namespace detail

template <typename T>
int matmul(TapeT<T>& t, int a, int b) {
    const auto& A = t.value(a);
    const auto& B = t.value(b);
    detail::require(A.cols() == B.rows(),
                    "matmul: inner dims differ, lhs " + A.shape_str() + " rhs " + B.shape_str());
    return t.push(detail::matmul_raw(A, B), [a, b](TapeT<T>& tp, const TensorT<T>& g) {
        tp.accumulate(a, detail::matmul_raw(g, detail::transpose_raw(tp.value(b))));
        tp.accumulate(b, detail::matmul_raw(detail::transpose_raw(tp.value(a)), g));
    });
}

template <typename T>
int add(TapeT<T>& t, int a, int b) {
    const auto& A = t.value(a);
    const auto& B = t.value(b);
    detail::require(A.same_shape(B),
                    "add: shape mismatch " + A.shape_str() + " vs " + B.shape_str());
    TensorT<T> out = A;
    for (size_t i = 0; i < out.size(); ++i) out[i] += B[i];
    return t.push(std::move(out), [a, b](TapeT<T>& tp, const TensorT<T>& g) {
        tp.accumulate(a, g);
        tp.accumulate(b, g);
    });
}

// matrix + row vector broadcast over rows (the only broadcast we allow).
template <typename T>
int add_row_bias(TapeT<T>& t, int m, int bias) {
    const auto& M = t.value(m);
    const auto& B = t.value(bias);
    detail::require(B.rows() == 1 && B.cols() == M.cols(),
                    "add-row-bias: bias " + B.shape_str() + " vs matrix " + M.shape_str());
    TensorT<T> out = M;
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) out(i, j) += B(0, j);
    return t.push(std::move(out), [m, bias](TapeT<T>& tp, const TensorT<T>& g) {
        tp.accumulate(m, g);
        TensorT<T> gb(1, g.cols());
        for (size_t i = 0; i < g.rows(); ++i)
            for (size_t j = 0; j < g.cols(); ++j) gb(0, j) += g(i, j);
        tp.accumulate(bias, gb);
    });
}

// matrix ⊙ row vector broadcast over rows (layernorm gain).
template <typename T>
int mul_row_vec(TapeT<T>& t, int m, int vrow) {
    const auto& M = t.value(m);
    const auto& V = t.value(vrow);
    detail::require(V.rows() == 1 && V.cols() == M.cols(),
                    "mul-row-vec: vector " + V.shape_str() + " vs matrix " + M.shape_str());
    TensorT<T> out = M;
    for (size_t i = 0; i < M.rows(); ++i)
        for (size_t j = 0; j < M.cols(); ++j) out(i, j) *= V(0, j);
    return t.push(std::move(out), [m, vrow](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Mv = tp.value(m);
        const auto& Vv = tp.value(vrow);
        TensorT<T> gm(g.rows(), g.cols());
        TensorT<T> gv(1, g.cols());
        for (size_t i = 0; i < g.rows(); ++i) {
            for (size_t j = 0; j < g.cols(); ++j) {
                gm(i, j) = g(i, j) * Vv(0, j);
                gv(0, j) += g(i, j) * Mv(i, j);
            }
        }
        tp.accumulate(m, gm);
        tp.accumulate(vrow, gv);
    });
}

template <typename T>
int mul(TapeT<T>& t, int a, int b) {
    const auto& A = t.value(a);
    const auto& B = t.value(b);
    detail::require(A.same_shape(B),
                    "mul: shape mismatch " + A.shape_str() + " vs " + B.shape_str());
    TensorT<T> out = A;
    for (size_t i = 0; i < out.size(); ++i) out[i] *= B[i];
    return t.push(std::move(out), [a, b](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Av = tp.value(a);
        const auto& Bv = tp.value(b);
        TensorT<T> ga(g.rows(), g.cols());
        TensorT<T> gb(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) {
            ga[i] = g[i] * Bv[i];
            gb[i] = g[i] * Av[i];
        }
        tp.accumulate(a, ga);
        tp.accumulate(b, gb);
    });
}

template <typename T>
int scale(TapeT<T>& t, int a, double s) {
    TensorT<T> out = t.value(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<T>(out[i] * s);
    return t.push(std::move(out), [a, s](TapeT<T>& tp, const TensorT<T>& g) {
        TensorT<T> ga = g;
        for (size_t i = 0; i < ga.size(); ++i) ga[i] = static_cast<T>(ga[i] * s);
        tp.accumulate(a, ga);
    });
}

template <typename T>
int transpose(TapeT<T>& t, int a) {
    return t.push(detail::transpose_raw(t.value(a)), [a](TapeT<T>& tp, const TensorT<T>& g) {
        tp.accumulate(a, detail::transpose_raw(g));
    });
}

template <typename T>
int slice_cols(TapeT<T>& t, int a, size_t c0, size_t c1) {
    const auto& A = t.value(a);
    detail::require(c0 < c1 && c1 <= A.cols(),
                    "slice-cols: range [" + std::to_string(c0) + "," + std::to_string(c1) +
                        ") out of " + A.shape_str());
    TensorT<T> out(A.rows(), c1 - c0);
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = c0; j < c1; ++j) out(i, j - c0) = A(i, j);
    return t.push(std::move(out), [a, c0](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Av = tp.value(a);
        TensorT<T> ga(Av.rows(), Av.cols());
        for (size_t i = 0; i < g.rows(); ++i)
            for (size_t j = 0; j < g.cols(); ++j) ga(i, c0 + j) = g(i, j);
        tp.accumulate(a, ga);
    });
}

template <typename T>
int concat_cols(TapeT<T>& t, const std::vector<int>& parts) {
    detail::require(!parts.empty(), "concat-cols: no inputs");
    const size_t rows = t.value(parts[0]).rows();
    size_t total = 0;
    for (int p : parts) {
        detail::require(t.value(p).rows() == rows,
                        "concat-cols: row mismatch " + t.value(p).shape_str());
        total += t.value(p).cols();
    }
    TensorT<T> out(rows, total);
    size_t off = 0;
    for (int p : parts) {
        const auto& P = t.value(p);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < P.cols(); ++j) out(i, off + j) = P(i, j);
        off += P.cols();
    }
    return t.push(std::move(out), [parts](TapeT<T>& tp, const TensorT<T>& g) {
        size_t off = 0;
        for (int p : parts) {
            const auto& P = tp.value(p);
            TensorT<T> gp(P.rows(), P.cols());
            for (size_t i = 0; i < P.rows(); ++i)
                for (size_t j = 0; j < P.cols(); ++j) gp(i, j) = g(i, off + j);
            tp.accumulate(p, gp);
            off += P.cols();
        }
    });
}

template <typename T>
int concat_rows(TapeT<T>& t, const std::vector<int>& parts) {
    detail::require(!parts.empty(), "concat-rows: no inputs");
    const size_t cols = t.value(parts[0]).cols();
    size_t total = 0;
    for (int p : parts) {
        detail::require(t.value(p).cols() == cols,
                        "concat-rows: col mismatch " + t.value(p).shape_str());
        total += t.value(p).rows();
    }
    TensorT<T> out(total, cols);
    size_t off = 0;
    for (int p : parts) {
        const auto& P = t.value(p);
        for (size_t i = 0; i < P.rows(); ++i)
            for (size_t j = 0; j < cols; ++j) out(off + i, j) = P(i, j);
        off += P.rows();
    }
    return t.push(std::move(out), [parts](TapeT<T>& tp, const TensorT<T>& g) {
        size_t off = 0;
        for (int p : parts) {
            const auto& P = tp.value(p);
            TensorT<T> gp(P.rows(), P.cols());
            for (size_t i = 0; i < P.rows(); ++i)
                for (size_t j = 0; j < P.cols(); ++j) gp(i, j) = g(off + i, j);
            tp.accumulate(p, gp);
            off += P.rows();
        }
    });
}

// Numerically stable row softmax. Backward uses the saved output:
// dx = y ⊙ (g − <g,y>_row).
template <typename T>
int softmax_rows(TapeT<T>& t, int a) {
    const auto& A = t.value(a);
    TensorT<T> out(A.rows(), A.cols());
    for (size_t i = 0; i < A.rows(); ++i) {
        T mx = A(i, 0);
        for (size_t j = 1; j < A.cols(); ++j) mx = std::max(mx, A(i, j));
        T sum = T(0);
        for (size_t j = 0; j < A.cols(); ++j) {
            out(i, j) = std::exp(A(i, j) - mx);
            sum += out(i, j);
        }
        for (size_t j = 0; j < A.cols(); ++j) out(i, j) /= sum;
    }
    TensorT<T> saved = out;
    return t.push(std::move(out), [a, saved](TapeT<T>& tp, const TensorT<T>& g) {
        TensorT<T> ga(g.rows(), g.cols());
        for (size_t i = 0; i < g.rows(); ++i) {
            T dot = T(0);
            for (size_t j = 0; j < g.cols(); ++j) dot += g(i, j) * saved(i, j);
            for (size_t j = 0; j < g.cols(); ++j)
                ga(i, j) = saved(i, j) * (g(i, j) - dot);
        }
        tp.accumulate(a, ga);
    });
}

// Row layer norm without affine: y = (x − μ) / sqrt(var + eps).
// dx = (g − mean(g) − y·mean(g⊙y)) / sqrt(var + eps).
template <typename T>
int layernorm_rows(TapeT<T>& t, int a, double eps = 1e-5) {
    const auto& A = t.value(a);
    const size_t n = A.cols();
    detail::require(n > 0, "layernorm-rows: empty rows in " + A.shape_str());
    TensorT<T> out(A.rows(), n);
    std::vector<T> inv_std(A.rows());
    for (size_t i = 0; i < A.rows(); ++i) {
        T mean = T(0);
        for (size_t j = 0; j < n; ++j) mean += A(i, j);
        mean /= static_cast<T>(n);
        T var = T(0);
        for (size_t j = 0; j < n; ++j) {
            const T d = A(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<T>(n);
        const T is = T(1) / std::sqrt(var + static_cast<T>(eps));
        inv_std[i] = is;
        for (size_t j = 0; j < n; ++j) out(i, j) = (A(i, j) - mean) * is;
    }
    TensorT<T> saved = out;
    return t.push(std::move(out), [a, saved, inv_std](TapeT<T>& tp, const TensorT<T>& g) {
        const size_t n = g.cols();
        TensorT<T> ga(g.rows(), n);
        for (size_t i = 0; i < g.rows(); ++i) {
            T gmean = T(0), gymean = T(0);
            for (size_t j = 0; j < n; ++j) {
                gmean += g(i, j);
                gymean += g(i, j) * saved(i, j);
            }
            gmean /= static_cast<T>(n);
            gymean /= static_cast<T>(n);
            for (size_t j = 0; j < n; ++j)
                ga(i, j) = (g(i, j) - gmean - saved(i, j) * gymean) * inv_std[i];
        }
        tp.accumulate(a, ga);
    });
}

// tanh-approximation GELU.
template <typename T>
int gelu(TapeT<T>& t, int a) {
    constexpr double kC = 0.7978845608028654; // sqrt(2/pi)
    constexpr double kA = 0.044715;
    const auto& A = t.value(a);
    TensorT<T> out(A.rows(), A.cols());
    for (size_t i = 0; i < A.size(); ++i) {
        const double x = static_cast<double>(A[i]);
        out[i] = static_cast<T>(0.5 * x * (1.0 + std::tanh(kC * (x + kA * x * x * x))));
    }
    return t.push(std::move(out), [a](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Av = tp.value(a);
        TensorT<T> ga(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) {
            const double x = static_cast<double>(Av[i]);
            const double u = kC * (x + kA * x * x * x);
            const double th = std::tanh(u);
            const double du = kC * (1.0 + 3.0 * kA * x * x);
            const double d = 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * du;
            ga[i] = static_cast<T>(static_cast<double>(g[i]) * d);
        }
        tp.accumulate(a, ga);
    });
}

template <typename T>
int relu(TapeT<T>& t, int a) {
    const auto& A = t.value(a);
    TensorT<T> out(A.rows(), A.cols());
    for (size_t i = 0; i < A.size(); ++i) out[i] = A[i] > T(0) ? A[i] : T(0);
    return t.push(std::move(out), [a](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Av = tp.value(a);
        TensorT<T> ga(g.rows(), g.cols());
        for (size_t i = 0; i < g.size(); ++i) ga[i] = Av[i] > T(0) ? g[i] : T(0);
        tp.accumulate(a, ga);
    });
}

// Gathers rows of `table` at `ids`; backward scatter-adds into the table.
template <typename T>
int embedding_lookup(TapeT<T>& t, int table, std::vector<int32_t> ids) {
    const auto& Tab = t.value(table);
    for (const int32_t id : ids) {
        detail::require(id >= 0 && static_cast<size_t>(id) < Tab.rows(),
                        "embedding-lookup: id " + std::to_string(id) + " out of table " +
                            Tab.shape_str());
    }
    TensorT<T> out(ids.size(), Tab.cols());
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = 0; j < Tab.cols(); ++j) out(i, j) = Tab(static_cast<size_t>(ids[i]), j);
    return t.push(std::move(out), [table, ids = std::move(ids)](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Tab = tp.value(table);
        TensorT<T> gt(Tab.rows(), Tab.cols());
        for (size_t i = 0; i < ids.size(); ++i)
            for (size_t j = 0; j < g.cols(); ++j) gt(static_cast<size_t>(ids[i]), j) += g(i, j);
        tp.accumulate(table, gt);
    });
}

// Mean over rows with mask==1; masked rows receive zero gradient.
template <typename T>
int masked_mean_rows(TapeT<T>& t, int a, std::vector<uint8_t> mask) {
    const auto& A = t.value(a);
    detail::require(mask.size() == A.rows(),
                    "masked-mean-rows: mask length " + std::to_string(mask.size()) +
                        " vs matrix " + A.shape_str());
    size_t live = 0;
    for (const uint8_t m : mask) live += m ? 1 : 0;
    if (live == 0) throw DegenerateInputError("masked-mean-rows: all rows masked");
    TensorT<T> out(1, A.cols());
    for (size_t i = 0; i < A.rows(); ++i) {
        if (!mask[i]) continue;
        for (size_t j = 0; j < A.cols(); ++j) out(0, j) += A(i, j);
    }
    for (size_t j = 0; j < A.cols(); ++j) out(0, j) /= static_cast<T>(live);
    return t.push(std::move(out),
                  [a, mask = std::move(mask), live](TapeT<T>& tp, const TensorT<T>& g) {
                      const auto& Av = tp.value(a);
                      TensorT<T> ga(Av.rows(), Av.cols());
                      const T inv = T(1) / static_cast<T>(live);
                      for (size_t i = 0; i < Av.rows(); ++i) {
                          if (!mask[i]) continue;
                          for (size_t j = 0; j < Av.cols(); ++j) ga(i, j) = g(0, j) * inv;
                      }
                      tp.accumulate(a, ga);
                  });
}

// Rows scaled to unit L2 norm. dx = (g − y·<y,g>_row) / ||x||.
template <typename T>
int l2_normalize_rows(TapeT<T>& t, int a) {
    const auto& A = t.value(a);
    TensorT<T> out(A.rows(), A.cols());
    std::vector<T> norms(A.rows());
    for (size_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (size_t j = 0; j < A.cols(); ++j)
            s += static_cast<double>(A(i, j)) * static_cast<double>(A(i, j));
        const double norm = std::sqrt(s);
        if (norm < 1e-12) {
            throw DegenerateInputError("l2-normalize-rows: zero-norm row " + std::to_string(i));
        }
        norms[i] = static_cast<T>(norm);
        for (size_t j = 0; j < A.cols(); ++j) out(i, j) = A(i, j) / norms[i];
    }
    TensorT<T> saved = out;
    return t.push(std::move(out), [a, saved, norms](TapeT<T>& tp, const TensorT<T>& g) {
        TensorT<T> ga(g.rows(), g.cols());
        for (size_t i = 0; i < g.rows(); ++i) {
            T dot = T(0);
            for (size_t j = 0; j < g.cols(); ++j) dot += g(i, j) * saved(i, j);
            for (size_t j = 0; j < g.cols(); ++j)
                ga(i, j) = (g(i, j) - saved(i, j) * dot) / norms[i];
        }
        tp.accumulate(a, ga);
    });
}

// Per-row −log softmax(logits)[target]: output is Nx1.
template <typename T>
int cross_entropy_rows(TapeT<T>& t, int logits, std::vector<int32_t> targets) {
    const auto& L = t.value(logits);
    detail::require(targets.size() == L.rows(),
                    "cross-entropy-rows: " + std::to_string(targets.size()) +
                        " targets vs logits " + L.shape_str());
    for (const int32_t tgt : targets) {
        detail::require(tgt >= 0 && static_cast<size_t>(tgt) < L.cols(),
                        "cross-entropy-rows: target " + std::to_string(tgt) + " out of " +
                            L.shape_str());
    }
    TensorT<T> probs(L.rows(), L.cols());
    TensorT<T> out(L.rows(), 1);
    for (size_t i = 0; i < L.rows(); ++i) {
        T mx = L(i, 0);
        for (size_t j = 1; j < L.cols(); ++j) mx = std::max(mx, L(i, j));
        T sum = T(0);
        for (size_t j = 0; j < L.cols(); ++j) {
            probs(i, j) = std::exp(L(i, j) - mx);
            sum += probs(i, j);
        }
        for (size_t j = 0; j < L.cols(); ++j) probs(i, j) /= sum;
        out(i, 0) = std::log(sum) + mx - L(i, static_cast<size_t>(targets[i]));
    }
    return t.push(std::move(out), [logits, probs, targets = std::move(targets)](
                                      TapeT<T>& tp, const TensorT<T>& g) {
        TensorT<T> gl(probs.rows(), probs.cols());
        for (size_t i = 0; i < probs.rows(); ++i) {
            for (size_t j = 0; j < probs.cols(); ++j) gl(i, j) = g(i, 0) * probs(i, j);
            gl(i, static_cast<size_t>(targets[i])) -= g(i, 0);
        }
        tp.accumulate(logits, gl);
    });
}

// Element-wise binary cross-entropy on logits, the stable form
// max(x,0) − x·y + log(1 + exp(−|x|)). Gradient is σ(x) − y.
template <typename T>
int bce_with_logits(TapeT<T>& t, int logits, TensorT<T> targets) {
    const auto& L = t.value(logits);
    detail::require(L.same_shape(targets),
                    "bce-with-logits: targets " + targets.shape_str() + " vs logits " +
                        L.shape_str());
    TensorT<T> out(L.rows(), L.cols());
    for (size_t i = 0; i < L.size(); ++i) {
        const double x = static_cast<double>(L[i]);
        const double y = static_cast<double>(targets[i]);
        out[i] = static_cast<T>(std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::fabs(x))));
    }
    return t.push(std::move(out), [logits, targets = std::move(targets)](TapeT<T>& tp,
                                                                         const TensorT<T>& g) {
        const auto& L = tp.value(logits);
        TensorT<T> gl(L.rows(), L.cols());
        for (size_t i = 0; i < L.size(); ++i) {
            const double x = static_cast<double>(L[i]);
            const double sig = 1.0 / (1.0 + std::exp(-x));
            gl[i] = static_cast<T>(static_cast<double>(g[i]) *
                                   (sig - static_cast<double>(targets[i])));
        }
        tp.accumulate(logits, gl);
    });
}

template <typename T>
int sum_all(TapeT<T>& t, int a) {
    const auto& A = t.value(a);
    T s = T(0);
    for (size_t i = 0; i < A.size(); ++i) s += A[i];
    return t.push(TensorT<T>::full(1, 1, s), [a](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Av = tp.value(a);
        tp.accumulate(a, TensorT<T>::full(Av.rows(), Av.cols(), g(0, 0)));
    });
}

template <typename T>
int mean_all(TapeT<T>& t, int a) {
    const auto& A = t.value(a);
    detail::require(A.size() > 0, "mean-all: empty tensor");
    T s = T(0);
    for (size_t i = 0; i < A.size(); ++i) s += A[i];
    const T inv = T(1) / static_cast<T>(A.size());
    return t.push(TensorT<T>::full(1, 1, s * inv), [a, inv](TapeT<T>& tp, const TensorT<T>& g) {
        const auto& Av = tp.value(a);
        tp.accumulate(a, TensorT<T>::full(Av.rows(), Av.cols(), g(0, 0) * inv));
    });
}

// Inverted-dropout mask drawn from rng; identity when p == 0.
template <typename T>
int dropout(TapeT<T>& t, int a, double p, Rng& rng) {
    if (p <= 0.0) return a;
    detail::require(p < 1.0, "dropout: rate must be < 1");
    const auto& A = t.value(a);
    std::vector<T> mask(A.size());
    const T keep = static_cast<T>(1.0 / (1.0 - p));
    for (auto& m : mask) m = rng.next_double() < p ? T(0) : keep;
    TensorT<T> out = A;
    for (size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
    return t.push(std::move(out), [a, mask = std::move(mask)](TapeT<T>& tp, const TensorT<T>& g) {
        TensorT<T> ga = g;
        for (size_t i = 0; i < ga.size(); ++i) ga[i] *= mask[i];
        tp.accumulate(a, ga);
    });
}

} // namespace molembed::nn
