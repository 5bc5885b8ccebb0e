// Copyright 2026 leaksim Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leaksim/state_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace leaksim {

int StateVector::max_qutrits = 16;

namespace {
int64_t pow3(int n) {
    int64_t d = 1;
    while (n-- > 0)
        d *= 3;
    return d;
}
}  // namespace

StateVector::StateVector(int n) : n_(n) {
    if (n < 1)
        throw std::invalid_argument("StateVector: need at least one qutrit");
    if (n > max_qutrits)
        throw std::length_error("StateVector: qutrit count exceeds the memory cap");
    amps_ = Eigen::VectorXcd::Zero(pow3(n));
    amps_[0] = 1.0;
}

int64_t StateVector::stride(int target) const {
    return pow3(target);
}

void StateVector::check_target(int target) const {
    if (target < 0 || target >= n_)
        throw std::out_of_range("StateVector: target out of range");
}

double StateVector::norm2() const {
    return amps_.squaredNorm();
}

void StateVector::apply_1q(const Matrix3c& u, int target) {
    check_target(target);
    const int64_t s = stride(target);
    const int64_t d = dim();
    complex* p = amps_.data();
    for (int64_t hi = 0; hi < d; hi += 3 * s) {
        for (int64_t lo = hi; lo < hi + s; ++lo) {
            const complex v0 = p[lo], v1 = p[lo + s], v2 = p[lo + 2 * s];
            p[lo] = u(0, 0) * v0 + u(0, 1) * v1 + u(0, 2) * v2;
            p[lo + s] = u(1, 0) * v0 + u(1, 1) * v1 + u(1, 2) * v2;
            p[lo + 2 * s] = u(2, 0) * v0 + u(2, 1) * v1 + u(2, 2) * v2;
        }
    }
}

void StateVector::apply_2q(const Matrix9c& u, int first, int second) {
    check_target(first);
    check_target(second);
    if (first == second)
        throw std::invalid_argument("StateVector: repeated two-qutrit target");

    // Row-sparse form; most of our two-qutrit gates are nearly diagonal.
    int n_entries[9];
    int cols[9][9];
    complex vals[9][9];
    for (int r = 0; r < 9; ++r) {
        n_entries[r] = 0;
        for (int c = 0; c < 9; ++c)
            if (std::norm(u(r, c)) > 1e-30) {
                cols[r][n_entries[r]] = c;
                vals[r][n_entries[r]] = u(r, c);
                ++n_entries[r];
            }
    }

    const int64_t s1 = stride(first), s2 = stride(second);
    int64_t offs[9];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            offs[3 * i + j] = i * s1 + j * s2;

    const int64_t sa = std::min(s1, s2), sb = std::max(s1, s2);
    const int64_t d = dim();
    complex* p = amps_.data();
    complex in[9];
    for (int64_t top = 0; top < d; top += 3 * sb)
        for (int64_t mid = top; mid < top + sb; mid += 3 * sa)
            for (int64_t base = mid; base < mid + sa; ++base) {
                for (int k = 0; k < 9; ++k)
                    in[k] = p[base + offs[k]];
                for (int r = 0; r < 9; ++r) {
                    complex acc = 0.0;
                    for (int e = 0; e < n_entries[r]; ++e)
                        acc += vals[r][e] * in[cols[r][e]];
                    p[base + offs[r]] = acc;
                }
            }
}

int StateVector::apply_kraus_sampled(const KrausChannel& ch, int target, Rng& rng) {
    check_target(target);
    const int64_t s = stride(target);
    const int64_t d = dim();
    complex* p = amps_.data();

    // Reduced density matrix of the target qutrit (one pass), from which
    // every branch probability follows as tr(K rho K^dag).
    complex rho[3][3] = {};
    for (int64_t hi = 0; hi < d; hi += 3 * s) {
        for (int64_t lo = hi; lo < hi + s; ++lo) {
            const complex v0 = p[lo], v1 = p[lo + s], v2 = p[lo + 2 * s];
            rho[0][0] += v0 * std::conj(v0);
            rho[0][1] += v0 * std::conj(v1);
            rho[0][2] += v0 * std::conj(v2);
            rho[1][1] += v1 * std::conj(v1);
            rho[1][2] += v1 * std::conj(v2);
            rho[2][2] += v2 * std::conj(v2);
        }
    }
    rho[1][0] = std::conj(rho[0][1]);
    rho[2][0] = std::conj(rho[0][2]);
    rho[2][1] = std::conj(rho[1][2]);

    const size_t n_ops = ch.operators.size();
    double probs[32];
    double total = 0.0;
    if (n_ops > 32)
        throw std::invalid_argument("apply_kraus_sampled: too many operators");
    for (size_t i = 0; i < n_ops; ++i) {
        const Matrix3c& k = ch.operators[i];
        complex acc = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    acc += k(a, b) * rho[b][c] * std::conj(k(a, c));
        probs[i] = std::max(0.0, acc.real());
        total += probs[i];
    }
    if (total < 1e-15)
        throw std::runtime_error("apply_kraus_sampled: all branch probabilities vanish");

    double u = rng.uniform() * total;
    size_t pick = n_ops - 1;
    for (size_t i = 0; i < n_ops; ++i) {
        if (u < probs[i]) {
            pick = i;
            break;
        }
        u -= probs[i];
    }

    const double inv = 1.0 / std::sqrt(probs[pick]);
    const Matrix3c& k = ch.operators[pick];
    if (ch.all_real) {
        const double m00 = k(0, 0).real() * inv, m01 = k(0, 1).real() * inv,
                     m02 = k(0, 2).real() * inv;
        const double m10 = k(1, 0).real() * inv, m11 = k(1, 1).real() * inv,
                     m12 = k(1, 2).real() * inv;
        const double m20 = k(2, 0).real() * inv, m21 = k(2, 1).real() * inv,
                     m22 = k(2, 2).real() * inv;
        double* q = reinterpret_cast<double*>(p);
        for (int64_t hi = 0; hi < d; hi += 3 * s) {
            for (int64_t lo = hi; lo < hi + s; ++lo) {
                const int64_t i0 = 2 * lo, i1 = 2 * (lo + s), i2 = 2 * (lo + 2 * s);
                const double r0 = q[i0], c0 = q[i0 + 1];
                const double r1 = q[i1], c1 = q[i1 + 1];
                const double r2 = q[i2], c2 = q[i2 + 1];
                q[i0] = m00 * r0 + m01 * r1 + m02 * r2;
                q[i0 + 1] = m00 * c0 + m01 * c1 + m02 * c2;
                q[i1] = m10 * r0 + m11 * r1 + m12 * r2;
                q[i1 + 1] = m10 * c0 + m11 * c1 + m12 * c2;
                q[i2] = m20 * r0 + m21 * r1 + m22 * r2;
                q[i2 + 1] = m20 * c0 + m21 * c1 + m22 * c2;
            }
        }
    } else {
        const complex m00 = k(0, 0) * inv, m01 = k(0, 1) * inv, m02 = k(0, 2) * inv;
        const complex m10 = k(1, 0) * inv, m11 = k(1, 1) * inv, m12 = k(1, 2) * inv;
        const complex m20 = k(2, 0) * inv, m21 = k(2, 1) * inv, m22 = k(2, 2) * inv;
        for (int64_t hi = 0; hi < d; hi += 3 * s) {
            for (int64_t lo = hi; lo < hi + s; ++lo) {
                const complex v0 = p[lo], v1 = p[lo + s], v2 = p[lo + 2 * s];
                p[lo] = m00 * v0 + m01 * v1 + m02 * v2;
                p[lo + s] = m10 * v0 + m11 * v1 + m12 * v2;
                p[lo + 2 * s] = m20 * v0 + m21 * v1 + m22 * v2;
            }
        }
    }
    return static_cast<int>(pick);
}

Trit StateVector::measure_and_collapse(int target, Rng& rng) {
    check_target(target);
    const int64_t s = stride(target);
    const int64_t d = dim();
    complex* p = amps_.data();

    double w[3] = {0.0, 0.0, 0.0};
    for (int64_t hi = 0; hi < d; hi += 3 * s) {
        for (int64_t lo = hi; lo < hi + s; ++lo) {
            w[0] += std::norm(p[lo]);
            w[1] += std::norm(p[lo + s]);
            w[2] += std::norm(p[lo + 2 * s]);
        }
    }
    const double total = w[0] + w[1] + w[2];
    if (total < 1e-15)
        throw std::runtime_error("measure_and_collapse: zero-norm state");

    double u = rng.uniform() * total;
    int k = 2;
    if (u < w[0])
        k = 0;
    else if (u < w[0] + w[1])
        k = 1;

    const double inv = 1.0 / std::sqrt(w[k]);
    for (int64_t hi = 0; hi < d; hi += 3 * s) {
        for (int64_t lo = hi; lo < hi + s; ++lo) {
            for (int t = 0; t < 3; ++t) {
                complex& a = p[lo + t * s];
                a = (t == k) ? a * inv : complex(0.0);
            }
        }
    }
    return static_cast<Trit>(k);
}

void StateVector::reset(int target, Rng& rng) {
    const Trit outcome = measure_and_collapse(target, rng);
    const int k = trit_value(outcome);
    if (k == 0)
        return;
    const int64_t s = stride(target);
    const int64_t d = dim();
    complex* p = amps_.data();
    for (int64_t hi = 0; hi < d; hi += 3 * s) {
        for (int64_t lo = hi; lo < hi + s; ++lo) {
            p[lo] = p[lo + k * s];
            p[lo + k * s] = 0.0;
        }
    }
}

void StateVector::append_zero_qutrit() {
    if (n_ + 1 > max_qutrits)
        throw std::length_error("StateVector: qutrit count exceeds the memory cap");
    const int64_t d = dim();
    amps_.conservativeResize(3 * d);
    amps_.segment(d, 2 * d).setZero();
    ++n_;
}

void StateVector::remove_qutrit(int target) {
    check_target(target);
    if (n_ == 1)
        throw std::invalid_argument("StateVector: cannot remove the last qutrit");
    const int64_t s = stride(target);
    const int64_t d = dim();
    complex* p = amps_.data();

    double leak = 0.0;
    for (int64_t hi = 0; hi < d; hi += 3 * s)
        for (int64_t lo = hi; lo < hi + s; ++lo)
            leak += std::norm(p[lo + s]) + std::norm(p[lo + 2 * s]);
    if (leak > 1e-9)
        throw std::runtime_error("remove_qutrit: qutrit is not in |0>");

    int64_t out = 0;
    for (int64_t hi = 0; hi < d; hi += 3 * s)
        for (int64_t lo = hi; lo < hi + s; ++lo)
            p[out++] = p[lo];
    amps_.conservativeResize(out);
    --n_;
}

}  // namespace leaksim
