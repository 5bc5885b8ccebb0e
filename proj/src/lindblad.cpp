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

#include "leaksim/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace leaksim {

using Matrix9 = Eigen::Matrix<complex, 9, 9>;

Matrix3c transmon_hamiltonian(const DecoherenceSpec& spec) {
    // H = omega a^dag a + (alpha/2) (a^dag)^2 a^2 = diag(0, omega, 2 omega + alpha).
    Matrix3c h = Matrix3c::Zero();
    h(1, 1) = spec.omega;
    h(2, 2) = 2.0 * spec.omega + spec.alpha;
    return h;
}

std::vector<Matrix3c> lindblad_operators(const DecoherenceSpec& spec) {
    std::vector<Matrix3c> ops;
    Matrix3c amp = Matrix3c::Zero();
    amp(0, 1) = 1.0;
    amp(1, 2) = std::sqrt(2.0);
    ops.push_back(std::sqrt(1.0 / spec.t1) * amp);

    Matrix3c d1 = Matrix3c::Zero(), d2 = Matrix3c::Zero(), d3 = Matrix3c::Zero();
    d1(0, 0) = 1.0;
    d1(2, 2) = -1.0;
    d2(0, 0) = 1.0;
    d2(1, 1) = -1.0;
    d3(1, 1) = 1.0;
    d3(2, 2) = -1.0;
    ops.push_back(std::sqrt(4.0 / (9.0 * spec.t2)) * d1);
    ops.push_back(std::sqrt(1.0 / (9.0 * spec.t2)) * d2);
    ops.push_back(std::sqrt(1.0 / (9.0 * spec.t2)) * d3);
    return ops;
}

Liouvillian build_liouvillian(const DecoherenceSpec& spec) {
    if (spec.t1 <= 0.0 || spec.t2 <= 0.0)
        throw std::invalid_argument("DecoherenceSpec: T1 and T2 must be positive");

    // Column stacking: vec(rho)[i + 3j] = rho(i, j), so vec(A rho B) =
    // kron(B^T, A) vec(rho).
    const Matrix3c id = Matrix3c::Identity();
    const Matrix3c h = transmon_hamiltonian(spec);
    Matrix9 l = Matrix9::Zero();
    l -= complex(0.0, 1.0) *
         (Eigen::kroneckerProduct(id, h) - Eigen::kroneckerProduct(h.transpose(), id));
    for (const auto& op : lindblad_operators(spec)) {
        const Matrix3c opdop = op.adjoint() * op;
        l += Eigen::kroneckerProduct(op.conjugate(), op);
        l -= 0.5 * Eigen::kroneckerProduct(id, opdop);
        l -= 0.5 * Eigen::kroneckerProduct(opdop.transpose(), id);
    }
    return Liouvillian{l};
}

Matrix9 superoperator_at(const Liouvillian& liou, double t_seconds) {
    if (t_seconds < 0.0)
        throw std::invalid_argument("superoperator_at: negative duration");
    Matrix9 scaled = liou.matrix * t_seconds;
    return scaled.exp();
}

KrausChannel channel_from_liouvillian(const Liouvillian& liou, double t_seconds) {
    const Matrix9 s = superoperator_at(liou, t_seconds);

    // Choi matrix: C[(i + 3a), (j + 3b)] = S[(i + 3j), (a + 3b)], so that
    // C = sum_m v_m v_m^dag with K_m(i, a) = sqrt(lambda_m) v_m[i + 3a].
    Matrix9 choi = Matrix9::Zero();
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 3; ++j)
                for (int b = 0; b < 3; ++b)
                    choi(i + 3 * a, j + 3 * b) = s(i + 3 * j, a + 3 * b);

    Eigen::SelfAdjointEigenSolver<Matrix9> es(choi);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::runtime_error("channel_from_liouvillian: map is not completely positive");

    KrausChannel ch;
    for (int m = 8; m >= 0; --m) {  // eigenvalues ascend; emit largest first
        const double lambda = es.eigenvalues()[m];
        if (lambda <= 1e-12)
            continue;
        const auto v = es.eigenvectors().col(m);
        Matrix3c k;
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 3; ++a)
                k(i, a) = std::sqrt(lambda) * v[i + 3 * a];
        // The eigenvector's global phase is arbitrary; fix it so the
        // largest entry is real positive, keeping real channels real.
        int bi = 0, bj = 0;
        double best = -1.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (std::abs(k(i, j)) > best) {
                    best = std::abs(k(i, j));
                    bi = i;
                    bj = j;
                }
        if (best > 0.0)
            k *= std::conj(k(bi, bj)) / std::abs(k(bi, bj));
        ch.operators.push_back(k);
    }
    ch.detect_real();
    ch.detect_identity();
    ch.check_complete();
    return ch;
}

KrausChannel t12_channel(double t_seconds, const DecoherenceSpec& spec) {
    if (t_seconds == 0.0)
        return KrausChannel::identity();
    return channel_from_liouvillian(build_liouvillian(spec), t_seconds);
}

ChannelCache::ChannelCache(const DecoherenceSpec& spec)
    : spec_(spec), liou_(build_liouvillian(spec)) {}

const KrausChannel& ChannelCache::get(int64_t t_ns) {
    auto it = by_duration_.find(t_ns);
    if (it != by_duration_.end())
        return *it->second;
    auto ch = std::make_unique<KrausChannel>(
        t_ns == 0 ? KrausChannel::identity()
                  : channel_from_liouvillian(liou_, static_cast<double>(t_ns) * 1e-9));
    auto [pos, ok] = by_duration_.emplace(t_ns, std::move(ch));
    return *pos->second;
}

const KrausChannel& ChannelCache::get_prebuilt(int64_t t_ns) const {
    auto it = by_duration_.find(t_ns);
    if (it == by_duration_.end())
        throw std::logic_error("ChannelCache: duration was not prebuilt");
    return *it->second;
}

void ChannelCache::prebuild(const std::vector<int64_t>& durations_ns) {
    for (int64_t t : durations_ns)
        get(t);
}

}  // namespace leaksim
