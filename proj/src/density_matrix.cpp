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

#include "leaksim/density_matrix.hpp"

#include <stdexcept>

namespace leaksim {

namespace {
int64_t pow3(int n) {
    int64_t d = 1;
    while (n-- > 0)
        d *= 3;
    return d;
}
int trit_of(int64_t index, int q) {
    return static_cast<int>((index / pow3(q)) % 3);
}
}  // namespace

DensityMatrix::DensityMatrix(int n) : n_(n) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("DensityMatrix: intended for 1..3 qutrits");
    const int64_t d = pow3(n);
    rho_ = Eigen::MatrixXcd::Zero(d, d);
    rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    DensityMatrix dm(psi.n());
    dm.rho_ = psi.amplitudes() * psi.amplitudes().adjoint();
    return dm;
}

double DensityMatrix::hermiticity_defect() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho_ + rho_.adjoint()));
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::apply_full(const Eigen::MatrixXcd& f) {
    rho_ = f * rho_ * f.adjoint();
}

Eigen::MatrixXcd DensityMatrix::expand_1q(const Matrix3c& u, int target) const {
    const int64_t d = dim();
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(d, d);
    const int64_t s = pow3(target);
    for (int64_t r = 0; r < d; ++r) {
        const int tr = trit_of(r, target);
        const int64_t base = r - tr * s;
        for (int tc = 0; tc < 3; ++tc)
            f(r, base + tc * s) = u(tr, tc);
    }
    return f;
}

Eigen::MatrixXcd DensityMatrix::expand_2q(const Matrix9c& u, int first, int second) const {
    if (first == second)
        throw std::invalid_argument("DensityMatrix: repeated two-qutrit target");
    const int64_t d = dim();
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(d, d);
    const int64_t s1 = pow3(first), s2 = pow3(second);
    for (int64_t r = 0; r < d; ++r) {
        const int i = trit_of(r, first), j = trit_of(r, second);
        const int64_t base = r - i * s1 - j * s2;
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
                f(r, base + k * s1 + l * s2) = u(3 * i + j, 3 * k + l);
    }
    return f;
}

void DensityMatrix::apply_1q(const Matrix3c& u, int target) {
    apply_full(expand_1q(u, target));
}

void DensityMatrix::apply_2q(const Matrix9c& u, int first, int second) {
    apply_full(expand_2q(u, first, second));
}

void DensityMatrix::apply_kraus(const KrausChannel& ch, int target) {
    const int64_t d = dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& k : ch.operators) {
        Eigen::MatrixXcd f = expand_1q(k, target);
        acc += f * rho_ * f.adjoint();
    }
    rho_ = acc;
}

void DensityMatrix::reset(int target) {
    KrausChannel ch;
    for (int k = 0; k < 3; ++k) {
        Matrix3c e = Matrix3c::Zero();
        e(0, k) = 1.0;
        ch.operators.push_back(e);
    }
    apply_kraus(ch, target);
}

Eigen::Vector3d DensityMatrix::populations(int target) const {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int64_t i = 0; i < dim(); ++i)
        p[trit_of(i, target)] += rho_(i, i).real();
    return p;
}

Eigen::VectorXd DensityMatrix::basis_distribution() const {
    return rho_.diagonal().real();
}

DensityMatrix DensityMatrix::partial_trace(int target) const {
    if (n_ == 1)
        throw std::invalid_argument("partial_trace: nothing would remain");
    DensityMatrix out(n_ - 1);
    out.rho_.setZero();
    const int64_t s = pow3(target);
    const int64_t d = dim();
    auto squeeze = [&](int64_t full) {
        const int64_t hi = full / (3 * s), lo = full % s;
        return hi * s + lo;
    };
    for (int64_t r = 0; r < d; ++r)
        for (int64_t c = 0; c < d; ++c)
            if (trit_of(r, target) == trit_of(c, target))
                out.rho_(squeeze(r), squeeze(c)) += rho_(r, c);
    return out;
}

}  // namespace leaksim
