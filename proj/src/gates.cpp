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

#include "leaksim/gates.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace leaksim {

void CZParams::validate() const {
    if (l1 < 0.0 || l1 > 0.25)
        throw std::invalid_argument("CZParams: L1 must lie in [0, 0.25]");
    if (lm < 0.0 || lm > 0.25)
        throw std::invalid_argument("CZParams: Lm must lie in [0, 0.25]");
}

Matrix3c sqrt_y() {
    const complex a(0.5, 0.5);
    Matrix3c u;
    u << a, -a, 0.0, a, a, 0.0, 0.0, 0.0, 1.0;
    return u;
}

Matrix3c sqrt_y_dag() {
    return sqrt_y().adjoint();
}

Matrix9c cz_unitary(const CZParams& p) {
    p.validate();
    const double r1 = std::sqrt(1.0 - 4.0 * p.l1);
    const double rm = std::sqrt(1.0 - 4.0 * p.lm);
    const double t1 = 2.0 * std::sqrt(p.l1);
    const double tm = 2.0 * std::sqrt(p.lm);
    const complex eip = std::exp(complex(0.0, p.phi));
    const complex eim = std::exp(complex(0.0, -p.phi));

    // Basis order |00>,|01>,|02>,|10>,|11>,|12>,|20>,|21>,|22> with
    // |q_lf q_hf>. The |11><->|02> block carries leakage, the
    // |12><->|21> block carries mobility and the conditional phases.
    Matrix9c u = Matrix9c::Zero();
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(2, 2) = -r1;
    u(2, 4) = t1;
    u(3, 3) = 1.0;
    u(4, 2) = -t1;
    u(4, 4) = -r1;
    u(5, 5) = -rm * eim;
    u(5, 7) = tm;
    u(6, 6) = 1.0;
    u(7, 5) = -tm;
    u(7, 7) = -rm * eip;
    u(8, 8) = 1.0;

    if (unitarity_defect(u) > 1e-12)
        throw std::runtime_error("cz_unitary: matrix is not unitary");
    return u;
}

Matrix9c cz_xbasis_unitary(const CZParams& p, bool conjugate_first) {
    const Matrix3c id = Matrix3c::Identity();
    Matrix9c pre, post;
    if (conjugate_first) {
        pre = Eigen::kroneckerProduct(sqrt_y_dag(), id);
        post = Eigen::kroneckerProduct(sqrt_y(), id);
    } else {
        pre = Eigen::kroneckerProduct(id, sqrt_y_dag());
        post = Eigen::kroneckerProduct(id, sqrt_y());
    }
    return post * cz_unitary(p) * pre;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
    Eigen::MatrixXcd g = u.adjoint() * u;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace leaksim
