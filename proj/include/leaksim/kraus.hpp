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

#ifndef LEAKSIM_KRAUS_H
#define LEAKSIM_KRAUS_H

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace leaksim {

using complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;

/// A CPTP channel on one qutrit, given as a set of 3x3 Kraus operators.
/// Operators are sorted by decreasing weight so that the first branch is
/// usually the near-identity one (helps the sampler's early exit).
struct KrausChannel {
    std::vector<Matrix3c> operators;
    // True when every operator has zero imaginary part; the sampler then
    // uses a cheaper real-matrix kernel.
    bool all_real = false;
    // True when the channel is the identity map to machine precision;
    // the sampler skips those outright.
    bool is_identity = false;

    /// max-norm deviation of sum_i K_i^dag K_i from the identity.
    double completeness_defect() const {
        Matrix3c acc = Matrix3c::Zero();
        for (const auto& k : operators)
            acc += k.adjoint() * k;
        return (acc - Matrix3c::Identity()).cwiseAbs().maxCoeff();
    }

    void check_complete(double tol = 1e-9) const {
        if (operators.empty())
            throw std::invalid_argument("KrausChannel: no operators");
        if (completeness_defect() > tol)
            throw std::invalid_argument("KrausChannel: completeness violated");
    }

    static KrausChannel identity() {
        KrausChannel ch;
        ch.operators.push_back(Matrix3c::Identity());
        ch.all_real = true;
        ch.is_identity = true;
        return ch;
    }

    void detect_real(double tol = 1e-14) {
        all_real = true;
        for (const auto& k : operators)
            if (k.imag().cwiseAbs().maxCoeff() > tol) {
                all_real = false;
                return;
            }
    }

    void detect_identity(double tol = 1e-13) {
        is_identity = operators.size() == 1 &&
                      (operators[0] - Matrix3c::Identity()).cwiseAbs().maxCoeff() < tol;
    }
};

}  // namespace leaksim

#endif
