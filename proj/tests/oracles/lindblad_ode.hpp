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

// Test-only oracle: direct RK4 integration of the single-qutrit Lindblad
// master equation, independent of the matrix-exponential channel path.

#ifndef LEAKSIM_TESTS_LINDBLAD_ODE_H
#define LEAKSIM_TESTS_LINDBLAD_ODE_H

#include <Eigen/Dense>

#include "leaksim/lindblad.hpp"

namespace leaksim::oracle {

inline Matrix3c lindblad_rhs(const Matrix3c& rho, const Matrix3c& h,
                             const std::vector<Matrix3c>& ls) {
    Matrix3c out = complex(0.0, -1.0) * (h * rho - rho * h);
    for (const auto& l : ls) {
        const Matrix3c ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

/// Evolve rho0 for t seconds with fixed-step RK4.
inline Matrix3c integrate_lindblad(const Matrix3c& rho0, double t,
                                   const DecoherenceSpec& spec, int steps = 20000) {
    const Matrix3c h = transmon_hamiltonian(spec);
    const auto ls = lindblad_operators(spec);
    const double dt = t / steps;
    Matrix3c rho = rho0;
    for (int i = 0; i < steps; ++i) {
        const Matrix3c k1 = lindblad_rhs(rho, h, ls);
        const Matrix3c k2 = lindblad_rhs(rho + 0.5 * dt * k1, h, ls);
        const Matrix3c k3 = lindblad_rhs(rho + 0.5 * dt * k2, h, ls);
        const Matrix3c k4 = lindblad_rhs(rho + dt * k3, h, ls);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

/// Apply a Kraus channel to a 3x3 density matrix (plain sum).
inline Matrix3c apply_channel(const KrausChannel& ch, const Matrix3c& rho) {
    Matrix3c out = Matrix3c::Zero();
    for (const auto& k : ch.operators)
        out += k * rho * k.adjoint();
    return out;
}

}  // namespace leaksim::oracle

#endif
