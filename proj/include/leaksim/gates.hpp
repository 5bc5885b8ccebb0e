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

#ifndef LEAKSIM_GATES_H
#define LEAKSIM_GATES_H

#include <Eigen/Dense>

#include "leaksim/state_vector.hpp"

namespace leaksim {

/// Parameters of the noisy CZ gate: leakage probability L1, leakage
/// mobility Lm (both in [0, 0.25] so the square roots stay real) and the
/// leakage-conditional phase phi.
struct CZParams {
    double l1 = 0.0;
    double lm = 0.0;
    double phi = 0.0;

    void validate() const;
};

/// sqrt(Y) on the {|0>,|1>} subspace, identity on |2>.
Matrix3c sqrt_y();

/// Adjoint of sqrt_y(); satisfies sqrt_y() * sqrt_y_dag() == I.
Matrix3c sqrt_y_dag();

/// The 9x9 noisy-CZ unitary in the basis |q_lf q_hf> (lower-frequency
/// qutrit is the left label, matrix index = 3*lf + hf). Only the
/// higher-frequency qutrit can leak; mobility exchanges |21> and |12>.
Matrix9c cz_unitary(const CZParams& p);

/// CZ with the lower-frequency (data-side) qutrit conjugated into the X
/// basis: (sqrt_y ox I) * U_CZ * (sqrt_y_dag ox I). Used to extract
/// X-type stabilizers inside a shared CZ layer schedule.
Matrix9c cz_xbasis_unitary(const CZParams& p, bool conjugate_first);

/// max-norm deviation of U^dag U from the identity.
double unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace leaksim

#endif
