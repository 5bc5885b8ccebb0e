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

#ifndef LEAKSIM_DENSITY_MATRIX_H
#define LEAKSIM_DENSITY_MATRIX_H

#include <Eigen/Dense>

#include "leaksim/kraus.hpp"
#include "leaksim/state_vector.hpp"

namespace leaksim {

/// Small exact density-matrix engine (n <= 3), used to validate the
/// trajectory sampler. Operators are expanded to the full Hilbert space,
/// so this is simple rather than fast.
class DensityMatrix {
  public:
    explicit DensityMatrix(int n);
    static DensityMatrix from_state(const StateVector& psi);

    int n() const { return n_; }
    int64_t dim() const { return rho_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return rho_; }

    double trace_real() const { return rho_.trace().real(); }
    double hermiticity_defect() const;
    double min_eigenvalue() const;

    void apply_1q(const Matrix3c& u, int target);
    void apply_2q(const Matrix9c& u, int first, int second);
    void apply_kraus(const KrausChannel& ch, int target);
    /// Unconditional reset to |0>, as the CPTP map sum_k |0><k| . |k><0|.
    void reset(int target);

    /// Diagonal of the reduced density matrix of `target`.
    Eigen::Vector3d populations(int target) const;
    /// Joint computational-basis distribution (the diagonal).
    Eigen::VectorXd basis_distribution() const;
    /// Trace out `target`, returning the state on the remaining qutrits.
    DensityMatrix partial_trace(int target) const;

  private:
    void apply_full(const Eigen::MatrixXcd& f);
    Eigen::MatrixXcd expand_1q(const Matrix3c& u, int target) const;
    Eigen::MatrixXcd expand_2q(const Matrix9c& u, int first, int second) const;

    int n_;
    Eigen::MatrixXcd rho_;
};

}  // namespace leaksim

#endif
