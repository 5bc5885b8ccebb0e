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

#ifndef LEAKSIM_STATE_VECTOR_H
#define LEAKSIM_STATE_VECTOR_H

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "leaksim/kraus.hpp"
#include "leaksim/rng.hpp"

namespace leaksim {

using Matrix9c = Eigen::Matrix<complex, 9, 9>;

/// A measurement outcome on one qutrit.
enum class Trit : uint8_t { zero = 0, one = 1, two = 2 };

inline int trit_value(Trit t) { return static_cast<int>(t); }

/// Dense state vector over n qutrits. Qutrit 0 is the least significant
/// trit of the amplitude index; amplitudes have length 3^n.
class StateVector {
  public:
    /// Largest register the engine will allocate (3^16 amplitudes ~ 690 MB).
    static int max_qutrits;

    explicit StateVector(int n);

    int n() const { return n_; }
    int64_t dim() const { return static_cast<int64_t>(amps_.size()); }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    Eigen::VectorXcd& amplitudes() { return amps_; }

    double norm2() const;

    /// Apply a single-qutrit unitary to `target`.
    void apply_1q(const Matrix3c& u, int target);

    /// Apply a two-qutrit unitary. The 9x9 matrix is indexed by
    /// 3*trit(first) + trit(second): `first` is the left ket label.
    void apply_2q(const Matrix9c& u, int first, int second);

    /// Sample a Kraus branch with probability ||K_i psi||^2, collapse onto
    /// it and renormalize. Returns the branch index.
    int apply_kraus_sampled(const KrausChannel& ch, int target, Rng& rng);

    /// Projective measurement in the {|0>,|1>,|2>} basis.
    Trit measure_and_collapse(int target, Rng& rng);

    /// Measure, then map the collapsed trit to |0> (unconditional reset).
    void reset(int target, Rng& rng);

    /// Tensor a fresh |0> qutrit on as the new most significant trit.
    void append_zero_qutrit();

    /// Drop qutrit `target`, which must hold no weight outside |0>.
    /// Qutrits above `target` shift down by one.
    void remove_qutrit(int target);

  private:
    int64_t stride(int target) const;
    void check_target(int target) const;

    int n_;
    Eigen::VectorXcd amps_;
};

}  // namespace leaksim

#endif
