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

#ifndef LEAKSIM_LINDBLAD_H
#define LEAKSIM_LINDBLAD_H

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "leaksim/kraus.hpp"

namespace leaksim {

/// Transmon decoherence parameters. T1/T2 in seconds; omega (resonance)
/// and alpha (anharmonicity) in rad/s, both zero in the rotating frame.
struct DecoherenceSpec {
    double t1 = 30e-6;
    double t2 = 30e-6;
    double omega = 0.0;
    double alpha = 0.0;

    bool operator==(const DecoherenceSpec&) const = default;
};

/// 9x9 superoperator acting on column-stacked 3x3 density matrices.
struct Liouvillian {
    Eigen::Matrix<complex, 9, 9> matrix;
};

/// Lindblad generator for single-qutrit relaxation (rate 1/T1, with the
/// sqrt(2)-enhanced |2>->|1> matrix element) and dephasing (three
/// diagonal operators normalized so coherences decay at 1/(2 T2)).
Liouvillian build_liouvillian(const DecoherenceSpec& spec);

/// The Lindblad operators themselves, exposed for oracle integrators.
std::vector<Matrix3c> lindblad_operators(const DecoherenceSpec& spec);
Matrix3c transmon_hamiltonian(const DecoherenceSpec& spec);

/// exp(t L) as a superoperator matrix.
Eigen::Matrix<complex, 9, 9> superoperator_at(const Liouvillian& liou, double t_seconds);

/// Kraus form of exp(t L), via eigendecomposition of the Choi matrix.
/// Eigenvalues below 1e-12 are discarded; an eigenvalue below -1e-9
/// signals a non-CP map and throws.
KrausChannel channel_from_liouvillian(const Liouvillian& liou, double t_seconds);

/// Memoized T_{1,2}(t) channels for the finitely many durations that a
/// schedule uses. Build once, then read concurrently.
class ChannelCache {
  public:
    explicit ChannelCache(const DecoherenceSpec& spec);

    /// Returns the channel for a duration in integer nanoseconds,
    /// building and caching it if needed (not thread-safe).
    const KrausChannel& get(int64_t t_ns);
    /// Read-only lookup for concurrent use; the duration must have been
    /// built beforehand.
    const KrausChannel& get_prebuilt(int64_t t_ns) const;
    void prebuild(const std::vector<int64_t>& durations_ns);

    const DecoherenceSpec& spec() const { return spec_; }

  private:
    DecoherenceSpec spec_;
    Liouvillian liou_;
    std::map<int64_t, std::unique_ptr<KrausChannel>> by_duration_;
};

/// Convenience wrapper matching the papers' usage: T_{1,2}(t).
KrausChannel t12_channel(double t_seconds, const DecoherenceSpec& spec);

}  // namespace leaksim

#endif
