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

#ifndef LEAKSIM_SAMPLER_H
#define LEAKSIM_SAMPLER_H

#include <cstdint>
#include <vector>

#include "leaksim/schedule.hpp"

namespace leaksim {

/// One Monte Carlo trajectory: trit outcomes aligned to the circuit's
/// measurement slots, plus the per-round leaked-measurement flags.
struct ShotRecord {
    uint64_t seed = 0;
    std::vector<uint8_t> outcomes;       // trit per measurement slot
    std::vector<uint8_t> leak_by_round;  // 0/1 per QEC round (1..n_r)
};

struct ShotSet {
    const ScheduledCircuit* circuit = nullptr;
    uint64_t master_seed = 0;
    std::vector<ShotRecord> records;
};

/// Execute one trajectory. Seeding is the caller's business; use
/// split_seed(master, shot_index) for reproducible batches.
ShotRecord run_shot(const ScheduledCircuit& circuit, const ChannelCache& channels,
                    uint64_t seed);

/// Run n_shots trajectories with counter-based per-shot seeds. The result
/// is byte-identical for any worker count.
ShotSet run_batch(const ScheduledCircuit& circuit, const ChannelCache& channels, int n_shots,
                  uint64_t master_seed, int n_workers = 0);

struct LeakageStats {
    std::vector<double> rate;  // per round, 1..n_r
    std::vector<double> err;   // binomial error bars
};

/// Fraction of shots with at least one leaked ("2") outcome among the
/// round's stabilizer measurements; the final transversal readout is
/// excluded by construction.
LeakageStats leakage_stats(const ShotSet& shots);

}  // namespace leaksim

#endif
