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

#ifndef LEAKSIM_SCHEDULE_H
#define LEAKSIM_SCHEDULE_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "leaksim/gates.hpp"
#include "leaksim/layout.hpp"
#include "leaksim/lindblad.hpp"

namespace leaksim {

/// Gate/measure/reset durations in integer nanoseconds.
struct TimingTable {
    int64_t single_gate_ns = 20;
    int64_t cz_gate_ns = 40;
    int64_t measure_ns = 600;
    int64_t reset_ns = 500;

    void validate() const;
    /// Canonical per-round wall clock: gate layers + measure + reset.
    int64_t round_ns() const {
        return 2 * single_gate_ns + 4 * cz_gate_ns + measure_ns + reset_ns;
    }
};

enum class OpKind : uint8_t {
    alloc_wire,   // bring a fresh |0> qutrit to life
    free_wire,    // drop a reset qutrit from the register
    gate1,        // single-qutrit unitary (gate table index)
    gate2,        // two-qutrit unitary; wire_a = q_lf, wire_b = q_hf
    channel,      // T_{1,2}(duration) on one wire
    measure,      // projective {0,1,2} measurement, recorded
    reset,        // measure-and-discard to |0>
};

struct Op {
    OpKind kind;
    int wire_a = -1;
    int wire_b = -1;
    int gate_id = -1;        // into gates1 / gates2
    int64_t duration_ns = 0; // channels and timeline metadata
    int16_t round = 0;       // 0 = preparation, 1..n_r = QEC rounds, n_r+1 = final readout
    int16_t layer = -1;      // CZ layer tag for the dump, -1 otherwise
    int32_t measure_slot = -1;
    bool counts_for_leakage = false;
};

/// A (site, generation) pair: one lifetime of a physical qutrit between
/// allocation and its measure/reset retirement.
struct WireInfo {
    Site site;
    int generation = 0;
};

/// One deterministic XOR of measurement slots (after the 2 -> 1 outcome
/// mapping), with its noiseless reference value.
struct DetectorDef {
    std::vector<int> slots;
    bool reference = false;
    bool typed = false;       // true when tied to one stabilizer type
    StabType type = StabType::Z;
    int round = 0;            // latest round involved (diagnostics)
    Site site{};              // anchor site (diagnostics)
};

struct ObservableDef {
    std::vector<int> slots;
    bool reference = false;
};

struct ExperimentConfig {
    PatchKind patch = PatchKind::rotated_4x2;
    bool wiggled = false;
    int n_rounds = 3;
    CZParams cz{};
    DecoherenceSpec decoherence{};
    TimingTable timing{};
};

struct ScheduledCircuit {
    ExperimentConfig config;
    PatchLayout layout;
    FrequencyAssignment frequencies;

    std::vector<Matrix3c> gates1;
    std::vector<std::string> gate1_names;
    std::vector<Matrix9c> gates2;
    std::vector<std::string> gate2_names;

    std::vector<Op> ops;
    std::vector<WireInfo> wires;

    int num_measurements = 0;
    std::vector<int16_t> slot_round;        // per measurement slot
    std::vector<bool> slot_is_final;        // final transversal readout?
    std::vector<int> slot_wire;             // wire measured at each slot

    std::vector<DetectorDef> detectors;
    ObservableDef observable;

    int max_live_qutrits = 0;
    std::vector<int64_t> channel_durations_ns;  // distinct values, sorted

    /// Line-oriented dump, one operation per line (golden-file stable).
    void dump(std::ostream& os) const;

    /// Sum of channel exposure per wire and round (timeline checks).
    int64_t exposure_ns(int wire, int round) const;
};

ScheduledCircuit compile_experiment(const ExperimentConfig& config);

}  // namespace leaksim

#endif
