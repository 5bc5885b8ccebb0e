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

#ifndef LEAKSIM_DECODER_H
#define LEAKSIM_DECODER_H

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "leaksim/sampler.hpp"
#include "leaksim/schedule.hpp"

namespace leaksim {

/// Detector bits of one shot (after the 2 -> 1 outcome mapping and the
/// reference correction), plus the observed observable bit.
struct DetectorBits {
    std::vector<uint8_t> bits;
    uint8_t observable = 0;
};

DetectorBits detectors_from_shot(const ShotRecord& shot, const ScheduledCircuit& circuit);
std::vector<DetectorBits> detectors_from_shots(const ShotSet& shots);

/// A single Pauli insertion, placed immediately after ops[op_index], or a
/// measurement flip when flip_slot >= 0.
struct PauliFault {
    int op_index = -1;
    int wire = -1;
    uint8_t x1 = 0, z1 = 0;
    int wire2 = -1;
    uint8_t x2 = 0, z2 = 0;
    int flip_slot = -1;
};

struct FaultEffect {
    std::vector<int> flipped_slots;
    std::vector<int> flipped_detectors;
    bool observable_flip = false;
};

/// Push a qubit-level Pauli frame through the rest of the circuit and
/// report which detectors and whether the observable flip.
FaultEffect frame_propagate(const ScheduledCircuit& circuit, const PauliFault& fault);

struct GraphEdge {
    int a = -1;
    int b = -1;  // -1 = boundary
    double p = 0.01;
    double w = 0.0;
    bool mask = false;
    int n_faults = 0;  // provenance: merged fault count
};

struct DecodingGraph {
    int n_detectors = 0;
    std::vector<GraphEdge> edges;
    int dropped_faults = 0;        // flipped more than two detectors of a type
    int undetected_mask_faults = 0;  // flipped the observable but no detector
    int fitted_parity = -1;        // shot-index parity used for training

    void to_json(std::ostream& os) const;
};

/// Enumerate single Pauli faults after every gate, idle and reset slot,
/// the fifteen two-site Paulis after every CZ, and measurement flips;
/// faults flipping one detector become boundary edges, two an interior
/// edge. Probabilities start at a uniform placeholder.
DecodingGraph build_graph(const ScheduledCircuit& circuit);

/// Fit edge probabilities from training detector data via two-point
/// correlations; boundary edges absorb the residual marginals. All
/// probabilities clamped to [1e-6, 0.49], weights w = ln((1-p)/p).
void fit_weights(DecodingGraph& graph, const std::vector<DetectorBits>& training,
                 int training_parity);

/// Exact minimum-weight perfect matching of the fired detectors (subset
/// dynamic programming per connected component, capacity 20 defects).
/// Returns the predicted observable flip.
bool decode(const DecodingGraph& graph, const DetectorBits& bits);

/// Matching weight alone (for oracle comparisons).
double matching_weight(const DecodingGraph& graph, const std::vector<int>& defects);

struct FailureEstimate {
    int64_t n_failures = 0;
    int64_t n_shots = 0;
    double p_fail = 0.0;
    double delta_p_fail = 0.0;
};

/// Decode every shot of the given index parity and count mispredictions
/// of the observable. Rejects the parity the graph was trained on.
FailureEstimate evaluate(const std::vector<DetectorBits>& all_shots, const DecodingGraph& graph,
                         int eval_parity);

}  // namespace leaksim

#endif
