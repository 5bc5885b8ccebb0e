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

#include "leaksim/sampler.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "leaksim/rng.hpp"
#include "leaksim/state_vector.hpp"

namespace leaksim {

ShotRecord run_shot(const ScheduledCircuit& circuit, const ChannelCache& channels,
                    uint64_t seed) {
    Rng rng(seed);
    ShotRecord rec;
    rec.seed = seed;
    rec.outcomes.assign(circuit.num_measurements, 0);
    rec.leak_by_round.assign(circuit.config.n_rounds, 0);

    std::vector<int> slot_of_wire(circuit.wires.size(), -1);
    std::vector<int> wire_at_slot;
    // A wire stays flagged while it provably holds |0> as a product
    // factor (fresh or just reset and untouched); channels fix |0><0|, so
    // they can be skipped there without changing any statistics.
    std::vector<uint8_t> known_zero(circuit.wires.size(), 0);

    StateVector state(1);
    bool state_started = false;

    auto touch = [&](int wire) { known_zero[wire] = 0; };

    size_t op_index = 0;
    try {
        for (const Op& op : circuit.ops) {
            switch (op.kind) {
                case OpKind::alloc_wire: {
                    if (!state_started) {
                        state_started = true;  // the constructor made qutrit 0
                    } else {
                        state.append_zero_qutrit();
                    }
                    slot_of_wire[op.wire_a] = static_cast<int>(wire_at_slot.size());
                    wire_at_slot.push_back(op.wire_a);
                    known_zero[op.wire_a] = 1;
                    break;
                }
                case OpKind::free_wire: {
                    const int slot = slot_of_wire[op.wire_a];
                    state.remove_qutrit(slot);
                    slot_of_wire[op.wire_a] = -1;
                    wire_at_slot.erase(wire_at_slot.begin() + slot);
                    for (size_t i = slot; i < wire_at_slot.size(); ++i)
                        slot_of_wire[wire_at_slot[i]] = static_cast<int>(i);
                    break;
                }
                case OpKind::gate1:
                    state.apply_1q(circuit.gates1[op.gate_id], slot_of_wire[op.wire_a]);
                    touch(op.wire_a);
                    break;
                case OpKind::gate2:
                    state.apply_2q(circuit.gates2[op.gate_id], slot_of_wire[op.wire_a],
                                   slot_of_wire[op.wire_b]);
                    touch(op.wire_a);
                    touch(op.wire_b);
                    break;
                case OpKind::channel:
                    if (!known_zero[op.wire_a]) {
                        const KrausChannel& ch = channels.get_prebuilt(op.duration_ns);
                        if (!ch.is_identity)
                            state.apply_kraus_sampled(ch, slot_of_wire[op.wire_a], rng);
                    }
                    break;
                case OpKind::measure: {
                    uint8_t outcome = 0;
                    if (!known_zero[op.wire_a])
                        outcome = static_cast<uint8_t>(
                            trit_value(state.measure_and_collapse(slot_of_wire[op.wire_a], rng)));
                    rec.outcomes[op.measure_slot] = outcome;
                    if (op.counts_for_leakage && outcome == 2 && op.round >= 1 &&
                        op.round <= circuit.config.n_rounds)
                        rec.leak_by_round[op.round - 1] = 1;
                    break;
                }
                case OpKind::reset:
                    if (!known_zero[op.wire_a]) {
                        state.reset(slot_of_wire[op.wire_a], rng);
                        known_zero[op.wire_a] = 1;
                    }
                    break;
            }
            ++op_index;
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("run_shot failed at op " + std::to_string(op_index) + ": " +
                                 e.what());
    }
    return rec;
}

ShotSet run_batch(const ScheduledCircuit& circuit, const ChannelCache& channels, int n_shots,
                  uint64_t master_seed, int n_workers) {
    if (n_shots < 1)
        throw std::invalid_argument("run_batch: need at least one shot");
    if (n_workers <= 0)
        n_workers = std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, n_shots);

    ShotSet set;
    set.circuit = &circuit;
    set.master_seed = master_seed;
    set.records.resize(n_shots);

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::string> errors(n_workers);
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = next.fetch_add(1); i < n_shots; i = next.fetch_add(1))
                    set.records[i] = run_shot(circuit, channels, split_seed(master_seed, i));
            } catch (const std::exception& e) {
                errors[w] = e.what();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (!e.empty())
            throw std::runtime_error("run_batch: " + e);
    return set;
}

LeakageStats leakage_stats(const ShotSet& shots) {
    if (shots.records.empty() || shots.circuit == nullptr)
        throw std::invalid_argument("leakage_stats: empty shot set");
    const int nr = shots.circuit->config.n_rounds;
    const double n = static_cast<double>(shots.records.size());
    LeakageStats st;
    st.rate.assign(nr, 0.0);
    st.err.assign(nr, 0.0);
    for (const auto& rec : shots.records)
        for (int r = 0; r < nr; ++r)
            st.rate[r] += rec.leak_by_round[r];
    for (int r = 0; r < nr; ++r) {
        const double p = st.rate[r] / n;
        st.rate[r] = p;
        st.err[r] = std::sqrt(p * (1.0 - p) / n);
    }
    return st;
}

}  // namespace leaksim
