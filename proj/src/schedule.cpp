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

#include "leaksim/schedule.hpp"

#include <ostream>
#include <stdexcept>

namespace leaksim {

void TimingTable::validate() const {
    if (single_gate_ns <= 0 || cz_gate_ns <= 0 || measure_ns <= 0 || reset_ns <= 0)
        throw std::invalid_argument("TimingTable: durations must be positive");
}

void ScheduledCircuit::dump(std::ostream& os) const {
    auto site_of = [&](int wire) {
        const Site s = wires[wire].site;
        return std::to_string(s.x) + "," + std::to_string(s.y);
    };
    for (const auto& op : ops) {
        os << "ROUND " << op.round << " LAYER " << static_cast<int>(op.layer) << " ";
        switch (op.kind) {
            case OpKind::alloc_wire:
                os << "ALLOC " << site_of(op.wire_a);
                break;
            case OpKind::free_wire:
                os << "FREE " << site_of(op.wire_a);
                break;
            case OpKind::gate1:
                os << gate1_names[op.gate_id] << " " << site_of(op.wire_a);
                break;
            case OpKind::gate2:
                os << gate2_names[op.gate_id] << " " << site_of(op.wire_a) << " "
                   << site_of(op.wire_b);
                break;
            case OpKind::channel:
                os << "T12 " << site_of(op.wire_a) << " " << op.duration_ns;
                break;
            case OpKind::measure:
                os << "M " << site_of(op.wire_a);
                break;
            case OpKind::reset:
                os << "R " << site_of(op.wire_a);
                break;
        }
        os << "\n";
    }
}

int64_t ScheduledCircuit::exposure_ns(int wire, int round) const {
    int64_t total = 0;
    for (const auto& op : ops)
        if (op.kind == OpKind::channel && op.wire_a == wire && op.round == round)
            total += op.duration_ns;
    return total;
}

}  // namespace leaksim
