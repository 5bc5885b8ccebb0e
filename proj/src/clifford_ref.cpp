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

#include "leaksim/clifford_ref.hpp"

#include <complex>
#include <map>
#include <stdexcept>

namespace leaksim {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd pauli_1q(int x, int z) {
    Eigen::Matrix2cd X, Z, out;
    X << 0, 1, 1, 0;
    Z << 1, 0, 0, -1;
    out = Eigen::Matrix2cd::Identity();
    if (x)
        out = X * out;
    if (z)
        out = out * Z;  // convention: X^x Z^z
    return out;
}

template <typename M>
bool match_phase(const M& a, const M& b, int* phase) {
    const cd units[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    for (int k = 0; k < 4; ++k)
        if ((a - units[k] * b).cwiseAbs().maxCoeff() < 1e-9) {
            *phase = k;
            return true;
        }
    return false;
}

}  // namespace

CliffordGate CliffordGate::from_unitary_1q(const Eigen::Matrix2cd& u) {
    CliffordGate g;
    g.arity = 1;
    const Eigen::Matrix2cd gens[2] = {pauli_1q(1, 0), pauli_1q(0, 1)};
    for (int i = 0; i < 2; ++i) {
        const Eigen::Matrix2cd img = u * gens[i] * u.adjoint();
        bool found = false;
        for (int x = 0; x < 2 && !found; ++x)
            for (int z = 0; z < 2 && !found; ++z) {
                int phase;
                if (match_phase(img, Eigen::Matrix2cd(pauli_1q(x, z)), &phase)) {
                    g.images[i] = {static_cast<uint8_t>(x), static_cast<uint8_t>(z), phase};
                    found = true;
                }
            }
        if (!found)
            throw std::invalid_argument("from_unitary_1q: gate is not Clifford");
    }
    return g;
}

CliffordGate CliffordGate::from_unitary_2q(const Eigen::Matrix4cd& u) {
    CliffordGate g;
    g.arity = 2;
    auto pauli_2q = [](int x1, int z1, int x2, int z2) {
        Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
        const Eigen::Matrix2cd a = pauli_1q(x1, z1), b = pauli_1q(x2, z2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
        return out;
    };
    const int gens[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int i = 0; i < 4; ++i) {
        const Eigen::Matrix4cd img =
            u * pauli_2q(gens[i][0], gens[i][1], gens[i][2], gens[i][3]) * u.adjoint();
        bool found = false;
        for (int x1 = 0; x1 < 2 && !found; ++x1)
            for (int z1 = 0; z1 < 2 && !found; ++z1)
                for (int x2 = 0; x2 < 2 && !found; ++x2)
                    for (int z2 = 0; z2 < 2 && !found; ++z2) {
                        int phase;
                        if (match_phase(img, Eigen::Matrix4cd(pauli_2q(x1, z1, x2, z2)), &phase)) {
                            g.images[i] = {static_cast<uint8_t>(x1 | (x2 << 1)),
                                           static_cast<uint8_t>(z1 | (z2 << 1)), phase};
                            found = true;
                        }
                    }
        if (!found)
            throw std::invalid_argument("from_unitary_2q: gate is not Clifford");
    }
    return g;
}

CliffordSim::CliffordSim(int max_wires) : capacity_(max_wires) {
    words_ = (max_wires + 63) / 64;
}

int CliffordSim::add_wire() {
    if (n_ >= capacity_)
        throw std::length_error("CliffordSim: wire capacity exceeded");
    Row d, s;
    d.x.resize(words_, 0);
    d.z.resize(words_, 0);
    s.x.resize(words_, 0);
    s.z.resize(words_, 0);
    put(d.x, n_, true);  // destabilizer X_w
    put(s.z, n_, true);  // stabilizer Z_w: wire born in |0>
    destab_.push_back(std::move(d));
    stab_.push_back(std::move(s));
    return n_++;
}

void CliffordSim::row_mult(Row& t, const Row& o) {
    // t <- t * o with i^phase bookkeeping; per-wire exponent from the
    // standard X^x Z^z normal-ordering rules.
    int phase = t.phase + o.phase;
    for (int w = 0; w < n_; ++w) {
        const int tx = get(t.x, w), tz = get(t.z, w);
        const int ox = get(o.x, w), oz = get(o.z, w);
        // (X^tx Z^tz)(X^ox Z^oz) = (-1)^(tz*ox) X^(tx+ox) Z^(tz+oz)
        phase += 2 * (tz & ox);
    }
    for (int i = 0; i < words_; ++i) {
        t.x[i] ^= o.x[i];
        t.z[i] ^= o.z[i];
    }
    t.phase = ((phase % 4) + 4) % 4;
    t.form.xor_with(o.form);
}

void CliffordSim::conjugate_row(Row& row, const CliffordGate& g, int w1, int w2) {
    const int wires[2] = {w1, w2};
    int bits[4] = {0, 0, 0, 0};  // x1, z1, x2, z2
    for (int k = 0; k < g.arity; ++k) {
        bits[2 * k] = get(row.x, wires[k]);
        bits[2 * k + 1] = get(row.z, wires[k]);
        put(row.x, wires[k], false);
        put(row.z, wires[k], false);
    }
    // Local part was X1^x1 Z1^z1 X2^x2 Z2^z2 (this wire-major order is a
    // fixed convention; the phase of the stored row used the same one).
    // Replace each generator with its image and remultiply in order.
    Row local;
    local.x.resize(words_, 0);
    local.z.resize(words_, 0);
    local.phase = 0;
    const int gen_order[4] = {0, 1, 2, 3};  // X1, Z1, X2, Z2
    for (int gi = 0; gi < 2 * g.arity; ++gi) {
        if (!bits[gen_order[gi]])
            continue;
        const auto& img = g.images[gen_order[gi]];
        Row piece;
        piece.x.resize(words_, 0);
        piece.z.resize(words_, 0);
        piece.phase = img.phase;
        for (int k = 0; k < g.arity; ++k) {
            if ((img.x >> k) & 1)
                put(piece.x, wires[k], true);
            if ((img.z >> k) & 1)
                put(piece.z, wires[k], true);
        }
        row_mult(local, piece);
    }
    // Reinstall: row(global remainder) * local. The remainder commutes
    // with the local part (disjoint wires), so plain multiplication works.
    row_mult(row, local);
}

void CliffordSim::apply(const CliffordGate& g, int w1, int w2) {
    if (g.arity == 2 && (w2 < 0 || w2 == w1))
        throw std::invalid_argument("CliffordSim: bad two-qubit wires");
    for (auto& r : destab_)
        conjugate_row(r, g, w1, w2);
    for (auto& r : stab_)
        conjugate_row(r, g, w1, w2);
}

int CliffordSim::measure(int wire) {
    int pivot = -1;
    for (int i = 0; i < n_; ++i)
        if (get(stab_[i].x, wire)) {
            pivot = i;
            break;
        }

    SymbolForm outcome;
    outcome.resize_words((n_symbols_ + 64) / 64 + 1);

    if (pivot >= 0) {
        // Random outcome: mint a fresh symbol.
        const int sym = n_symbols_++;
        for (int i = 0; i < n_; ++i) {
            if (i != pivot && get(stab_[i].x, wire))
                row_mult(stab_[i], stab_[pivot]);
            if (get(destab_[i].x, wire) && i != pivot)
                row_mult(destab_[i], stab_[pivot]);
        }
        destab_[pivot] = stab_[pivot];
        Row fresh;
        fresh.x.resize(words_, 0);
        fresh.z.resize(words_, 0);
        put(fresh.z, wire, true);
        fresh.phase = 0;
        fresh.form.resize_words((sym + 64) / 64 + 1);
        fresh.form.flip(sym);
        stab_[pivot] = std::move(fresh);
        outcome.resize_words((sym + 64) / 64 + 1);
        outcome.flip(sym);
    } else {
        // Deterministic: expand Z_wire over the stabilizer group.
        Row acc;
        acc.x.resize(words_, 0);
        acc.z.resize(words_, 0);
        acc.phase = 0;
        for (int i = 0; i < n_; ++i)
            if (get(destab_[i].x, wire))
                row_mult(acc, stab_[i]);
        // acc must equal +-(symbols) Z_wire.
        for (int w = 0; w < n_; ++w) {
            if (get(acc.x, w) || (get(acc.z, w) != (w == wire)))
                throw std::logic_error("CliffordSim: deterministic expansion failed");
        }
        if (acc.phase % 2 != 0)
            throw std::logic_error("CliffordSim: non-real outcome phase");
        outcome = acc.form;
        outcome.constant ^= (acc.phase == 2);
    }
    outcomes_.push_back(outcome);
    return static_cast<int>(outcomes_.size()) - 1;
}

void CliffordSim::measure_reset(int wire, int* outcome_index) {
    const int m = measure(wire);
    if (outcome_index)
        *outcome_index = m;
    apply_reset(wire, m);
}

void CliffordSim::apply_reset(int wire, int outcome_index) {
    if (outcome_index < 0 || outcome_index >= num_outcomes())
        throw std::out_of_range("CliffordSim: reset without a matching measurement");
    const SymbolForm& f = outcomes_[outcome_index];
    // Conditional X correction: rows anticommuting with X_wire (z-bit
    // set) pick up the outcome form in their sign.
    auto fix = [&](Row& r) {
        if (get(r.z, wire)) {
            r.form.xor_with(f);
            // xor_with also flipped the constant; move it into the phase.
            if (f.constant) {
                r.form.constant ^= true;  // undo
                r.phase = (r.phase + 2) % 4;
            }
        }
    };
    for (auto& r : stab_)
        fix(r);
    for (auto& r : destab_)
        fix(r);
}

SymbolForm CliffordSim::combined_form(const std::vector<int>& outcome_indices) const {
    SymbolForm acc;
    acc.resize_words((n_symbols_ + 64) / 64 + 1);
    for (int idx : outcome_indices)
        acc.xor_with(outcomes_[idx]);
    return acc;
}

std::vector<DerivedDetector> derive_detectors(const CliffordSim& sim) {
    std::vector<DerivedDetector> dets;
    // Eliminator: pivot symbol -> (reduced form, contributing outcomes).
    struct PivotRow {
        SymbolForm form;
        std::vector<int> members;
    };
    std::map<int, PivotRow> pivots;

    for (int k = 0; k < sim.num_outcomes(); ++k) {
        SymbolForm f = sim.outcome_form(k);
        std::vector<int> members{k};
        for (int s = f.lowest_symbol(); s >= 0; s = f.lowest_symbol()) {
            auto it = pivots.find(s);
            if (it == pivots.end())
                break;
            f.xor_with(it->second.form);
            for (int m : it->second.members)
                members.push_back(m);
        }
        if (f.deterministic()) {
            // XOR duplicates out of the member list.
            std::map<int, int> count;
            for (int m : members)
                count[m] ^= 1;
            DerivedDetector d;
            d.reference = f.constant;
            for (const auto& [m, parity] : count)
                if (parity)
                    d.outcome_indices.push_back(m);
            if (!d.outcome_indices.empty())
                dets.push_back(std::move(d));
        } else {
            std::map<int, int> count;
            for (int m : members)
                count[m] ^= 1;
            PivotRow pr;
            pr.form = f;
            for (const auto& [m, parity] : count)
                if (parity)
                    pr.members.push_back(m);
            pivots.emplace(f.lowest_symbol(), std::move(pr));
        }
    }
    return dets;
}

bool complete_to_deterministic(const CliffordSim& sim, std::vector<int>& candidate,
                               bool* reference) {
    // Rebuild the eliminator over all outcomes (cheap at our sizes), then
    // reduce the candidate's combined form.
    struct PivotRow {
        SymbolForm form;
        std::vector<int> members;
    };
    std::map<int, PivotRow> pivots;
    for (int k = 0; k < sim.num_outcomes(); ++k) {
        SymbolForm f = sim.outcome_form(k);
        std::vector<int> members{k};
        for (int s = f.lowest_symbol(); s >= 0; s = f.lowest_symbol()) {
            auto it = pivots.find(s);
            if (it == pivots.end())
                break;
            f.xor_with(it->second.form);
            for (int m : it->second.members)
                members.push_back(m);
        }
        if (!f.deterministic()) {
            std::map<int, int> count;
            for (int m : members)
                count[m] ^= 1;
            PivotRow pr;
            pr.form = f;
            for (const auto& [m, parity] : count)
                if (parity)
                    pr.members.push_back(m);
            pivots.emplace(f.lowest_symbol(), std::move(pr));
        }
    }

    SymbolForm f = sim.combined_form(candidate);
    std::vector<int> members = candidate;
    for (int s = f.lowest_symbol(); s >= 0; s = f.lowest_symbol()) {
        auto it = pivots.find(s);
        if (it == pivots.end())
            return false;
        f.xor_with(it->second.form);
        for (int m : it->second.members)
            members.push_back(m);
    }
    std::map<int, int> count;
    for (int m : members)
        count[m] ^= 1;
    candidate.clear();
    for (const auto& [m, parity] : count)
        if (parity)
            candidate.push_back(m);
    if (reference)
        *reference = f.constant;
    return true;
}

}  // namespace leaksim
