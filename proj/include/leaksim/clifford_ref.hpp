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

#ifndef LEAKSIM_CLIFFORD_REF_H
#define LEAKSIM_CLIFFORD_REF_H

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace leaksim {

/// Affine GF(2) form over measurement randomness: constant + XOR of
/// fresh symbols. A measurement outcome is deterministic iff its form
/// has no symbols.
struct SymbolForm {
    bool constant = false;
    std::vector<uint64_t> symbols;  // bitset over symbol indices

    bool deterministic() const {
        for (uint64_t w : symbols)
            if (w)
                return false;
        return true;
    }
    void resize_words(size_t words) { symbols.resize(words, 0); }
    void flip(size_t bit) { symbols[bit / 64] ^= (1ULL << (bit % 64)); }
    bool test(size_t bit) const { return (symbols[bit / 64] >> (bit % 64)) & 1ULL; }
    void xor_with(const SymbolForm& other) {
        constant ^= other.constant;
        if (other.symbols.size() > symbols.size())
            symbols.resize(other.symbols.size(), 0);
        for (size_t i = 0; i < other.symbols.size(); ++i)
            symbols[i] ^= other.symbols[i];
    }
    int lowest_symbol() const {
        for (size_t w = 0; w < symbols.size(); ++w)
            if (symbols[w])
                return static_cast<int>(64 * w + __builtin_ctzll(symbols[w]));
        return -1;
    }
};

/// Conjugation table of a 1- or 2-qubit Clifford gate, derived
/// numerically from its unitary matrix (no hand-written Pauli rules).
struct CliffordGate {
    int arity = 1;
    // Images of the local generators X1, Z1[, X2, Z2] as signed Paulis:
    // bits over the gate's wires plus a phase in i^k.
    struct Image {
        uint8_t x = 0;  // bit 0 = wire 1, bit 1 = wire 2
        uint8_t z = 0;
        int phase = 0;  // mod 4
    };
    Image images[4];

    static CliffordGate from_unitary_1q(const Eigen::Matrix2cd& u);
    static CliffordGate from_unitary_2q(const Eigen::Matrix4cd& u);
};

/// Stabilizer simulator over |0>-born wires with symbolic outcome
/// tracking. Deterministic measurements come back as symbol-free forms;
/// random ones mint a fresh symbol. Used to validate detector candidates
/// and to derive detectors for wiggled schedules.
class CliffordSim {
  public:
    explicit CliffordSim(int max_wires);

    int add_wire();
    int num_wires() const { return n_; }
    int num_symbols() const { return n_symbols_; }
    int num_outcomes() const { return static_cast<int>(outcomes_.size()); }

    void apply(const CliffordGate& g, int w1, int w2 = -1);

    /// Z measurement; returns the outcome index.
    int measure(int wire);
    /// Conditional X correction returning a measured wire to |0>.
    void apply_reset(int wire, int outcome_index);
    /// Measure then conditionally flip back to |0>.
    void measure_reset(int wire, int* outcome_index = nullptr);

    const SymbolForm& outcome_form(int outcome_index) const { return outcomes_[outcome_index]; }

    /// XOR of a set of outcome forms.
    SymbolForm combined_form(const std::vector<int>& outcome_indices) const;

  private:
    struct Row {
        std::vector<uint64_t> x, z;
        int phase = 0;  // i^phase; stabilizer rows stay 0 or 2
        SymbolForm form;
    };

    bool get(const std::vector<uint64_t>& bits, int i) const {
        return (bits[i / 64] >> (i % 64)) & 1ULL;
    }
    void put(std::vector<uint64_t>& bits, int i, bool v) {
        if (v)
            bits[i / 64] |= (1ULL << (i % 64));
        else
            bits[i / 64] &= ~(1ULL << (i % 64));
    }
    void row_mult(Row& target, const Row& other);  // target <- target * other
    void conjugate_row(Row& row, const CliffordGate& g, int w1, int w2);

    int capacity_;
    int words_;
    int n_ = 0;
    int n_symbols_ = 0;
    std::vector<Row> destab_;
    std::vector<Row> stab_;
    std::vector<SymbolForm> outcomes_;
};

/// Greedy derivation of a detector basis from outcome forms: walking the
/// outcomes in time order, every outcome whose symbols are spanned by
/// earlier ones yields one detector (the XOR set realizing it). Returns
/// sets of outcome indices plus the deterministic reference bit.
struct DerivedDetector {
    std::vector<int> outcome_indices;
    bool reference = false;
};
std::vector<DerivedDetector> derive_detectors(const CliffordSim& sim);

/// Express `candidate` (a set of outcome indices) as a deterministic XOR
/// by augmenting it with earlier outcomes where possible. Returns false
/// if the residual randomness is not spanned by prior outcomes.
bool complete_to_deterministic(const CliffordSim& sim, std::vector<int>& candidate,
                               bool* reference);

}  // namespace leaksim

#endif
