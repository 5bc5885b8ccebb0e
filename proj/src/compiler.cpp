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

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "leaksim/clifford_ref.hpp"
#include "leaksim/schedule.hpp"

namespace leaksim {

namespace {

constexpr int kGateSy = 0;
constexpr int kGateSyDag = 1;
constexpr int kGateCz = 0;       // plain CZ, basis |q_lf q_hf>
constexpr int kGateCzxLf = 1;    // CZ with the lf side conjugated into X basis
constexpr int kGateCzxHf = 2;    // CZ with the hf side conjugated

// One extraction within a round: an opened receiver, its typed supports
// per CZ layer, and whether the receiver keeps the state (wiggling).
struct Extraction {
    StabType type;
    Site aux;
    std::array<std::optional<Site>, 4> layer_support;
};

class Compiler {
  public:
    explicit Compiler(const ExperimentConfig& cfg) : cfg_(cfg) {
        cfg_.timing.validate();
        cfg_.cz.validate();
        if (cfg_.n_rounds < 1)
            throw std::invalid_argument("compile_experiment: need at least one round");
        if (cfg_.wiggled && cfg_.n_rounds < 2)
            throw std::invalid_argument(
                "compile_experiment: wiggled circuits need at least two rounds");
        out_.config = cfg_;
        out_.layout = build_patch(cfg_.patch);
        out_.frequencies = assign_frequencies(out_.layout);
        build_gate_tables();
    }

    ScheduledCircuit run() {
        if (cfg_.wiggled)
            emit_wiggled();
        else
            emit_standard();
        finalize();
        return std::move(out_);
    }

  private:
    // ---- wire and op plumbing -------------------------------------------

    int alloc_wire(Site s, int round) {
        if (live_.count(s))
            throw std::logic_error("compiler: site already live");
        const int w = static_cast<int>(out_.wires.size());
        out_.wires.push_back({s, generation_[s]++});
        live_[s] = w;
        Op op{};
        op.kind = OpKind::alloc_wire;
        op.wire_a = w;
        op.round = static_cast<int16_t>(round);
        out_.ops.push_back(op);
        ++n_live_;
        out_.max_live_qutrits = std::max(out_.max_live_qutrits, n_live_);
        return w;
    }

    void free_wire(Site s, int round) {
        Op op{};
        op.kind = OpKind::free_wire;
        op.wire_a = wire_of(s);
        op.round = static_cast<int16_t>(round);
        out_.ops.push_back(op);
        live_.erase(s);
        --n_live_;
    }

    int wire_of(Site s) const {
        auto it = live_.find(s);
        if (it == live_.end())
            throw std::logic_error("compiler: site is not live");
        return it->second;
    }

    void add_accum(Site s, int64_t ns) { accum_[s] += ns; }

    void flush(Site s, int round) {
        auto it = accum_.find(s);
        if (it == accum_.end() || it->second == 0)
            return;
        Op op{};
        op.kind = OpKind::channel;
        op.wire_a = wire_of(s);
        op.duration_ns = it->second;
        op.round = static_cast<int16_t>(round);
        out_.ops.push_back(op);
        durations_.insert(it->second);
        it->second = 0;
    }

    void emit_gate1(int gate_id, Site s, int round, int layer) {
        Op op{};
        op.kind = OpKind::gate1;
        op.wire_a = wire_of(s);
        op.gate_id = gate_id;
        op.duration_ns = cfg_.timing.single_gate_ns;
        op.round = static_cast<int16_t>(round);
        op.layer = static_cast<int16_t>(layer);
        out_.ops.push_back(op);
    }

    void emit_gate2(int gate_id, Site lf, Site hf, int round, int layer) {
        Op op{};
        op.kind = OpKind::gate2;
        op.wire_a = wire_of(lf);
        op.wire_b = wire_of(hf);
        op.gate_id = gate_id;
        op.duration_ns = cfg_.timing.cz_gate_ns;
        op.round = static_cast<int16_t>(round);
        op.layer = static_cast<int16_t>(layer);
        out_.ops.push_back(op);
    }

    int emit_measure(Site s, int round, bool final_readout) {
        Op op{};
        op.kind = OpKind::measure;
        op.wire_a = wire_of(s);
        op.round = static_cast<int16_t>(round);
        op.measure_slot = out_.num_measurements++;
        op.counts_for_leakage = !final_readout;
        out_.ops.push_back(op);
        out_.slot_round.push_back(static_cast<int16_t>(round));
        out_.slot_is_final.push_back(final_readout);
        out_.slot_wire.push_back(op.wire_a);
        slot_of_[{s, round}] = op.measure_slot;
        return op.measure_slot;
    }

    void emit_reset(Site s, int round) {
        Op op{};
        op.kind = OpKind::reset;
        op.wire_a = wire_of(s);
        op.round = static_cast<int16_t>(round);
        out_.ops.push_back(op);
    }

    void build_gate_tables() {
        out_.gates1 = {sqrt_y(), sqrt_y_dag()};
        out_.gate1_names = {"SY", "SYDG"};
        out_.gates2 = {cz_unitary(cfg_.cz), cz_xbasis_unitary(cfg_.cz, true),
                       cz_xbasis_unitary(cfg_.cz, false)};
        out_.gate2_names = {"CZ", "CZXL", "CZXH"};
    }

    // ---- extraction scheduling ------------------------------------------

    // Serialized extractions must respect each shared datum's CZ layer
    // order, because X-type (conjugated) and Z-type gates on the same
    // datum do not commute. Among the topologically eligible extractions,
    // greedily prefer the one retiring the most supports, which keeps the
    // live register small during wiggled rounds.
    std::vector<int> order_extractions(const std::vector<Extraction>& ex) const {
        const int n = static_cast<int>(ex.size());
        std::map<Site, std::vector<std::pair<int, int>>> by_datum;  // (layer, ex idx)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 4; ++k)
                if (ex[i].layer_support[k])
                    by_datum[*ex[i].layer_support[k]].push_back({k, i});

        std::vector<std::set<int>> succ(n);
        std::vector<int> indeg(n, 0);
        std::map<Site, int> remaining;
        for (auto& [site, uses] : by_datum) {
            remaining[site] = static_cast<int>(uses.size());
            std::sort(uses.begin(), uses.end());
            // Only mixed-type pairs constrain each other: plain CZs
            // commute among themselves, and so do conjugated ones.
            for (size_t a = 0; a < uses.size(); ++a)
                for (size_t b = a + 1; b < uses.size(); ++b)
                    if (ex[uses[a].second].type != ex[uses[b].second].type)
                        if (succ[uses[a].second].insert(uses[b].second).second)
                            ++indeg[uses[b].second];
        }

        std::set<int> ready;
        for (int i = 0; i < n; ++i)
            if (indeg[i] == 0)
                ready.insert(i);
        std::vector<int> order;
        while (!ready.empty()) {
            int best = -1, best_deaths = -1, best_conc = 0;
            for (int i : ready) {
                int deaths = 0, conc = 0;
                for (int k = 0; k < 4; ++k)
                    if (ex[i].layer_support[k]) {
                        const int rem = remaining[*ex[i].layer_support[k]];
                        if (rem == 1)
                            ++deaths;
                        conc += rem;
                    }
                bool better = false;
                if (deaths != best_deaths)
                    better = deaths > best_deaths;
                else if (conc != best_conc)
                    better = conc < best_conc;
                else
                    better = std::tie(ex[i].aux.x, ex[i].aux.y) <
                             std::tie(ex[best].aux.x, ex[best].aux.y);
                if (better) {
                    best = i;
                    best_deaths = deaths;
                    best_conc = conc;
                }
            }
            ready.erase(best);
            order.push_back(best);
            for (int k = 0; k < 4; ++k)
                if (ex[best].layer_support[k])
                    --remaining[*ex[best].layer_support[k]];
            for (int j : succ[best])
                if (--indeg[j] == 0)
                    ready.insert(j);
        }
        if (static_cast<int>(order.size()) != n)
            throw std::logic_error("compiler: extraction ordering has a cycle");
        return order;
    }

    int cz_gate_for(StabType type, Site aux, Site datum, Site* lf, Site* hf) const {
        const FreqTier ta = out_.frequencies.at(aux);
        const FreqTier td = out_.frequencies.at(datum);
        if (ta == td)
            throw std::logic_error("compiler: CZ pair without frequency separation");
        const bool aux_is_hf = ta > td;
        *lf = aux_is_hf ? datum : aux;
        *hf = aux_is_hf ? aux : datum;
        if (type == StabType::Z)
            return kGateCz;
        // X-type extraction conjugates the datum side.
        return (datum == *lf) ? kGateCzxLf : kGateCzxHf;
    }

    // ---- standard circuit ------------------------------------------------

    void emit_standard() {
        const auto& layout = out_.layout;
        const int64_t cz_half = cfg_.timing.cz_gate_ns / 2;
        const int64_t sg_half = cfg_.timing.single_gate_ns / 2;
        const int64_t cz_ns = cfg_.timing.cz_gate_ns;
        const int64_t tail = cfg_.timing.measure_ns + cfg_.timing.reset_ns;

        for (const Site& d : layout.data_sites)
            alloc_wire(d, 0);
        if (layout.observable_type == StabType::X) {
            // Observable-basis product state: sqrt_y maps |0> onto the
            // +1 eigenstate of X.
            for (const Site& d : layout.data_sites) {
                add_accum(d, sg_half);
                flush(d, 0);
                emit_gate1(kGateSy, d, 0, -1);
                add_accum(d, sg_half);
                flush(d, 0);
            }
        }

        std::vector<Extraction> ex;
        for (const auto& st : layout.stabilizers)
            ex.push_back({st.type, st.aux, st.layer_support});
        const std::vector<int> order = order_extractions(ex);

        for (int r = 1; r <= cfg_.n_rounds; ++r) {
            std::map<Site, int> last_layer;
            for (const Site& d : layout.data_sites) {
                add_accum(d, cfg_.timing.single_gate_ns);  // opening layer idle
                last_layer[d] = -1;
            }
            for (int idx : order) {
                const Extraction& s = ex[idx];
                alloc_wire(s.aux, r);
                add_accum(s.aux, sg_half);
                flush(s.aux, r);
                emit_gate1(kGateSy, s.aux, r, -1);
                add_accum(s.aux, sg_half);
                int aux_last = -1;
                for (int k = 0; k < 4; ++k) {
                    if (!s.layer_support[k])
                        continue;
                    const Site d = *s.layer_support[k];
                    add_accum(s.aux, cz_ns * (k - aux_last - 1) + cz_half);
                    add_accum(d, cz_ns * (k - last_layer[d] - 1) + cz_half);
                    flush(s.aux, r);
                    flush(d, r);
                    Site lf, hf;
                    const int gate = cz_gate_for(s.type, s.aux, d, &lf, &hf);
                    emit_gate2(gate, lf, hf, r, k);
                    add_accum(s.aux, cz_half);
                    add_accum(d, cz_half);
                    aux_last = k;
                    last_layer[d] = k;
                }
                add_accum(s.aux, cz_ns * (3 - aux_last) + sg_half);
                flush(s.aux, r);
                emit_gate1(kGateSyDag, s.aux, r, -1);
                add_accum(s.aux, sg_half + cfg_.timing.measure_ns);
                flush(s.aux, r);
                emit_measure(s.aux, r, false);
                emit_reset(s.aux, r);
                add_accum(s.aux, cfg_.timing.reset_ns);
                flush(s.aux, r);  // no-op on |0>, kept for the timeline
                free_wire(s.aux, r);
            }
            for (const Site& d : layout.data_sites) {
                add_accum(d, cz_ns * (3 - last_layer[d]) + cfg_.timing.single_gate_ns + tail);
                flush(d, r);
            }
        }

        // Final transversal readout in the observable basis.
        const int fr = cfg_.n_rounds + 1;
        for (const Site& d : layout.data_sites) {
            if (layout.observable_type == StabType::X) {
                add_accum(d, sg_half);
                flush(d, fr);
                emit_gate1(kGateSyDag, d, fr, -1);
                add_accum(d, sg_half);
            }
            add_accum(d, cfg_.timing.measure_ns);
            flush(d, fr);
            emit_measure(d, fr, true);
        }

        build_standard_detectors();
    }

    void build_standard_detectors() {
        const auto& layout = out_.layout;
        const int nr = cfg_.n_rounds;
        auto slot = [&](Site s, int r) {
            auto it = slot_of_.find({s, r});
            if (it == slot_of_.end())
                throw std::logic_error("compiler: missing measurement slot");
            return it->second;
        };

        for (const auto& st : layout.stabilizers) {
            if (st.type == layout.observable_type) {
                DetectorDef d;
                d.slots = {slot(st.aux, 1)};
                d.typed = true;
                d.type = st.type;
                d.round = 1;
                d.site = st.aux;
                out_.detectors.push_back(d);
            }
            for (int r = 2; r <= nr; ++r) {
                DetectorDef d;
                d.slots = {slot(st.aux, r - 1), slot(st.aux, r)};
                d.typed = true;
                d.type = st.type;
                d.round = r;
                d.site = st.aux;
                out_.detectors.push_back(d);
            }
            if (st.type == layout.observable_type) {
                DetectorDef d;
                d.slots = {slot(st.aux, nr)};
                for (const Site& sup : st.supports())
                    d.slots.push_back(slot(sup, nr + 1));
                d.typed = true;
                d.type = st.type;
                d.round = nr + 1;
                d.site = st.aux;
                out_.detectors.push_back(d);
            }
        }
        for (const auto& st : layout.stabilizers)
            if (st.type == layout.observable_type)
                out_.observable.slots.push_back(slot(st.aux, nr));

        verify_and_reference_detectors();
    }

    // ---- wiggled circuit ---------------------------------------------------

    // Minimal in-place role swap: the round runs the position's CZ layers,
    // then the closing basis change and the measurement retire the old
    // data, relocating the state onto the opened receivers.
    void emit_wiggled() {
        const auto& layout = out_.layout;
        const int64_t cz_half = cfg_.timing.cz_gate_ns / 2;
        const int64_t sg_half = cfg_.timing.single_gate_ns / 2;
        const int64_t cz_ns = cfg_.timing.cz_gate_ns;
        const int64_t tail = cfg_.timing.measure_ns + cfg_.timing.reset_ns;

        // Position-1 extractions: the layout itself. Position-2: one
        // Z-type extraction per data site, supports = its adjacent aux
        // sites, reusing the same (aux, datum) layer as position 1 so
        // layer conflicts stay impossible.
        std::vector<Extraction> ex_p1;
        for (const auto& st : layout.stabilizers)
            ex_p1.push_back({st.type, st.aux, st.layer_support});
        std::map<Site, Extraction> p2;
        for (const Site& d : layout.data_sites)
            p2[d] = Extraction{StabType::Z, d, {}};
        for (const auto& st : layout.stabilizers)
            for (int k = 0; k < 4; ++k)
                if (st.layer_support[k])
                    p2[*st.layer_support[k]].layer_support[k] = st.aux;
        std::vector<Extraction> ex_p2;
        for (auto& [d, e] : p2)
            ex_p2.push_back(e);

        for (const Site& d : layout.data_sites)
            alloc_wire(d, 0);
        if (layout.observable_type == StabType::X) {
            for (const Site& d : layout.data_sites) {
                add_accum(d, sg_half);
                flush(d, 0);
                emit_gate1(kGateSy, d, 0, -1);
                add_accum(d, sg_half);
                flush(d, 0);
            }
        }

        std::vector<Site> holders = layout.data_sites;  // current data
        for (int r = 1; r <= cfg_.n_rounds; ++r) {
            const bool p1_round = (r % 2 == 1);
            const std::vector<Extraction>& ex = p1_round ? ex_p1 : ex_p2;
            const std::vector<int> order = order_extractions(ex);

            // Remaining CZ count per retiring site; retire greedily so the
            // live register stays small.
            std::map<Site, int> remaining, last_layer;
            for (const Site& u : holders) {
                remaining[u] = 0;
                last_layer[u] = -1;
                add_accum(u, cfg_.timing.single_gate_ns);  // opening layer idle
            }
            for (const auto& e : ex)
                for (int k = 0; k < 4; ++k)
                    if (e.layer_support[k])
                        ++remaining[*e.layer_support[k]];

            auto retire = [&](Site u) {
                add_accum(u, cz_ns * (3 - last_layer[u]) + sg_half);
                flush(u, r);
                emit_gate1(kGateSyDag, u, r, -1);
                add_accum(u, sg_half + cfg_.timing.measure_ns);
                flush(u, r);
                emit_measure(u, r, false);
                emit_reset(u, r);
                add_accum(u, cfg_.timing.reset_ns);
                flush(u, r);
                free_wire(u, r);
            };

            for (int idx : order) {
                const Extraction& e = ex[idx];
                alloc_wire(e.aux, r);
                add_accum(e.aux, sg_half);
                flush(e.aux, r);
                emit_gate1(kGateSy, e.aux, r, -1);
                add_accum(e.aux, sg_half);
                int aux_last = -1;
                for (int k = 0; k < 4; ++k) {
                    if (!e.layer_support[k])
                        continue;
                    const Site u = *e.layer_support[k];
                    add_accum(e.aux, cz_ns * (k - aux_last - 1) + cz_half);
                    add_accum(u, cz_ns * (k - last_layer[u] - 1) + cz_half);
                    flush(e.aux, r);
                    flush(u, r);
                    Site lf, hf;
                    const int gate = cz_gate_for(e.type, e.aux, u, &lf, &hf);
                    emit_gate2(gate, lf, hf, r, k);
                    add_accum(e.aux, cz_half);
                    add_accum(u, cz_half);
                    aux_last = k;
                    last_layer[u] = k;
                    if (--remaining[u] == 0)
                        retire(u);
                }
                // Receiver tail: trailing idle layers, closing-layer idle,
                // then the measure+reset window of the retiring set.
                add_accum(e.aux, cz_ns * (3 - aux_last) + cfg_.timing.single_gate_ns + tail);
            }
            for (const Site& u : holders)
                if (remaining[u] == 0 && live_.count(u))
                    retire(u);  // isolated site with no CZ this round
            std::vector<Site> next;
            for (const auto& e : ex) {
                flush(e.aux, r);
                next.push_back(e.aux);
            }
            holders = std::move(next);
        }

        // Final readout in the closing basis: reads the relocated values.
        const int fr = cfg_.n_rounds + 1;
        for (const Site& u : holders) {
            add_accum(u, sg_half);
            flush(u, fr);
            emit_gate1(kGateSyDag, u, fr, -1);
            add_accum(u, sg_half + cfg_.timing.measure_ns);
            flush(u, fr);
            emit_measure(u, fr, true);
        }

        build_wiggled_detectors();
    }

    void build_wiggled_detectors() {
        CliffordSim sim = run_reference(true);

        // Mechanically derived deterministic XORs (local-greedy basis).
        for (const auto& dd : derive_detectors(sim)) {
            DetectorDef d;
            d.slots = dd.outcome_indices;
            d.reference = dd.reference;
            d.typed = false;
            int best_round = 0;
            for (int s : d.slots)
                best_round = std::max(best_round, static_cast<int>(out_.slot_round[s]));
            d.round = best_round;
            d.site = out_.wires[out_.slot_wire[d.slots.back()]].site;
            out_.detectors.push_back(d);
        }

        // Observable: the latest round whose retiring measurements read
        // observable-type extractions of the previous round, completed to
        // a deterministic XOR with earlier outcomes if needed.
        const auto& layout = out_.layout;
        int rstar = -1;
        for (int r = cfg_.n_rounds; r >= 2; --r) {
            const bool prev_p1 = ((r - 1) % 2 == 1);
            if (layout.observable_type == StabType::Z || prev_p1) {
                rstar = r;
                break;
            }
        }
        if (rstar < 0)
            throw std::logic_error("compiler: no observable-bearing round");
        const bool prev_p1 = ((rstar - 1) % 2 == 1);
        std::vector<int> candidate;
        if (prev_p1) {
            for (const auto& st : layout.stabilizers)
                if (st.type == layout.observable_type)
                    candidate.push_back(slot_of_.at({st.aux, rstar}));
        } else {
            for (const Site& d : layout.data_sites)
                candidate.push_back(slot_of_.at({d, rstar}));
        }
        bool ref = false;
        if (!complete_to_deterministic(sim, candidate, &ref))
            throw std::logic_error("compiler: wiggled observable is not deterministic");
        out_.observable.slots = candidate;
        out_.observable.reference = ref;
    }

    // ---- detector verification via the stabilizer reference ---------------

    CliffordSim run_reference(bool expect_all = false) {
        // Noiseless qubit-level reference. Gate tables are restricted to
        // the computational block at L1 = Lm = 0; conjugation rules are
        // derived numerically from the matrices.
        const CliffordGate g_sy = CliffordGate::from_unitary_1q(sqrt_y().topLeftCorner<2, 2>());
        const CliffordGate g_sydg =
            CliffordGate::from_unitary_1q(sqrt_y_dag().topLeftCorner<2, 2>());
        CZParams noiseless{0.0, 0.0, cfg_.cz.phi};
        auto restrict4 = [](const Matrix9c& u) {
            const int idx[4] = {0, 1, 3, 4};
            Eigen::Matrix4cd r;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    r(i, j) = u(idx[i], idx[j]);
            return r;
        };
        const CliffordGate g2[3] = {
            CliffordGate::from_unitary_2q(restrict4(cz_unitary(noiseless))),
            CliffordGate::from_unitary_2q(restrict4(cz_xbasis_unitary(noiseless, true))),
            CliffordGate::from_unitary_2q(restrict4(cz_xbasis_unitary(noiseless, false)))};

        CliffordSim sim(static_cast<int>(out_.wires.size()));
        std::vector<int> last_outcome(out_.wires.size(), -1);
        for (const auto& op : out_.ops) {
            switch (op.kind) {
                case OpKind::alloc_wire: {
                    const int w = sim.add_wire();
                    if (w != op.wire_a)
                        throw std::logic_error("compiler: wire bookkeeping mismatch");
                    break;
                }
                case OpKind::gate1:
                    sim.apply(op.gate_id == kGateSy ? g_sy : g_sydg, op.wire_a);
                    break;
                case OpKind::gate2:
                    sim.apply(g2[op.gate_id], op.wire_a, op.wire_b);
                    break;
                case OpKind::measure:
                    last_outcome[op.wire_a] = sim.measure(op.wire_a);
                    break;
                case OpKind::reset:
                    sim.apply_reset(op.wire_a, last_outcome[op.wire_a]);
                    break;
                case OpKind::channel:
                case OpKind::free_wire:
                    break;
            }
        }
        if (expect_all && sim.num_outcomes() != out_.num_measurements)
            throw std::logic_error("compiler: reference outcome count mismatch");
        return sim;
    }

    void verify_and_reference_detectors() {
        CliffordSim sim = run_reference(true);
        for (auto& d : out_.detectors) {
            SymbolForm f = sim.combined_form(d.slots);
            if (!f.deterministic())
                throw std::logic_error("compiler: detector candidate is not deterministic");
            d.reference = f.constant;
        }
        SymbolForm f = sim.combined_form(out_.observable.slots);
        if (!f.deterministic())
            throw std::logic_error("compiler: observable is not deterministic");
        out_.observable.reference = f.constant;
    }

    void finalize() {
        if (cfg_.wiggled) {
            // Wiggled detectors got their references during derivation;
            // re-verify everything in one pass for safety.
            CliffordSim sim = run_reference(true);
            for (const auto& d : out_.detectors) {
                SymbolForm f = sim.combined_form(d.slots);
                if (!f.deterministic() || f.constant != d.reference)
                    throw std::logic_error("compiler: wiggled detector verification failed");
            }
        }
        out_.channel_durations_ns.assign(durations_.begin(), durations_.end());
    }

    ExperimentConfig cfg_;
    ScheduledCircuit out_;
    std::map<Site, int> live_;
    std::map<Site, int> generation_;
    std::map<Site, int64_t> accum_;
    std::map<std::pair<Site, int>, int> slot_of_;
    std::set<int64_t> durations_;
    int n_live_ = 0;
};

}  // namespace

ScheduledCircuit compile_experiment(const ExperimentConfig& config) {
    return Compiler(config).run();
}

}  // namespace leaksim
