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

#include "leaksim/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "leaksim/clifford_ref.hpp"

namespace leaksim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPMin = 1e-6;
constexpr double kPMax = 0.49;
constexpr int kMatchCapacity = 20;

double weight_of(double p) {
    return std::log((1.0 - p) / p);
}
}  // namespace

DetectorBits detectors_from_shot(const ShotRecord& shot, const ScheduledCircuit& circuit) {
    if (shot.outcomes.size() != static_cast<size_t>(circuit.num_measurements))
        throw std::invalid_argument("detectors_from_shot: outcome count mismatch");
    // Leakage-blind readout: a "2" is treated as "1".
    auto bit = [&](int slot) { return shot.outcomes[slot] >= 1 ? 1 : 0; };
    DetectorBits out;
    out.bits.reserve(circuit.detectors.size());
    for (const auto& det : circuit.detectors) {
        int acc = det.reference ? 1 : 0;
        for (int s : det.slots)
            acc ^= bit(s);
        out.bits.push_back(static_cast<uint8_t>(acc));
    }
    int obs = circuit.observable.reference ? 1 : 0;
    for (int s : circuit.observable.slots)
        obs ^= bit(s);
    out.observable = static_cast<uint8_t>(obs);
    return out;
}

std::vector<DetectorBits> detectors_from_shots(const ShotSet& shots) {
    std::vector<DetectorBits> out;
    out.reserve(shots.records.size());
    for (const auto& rec : shots.records)
        out.push_back(detectors_from_shot(rec, *shots.circuit));
    return out;
}

namespace {

// Frame-propagation rules per gate id, derived once from the gate tables'
// noiseless computational blocks.
struct FrameRules {
    std::vector<CliffordGate> g1, g2;
};

FrameRules frame_rules_for(const ScheduledCircuit& circuit) {
    FrameRules fr;
    for (const auto& u : circuit.gates1)
        fr.g1.push_back(CliffordGate::from_unitary_1q(u.topLeftCorner<2, 2>()));
    CZParams noiseless{0.0, 0.0, circuit.config.cz.phi};
    const Matrix9c pure[3] = {cz_unitary(noiseless), cz_xbasis_unitary(noiseless, true),
                              cz_xbasis_unitary(noiseless, false)};
    const int idx[4] = {0, 1, 3, 4};
    for (int g = 0; g < 3; ++g) {
        Eigen::Matrix4cd r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                r(i, j) = pure[g](idx[i], idx[j]);
        fr.g2.push_back(CliffordGate::from_unitary_2q(r));
    }
    return fr;
}

struct Frame {
    std::vector<uint64_t> x, z;
    bool get(const std::vector<uint64_t>& v, int i) const {
        return (v[i / 64] >> (i % 64)) & 1ULL;
    }
    void flip(std::vector<uint64_t>& v, int i) { v[i / 64] ^= (1ULL << (i % 64)); }
    void clear(int i) {
        x[i / 64] &= ~(1ULL << (i % 64));
        z[i / 64] &= ~(1ULL << (i % 64));
    }
    bool any(int i) const { return get(x, i) || get(z, i); }
};

void apply_gate_to_frame(Frame& f, const CliffordGate& g, int w1, int w2) {
    const int wires[2] = {w1, w2};
    uint8_t bits[4];
    for (int k = 0; k < g.arity; ++k) {
        bits[2 * k] = f.get(f.x, wires[k]);
        bits[2 * k + 1] = f.get(f.z, wires[k]);
        f.clear(wires[k]);
    }
    for (int gi = 0; gi < 2 * g.arity; ++gi) {
        if (!bits[gi])
            continue;
        const auto& img = g.images[gi];
        for (int k = 0; k < g.arity; ++k) {
            if ((img.x >> k) & 1)
                f.flip(f.x, wires[k]);
            if ((img.z >> k) & 1)
                f.flip(f.z, wires[k]);
        }
    }
}

}  // namespace

FaultEffect frame_propagate(const ScheduledCircuit& circuit, const PauliFault& fault) {
    static thread_local const ScheduledCircuit* cached_circuit = nullptr;
    static thread_local FrameRules rules;
    if (cached_circuit != &circuit) {
        rules = frame_rules_for(circuit);
        cached_circuit = &circuit;
    }

    FaultEffect eff;
    const int words = static_cast<int>((circuit.wires.size() + 63) / 64);
    Frame f;
    f.x.assign(words, 0);
    f.z.assign(words, 0);

    size_t start = 0;
    if (fault.flip_slot >= 0) {
        eff.flipped_slots.push_back(fault.flip_slot);
        // No frame content; the flip is already recorded.
        start = circuit.ops.size();
    } else {
        if (fault.op_index < 0 || fault.op_index >= static_cast<int>(circuit.ops.size()))
            throw std::out_of_range("frame_propagate: fault slot out of range");
        if (fault.x1)
            f.flip(f.x, fault.wire);
        if (fault.z1)
            f.flip(f.z, fault.wire);
        if (fault.wire2 >= 0) {
            if (fault.x2)
                f.flip(f.x, fault.wire2);
            if (fault.z2)
                f.flip(f.z, fault.wire2);
        }
        start = static_cast<size_t>(fault.op_index) + 1;
    }

    for (size_t i = start; i < circuit.ops.size(); ++i) {
        const Op& op = circuit.ops[i];
        switch (op.kind) {
            case OpKind::gate1:
                if (f.any(op.wire_a))
                    apply_gate_to_frame(f, rules.g1[op.gate_id], op.wire_a, -1);
                break;
            case OpKind::gate2:
                if (f.any(op.wire_a) || f.any(op.wire_b))
                    apply_gate_to_frame(f, rules.g2[op.gate_id], op.wire_a, op.wire_b);
                break;
            case OpKind::measure:
                if (f.get(f.x, op.wire_a))
                    eff.flipped_slots.push_back(op.measure_slot);
                break;
            case OpKind::reset:
            case OpKind::alloc_wire:
                f.clear(op.wire_a);
                break;
            case OpKind::channel:
            case OpKind::free_wire:
                break;
        }
    }

    // Detector and observable flips: odd overlap with flipped slots.
    std::vector<uint8_t> flipped(circuit.num_measurements, 0);
    for (int s : eff.flipped_slots)
        flipped[s] ^= 1;
    for (size_t d = 0; d < circuit.detectors.size(); ++d) {
        int acc = 0;
        for (int s : circuit.detectors[d].slots)
            acc ^= flipped[s];
        if (acc)
            eff.flipped_detectors.push_back(static_cast<int>(d));
    }
    int obs = 0;
    for (int s : circuit.observable.slots)
        obs ^= flipped[s];
    eff.observable_flip = obs != 0;
    return eff;
}

DecodingGraph build_graph(const ScheduledCircuit& circuit) {
    DecodingGraph g;
    g.n_detectors = static_cast<int>(circuit.detectors.size());

    std::map<std::pair<int, int>, int> edge_index;
    auto record_edge = [&](int a, int b, bool mask) {
        if (b >= 0 && a > b)
            std::swap(a, b);
        auto key = std::make_pair(a, b);
        auto it = edge_index.find(key);
        if (it == edge_index.end()) {
            GraphEdge e;
            e.a = a;
            e.b = b;
            e.mask = mask;
            e.n_faults = 1;
            e.p = 0.01;
            e.w = weight_of(e.p);
            edge_index[key] = static_cast<int>(g.edges.size());
            g.edges.push_back(e);
        } else {
            GraphEdge& e = g.edges[it->second];
            if (e.mask != mask)
                throw std::runtime_error("build_graph: parallel edges with conflicting masks");
            ++e.n_faults;
        }
    };

    auto process = [&](const PauliFault& fault) {
        const FaultEffect eff = frame_propagate(circuit, fault);
        if (eff.flipped_detectors.empty()) {
            if (eff.observable_flip)
                ++g.undetected_mask_faults;
            return;
        }
        // Split the flips by stabilizer type when the detector basis is
        // typed (standard circuits); wiggled bases are untyped singles.
        std::map<int, std::vector<int>> groups;
        for (int d : eff.flipped_detectors) {
            const auto& det = circuit.detectors[d];
            groups[det.typed ? static_cast<int>(det.type) : -1].push_back(d);
        }
        // The observable flip travels with the observable-type group if
        // present, else with the first group.
        int mask_group = groups.begin()->first;
        if (eff.observable_flip) {
            const int want = static_cast<int>(circuit.layout.observable_type);
            if (groups.count(want))
                mask_group = want;
        }
        for (auto& [type, dets] : groups) {
            const bool mask = eff.observable_flip && type == mask_group;
            if (dets.size() == 1)
                record_edge(dets[0], -1, mask);
            else if (dets.size() == 2)
                record_edge(dets[0], dets[1], mask);
            else
                ++g.dropped_faults;
        }
    };

    const uint8_t paulis[3][2] = {{1, 0}, {1, 1}, {0, 1}};  // X, Y, Z
    for (size_t i = 0; i < circuit.ops.size(); ++i) {
        const Op& op = circuit.ops[i];
        switch (op.kind) {
            case OpKind::gate1:
            case OpKind::channel:
            case OpKind::reset:
                for (const auto& p : paulis) {
                    PauliFault f;
                    f.op_index = static_cast<int>(i);
                    f.wire = op.wire_a;
                    f.x1 = p[0];
                    f.z1 = p[1];
                    process(f);
                }
                break;
            case OpKind::gate2:
                for (int pa = 0; pa < 4; ++pa)
                    for (int pb = 0; pb < 4; ++pb) {
                        if (pa == 0 && pb == 0)
                            continue;
                        PauliFault f;
                        f.op_index = static_cast<int>(i);
                        f.wire = op.wire_a;
                        f.x1 = (pa == 1 || pa == 2) ? 1 : 0;
                        f.z1 = (pa == 2 || pa == 3) ? 1 : 0;
                        f.wire2 = op.wire_b;
                        f.x2 = (pb == 1 || pb == 2) ? 1 : 0;
                        f.z2 = (pb == 2 || pb == 3) ? 1 : 0;
                        process(f);
                    }
                break;
            case OpKind::measure: {
                PauliFault f;
                f.flip_slot = op.measure_slot;
                process(f);
                break;
            }
            case OpKind::alloc_wire:
            case OpKind::free_wire:
                break;
        }
    }
    return g;
}

void fit_weights(DecodingGraph& graph, const std::vector<DetectorBits>& training,
                 int training_parity) {
    if (training.size() < 1000)
        throw std::invalid_argument("fit_weights: need at least 1000 training shots");
    const double n = static_cast<double>(training.size());
    const int nd = graph.n_detectors;

    std::vector<double> mean(nd, 0.0);
    for (const auto& shot : training)
        for (int d = 0; d < nd; ++d)
            mean[d] += shot.bits[d];
    for (double& m : mean)
        m /= n;

    std::vector<double> pair_mean(graph.edges.size(), 0.0);
    for (const auto& shot : training)
        for (size_t e = 0; e < graph.edges.size(); ++e) {
            const GraphEdge& edge = graph.edges[e];
            if (edge.b >= 0)
                pair_mean[e] += shot.bits[edge.a] & shot.bits[edge.b];
        }
    for (double& m : pair_mean)
        m /= n;

    auto clamp = [](double p) { return std::min(kPMax, std::max(kPMin, p)); };

    // Interior edges first: two-point correlation estimator.
    for (size_t e = 0; e < graph.edges.size(); ++e) {
        GraphEdge& edge = graph.edges[e];
        if (edge.b < 0)
            continue;
        const double xi = mean[edge.a], xj = mean[edge.b], xij = pair_mean[e];
        const double den = 1.0 - 2.0 * xi - 2.0 * xj + 4.0 * xij;
        double p = kPMin;
        if (std::abs(den) > 1e-12) {
            const double arg = 1.0 - 4.0 * (xij - xi * xj) / den;
            if (arg >= 0.0)
                p = 0.5 - 0.5 * std::sqrt(arg);
            else
                p = kPMax;  // negative discriminant: small-sample noise
        }
        edge.p = clamp(p);
        edge.w = weight_of(edge.p);
    }

    // Boundary edges absorb the remaining marginals: <x_i> = p_bnd (*) P_int
    // with a (*) b = a(1-b) + b(1-a).
    for (auto& edge : graph.edges) {
        if (edge.b >= 0)
            continue;
        double p_int = 0.0;
        for (const auto& other : graph.edges)
            if (other.b >= 0 && (other.a == edge.a || other.b == edge.a))
                p_int = p_int * (1.0 - other.p) + other.p * (1.0 - p_int);
        double p = kPMin;
        if (p_int < 0.5 - 1e-9)
            p = (mean[edge.a] - p_int) / (1.0 - 2.0 * p_int);
        edge.p = clamp(p);
        edge.w = weight_of(edge.p);
    }
    graph.fitted_parity = training_parity;
}

namespace {

struct Adjacency {
    struct Nbr {
        int to;  // n_detectors = boundary
        double w;
        bool mask;
    };
    std::vector<std::vector<Nbr>> nbrs;
    int boundary;
    explicit Adjacency(const DecodingGraph& g) {
        boundary = g.n_detectors;
        nbrs.resize(g.n_detectors + 1);
        for (const auto& e : g.edges) {
            const int b = (e.b < 0) ? boundary : e.b;
            nbrs[e.a].push_back({b, e.w, e.mask});
            nbrs[b].push_back({e.a, e.w, e.mask});
        }
    }
};

// Dijkstra from one source over the detector graph; returns distances and
// path-mask parities with deterministic tie-breaking.
void dijkstra(const Adjacency& adj, int source, std::vector<double>& dist,
              std::vector<uint8_t>& mask) {
    const int n = static_cast<int>(adj.nbrs.size());
    dist.assign(n, kInf);
    mask.assign(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u])
            continue;
        for (const auto& nb : adj.nbrs[u]) {
            const double nd = d + nb.w;
            if (nd < dist[nb.to] - 1e-15) {
                dist[nb.to] = nd;
                mask[nb.to] = mask[u] ^ (nb.mask ? 1 : 0);
                pq.push({nd, nb.to});
            }
        }
    }
}

struct MatchResult {
    double weight = 0.0;
    bool mask = false;
};

// Exact minimum-weight matching of the defects in one component; each
// defect may also pair with the boundary. Subset DP, O(2^k k^2).
MatchResult match_component(const std::vector<std::vector<double>>& d,
                            const std::vector<std::vector<uint8_t>>& m,
                            const std::vector<double>& db, const std::vector<uint8_t>& mb) {
    const int k = static_cast<int>(db.size());
    if (k == 0)
        return {};
    if (k > kMatchCapacity)
        throw std::runtime_error("decode: more than 20 defects in one component");
    const size_t full = size_t(1) << k;
    std::vector<double> dp(full, kInf);
    std::vector<int32_t> choice(full, -1);  // encoded decision for mask replay
    dp[0] = 0.0;
    for (size_t s = 1; s < full; ++s) {
        const int i = __builtin_ctzll(s);
        const size_t rest = s & (s - 1);  // clear lowest bit
        if (db[i] < kInf && dp[rest] + db[i] < dp[s]) {
            dp[s] = dp[rest] + db[i];
            choice[s] = -2;  // boundary
        }
        for (int j = i + 1; j < k; ++j) {
            if (!(s >> j & 1) || d[i][j] >= kInf)
                continue;
            const size_t rest2 = rest & ~(size_t(1) << j);
            if (dp[rest2] + d[i][j] < dp[s]) {
                dp[s] = dp[rest2] + d[i][j];
                choice[s] = j;
            }
        }
    }
    if (dp[full - 1] >= kInf)
        throw std::runtime_error("decode: defect cannot be matched (disconnected)");

    MatchResult res;
    res.weight = dp[full - 1];
    size_t s = full - 1;
    int parity = 0;
    while (s) {
        const int i = __builtin_ctzll(s);
        if (choice[s] == -2) {
            parity ^= mb[i];
            s &= (s - 1);
        } else {
            const int j = choice[s];
            parity ^= m[i][j];
            s &= (s - 1);
            s &= ~(size_t(1) << j);
        }
    }
    res.mask = parity != 0;
    return res;
}

MatchResult run_matching(const DecodingGraph& graph, const std::vector<int>& defects) {
    if (defects.empty())
        return {};
    Adjacency adj(graph);
    const int k = static_cast<int>(defects.size());
    std::vector<std::vector<double>> dist(k);
    std::vector<std::vector<uint8_t>> mask(k);
    for (int i = 0; i < k; ++i)
        dijkstra(adj, defects[i], dist[i], mask[i]);

    // Connected components over finite pairwise/boundary distances.
    std::vector<int> comp(k, -1);
    int n_comp = 0;
    for (int i = 0; i < k; ++i) {
        if (comp[i] >= 0)
            continue;
        std::vector<int> stack{i};
        comp[i] = n_comp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < k; ++v)
                if (comp[v] < 0 && dist[u][defects[v]] < kInf) {
                    comp[v] = n_comp;
                    stack.push_back(v);
                }
        }
        ++n_comp;
    }

    MatchResult total;
    for (int c = 0; c < n_comp; ++c) {
        std::vector<int> members;
        for (int i = 0; i < k; ++i)
            if (comp[i] == c)
                members.push_back(i);
        const int kc = static_cast<int>(members.size());
        std::vector<std::vector<double>> d(kc, std::vector<double>(kc, kInf));
        std::vector<std::vector<uint8_t>> m(kc, std::vector<uint8_t>(kc, 0));
        std::vector<double> db(kc, kInf);
        std::vector<uint8_t> mb(kc, 0);
        for (int i = 0; i < kc; ++i) {
            for (int j = 0; j < kc; ++j) {
                d[i][j] = dist[members[i]][defects[members[j]]];
                m[i][j] = mask[members[i]][defects[members[j]]];
            }
            db[i] = dist[members[i]][adj.boundary];
            mb[i] = mask[members[i]][adj.boundary];
        }
        const MatchResult r = match_component(d, m, db, mb);
        total.weight += r.weight;
        total.mask = total.mask != r.mask;
    }
    return total;
}

}  // namespace

bool decode(const DecodingGraph& graph, const DetectorBits& bits) {
    std::vector<int> defects;
    for (int d = 0; d < graph.n_detectors; ++d)
        if (bits.bits[d])
            defects.push_back(d);
    return run_matching(graph, defects).mask;
}

double matching_weight(const DecodingGraph& graph, const std::vector<int>& defects) {
    return run_matching(graph, defects).weight;
}

FailureEstimate evaluate(const std::vector<DetectorBits>& all_shots, const DecodingGraph& graph,
                         int eval_parity) {
    if (graph.fitted_parity == eval_parity)
        throw std::invalid_argument("evaluate: shots overlap the training half");
    FailureEstimate est;
    for (size_t i = 0; i < all_shots.size(); ++i) {
        if (static_cast<int>(i % 2) != eval_parity)
            continue;
        ++est.n_shots;
        const bool predicted = decode(graph, all_shots[i]);
        if (predicted != (all_shots[i].observable != 0))
            ++est.n_failures;
    }
    if (est.n_shots == 0)
        throw std::invalid_argument("evaluate: no shots with the requested parity");
    est.p_fail = static_cast<double>(est.n_failures) / static_cast<double>(est.n_shots);
    est.delta_p_fail = std::sqrt(est.p_fail * (1.0 - est.p_fail) / static_cast<double>(est.n_shots));
    return est;
}

void DecodingGraph::to_json(std::ostream& os) const {
    os << "{\n  \"n_detectors\": " << n_detectors << ",\n  \"dropped_faults\": " << dropped_faults
       << ",\n  \"edges\": [\n";
    for (size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        os << "    {\"a\": " << e.a << ", \"b\": " << e.b << ", \"p\": " << e.p
           << ", \"w\": " << e.w << ", \"mask\": " << (e.mask ? 1 : 0)
           << ", \"n_faults\": " << e.n_faults << "}" << (i + 1 < edges.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

}  // namespace leaksim
