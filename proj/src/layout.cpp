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

#include "leaksim/layout.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace leaksim {

std::string to_string(PatchKind kind) {
    return kind == PatchKind::rotated_4x2 ? "rotated_4x2" : "unrotated_3x3";
}

PatchKind patch_kind_from_string(const std::string& name) {
    if (name == "rotated_4x2")
        return PatchKind::rotated_4x2;
    if (name == "unrotated_3x3")
        return PatchKind::unrotated_3x3;
    throw std::invalid_argument("unknown patch kind: " + name);
}

std::vector<Site> Stabilizer::supports() const {
    std::vector<Site> out;
    for (const auto& s : layer_support)
        if (s)
            out.push_back(*s);
    return out;
}

int Stabilizer::weight() const {
    return static_cast<int>(supports().size());
}

namespace {

// Rotated 4x2 stability patch. Data on the vertices of a 4-column,
// 2-row grid; Z stabilizers wrap the whole boundary so that the product
// of all Z stabilizers is the identity (the protected observable), with
// two X plaquettes in the bulk. Diagonal supports; Z layer order
// (NE, NW, SE, SW), X layer order (NE, SE, NW, SW).
PatchLayout build_rotated_4x2() {
    PatchLayout p;
    p.kind = PatchKind::rotated_4x2;
    p.observable_type = StabType::Z;
    for (int y : {1, 3})
        for (int x : {1, 3, 5, 7})
            p.data_sites.push_back({x, y});

    const std::set<Site> data(p.data_sites.begin(), p.data_sites.end());
    auto present = [&](int x, int y) -> std::optional<Site> {
        Site s{x, y};
        if (data.count(s))
            return s;
        return std::nullopt;
    };
    auto add = [&](StabType type, Site aux, std::array<std::pair<int, int>, 4> dirs) {
        Stabilizer st;
        st.type = type;
        st.aux = aux;
        for (int k = 0; k < 4; ++k)
            st.layer_support[k] = present(aux.x + dirs[k].first, aux.y + dirs[k].second);
        p.stabilizers.push_back(st);
        p.aux_sites.push_back(aux);
    };
    const std::array<std::pair<int, int>, 4> z_order{{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};
    const std::array<std::pair<int, int>, 4> x_order{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

    add(StabType::Z, {4, 2}, z_order);
    add(StabType::Z, {2, 0}, z_order);
    add(StabType::Z, {6, 0}, z_order);
    add(StabType::Z, {0, 2}, z_order);
    add(StabType::Z, {8, 2}, z_order);
    add(StabType::Z, {2, 4}, z_order);
    add(StabType::Z, {6, 4}, z_order);
    add(StabType::X, {2, 2}, x_order);
    add(StabType::X, {6, 2}, x_order);
    return p;
}

// Unrotated stability patch built on a 3x3 grid of X stars with Z
// plaquettes on the interior faces. Every datum sits on the edge between
// two stars, so the product of all X stabilizers is the identity.
// Cardinal supports; star layer order (N, E, W, S), plaquette (N, W, E, S).
PatchLayout build_unrotated_3x3() {
    PatchLayout p;
    p.kind = PatchKind::unrotated_3x3;
    p.observable_type = StabType::X;

    std::set<Site> data;
    for (int y : {1, 3, 5})
        for (int x : {2, 4})
            data.insert({x, y});
    for (int y : {2, 4})
        for (int x : {1, 3, 5})
            data.insert({x, y});
    p.data_sites.assign(data.begin(), data.end());

    auto present = [&](int x, int y) -> std::optional<Site> {
        Site s{x, y};
        if (data.count(s))
            return s;
        return std::nullopt;
    };
    auto add = [&](StabType type, Site aux, std::array<std::pair<int, int>, 4> dirs) {
        Stabilizer st;
        st.type = type;
        st.aux = aux;
        for (int k = 0; k < 4; ++k)
            st.layer_support[k] = present(aux.x + dirs[k].first, aux.y + dirs[k].second);
        p.stabilizers.push_back(st);
        p.aux_sites.push_back(aux);
    };
    const std::array<std::pair<int, int>, 4> star_order{{{0, 1}, {1, 0}, {-1, 0}, {0, -1}}};
    const std::array<std::pair<int, int>, 4> plaq_order{{{0, 1}, {-1, 0}, {1, 0}, {0, -1}}};

    for (int y : {1, 3, 5})
        for (int x : {1, 3, 5})
            add(StabType::X, {x, y}, star_order);
    for (Site s : {Site{2, 2}, Site{4, 2}, Site{2, 4}, Site{4, 4}})
        add(StabType::Z, s, plaq_order);
    return p;
}

}  // namespace

void PatchLayout::validate() const {
    // Observable-type supports must cancel pairwise over Z2.
    std::map<Site, int> coverage;
    for (const auto& st : stabilizers)
        if (st.type == observable_type)
            for (const auto& s : st.supports())
                coverage[s] ^= 1;
    for (const auto& [site, parity] : coverage)
        if (parity != 0)
            throw std::logic_error("PatchLayout: observable-type product is not the identity");

    const std::set<Site> data(data_sites.begin(), data_sites.end());
    for (const auto& st : stabilizers)
        for (const auto& s : st.supports()) {
            if (!data.count(s))
                throw std::logic_error("PatchLayout: support is not a data site");
            if (std::abs(s.x - st.aux.x) > 1 || std::abs(s.y - st.aux.y) > 1)
                throw std::logic_error("PatchLayout: support is not adjacent to its aux");
        }

    // No two stabilizers may use one datum in the same CZ layer.
    for (int layer = 0; layer < 4; ++layer) {
        std::set<Site> used;
        for (const auto& st : stabilizers)
            if (st.layer_support[layer]) {
                if (!used.insert(*st.layer_support[layer]).second)
                    throw std::logic_error("PatchLayout: CZ layer conflict");
            }
    }
}

PatchLayout build_patch(PatchKind kind) {
    PatchLayout p = (kind == PatchKind::rotated_4x2) ? build_rotated_4x2() : build_unrotated_3x3();
    p.validate();
    return p;
}

FreqTier FrequencyAssignment::at(Site s) const {
    auto it = tier.find(s);
    if (it == tier.end())
        throw std::out_of_range("FrequencyAssignment: unknown site");
    return it->second;
}

FrequencyAssignment assign_frequencies(const PatchLayout& layout, FrequencyScheme scheme) {
    if (scheme != FrequencyScheme::checkerboard)
        throw std::invalid_argument("unknown frequency scheme");
    FrequencyAssignment f;
    for (const auto& s : layout.data_sites)
        f.tier[s] = FreqTier::mid;
    for (const auto& s : layout.aux_sites)
        f.tier[s] = (((s.x + s.y) / 2) % 2 != 0) ? FreqTier::high : FreqTier::low;
    validate_frequencies(layout, f);
    return f;
}

void validate_frequencies(const PatchLayout& layout, const FrequencyAssignment& freq) {
    for (const auto& st : layout.stabilizers) {
        const FreqTier a = freq.at(st.aux);
        for (const auto& s : st.supports())
            if (freq.at(s) == a)
                throw std::invalid_argument(
                    "FrequencyAssignment: CZ pair without a strictly higher-frequency member");
    }
}

}  // namespace leaksim
