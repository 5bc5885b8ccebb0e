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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "leaksim/layout.hpp"

using namespace leaksim;

TEST_CASE("rotated 4x2 counts and identity product") {
    PatchLayout p = build_patch(PatchKind::rotated_4x2);
    CHECK(p.data_sites.size() == 8);
    CHECK(p.stabilizers.size() == 9);
    CHECK(p.observable_type == StabType::Z);

    int n_z = 0, n_x = 0;
    std::map<Site, int> z_cover;
    for (const auto& st : p.stabilizers) {
        if (st.type == StabType::Z) {
            ++n_z;
            for (const auto& s : st.supports())
                z_cover[s] ^= 1;
        } else {
            ++n_x;
        }
    }
    CHECK(n_z == 7);
    CHECK(n_x == 2);
    // XOR over Z-stabilizer supports of every data site is zero.
    for (const auto& [site, parity] : z_cover)
        CHECK(parity == 0);

    // 8 data + 9 aux = 17 qutrits (34 simulator qubits before recycling).
    CHECK(p.data_sites.size() + p.aux_sites.size() == 17);
}

TEST_CASE("unrotated 3x3 structure") {
    PatchLayout p = build_patch(PatchKind::unrotated_3x3);
    CHECK(p.observable_type == StabType::X);
    CHECK(p.data_sites.size() == 12);
    CHECK(p.stabilizers.size() == 13);

    int n_x = 0, n_z = 0;
    std::map<Site, int> x_cover;
    for (const auto& st : p.stabilizers) {
        if (st.type == StabType::X) {
            ++n_x;
            for (const auto& s : st.supports())
                x_cover[s] ^= 1;
        } else {
            ++n_z;
        }
    }
    CHECK(n_x == 9);
    CHECK(n_z == 4);
    for (const auto& [site, parity] : x_cover)
        CHECK(parity == 0);
    // Every datum sits in exactly two X stars.
    std::map<Site, int> star_count;
    for (const auto& st : p.stabilizers)
        if (st.type == StabType::X)
            for (const auto& s : st.supports())
                ++star_count[s];
    for (const auto& d : p.data_sites)
        CHECK(star_count[d] == 2);
}

TEST_CASE("layer conflicts rejected") {
    PatchLayout p = build_patch(PatchKind::rotated_4x2);
    // Sabotage: force two stabilizers to grab one datum in layer 0.
    p.stabilizers[0].layer_support[0] = p.stabilizers[8].layer_support[0];
    CHECK_THROWS_AS(p.validate(), std::logic_error);
}

TEST_CASE("default frequencies") {
    for (PatchKind kind : {PatchKind::rotated_4x2, PatchKind::unrotated_3x3}) {
        PatchLayout p = build_patch(kind);
        FrequencyAssignment f = assign_frequencies(p);
        for (const auto& d : p.data_sites)
            CHECK(f.at(d) == FreqTier::mid);
        // Every (data, aux) CZ pair has exactly one strictly higher tier.
        for (const auto& st : p.stabilizers)
            for (const auto& s : st.supports())
                CHECK(f.at(st.aux) != f.at(s));
    }

    // 4x2: all Z aux high, X aux low (the checkerboard happens to align
    // with the types there).
    PatchLayout p = build_patch(PatchKind::rotated_4x2);
    FrequencyAssignment f = assign_frequencies(p);
    for (const auto& st : p.stabilizers)
        CHECK(f.at(st.aux) == (st.type == StabType::Z ? FreqTier::high : FreqTier::low));

    // 3x3: the aux tiers are balanced (7 high vs 6 low), so alternate
    // wiggling rounds measure a near-even high/low mix.
    PatchLayout q = build_patch(PatchKind::unrotated_3x3);
    FrequencyAssignment g = assign_frequencies(q);
    int high = 0, low = 0;
    for (const auto& a : q.aux_sites)
        (g.at(a) == FreqTier::high ? high : low) += 1;
    CHECK(high == 7);
    CHECK(low == 6);
}

TEST_CASE("broken scheme rejected") {
    PatchLayout p = build_patch(PatchKind::rotated_4x2);
    FrequencyAssignment f = assign_frequencies(p);
    // Inject a mid-mid adjacent pair.
    f.tier[p.stabilizers[0].aux] = FreqTier::mid;
    CHECK_THROWS_AS(validate_frequencies(p, f), std::invalid_argument);
}
