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

#ifndef LEAKSIM_LAYOUT_H
#define LEAKSIM_LAYOUT_H

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace leaksim {

enum class PatchKind { rotated_4x2, unrotated_3x3 };
enum class StabType { Z, X };
enum class FreqTier { low, mid, high };

std::string to_string(PatchKind kind);
PatchKind patch_kind_from_string(const std::string& name);

struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

/// One stabilizer: its type, auxiliary site and the data support used in
/// each of the four shared CZ layers (absent at boundaries -> idle).
struct Stabilizer {
    StabType type = StabType::Z;
    Site aux;
    std::array<std::optional<Site>, 4> layer_support;

    std::vector<Site> supports() const;
    int weight() const;
};

struct PatchLayout {
    PatchKind kind = PatchKind::rotated_4x2;
    std::vector<Site> data_sites;
    std::vector<Site> aux_sites;
    std::vector<Stabilizer> stabilizers;
    /// The over-determined type whose product is the identity.
    StabType observable_type = StabType::Z;

    /// Checks the structural invariants: observable-type supports cancel
    /// pairwise, all supports are diagonal/cardinal neighbors of their
    /// aux, no two stabilizers grab one datum in the same layer.
    void validate() const;
};

PatchLayout build_patch(PatchKind kind);

enum class FrequencyScheme { checkerboard };

/// Tier per site. Data sites are mid; auxiliary sites alternate
/// high/low on a spatial checkerboard, so every CZ pair has a strictly
/// higher-frequency member and alternate wiggling rounds measure
/// mid-only versus a roughly half-high/half-low mix.
struct FrequencyAssignment {
    std::map<Site, FreqTier> tier;
    FreqTier at(Site s) const;
};

FrequencyAssignment assign_frequencies(const PatchLayout& layout,
                                       FrequencyScheme scheme = FrequencyScheme::checkerboard);

/// Throws if any stabilizer's (aux, datum) CZ pair lacks a strictly
/// higher-frequency member.
void validate_frequencies(const PatchLayout& layout, const FrequencyAssignment& freq);

}  // namespace leaksim

#endif
