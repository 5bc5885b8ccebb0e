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

#ifndef LEAKSIM_ANALYSIS_H
#define LEAKSIM_ANALYSIS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leaksim/layout.hpp"

namespace leaksim {

struct FitPoint {
    int n_rounds = 0;
    double p_fail = 0.0;
    double delta_p_fail = 0.0;
};

/// Error suppression rate from P_fail = P_SPAM * Lambda_s^(-n_r/2), via a
/// weighted linear fit of ln(P_fail) against n_r.
struct FitResult {
    double lambda_s = 1.0;
    double lambda_s_err = 0.0;
    double p_spam = 0.0;
    double p_spam_err = 0.0;
    std::vector<FitPoint> points;
    int dropped_points = 0;  // P_fail = 0 points skipped with a warning
};

FitResult fit_lambda(const std::vector<FitPoint>& points);

struct SweepConfig {
    PatchKind patch = PatchKind::rotated_4x2;
    std::vector<double> l1_values{0.001, 0.005};
    std::vector<double> lm_values{0.005, 0.025, 0.06, 0.09, 0.125};
    std::vector<int> rounds{3, 5, 7, 9};
    bool run_standard = true;
    bool run_wiggled = true;
    int shots = 20000;
    double phi = 0.3141592653589793;  // pi/10
    double t1_us = 30.0;
    double t2_us = 30.0;
    uint64_t master_seed = 20260101;
    int workers = 0;  // 0 = hardware
    std::string out_dir = "sweep_out";
};

struct PointResult {
    PatchKind patch = PatchKind::rotated_4x2;
    bool wiggled = false;
    double l1 = 0.0, lm = 0.0;
    int n_rounds = 0;
    int shots = 0;
    double p_fail = 0.0, delta_p_fail = 0.0;
    std::vector<double> leak_rate;  // per round
    std::vector<double> leak_err;
    uint64_t seed = 0;
};

struct LambdaRow {
    PatchKind patch = PatchKind::rotated_4x2;
    bool wiggled = false;
    double l1 = 0.0, lm = 0.0;
    FitResult fit;
};

struct SweepResults {
    std::vector<PointResult> points;
    std::vector<LambdaRow> lambdas;

    const PointResult* find_point(bool wiggled, double l1, double lm, int n_rounds) const;
    const LambdaRow* find_lambda(bool wiggled, double l1, double lm) const;
};

/// One grid point, computed end to end: compile, sample, split, fit
/// weights on the even shots, decode the odd shots, leakage statistics.
PointResult run_point(const SweepConfig& cfg, bool wiggled, double l1, double lm, int n_rounds);

/// Full grid with per-point resume: existing point files under
/// cfg.out_dir are reused, missing ones computed and written atomically.
SweepResults run_sweep(const SweepConfig& cfg);

/// CSV persistence (schema: patch,wiggled,L1,Lm,n_r,shots,P_fail,dP_fail,
/// leak_rate_r1..r9,lambda_s,lambda_s_err,p_spam,seed).
void write_results_csv(const SweepResults& results, const std::string& path);
SweepResults read_results_csv(const std::string& path);

/// Static SVG plots: lambda vs Lm, log P_fail vs rounds with fit lines,
/// and per-round leakage-extraction rates. Throws on empty results.
void emit_plots(const SweepResults& results, const std::string& dir);

}  // namespace leaksim

#endif
