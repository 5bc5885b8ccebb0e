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

#include "leaksim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "leaksim/decoder.hpp"
#include "leaksim/rng.hpp"
#include "leaksim/sampler.hpp"

namespace leaksim {

namespace fs = std::filesystem;

FitResult fit_lambda(const std::vector<FitPoint>& points) {
    FitResult res;
    std::vector<FitPoint> usable;
    for (const auto& p : points) {
        if (p.p_fail <= 0.0 || p.p_fail >= 1.0) {
            std::cerr << "fit_lambda: dropping point n_r=" << p.n_rounds
                      << " with P_fail=" << p.p_fail << "\n";
            ++res.dropped_points;
            continue;
        }
        usable.push_back(p);
    }
    if (usable.size() < 2)
        throw std::invalid_argument("fit_lambda: fewer than two usable points");

    // Weighted least squares of y = ln P against x = n_r with
    // var(y) = (dP/P)^2.
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (const auto& p : usable) {
        const double y = std::log(p.p_fail);
        double var = (p.delta_p_fail > 0.0) ? std::pow(p.delta_p_fail / p.p_fail, 2.0) : 1e-20;
        var = std::max(var, 1e-20);
        const double w = 1.0 / var;
        S += w;
        Sx += w * p.n_rounds;
        Sy += w * y;
        Sxx += w * p.n_rounds * p.n_rounds;
        Sxy += w * p.n_rounds * y;
    }
    const double det = S * Sxx - Sx * Sx;
    if (std::abs(det) < 1e-30)
        throw std::invalid_argument("fit_lambda: degenerate abscissas");
    const double slope = (S * Sxy - Sx * Sy) / det;
    const double intercept = (Sxx * Sy - Sx * Sxy) / det;
    const double var_slope = S / det;
    const double var_intercept = Sxx / det;

    res.lambda_s = std::exp(-2.0 * slope);
    res.lambda_s_err = 2.0 * res.lambda_s * std::sqrt(var_slope);
    res.p_spam = std::exp(intercept);
    res.p_spam_err = res.p_spam * std::sqrt(var_intercept);
    res.points = points;
    return res;
}

namespace {

uint64_t point_seed(const SweepConfig& cfg, bool wiggled, double l1, double lm, int n_rounds) {
    uint64_t h = cfg.master_seed;
    auto mix = [&h](uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        uint64_t s = h;
        h = splitmix64(s);
    };
    mix(static_cast<uint64_t>(cfg.patch));
    mix(wiggled ? 1 : 0);
    uint64_t bits;
    static_assert(sizeof(double) == sizeof(uint64_t));
    std::memcpy(&bits, &l1, 8);
    mix(bits);
    std::memcpy(&bits, &lm, 8);
    mix(bits);
    mix(static_cast<uint64_t>(n_rounds));
    return h;
}

std::string point_file(const SweepConfig& cfg, bool wiggled, double l1, double lm, int n_rounds) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "point_%s_%s_L1_%g_Lm_%g_nr_%d_shots_%d.csv",
                  to_string(cfg.patch).c_str(), wiggled ? "wiggled" : "standard", l1, lm, n_rounds,
                  cfg.shots);
    return (fs::path(cfg.out_dir) / buf).string();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_point_row(std::ostream& os, const PointResult& p) {
    os << to_string(p.patch) << "," << (p.wiggled ? 1 : 0) << "," << format_double(p.l1) << ","
       << format_double(p.lm) << "," << p.n_rounds << "," << p.shots << ","
       << format_double(p.p_fail) << "," << format_double(p.delta_p_fail);
    for (int r = 0; r < 9; ++r)
        os << ","
           << (r < static_cast<int>(p.leak_rate.size()) ? format_double(p.leak_rate[r]) : "nan");
    // Point rows carry no lambda fit.
    os << ",nan,nan,nan," << p.seed << "\n";
}

std::optional<PointResult> parse_point_row(const std::string& line) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (fields.size() != 21)
        return std::nullopt;
    PointResult p;
    p.patch = patch_kind_from_string(fields[0]);
    p.wiggled = fields[1] == "1";
    p.l1 = std::stod(fields[2]);
    p.lm = std::stod(fields[3]);
    p.n_rounds = std::stoi(fields[4]);
    p.shots = std::stoi(fields[5]);
    p.p_fail = std::stod(fields[6]);
    p.delta_p_fail = std::stod(fields[7]);
    for (int r = 0; r < 9; ++r) {
        const double v = std::stod(fields[8 + r]);
        if (!std::isnan(v) && r < p.n_rounds) {
            p.leak_rate.push_back(v);
            p.leak_err.push_back(0.0);
        }
    }
    p.seed = std::stoull(fields[20]);
    return p;
}

}  // namespace

PointResult run_point(const SweepConfig& cfg, bool wiggled, double l1, double lm, int n_rounds) {
    ExperimentConfig ec;
    ec.patch = cfg.patch;
    ec.wiggled = wiggled;
    ec.n_rounds = n_rounds;
    ec.cz = CZParams{l1, lm, cfg.phi};
    ec.decoherence = DecoherenceSpec{cfg.t1_us * 1e-6, cfg.t2_us * 1e-6, 0.0, 0.0};
    const ScheduledCircuit circuit = compile_experiment(ec);

    ChannelCache channels(ec.decoherence);
    channels.prebuild(circuit.channel_durations_ns);

    PointResult pr;
    pr.patch = cfg.patch;
    pr.wiggled = wiggled;
    pr.l1 = l1;
    pr.lm = lm;
    pr.n_rounds = n_rounds;
    pr.shots = cfg.shots;
    pr.seed = point_seed(cfg, wiggled, l1, lm, n_rounds);

    const ShotSet shots = run_batch(circuit, channels, cfg.shots, pr.seed, cfg.workers);
    const std::vector<DetectorBits> bits = detectors_from_shots(shots);

    DecodingGraph graph = build_graph(circuit);
    std::vector<DetectorBits> training;
    for (size_t i = 0; i < bits.size(); i += 2)
        training.push_back(bits[i]);
    fit_weights(graph, training, 0);
    const FailureEstimate est = evaluate(bits, graph, 1);
    pr.p_fail = est.p_fail;
    pr.delta_p_fail = est.delta_p_fail;

    const LeakageStats leaks = leakage_stats(shots);
    pr.leak_rate = leaks.rate;
    pr.leak_err = leaks.err;
    return pr;
}

SweepResults run_sweep(const SweepConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    SweepResults results;

    std::vector<bool> families;
    if (cfg.run_standard)
        families.push_back(false);
    if (cfg.run_wiggled)
        families.push_back(true);

    for (bool wiggled : families)
        for (double l1 : cfg.l1_values)
            for (double lm : cfg.lm_values) {
                std::vector<FitPoint> fit_points;
                for (int nr : cfg.rounds) {
                    const std::string file = point_file(cfg, wiggled, l1, lm, nr);
                    std::optional<PointResult> pr;
                    if (fs::exists(file)) {
                        std::ifstream in(file);
                        std::string line;
                        if (std::getline(in, line))
                            pr = parse_point_row(line);
                    }
                    if (!pr) {
                        try {
                            pr = run_point(cfg, wiggled, l1, lm, nr);
                        } catch (const std::exception& e) {
                            std::cerr << "sweep: point failed (" << file << "): " << e.what()
                                      << "\n";
                            continue;  // recorded and skipped, never aborts
                        }
                        const std::string tmp = file + ".tmp";
                        {
                            std::ofstream out(tmp);
                            write_point_row(out, *pr);
                        }
                        fs::rename(tmp, file);
                    }
                    results.points.push_back(*pr);
                    fit_points.push_back({nr, pr->p_fail, pr->delta_p_fail});
                }
                if (fit_points.size() >= 2) {
                    try {
                        LambdaRow row;
                        row.patch = cfg.patch;
                        row.wiggled = wiggled;
                        row.l1 = l1;
                        row.lm = lm;
                        row.fit = fit_lambda(fit_points);
                        results.lambdas.push_back(row);
                    } catch (const std::exception& e) {
                        std::cerr << "sweep: lambda fit failed at L1=" << l1 << " Lm=" << lm
                                  << ": " << e.what() << "\n";
                    }
                }
            }
    return results;
}

const PointResult* SweepResults::find_point(bool wiggled, double l1, double lm,
                                            int n_rounds) const {
    for (const auto& p : points)
        if (p.wiggled == wiggled && p.l1 == l1 && p.lm == lm && p.n_rounds == n_rounds)
            return &p;
    return nullptr;
}

const LambdaRow* SweepResults::find_lambda(bool wiggled, double l1, double lm) const {
    for (const auto& l : lambdas)
        if (l.wiggled == wiggled && l.l1 == l1 && l.lm == lm)
            return &l;
    return nullptr;
}

void write_results_csv(const SweepResults& results, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        os << "patch,wiggled,L1,Lm,n_r,shots,P_fail,dP_fail,leak_rate_r1,leak_rate_r2,"
              "leak_rate_r3,leak_rate_r4,leak_rate_r5,leak_rate_r6,leak_rate_r7,leak_rate_r8,"
              "leak_rate_r9,lambda_s,lambda_s_err,p_spam,seed\n";
        for (const auto& p : results.points)
            write_point_row(os, p);
        for (const auto& l : results.lambdas) {
            os << to_string(l.patch) << "," << (l.wiggled ? 1 : 0) << "," << format_double(l.l1)
               << "," << format_double(l.lm) << ",0,0,nan,nan";
            for (int r = 0; r < 9; ++r)
                os << ",nan";
            os << "," << format_double(l.fit.lambda_s) << "," << format_double(l.fit.lambda_s_err)
               << "," << format_double(l.fit.p_spam) << ",0\n";
        }
    }
    fs::rename(tmp, path);
}

SweepResults read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_results_csv: cannot open " + path);
    SweepResults results;
    std::string line;
    std::getline(in, line);  // header
    if (line.find("patch,wiggled,L1,Lm") != 0)
        throw std::runtime_error("read_results_csv: missing or malformed header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::vector<std::string> f;
        std::string field;
        while (std::getline(ss, field, ','))
            f.push_back(field);
        if (f.size() != 21)
            throw std::runtime_error("read_results_csv: bad column count");
        if (f[4] == "0") {  // lambda row
            LambdaRow l;
            l.patch = patch_kind_from_string(f[0]);
            l.wiggled = f[1] == "1";
            l.l1 = std::stod(f[2]);
            l.lm = std::stod(f[3]);
            l.fit.lambda_s = std::stod(f[17]);
            l.fit.lambda_s_err = std::stod(f[18]);
            l.fit.p_spam = std::stod(f[19]);
            results.lambdas.push_back(l);
        } else {
            auto p = parse_point_row(line);
            if (!p)
                throw std::runtime_error("read_results_csv: bad point row");
            results.points.push_back(*p);
        }
    }
    return results;
}

namespace {

// Minimal SVG scatter/line canvas.
class Svg {
  public:
    Svg(double xmin, double xmax, double ymin, double ymax)
        : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
        body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
              << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        body_ << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - 20
              << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
        body_ << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kMargin
              << "\" y2=\"20\" stroke=\"black\"/>\n";
    }
    double px(double x) const {
        return kMargin + (x - xmin_) / (xmax_ - xmin_) * (kW - kMargin - 20);
    }
    double py(double y) const {
        return kH - kMargin - (y - ymin_) / (ymax_ - ymin_) * (kH - kMargin - 20);
    }
    void dot(double x, double y, const std::string& color) {
        body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"4\" fill=\"" << color
              << "\"/>\n";
    }
    void cross(double x, double y, const std::string& color) {
        const double cx = px(x), cy = py(y);
        body_ << "<path d=\"M" << cx - 4 << " " << cy - 4 << " L" << cx + 4 << " " << cy + 4
              << " M" << cx - 4 << " " << cy + 4 << " L" << cx + 4 << " " << cy - 4
              << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }
    void errbar(double x, double ylo, double yhi, const std::string& color) {
        body_ << "<line x1=\"" << px(x) << "\" y1=\"" << py(ylo) << "\" x2=\"" << px(x)
              << "\" y2=\"" << py(yhi) << "\" stroke=\"" << color << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  bool dashed = false) {
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\""
              << (dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (const auto& [x, y] : pts)
            body_ << px(x) << "," << py(y) << " ";
        body_ << "\"/>\n";
    }
    void text(double x, double y, const std::string& s) {
        body_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\">" << s
              << "</text>\n";
    }
    void save(const std::string& path) {
        body_ << "</svg>\n";
        std::ofstream out(path);
        out << body_.str();
    }

  private:
    static constexpr int kW = 640, kH = 480, kMargin = 60;
    double xmin_, xmax_, ymin_, ymax_;
    std::ostringstream body_;
};

std::string color_for(double l1, bool /*wiggled*/) {
    return l1 <= 0.002 ? "darkorange" : "seagreen";
}

}  // namespace

void emit_plots(const SweepResults& results, const std::string& dir) {
    if (results.points.empty())
        throw std::invalid_argument("emit_plots: empty results");
    fs::create_directories(dir);

    // (a) lambda_s versus Lm.
    if (!results.lambdas.empty()) {
        double lmax = 0.0;
        for (const auto& l : results.lambdas)
            lmax = std::max(lmax, l.fit.lambda_s + l.fit.lambda_s_err);
        Svg svg(0.0, 0.14, 0.0, lmax * 1.1 + 0.1);
        svg.text(280, 470, "leakage mobility Lm");
        svg.text(10, 15, "error suppression rate");
        for (const auto& l : results.lambdas) {
            const std::string c = color_for(l.l1, l.wiggled);
            svg.errbar(l.lm, l.fit.lambda_s - l.fit.lambda_s_err,
                       l.fit.lambda_s + l.fit.lambda_s_err, c);
            if (l.wiggled)
                svg.cross(l.lm, l.fit.lambda_s, c);
            else
                svg.dot(l.lm, l.fit.lambda_s, c);
        }
        svg.save((fs::path(dir) / "lambda_vs_lm.svg").string());
    }

    // (b) log10 P_fail versus rounds, with the fitted lines.
    {
        double ymin = 0.0, ymax = -10.0;
        int rmax = 2;
        for (const auto& p : results.points)
            if (p.p_fail > 0) {
                ymin = std::min(ymin, std::log10(p.p_fail));
                ymax = std::max(ymax, std::log10(p.p_fail));
                rmax = std::max(rmax, p.n_rounds);
            }
        Svg svg(0.0, rmax + 1.0, ymin - 0.3, std::max(0.0, ymax) + 0.3);
        svg.text(280, 470, "rounds n_r");
        svg.text(10, 15, "log10 P_fail");
        for (const auto& l : results.lambdas) {
            std::vector<std::pair<double, double>> pts;
            std::vector<std::pair<double, double>> line;
            for (const auto& p : results.points)
                if (p.wiggled == l.wiggled && p.l1 == l.l1 && p.lm == l.lm && p.p_fail > 0)
                    pts.push_back({static_cast<double>(p.n_rounds), std::log10(p.p_fail)});
            if (pts.empty())
                continue;
            const std::string c = color_for(l.l1, l.wiggled);
            for (const auto& [x, y] : pts)
                l.wiggled ? svg.cross(x, y, c) : svg.dot(x, y, c);
            const double slope = -0.5 * std::log10(l.fit.lambda_s);
            const double icpt = std::log10(l.fit.p_spam);
            line.push_back({pts.front().first, icpt + slope * pts.front().first});
            line.push_back({pts.back().first, icpt + slope * pts.back().first});
            svg.polyline(line, c, l.wiggled);
        }
        svg.save((fs::path(dir) / "pfail_vs_rounds.svg").string());
    }

    // (c) leakage-extraction rate versus round (longest runs only).
    {
        int rmax = 0;
        double ymax = 0.0;
        for (const auto& p : results.points) {
            rmax = std::max(rmax, p.n_rounds);
            for (double v : p.leak_rate)
                ymax = std::max(ymax, v);
        }
        Svg svg(0.5, rmax + 0.5, 0.0, std::max(ymax * 1.15, 1e-3));
        svg.text(280, 470, "round");
        svg.text(10, 15, "P(leak detected)");
        for (const auto& p : results.points) {
            if (p.n_rounds != rmax)
                continue;
            std::vector<std::pair<double, double>> pts;
            for (int r = 0; r < static_cast<int>(p.leak_rate.size()); ++r)
                pts.push_back({r + 1.0, p.leak_rate[r]});
            const std::string c = color_for(p.l1, p.wiggled);
            svg.polyline(pts, c, p.wiggled);
            for (const auto& [x, y] : pts)
                p.wiggled ? svg.cross(x, y, c) : svg.dot(x, y, c);
        }
        svg.save((fs::path(dir) / "leak_vs_round.svg").string());
    }
}

}  // namespace leaksim
