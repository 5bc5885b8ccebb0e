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

#include <cmath>

#include "leaksim/density_matrix.hpp"
#include "leaksim/gates.hpp"
#include "leaksim/lindblad.hpp"
#include "leaksim/state_vector.hpp"
#include "oracles/lindblad_ode.hpp"

using namespace leaksim;

namespace {
const DecoherenceSpec kTable{30e-6, 30e-6, 0.0, 0.0};

Matrix3c proj(int k) {
    Matrix3c p = Matrix3c::Zero();
    p(k, k) = 1.0;
    return p;
}
}  // namespace

TEST_CASE("liouvillian limits") {
    // Infinite coherence times and no Hamiltonian: generator vanishes.
    DecoherenceSpec inf{1e30, 1e30, 0.0, 0.0};
    CHECK(build_liouvillian(inf).matrix.cwiseAbs().maxCoeff() < 1e-20);

    // T1-only: the |1><1| population entry decays at 1/T1. Oracle: the
    // population equations of the master equation give d rho_11/dt =
    // -rho_11/T1 + (feed from |2>), so the diagonal entry is -1/T1.
    DecoherenceSpec t1only{30e-6, 1e30, 0.0, 0.0};
    auto liou = build_liouvillian(t1only);
    const int idx11 = 1 + 3 * 1;  // vec index of rho(1,1)
    CHECK(liou.matrix(idx11, idx11).real() == doctest::Approx(-1.0 / 30e-6).epsilon(1e-9));
    CHECK(std::abs(liou.matrix(idx11, idx11).imag()) < 1e-12);
}

TEST_CASE("superoperator is trace preserving at schedule durations") {
    auto liou = build_liouvillian(kTable);
    for (double t_ns : {20.0, 40.0, 600.0, 1100.0}) {
        auto s = superoperator_at(liou, t_ns * 1e-9);
        // Trace preservation: sum_i vec-row (i,i) maps trace to trace.
        for (int col = 0; col < 9; ++col) {
            complex acc = 0.0;
            for (int i = 0; i < 3; ++i)
                acc += s(i + 3 * i, col);
            const complex expect = (col % 4 == 0) ? 1.0 : 0.0;  // cols 0,4,8 are diagonal units
            CHECK(std::abs(acc - expect) < 1e-9);
        }
    }
}

TEST_CASE("channel at t=0 is the identity") {
    auto ch = t12_channel(0.0, kTable);
    CHECK(ch.operators.size() == 1);
    CHECK((ch.operators[0] - Matrix3c::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kraus set reproduces the superoperator") {
    auto liou = build_liouvillian(kTable);
    const double t = 600e-9;
    auto s = superoperator_at(liou, t);
    auto ch = channel_from_liouvillian(liou, t);
    ch.check_complete(1e-9);

    // Rebuild S'[(i+3j),(a+3b)] = sum_m K(i,a) conj(K(j,b)).
    Eigen::Matrix<complex, 9, 9> rebuilt = Eigen::Matrix<complex, 9, 9>::Zero();
    for (const auto& k : ch.operators)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        rebuilt(i + 3 * j, a + 3 * b) += k(i, a) * std::conj(k(j, b));
    CHECK((rebuilt - s).cwiseAbs().maxCoeff() < 1e-10);

    // With omega = alpha = 0 everything is real, so the fast kernel engages.
    CHECK(ch.all_real);
}

TEST_CASE("semigroup composition") {
    auto liou = build_liouvillian(kTable);
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const double t1 = rng.uniform() * 1000e-9;
        const double t2 = rng.uniform() * 1000e-9;
        auto s1 = superoperator_at(liou, t1);
        auto s2 = superoperator_at(liou, t2);
        auto s12 = superoperator_at(liou, t1 + t2);
        CHECK(((s2 * s1) - s12).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("populations against the ODE oracle") {
    auto liou = build_liouvillian(kTable);
    // Frozen closed forms, each cross-checked against RK4 integration:
    // P1(t) = (P1(0) + 2 P2(0)) e^{-t/T1} - 2 P2(0) e^{-2t/T1},
    // P2(t) = P2(0) e^{-2t/T1}.
    for (double t : {10e-9, 600e-9, 1100e-9, 30e-6}) {
        auto ch = channel_from_liouvillian(liou, t);
        for (int start : {1, 2}) {
            const Matrix3c rho0 = proj(start);
            const Matrix3c via_channel = oracle::apply_channel(ch, rho0);
            const Matrix3c via_ode = oracle::integrate_lindblad(rho0, t, kTable);
            CHECK((via_channel - via_ode).cwiseAbs().maxCoeff() < 1e-6);

            const double p1_0 = (start == 1) ? 1.0 : 0.0;
            const double p2_0 = (start == 2) ? 1.0 : 0.0;
            const double e1 = std::exp(-t / kTable.t1);
            const double e2 = std::exp(-2.0 * t / kTable.t1);
            const double p1 = (p1_0 + 2.0 * p2_0) * e1 - 2.0 * p2_0 * e2;
            const double p2 = p2_0 * e2;
            CHECK(std::abs(via_channel(1, 1).real() - p1) < 1e-6);
            CHECK(std::abs(via_channel(2, 2).real() - p2) < 1e-6);
        }
    }
    // Specific frozen values at 600 ns: survival of |1> and |2|.
    auto ch600 = channel_from_liouvillian(liou, 600e-9);
    const Matrix3c s1 = oracle::apply_channel(ch600, proj(1));
    const Matrix3c s2 = oracle::apply_channel(ch600, proj(2));
    CHECK(s1(1, 1).real() == doctest::Approx(std::exp(-0.02)).epsilon(1e-6));
    CHECK(s2(2, 2).real() == doctest::Approx(std::exp(-0.04)).epsilon(1e-6));
}

TEST_CASE("trajectory average matches e^{-1} at t = T1") {
    // T(30 us) on |1>: averaged survival = 1/e. Oracle above pins the
    // channel; this exercises the sampler against it.
    auto ch = t12_channel(30e-6, kTable);
    Rng rng(23);
    const int n = 100000;
    int survived = 0;
    for (int i = 0; i < n; ++i) {
        StateVector s(1);
        Matrix3c x01 = Matrix3c::Zero();
        x01(0, 1) = 1.0;
        x01(1, 0) = 1.0;
        x01(2, 2) = 1.0;
        s.apply_1q(x01, 0);
        s.apply_kraus_sampled(ch, 0, rng);
        if (s.measure_and_collapse(0, rng) == Trit::one)
            ++survived;
    }
    const double p = std::exp(-1.0);
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(survived / static_cast<double>(n) - p) < 3 * sigma);
}

TEST_CASE("density-matrix channel application") {
    // T(t) on |2><2|: survival e^{-2t/T1}, via the dm engine.
    const double t = 2e-6;
    auto ch = t12_channel(t, kTable);
    DensityMatrix dm(1);
    Matrix3c x02 = Matrix3c::Zero();
    x02(2, 0) = 1.0;
    x02(0, 2) = 1.0;
    x02(1, 1) = 1.0;
    dm.apply_1q(x02, 0);
    dm.apply_kraus(ch, 0);
    CHECK(dm.populations(0)[2] == doctest::Approx(std::exp(-2.0 * t / kTable.t1)).epsilon(1e-6));
    CHECK(std::abs(dm.trace_real() - 1.0) < 1e-9);

    // Fully dephasing channel on (|0>+|1>)/sqrt(2) gives diag(1/2, 1/2, 0).
    KrausChannel deph;
    deph.operators = {proj(0), proj(1), proj(2)};
    DensityMatrix dm2(1);
    dm2.apply_1q(sqrt_y(), 0);
    dm2.apply_kraus(deph, 0);
    CHECK(dm2.matrix()(0, 0).real() == doctest::Approx(0.5));
    CHECK(dm2.matrix()(1, 1).real() == doctest::Approx(0.5));
    CHECK(std::abs(dm2.matrix()(0, 1)) < 1e-12);
}

TEST_CASE("cz unitary structure") {
    // L1 = Lm = 0: the stated diagonal; computational restriction = CZ.
    CZParams p0{0.0, 0.0, M_PI / 10.0};
    Matrix9c u0 = cz_unitary(p0);
    const complex eip = std::exp(complex(0.0, p0.phi));
    Eigen::Matrix<complex, 9, 1> diag;
    diag << 1, 1, -1, 1, -1, -std::conj(eip), 1, -eip, 1;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            CHECK(std::abs(u0(i, j) - (i == j ? diag(i) : complex(0.0))) < 1e-12);
    const int comp[4] = {0, 1, 3, 4};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const complex expect = (i == j) ? ((i == 3) ? -1.0 : 1.0) : 0.0;
            CHECK(std::abs(u0(comp[i], comp[j]) - expect) < 1e-15);
        }

    // Full leakage swap at L1 = 0.25: |11> -> |02> with amplitude 1.
    Matrix9c uswap = cz_unitary(CZParams{0.25, 0.0, 0.0});
    CHECK(std::abs(uswap(2, 4) - 1.0) < 1e-12);
    CHECK(std::abs(uswap(4, 4)) < 1e-12);

    // Unitarity across the Table-I grid.
    for (double l1 : {0.001, 0.005})
        for (double lm : {0.005, 0.025, 0.06, 0.09, 0.125}) {
            Matrix9c u = cz_unitary(CZParams{l1, lm, M_PI / 10.0});
            CHECK(unitarity_defect(u) < 1e-12);
        }
    CHECK(unitarity_defect(cz_unitary(CZParams{0.001, 0.125, M_PI / 10.0})) < 1e-12);

    CHECK_THROWS_AS(cz_unitary(CZParams{0.3, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("cz xbasis conjugation") {
    CZParams p{0.0, 0.0, M_PI / 10.0};
    // Conjugating one side with sqrt_y turns the computational block into
    // a CX-like gate; it stays unitary and reduces to CZ conjugated.
    for (bool first : {true, false}) {
        Matrix9c g = cz_xbasis_unitary(p, first);
        CHECK(unitarity_defect(g) < 1e-12);
    }
}

TEST_CASE("channel cache") {
    ChannelCache cache(kTable);
    cache.prebuild({0, 10, 20, 550, 600, 1100});
    const auto& a = cache.get_prebuilt(600);
    const auto& b = cache.get_prebuilt(600);
    CHECK(&a == &b);
    CHECK(a.completeness_defect() < 1e-9);
    CHECK_THROWS_AS(cache.get_prebuilt(12345), std::logic_error);
    for (int64_t t : {10, 20, 550, 600, 1100})
        CHECK(cache.get_prebuilt(t).completeness_defect() < 1e-9);
}
