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
#include "leaksim/rng.hpp"
#include "leaksim/state_vector.hpp"

using namespace leaksim;

TEST_CASE("new pure state") {
    StateVector s1(1);
    CHECK(s1.dim() == 3);
    CHECK(s1.amplitudes()[0] == complex(1.0));
    CHECK(s1.amplitudes()[1] == complex(0.0));
    CHECK(s1.amplitudes()[2] == complex(0.0));

    StateVector s2(2);
    CHECK(s2.dim() == 9);
    CHECK(std::abs(s2.amplitudes()[0] - 1.0) < 1e-15);
    for (int i = 1; i < 9; ++i)
        CHECK(s2.amplitudes()[i] == complex(0.0));

    StateVector s9(9);
    CHECK(s9.dim() == 19683);
    CHECK(s9.norm2() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(StateVector(0), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(17), std::length_error);
}

TEST_CASE("sqrt_y action on basis states") {
    StateVector s(1);
    s.apply_1q(sqrt_y(), 0);
    CHECK(std::abs(s.amplitudes()[0] - complex(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(s.amplitudes()[1] - complex(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(s.amplitudes()[2]) < 1e-15);

    // sqrt_y leaves |2> alone.
    StateVector t(1);
    t.amplitudes()[0] = 0.0;
    t.amplitudes()[2] = 1.0;
    t.apply_1q(sqrt_y(), 0);
    CHECK(std::abs(t.amplitudes()[2] - 1.0) < 1e-15);

    // Identity leaves anything alone.
    StateVector u(2);
    u.apply_1q(sqrt_y(), 1);
    auto before = u.amplitudes();
    u.apply_1q(Matrix3c::Identity(), 0);
    u.apply_1q(Matrix3c::Identity(), 1);
    CHECK((u.amplitudes() - before).norm() < 1e-15);
}

TEST_CASE("sqrt_y algebra") {
    CHECK((sqrt_y() * sqrt_y_dag() - Matrix3c::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    // (sqrt_y)^2 acts as Y on the qubit block, up to global phase.
    Matrix3c y2 = sqrt_y() * sqrt_y();
    Eigen::Matrix2cd y;
    y << complex(0, 0), complex(0, -1), complex(0, 1), complex(0, 0);
    Eigen::Matrix2cd block = y2.topLeftCorner<2, 2>();
    complex phase = block(0, 1) / y(0, 1);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    CHECK((block - phase * y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norm preserved under random unitaries") {
    Rng rng(7);
    StateVector s(3);
    for (int step = 0; step < 50; ++step) {
        // Random unitary via QR of a random complex matrix.
        Eigen::Matrix3cd m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        Eigen::HouseholderQR<Eigen::Matrix3cd> qr(m);
        Matrix3c q = qr.householderQ();
        s.apply_1q(q, step % 3);
    }
    CHECK(std::abs(s.norm2() - 1.0) < 1e-9);
}

TEST_CASE("two-qutrit index convention") {
    // Basis index = 3*trit(first) + trit(second).
    CZParams p;
    p.l1 = 0.25;  // full leakage swap: |11> -> |02>
    Matrix9c u = cz_unitary(p);

    StateVector s(2);
    // Prepare |1>_a |1>_b with a = qutrit 0, b = qutrit 1: index 1*1 + 1*3 = 4.
    s.amplitudes()[0] = 0.0;
    s.amplitudes()[4] = 1.0;
    // first = lf = qutrit 0, second = hf = qutrit 1. |11> -> |02>: lf stays
    // in... |q_lf q_hf> = |11> -> |02> means lf -> 0, hf -> 2.
    s.apply_2q(u, 0, 1);
    // lf = qutrit0 = 0, hf = qutrit1 = 2: index 0*1 + 2*3 = 6.
    CHECK(std::abs(s.amplitudes()[6] - 1.0) < 1e-12);
}

TEST_CASE("kraus sampled: identity channel") {
    Rng rng(1);
    StateVector s(2);
    s.apply_1q(sqrt_y(), 0);
    auto before = s.amplitudes();
    int branch = s.apply_kraus_sampled(KrausChannel::identity(), 0, rng);
    CHECK(branch == 0);
    CHECK((s.amplitudes() - before).norm() < 1e-12);
}

TEST_CASE("kraus sampled: bernoulli branch statistics") {
    // {sqrt(1-p) I, sqrt(p) X01} on |1>: branch 1 with frequency p.
    const double p = 0.5;
    KrausChannel ch;
    Matrix3c x01 = Matrix3c::Zero();
    x01(0, 1) = 1.0;
    x01(1, 0) = 1.0;
    x01(2, 2) = 1.0;
    ch.operators.push_back(std::sqrt(1.0 - p) * Matrix3c::Identity());
    ch.operators.push_back(std::sqrt(p) * x01);
    ch.detect_real();
    ch.check_complete();

    Rng rng(42);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        StateVector s(1);
        Matrix3c x = x01;
        s.apply_1q(x, 0);  // |0> -> |1>
        if (s.apply_kraus_sampled(ch, 0, rng) == 1)
            ++hits;
    }
    const double freq = static_cast<double>(hits) / n;
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(freq - p) < 3 * sigma);
}

TEST_CASE("measurement born rule") {
    Rng rng(3);
    // |2> measures 2 with certainty.
    {
        StateVector s(1);
        Matrix3c x02 = Matrix3c::Zero();
        x02(2, 0) = 1.0;
        x02(0, 2) = 1.0;
        x02(1, 1) = 1.0;
        s.apply_1q(x02, 0);
        CHECK(s.measure_and_collapse(0, rng) == Trit::two);
    }
    // (|0>+|1>)/sqrt(2): equal frequencies.
    {
        const int n = 100000;
        int ones = 0;
        for (int i = 0; i < n; ++i) {
            StateVector s(1);
            s.apply_1q(sqrt_y(), 0);
            if (s.measure_and_collapse(0, rng) == Trit::one)
                ++ones;
        }
        const double sigma = std::sqrt(0.25 / n);
        CHECK(std::abs(ones / static_cast<double>(n) - 0.5) < 3 * sigma);
    }
    // sqrt(0.96)|1> + 0.2|2>: outcome 2 with frequency 0.04.
    {
        const int n = 100000;
        int twos = 0;
        for (int i = 0; i < n; ++i) {
            StateVector s(1);
            s.amplitudes()[0] = 0.0;
            s.amplitudes()[1] = std::sqrt(0.96);
            s.amplitudes()[2] = 0.2;
            if (s.measure_and_collapse(0, rng) == Trit::two)
                ++twos;
        }
        const double sigma = std::sqrt(0.04 * 0.96 / n);
        CHECK(std::abs(twos / static_cast<double>(n) - 0.04) < 3 * sigma);
    }
}

TEST_CASE("reset removes leakage and leaves partners untouched") {
    Rng rng(5);
    // |2> -> |0>.
    {
        StateVector s(1);
        s.amplitudes()[0] = 0.0;
        s.amplitudes()[2] = 1.0;
        s.reset(0, rng);
        CHECK(std::abs(s.amplitudes()[0] - 1.0) < 1e-12);
    }
    // (|1>+|2>)/sqrt(2) on qutrit 0, entangled with qutrit 1: the partner
    // marginal is unchanged in distribution. Oracle: two-qutrit density
    // matrix with an explicit reset map.
    {
        StateVector s(2);
        auto& a = s.amplitudes();
        a.setZero();
        // (|1>|1> + |2>|2>)/sqrt(2): indices 1+3 = 4 and 2+6 = 8.
        a[4] = 1.0 / std::sqrt(2.0);
        a[8] = 1.0 / std::sqrt(2.0);
        DensityMatrix dm = DensityMatrix::from_state(s);
        dm.reset(0);
        DensityMatrix partner = dm.partial_trace(0);

        Eigen::Vector3d expect = partner.populations(0);
        // Trajectory: average partner populations over resets.
        Eigen::Vector3d freq = Eigen::Vector3d::Zero();
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            StateVector t(2);
            auto& b = t.amplitudes();
            b.setZero();
            b[4] = 1.0 / std::sqrt(2.0);
            b[8] = 1.0 / std::sqrt(2.0);
            t.reset(0, rng);
            freq[trit_value(t.measure_and_collapse(1, rng))] += 1.0;
        }
        freq /= n;
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(freq[k] - expect[k]) < 4 * std::sqrt(0.25 / n));
    }
}

TEST_CASE("append and remove qutrits") {
    Rng rng(11);
    StateVector s(2);
    s.apply_1q(sqrt_y(), 0);
    s.apply_1q(sqrt_y(), 1);
    auto before = s.amplitudes();

    s.append_zero_qutrit();
    CHECK(s.n() == 3);
    CHECK(s.dim() == 27);
    CHECK(std::abs(s.norm2() - 1.0) < 1e-12);

    s.apply_1q(sqrt_y(), 2);
    s.reset(2, rng);
    s.remove_qutrit(2);
    CHECK(s.n() == 2);
    // The collapse can leave a global phase; compare up to it.
    complex phase = s.amplitudes()[0] / before[0];
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-9);
    CHECK((s.amplitudes() - phase * before).norm() < 1e-9);

    // Removing a non-|0> qutrit must throw.
    StateVector t(2);
    t.apply_1q(sqrt_y(), 0);
    CHECK_THROWS_AS(t.remove_qutrit(0), std::runtime_error);

    // Remove a middle qutrit: index shift is downward.
    StateVector u(3);
    u.apply_1q(sqrt_y(), 2);
    u.remove_qutrit(1);
    CHECK(u.n() == 2);
    CHECK(std::abs(u.amplitudes()[0] - complex(0.5, 0.5)) < 1e-12);
    CHECK(std::abs(u.amplitudes()[3] - complex(0.5, 0.5)) < 1e-12);
}

TEST_CASE("error paths") {
    StateVector s(2);
    CHECK_THROWS_AS(s.apply_2q(Matrix9c::Identity(), 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(s.apply_1q(Matrix3c::Identity(), 2), std::out_of_range);
}
