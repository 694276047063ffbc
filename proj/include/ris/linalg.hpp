// SPDX-License-Identifier: Apache-2.0
//
// ris-alloc: resource allocation for RIS-assisted cellular networks
// Copyright (C) 2026 The ris-alloc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RIS_LINALG_HPP
#define RIS_LINALG_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace ris
{
    using cd = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;
    using rvec = Eigen::VectorXd;
    using rmat = Eigen::MatrixXd;
    using imat = Eigen::MatrixXi;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    // All randomness flows through an explicit engine; nothing in the library
    // touches global RNG state.
    using Rng = std::mt19937_64;

    // Independent engine for (seed, trial, stream). Changing the trial count
    // never perturbs the streams of earlier trials.
    Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0);

    // Circularly-symmetric complex Gaussian with the given variance.
    cd sample_cn(Rng &rng, double variance = 1.0);
    cvec sample_cn_vector(Rng &rng, Eigen::Index n, double variance = 1.0);
    cmat sample_cn_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

    // Uniform phases on [-pi, pi).
    rvec sample_phases(Rng &rng, Eigen::Index n);

    // Maps an angle onto [-pi, pi].
    double wrap_phase(double angle);

    inline double to_db(double linear) { return 10.0 * std::log10(linear); }
    inline double from_db(double db) { return std::pow(10.0, db / 10.0); }
}

#endif
