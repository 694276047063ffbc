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

#include "ris/linalg.hpp"

#include <cmath>

namespace ris
{
    Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        return Rng(seq);
    }

    cd sample_cn(Rng &rng, double variance)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
        const double re = normal(rng);
        const double im = normal(rng);
        return {re, im};
    }

    cvec sample_cn_vector(Rng &rng, Eigen::Index n, double variance)
    {
        cvec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = sample_cn(rng, variance);
        return v;
    }

    cmat sample_cn_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols, double variance)
    {
        cmat m(rows, cols);
        // column-major fill keeps the draw order tied to the storage order
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = sample_cn(rng, variance);
        return m;
    }

    rvec sample_phases(Rng &rng, Eigen::Index n)
    {
        std::uniform_real_distribution<double> uniform(-pi, pi);
        rvec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = uniform(rng);
        return v;
    }

    double wrap_phase(double angle)
    {
        if (!std::isfinite(angle))
            return angle;
        return std::remainder(angle, two_pi);
    }
}
