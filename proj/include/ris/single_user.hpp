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

#ifndef RIS_SINGLE_USER_HPP
#define RIS_SINGLE_USER_HPP

#include "ris/channel_model.hpp"

#include <limits>
#include <string_view>
#include <vector>

// Joint beamformer / RIS design for one user served by one BS:
//
//     maximize |w^H (D phi + h)|^2   s.t.  ||w|| = 1,  |phi_n| = rho
//
// All solvers report the true objective at the point they return.

namespace ris
{
    enum class SingleUserMethod
    {
        upper_bound, // closed form, SVD of D
        lower_bound, // closed form, w from the summed cascade columns
        alternating, // alternating maximization over w and phi
        random,      // random phases, matched beamformer
    };

    std::string_view to_string(SingleUserMethod m);

    struct SingleUserSolution
    {
        cvec beamformer;
        RisConfig config;
        double objective = 0.0;
        SingleUserMethod method = SingleUserMethod::alternating;
        std::vector<double> trace; // objective per iteration (alternating only)
        double bound = std::numeric_limits<double>::quiet_NaN(); // N_B * c_{i+} (upper_bound only)
    };

    double snr(const cvec &beamformer, const cmat &cascade, const cvec &direct, const RisConfig &config,
               double tx_power, double noise_power);

    // |w^H (D phi + h)|^2
    double beamforming_gain(const cvec &beamformer, const cmat &cascade, const cvec &direct, const RisConfig &config);

    /// Phases co-phasing every term of g^H phi with t, so that
    /// |g^H phi + t| = rho * sum |g_n| + |t|. A zero t or g_n contributes angle 0.
    RisConfig align_phases(const cvec &g, cd t, double rho);

    SingleUserSolution optimize_ub(const cmat &cascade, const cvec &direct, double rho);
    SingleUserSolution optimize_lb(const cmat &cascade, const cvec &direct, double rho);

    struct AlternatingOptions
    {
        double tolerance = 1e-8; // relative objective improvement
        int max_iterations = 200;
    };

    SingleUserSolution optimize_am(const cmat &cascade, const cvec &direct, double rho, const RisConfig &init,
                                   const AlternatingOptions &options = {});

    // Random phases with the beamformer matched to the resulting channel.
    SingleUserSolution random_configuration(const cmat &cascade, const cvec &direct, double rho, Rng &rng);
}

#endif
