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

#ifndef RIS_MULTI_USER_HPP
#define RIS_MULTI_USER_HPP

#include "ris/channel_model.hpp"

#include <string_view>
#include <vector>

// Downlink with up to two cooperating BSs sharing one RIS. Users may be served
// by both BSs (joint transmission). With channel-matched beamforming the only
// free variables are the RIS phases and the per-(BS, user) powers; the
// objective is the geometric mean of the SINRs, optimized through its log,
//
//     G(phases) = sum_k log2 SINR_k.
//
// Powers and association matrices are [bs x users].

namespace ris
{
    using Beamformers = std::vector<std::vector<cvec>>; // [bs][user], zero vector when not served

    /// Normalized composite channel. Throws std::domain_error for a zero channel.
    cvec cm_beamformer(const cmat &cascade, const cvec &direct, const RisConfig &config);

    Beamformers cm_beamformers(const CascadedChannels &channels, const imat &association, const RisConfig &config);

    /// Per-user downlink SINR: coherent useful sum over serving BSs, interference
    /// from every other user's stream, plus noise.
    rvec evaluate_sinr(const CascadedChannels &channels, const Beamformers &beamformers, const rmat &powers,
                       const RisConfig &config, const imat &association, double noise_power);

    double geometric_mean(const rvec &values);

    struct CouplingCoefficients
    {
        // F[i](k, l) = I_il eta_il g_ik^H g_il
        std::vector<cmat> F;
        // a[i](k, l) = g_ik^H g_il / ||g_il||
        std::vector<cmat> a;
    };

    CouplingCoefficients coupling(const CascadedChannels &channels, const rmat &powers, const RisConfig &config,
                                  const imat &association);

    struct DownlinkSetup
    {
        imat association;
        rmat powers;
        double rho = 1.0;
        double noise_power = 1.0;
    };

    /// sum_k log2 SINR_k under channel-matched beamforming. Terms for
    /// (BS, user) pairs that are not served are dropped.
    double objective_G(const rvec &phases, const CascadedChannels &channels, const DownlinkSetup &setup);

    /// Analytic dG/dphases.
    rvec grad_G(const rvec &phases, const CascadedChannels &channels, const DownlinkSetup &setup);

    struct PhaseAscentOptions
    {
        double initial_step = 1.0;
        double shrink = 0.5;
        int max_backtracks = 30;
        double armijo = 1e-4;
        double tolerance = 1e-6; // on |delta G|
        int max_iterations = 200;
    };

    struct PhaseAscentResult
    {
        RisConfig config;
        std::vector<double> trace; // G after every accepted step, starting point first
    };

    PhaseAscentResult optimize_phases(const RisConfig &init, const CascadedChannels &channels,
                                      const DownlinkSetup &setup, const PhaseAscentOptions &options = {});

    // Power allocation over the a-coefficients at a fixed RIS configuration.

    /// sum_k log2 SINR_k as a function of the powers.
    double sum_log_sinr(const rmat &powers, const std::vector<cmat> &a, const imat &association, double noise_power);

    struct PowerOptions
    {
        double tolerance = 1e-6; // on the SCA objective increase, bits
        int max_iterations = 100;
        double inner_tolerance = 1e-7; // relative surrogate improvement
        int max_inner_iterations = 500;
    };

    struct PowerResult
    {
        rmat powers;
        std::vector<double> trace; // objective after each SCA iteration, starting point first
    };

    PowerResult optimize_powers(const rmat &init, const std::vector<cmat> &a, const imat &association,
                                const rvec &budgets, double noise_power, const PowerOptions &options = {});

    // Equal split of each BS budget over the users it serves.
    rmat uniform_powers(const imat &association, const rvec &budgets);

    /// Each user goes to the BS with the larger direct gain; the round(p_jt * K)
    /// users with the smallest direct-gain ratio max/min are served by both.
    imat associate_users(const Scenario &scenario, double p_jt);

    enum class MultiUserMethod
    {
        joint,       // alternate RIS phases and powers
        only_ris,    // RIS phases, uniform powers
        only_powers, // random RIS, optimized powers
        none,        // random RIS, uniform powers
    };

    std::string_view to_string(MultiUserMethod m);

    struct AllocationParams
    {
        double rho = 1.0;
        double noise_power = 1.0;
        rvec budgets; // per BS, watts
        bool optimize_phases = true;
        bool optimize_powers = true;
        RisConfig initial_config; // empty: all-zero phases
        int max_outer_iterations = 20;
        double tolerance = 1e-4; // on the outer objective, bits
        PhaseAscentOptions phase;
        PowerOptions power;
    };

    struct AllocationResult
    {
        Beamformers beamformers;
        rmat powers;
        RisConfig config;
        rvec sinr;
        double geometric_mean = 0.0;
        std::vector<double> trace; // sum_k log2 SINR_k, starting point then one entry per outer iteration
    };

    AllocationResult allocate(const CascadedChannels &estimates, const imat &association,
                              const AllocationParams &params);
    AllocationResult allocate(const CascadedChannels &estimates, const Scenario &scenario,
                              const AllocationParams &params);

    // Presets for the four strategies; random_config is used by the methods
    // that leave the RIS unoptimized.
    AllocationParams method_params(MultiUserMethod method, AllocationParams base, const RisConfig &random_config);
}

#endif
