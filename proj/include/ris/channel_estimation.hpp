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

#ifndef RIS_CHANNEL_ESTIMATION_HPP
#define RIS_CHANNEL_ESTIMATION_HPP

#include "ris/channel_model.hpp"

#include <string_view>
#include <vector>

// Uplink training over Q RIS configurations and per-BS estimation of the
// cascade matrices D_k and direct channels h_k.
//
// Observation model at one BS for configuration q:
//
//     Y^(q) = sum_k sqrt(eta_k) (D_k phi^(q) + h_k) p_k^H + W^(q)
//
// Projecting onto pilot k and dividing by sqrt(eta_k) gives a linear model in
// d = [vec(D_1); h_1; ...; vec(D_K); h_K]. Two routes solve it:
//
//  * the dense stacked system (StackedSystem), valid for any pilot book;
//  * the decoupled route, valid for orthogonal pilots, where every (user,
//    antenna) pair is an independent Q x (N_R + 1) problem sharing one
//    configuration matrix. The harness always takes this route.

namespace ris
{
    enum class Estimator
    {
        ls,
        mmse_q, // linear MMSE over Q = N_R + 1 configurations
        mmse_1, // linear MMSE over one random configuration
    };

    std::string_view to_string(Estimator e);

    enum class PilotMode
    {
        orthogonal, // columns of a tau_p-point DFT, requires tau_p >= K
        random,     // i.i.d. unit-norm columns, any tau_p
    };

    struct PilotBook
    {
        cmat sequences; // tau_p x K, unit-norm columns
        rvec powers;    // eta_k = tau_p * per-symbol power

        int users() const { return static_cast<int>(sequences.cols()); }
        int length() const { return static_cast<int>(sequences.rows()); }

        // P^H P == I up to 1e-12.
        bool orthogonal() const;
    };

    PilotBook generate_pilot_book(int users, int length, double symbol_power_w,
                                  PilotMode mode = PilotMode::orthogonal, Rng *rng = nullptr);

    // Q = 1: one uniform-random phase vector. Q > 1: rows 0..Q-1 of an
    // M-point DFT, M = max(Q, N_R + 1), restricted to columns 1..N_R. For
    // Q >= N_R + 1 the extended matrix [phi^(q)^T, 1] has orthogonal columns.
    std::vector<RisConfig> generate_training_configs(int ris_elements, int count, double rho, Rng &rng);

    // Q x (N_R + 1) matrix with row q = [phi^(q)^T, 1].
    cmat configuration_matrix(const std::vector<RisConfig> &configs);

    struct TrainingObservation
    {
        std::vector<cmat> received; // Y^(q), N_B x tau_p
        std::vector<RisConfig> configs;
    };

    TrainingObservation simulate_training(const CascadedChannels &channels, int bs, const PilotBook &pilots,
                                          const std::vector<RisConfig> &configs, double noise_var, Rng &rng);

    /// Dense form y = A d + w. Rows are ordered (q, k, antenna), unknowns
    /// (k, [vec(D_k); h_k]).
    struct StackedSystem
    {
        cvec observations;
        cmat design;
        cmat noise_covariance; // covariance of w for unit noise variance
        int users = 0;
        int bs_antennas = 0;
        int ris_elements = 0;
        int configs = 0;

        Eigen::Index unknowns_per_user() const { return Eigen::Index(bs_antennas) * (ris_elements + 1); }
    };

    StackedSystem build_stacked_system(const TrainingObservation &obs, const PilotBook &pilots);

    struct EstimateSet
    {
        std::vector<cmat> cascade; // per user
        std::vector<cvec> direct;  // per user
        Estimator method = Estimator::ls;
    };

    // Condition estimates above this are treated as singular.
    inline constexpr double max_condition = 1e12;

    /// Least squares. Square systems are inverted; overdetermined ones are
    /// solved in the least-squares sense. Throws std::runtime_error when the
    /// configurations do not determine d.
    EstimateSet estimate_ls(const StackedSystem &sys);
    EstimateSet estimate_ls(const TrainingObservation &obs, const PilotBook &pilots);

    struct PriorCovariance
    {
        std::vector<double> cascade_variance; // beta_k, one per user
        std::vector<double> direct_variance;  // beta_{k,d}, one per user
        int bs_antennas = 0;
        int ris_elements = 0;

        // Diagonal of R_d^(k): N_B * N_R copies of beta_k then N_B copies of beta_{k,d}.
        rvec user_diagonal(int k) const;
        rvec diagonal() const;
    };

    PriorCovariance build_prior_covariance(const Scenario &scenario, int bs, int bs_antennas, int ris_elements);

    /// Linear MMSE, d = R A^H (A R A^H + noise_var * C_w)^-1 y, where C_w is the
    /// covariance of the projected noise (I when all eta_k = 1 and pilots are
    /// orthogonal).
    EstimateSet estimate_mmse(const StackedSystem &sys, const PriorCovariance &prior, double noise_var);
    EstimateSet estimate_mmse(const TrainingObservation &obs, const PilotBook &pilots, const PriorCovariance &prior,
                              double noise_var);

    struct NmseTerms
    {
        double error = 0.0;
        double energy = 0.0;

        double value() const;
        NmseTerms &operator+=(const NmseTerms &other);
    };

    NmseTerms nmse_terms(const CascadedChannels &truth, int bs, const EstimateSet &estimate);

    /// Summed squared error over direct and cascade parts, divided by the summed
    /// true energy. Throws std::domain_error when the true energy is zero.
    double nmse(const CascadedChannels &truth, int bs, const EstimateSet &estimate);

    struct TrainingSetup
    {
        Estimator estimator = Estimator::mmse_q;
        double noise_var = 0.0;
        double symbol_power_w = 0.1;
        double rho = 1.0;
    };

    // Full pipeline at one BS: pilot book (tau_p = K), configurations,
    // training, estimation.
    EstimateSet train_and_estimate(const CascadedChannels &truth, const Scenario &scenario, int bs,
                                   const TrainingSetup &setup, Rng &rng);

    // Pack per-BS estimates into the shape the optimizers consume.
    CascadedChannels assemble(const std::vector<EstimateSet> &per_bs);
}

#endif
