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

#ifndef RIS_CHANNEL_MODEL_HPP
#define RIS_CHANNEL_MODEL_HPP

#include "ris/linalg.hpp"

#include <cstdint>
#include <vector>

namespace ris
{
    /// Deployment and radio constants. Defaults describe a 3 GHz, 20 MHz two-cell
    /// layout with 300 m inter-site distance and 64-antenna base stations.
    struct SystemConstants
    {
        double carrier_freq_hz = 3e9;
        double bandwidth_hz = 20e6;
        double noise_density_dbm_hz = -174.0;
        double noise_figure_db = 9.0;
        double ris_amplitude = 1.0; // reflection amplitude, (0, 1]
        int bs_antennas = 64;
        int ris_elements = 64;
        int users = 20;
        int base_stations = 2; // 1 or 2
        double inter_site_distance_m = 300.0;
        double bs_height_m = 25.0;
        double ris_height_m = 40.0;
        double ms_height_m = 1.5;
        double min_ms_distance_m = 10.0; // horizontal exclusion radius around each BS
        double max_bs_power_w = 10.0;
        double pilot_power_w = 0.1; // per training symbol

        // Throws std::invalid_argument naming the first offending field.
        void validate() const;
    };

    enum class PathKind
    {
        direct,
        reflected_sum, // distance argument is d(BS, RIS) + d(RIS, MS)
    };

    /// Large-scale power gain 10^-3.53 / d^3.76 (linear). Throws std::domain_error for d <= 0.
    double path_loss(double distance_m, PathKind kind = PathKind::direct);

    /// Thermal noise power in watts over the configured bandwidth, noise figure included.
    double noise_power(const SystemConstants &constants);

    struct Position
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    double distance(const Position &a, const Position &b);

    struct Scenario
    {
        std::vector<Position> bs;
        Position ris;
        std::vector<Position> ms;
        std::vector<int> home_cell;  // cell each MS was dropped in
        rmat beta_reflected;         // [bs x users]
        rmat beta_direct;            // [bs x users]
        imat association;            // [bs x users], {0,1}; empty until associated

        int num_bs() const { return static_cast<int>(bs.size()); }
        int num_users() const { return static_cast<int>(ms.size()); }
    };

    // BSs sit at (+-isd/2, 0), the RIS at their midpoint on the cell edge. Users
    // are split between the cells (first ceil(K/2) in cell 0) and dropped
    // uniformly over a disc of radius isd/2 around their BS.
    Scenario generate_scenario(const SystemConstants &constants, Rng &rng);
    Scenario generate_scenario(const SystemConstants &constants, std::uint64_t seed);

    // Serve every user from its home cell only.
    imat home_cell_association(const Scenario &scenario);

    /// Per-(BS, MS) cascade matrices D and direct channels h_d, indexed [bs][user].
    /// This is all the optimizers and estimators ever see; true channels and
    /// estimates share the type.
    struct CascadedChannels
    {
        std::vector<std::vector<cmat>> cascade; // N_B x N_R, path loss included
        std::vector<std::vector<cvec>> direct;  // N_B, path loss included

        int num_bs() const { return static_cast<int>(cascade.size()); }
        int num_users() const { return cascade.empty() ? 0 : static_cast<int>(cascade.front().size()); }
        int bs_antennas(int bs) const { return static_cast<int>(direct.at(bs).front().size()); }
        int ris_elements() const { return static_cast<int>(cascade.at(0).at(0).cols()); }
    };

    struct ChannelSet
    {
        std::vector<cmat> ris_to_bs; // unit-variance fast fading, N_B x N_R per BS
        std::vector<cvec> ms_to_ris; // unit-variance fast fading, N_R per MS
        CascadedChannels links;
    };

    // i.i.d. CN(0,1) fast fading; sqrt(beta) of the reflected path is folded into
    // each per-(BS, MS) cascade, so D(m,n) = sqrt(beta) * H(m,n) * h(n).
    ChannelSet sample_fading(const Scenario &scenario, const SystemConstants &constants, Rng &rng);

    struct RisConfig
    {
        double rho = 1.0;
        rvec phases; // radians

        static RisConfig zeros(Eigen::Index elements, double rho = 1.0);
        static RisConfig random(Eigen::Index elements, double rho, Rng &rng);

        Eigen::Index size() const { return phases.size(); }

        // rho * exp(j * phases)
        cvec coefficients() const;

        // Wraps every phase onto [-pi, pi].
        void canonicalize();
    };

    /// D * phi + h_d. Throws std::invalid_argument on dimension mismatch.
    cvec composite_channel(const cmat &cascade, const cvec &direct, const RisConfig &config);
}

#endif
