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

#include "ris/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ris
{
    namespace
    {
        void require(bool ok, const char *field, const char *what)
        {
            if (!ok)
                throw std::invalid_argument(std::string("SystemConstants.") + field + ": " + what);
        }
    }

    void SystemConstants::validate() const
    {
        require(carrier_freq_hz > 0.0, "carrier_freq_hz", "must be positive");
        require(bandwidth_hz > 0.0, "bandwidth_hz", "must be positive");
        require(std::isfinite(noise_density_dbm_hz), "noise_density_dbm_hz", "must be finite");
        require(std::isfinite(noise_figure_db), "noise_figure_db", "must be finite");
        require(ris_amplitude > 0.0 && ris_amplitude <= 1.0, "ris_amplitude", "must lie in (0, 1]");
        require(bs_antennas >= 1, "bs_antennas", "must be at least 1");
        require(ris_elements >= 1, "ris_elements", "must be at least 1");
        require(users >= 1, "users", "must be at least 1");
        require(base_stations == 1 || base_stations == 2, "base_stations", "must be 1 or 2");
        require(inter_site_distance_m > 0.0, "inter_site_distance_m", "must be positive");
        require(bs_height_m > 0.0, "bs_height_m", "must be positive");
        require(ris_height_m > 0.0, "ris_height_m", "must be positive");
        require(ms_height_m > 0.0, "ms_height_m", "must be positive");
        require(min_ms_distance_m >= 0.0 && min_ms_distance_m < inter_site_distance_m / 2.0,
                "min_ms_distance_m", "must lie in [0, inter_site_distance_m / 2)");
        require(max_bs_power_w > 0.0, "max_bs_power_w", "must be positive");
        require(pilot_power_w > 0.0, "pilot_power_w", "must be positive");
    }

    double path_loss(double distance_m, PathKind)
    {
        // Both link kinds share the law; only the distance argument differs.
        if (!(distance_m > 0.0))
            throw std::domain_error("path_loss: distance must be positive, got " + std::to_string(distance_m));
        return std::pow(10.0, -3.53) / std::pow(distance_m, 3.76);
    }

    double noise_power(const SystemConstants &constants)
    {
        if (!(constants.bandwidth_hz > 0.0))
            throw std::invalid_argument("noise_power: bandwidth must be positive");
        const double dbm = constants.noise_density_dbm_hz + 10.0 * std::log10(constants.bandwidth_hz) +
                           constants.noise_figure_db;
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    double distance(const Position &a, const Position &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    }

    Scenario generate_scenario(const SystemConstants &constants, Rng &rng)
    {
        constants.validate();

        Scenario s;
        const double half_isd = constants.inter_site_distance_m / 2.0;
        s.bs.push_back({-half_isd, 0.0, constants.bs_height_m});
        if (constants.base_stations == 2)
            s.bs.push_back({half_isd, 0.0, constants.bs_height_m});
        s.ris = {0.0, 0.0, constants.ris_height_m};

        const int K = constants.users;
        const int first_cell_users = constants.base_stations == 2 ? (K + 1) / 2 : K;

        // Uniform over the annulus [r_min, isd/2] around the home BS.
        const double r_min = constants.min_ms_distance_m;
        std::uniform_real_distribution<double> radius_sq(r_min * r_min, half_isd * half_isd);
        std::uniform_real_distribution<double> angle(-pi, pi);
        for (int k = 0; k < K; ++k)
        {
            const int cell = k < first_cell_users ? 0 : 1;
            const double r = std::sqrt(radius_sq(rng));
            const double theta = angle(rng);
            s.ms.push_back({s.bs[cell].x + r * std::cos(theta), s.bs[cell].y + r * std::sin(theta),
                            constants.ms_height_m});
            s.home_cell.push_back(cell);
        }

        const int B = s.num_bs();
        s.beta_reflected.resize(B, K);
        s.beta_direct.resize(B, K);
        for (int i = 0; i < B; ++i)
        {
            const double d_bs_ris = distance(s.bs[i], s.ris);
            for (int k = 0; k < K; ++k)
            {
                s.beta_reflected(i, k) = path_loss(d_bs_ris + distance(s.ris, s.ms[k]), PathKind::reflected_sum);
                s.beta_direct(i, k) = path_loss(distance(s.bs[i], s.ms[k]), PathKind::direct);
            }
        }
        return s;
    }

    Scenario generate_scenario(const SystemConstants &constants, std::uint64_t seed)
    {
        Rng rng(seed);
        return generate_scenario(constants, rng);
    }

    imat home_cell_association(const Scenario &scenario)
    {
        imat assoc = imat::Zero(scenario.num_bs(), scenario.num_users());
        for (int k = 0; k < scenario.num_users(); ++k)
            assoc(scenario.home_cell[k], k) = 1;
        return assoc;
    }

    ChannelSet sample_fading(const Scenario &scenario, const SystemConstants &constants, Rng &rng)
    {
        const int B = scenario.num_bs();
        const int K = scenario.num_users();
        const int NB = constants.bs_antennas;
        const int NR = constants.ris_elements;

        ChannelSet ch;
        for (int i = 0; i < B; ++i)
            ch.ris_to_bs.push_back(sample_cn_matrix(rng, NB, NR));
        for (int k = 0; k < K; ++k)
            ch.ms_to_ris.push_back(sample_cn_vector(rng, NR));

        ch.links.cascade.assign(B, std::vector<cmat>(K));
        ch.links.direct.assign(B, std::vector<cvec>(K));
        for (int i = 0; i < B; ++i)
        {
            for (int k = 0; k < K; ++k)
            {
                const double a = std::sqrt(scenario.beta_reflected(i, k));
                ch.links.cascade[i][k] = a * (ch.ris_to_bs[i] * ch.ms_to_ris[k].asDiagonal());
                ch.links.direct[i][k] = std::sqrt(scenario.beta_direct(i, k)) * sample_cn_vector(rng, NB);
            }
        }
        return ch;
    }

    RisConfig RisConfig::zeros(Eigen::Index elements, double rho)
    {
        return {rho, rvec::Zero(elements)};
    }

    RisConfig RisConfig::random(Eigen::Index elements, double rho, Rng &rng)
    {
        return {rho, sample_phases(rng, elements)};
    }

    cvec RisConfig::coefficients() const
    {
        cvec phi(phases.size());
        for (Eigen::Index n = 0; n < phases.size(); ++n)
            phi(n) = std::polar(rho, phases(n));
        return phi;
    }

    void RisConfig::canonicalize()
    {
        for (auto &p : phases)
            p = wrap_phase(p);
    }

    cvec composite_channel(const cmat &cascade, const cvec &direct, const RisConfig &config)
    {
        if (cascade.rows() != direct.size() || cascade.cols() != config.size())
            throw std::invalid_argument("composite_channel: cascade is " + std::to_string(cascade.rows()) + "x" +
                                        std::to_string(cascade.cols()) + ", direct has " +
                                        std::to_string(direct.size()) + " entries, config has " +
                                        std::to_string(config.size()) + " phases");
        return cascade * config.coefficients() + direct;
    }
}
