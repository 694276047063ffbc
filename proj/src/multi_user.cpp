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

#include "ris/multi_user.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ris
{
    std::string_view to_string(MultiUserMethod m)
    {
        switch (m)
        {
        case MultiUserMethod::joint:
            return "JointOpt";
        case MultiUserMethod::only_ris:
            return "OnlyRIS";
        case MultiUserMethod::only_powers:
            return "OnlyPowers";
        case MultiUserMethod::none:
            return "NoOpt";
        }
        return "?";
    }

    namespace
    {
        void check_shapes(const CascadedChannels &channels, const imat &association, const rmat &powers,
                          const char *who)
        {
            const int B = channels.num_bs();
            const int K = channels.num_users();
            if (association.rows() != B || association.cols() != K)
                throw std::invalid_argument(std::string(who) + ": association must be " + std::to_string(B) + " x " +
                                            std::to_string(K));
            if (powers.rows() != B || powers.cols() != K)
                throw std::invalid_argument(std::string(who) + ": powers must be " + std::to_string(B) + " x " +
                                            std::to_string(K));
            if ((powers.array() < 0.0).any())
                throw std::invalid_argument(std::string(who) + ": negative power");
        }

        // G_i = [g_i1 ... g_iK] for every BS.
        std::vector<cmat> composite_matrices(const CascadedChannels &channels, const cvec &coefficients)
        {
            std::vector<cmat> G(channels.num_bs());
            for (int i = 0; i < channels.num_bs(); ++i)
            {
                G[i].resize(channels.bs_antennas(i), channels.num_users());
                for (int k = 0; k < channels.num_users(); ++k)
                {
                    const cmat &D = channels.cascade[i][k];
                    if (D.cols() != coefficients.size())
                        throw std::invalid_argument("RIS configuration has " + std::to_string(coefficients.size()) +
                                                    " elements, cascade has " + std::to_string(D.cols()));
                    G[i].col(k) = D * coefficients + channels.direct[i][k];
                }
            }
            return G;
        }

        cvec phase_coefficients(const rvec &phases, double rho)
        {
            cvec c(phases.size());
            for (Eigen::Index n = 0; n < phases.size(); ++n)
                c(n) = std::polar(rho, phases(n));
            return c;
        }

        // Quantities shared by the objective and its gradient.
        struct Terms
        {
            std::vector<cmat> G;   // composite channels per BS
            std::vector<cmat> F;   // F[i](k, l)
            rmat amp;              // sqrt(F[i](l, l)), 0 when not served
            cmat z;                // z(k, l) = sum_i F[i](k, l) / amp(i, l)
            rvec S, T;             // useful and interference-plus-noise per user
        };

        Terms evaluate_terms(const rvec &phases, const CascadedChannels &channels, const DownlinkSetup &setup)
        {
            check_shapes(channels, setup.association, setup.powers, "objective_G");
            const int B = channels.num_bs();
            const int K = channels.num_users();

            Terms t;
            t.G = composite_matrices(channels, phase_coefficients(phases, setup.rho));
            t.F.resize(B);
            t.amp = rmat::Zero(B, K);
            t.z = cmat::Zero(K, K);
            for (int i = 0; i < B; ++i)
            {
                rvec c(K);
                for (int l = 0; l < K; ++l)
                    c(l) = setup.association(i, l) ? setup.powers(i, l) : 0.0;
                t.F[i] = (t.G[i].adjoint() * t.G[i]) * c.asDiagonal();
                for (int l = 0; l < K; ++l)
                {
                    const double f = t.F[i](l, l).real();
                    if (c(l) > 0.0 && f > 0.0)
                    {
                        t.amp(i, l) = std::sqrt(f);
                        t.z.col(l) += t.F[i].col(l) / t.amp(i, l);
                    }
                }
            }

            t.S.resize(K);
            t.T.resize(K);
            for (int k = 0; k < K; ++k)
            {
                const double a = t.amp.col(k).sum();
                t.S(k) = a * a;
                double interference = 0.0;
                for (int l = 0; l < K; ++l)
                    if (l != k)
                        interference += std::norm(t.z(k, l));
                t.T(k) = setup.noise_power + interference;
            }
            return t;
        }
    }

    cvec cm_beamformer(const cmat &cascade, const cvec &direct, const RisConfig &config)
    {
        const cvec g = composite_channel(cascade, direct, config);
        const double n = g.norm();
        if (!(n > 0.0))
            throw std::domain_error("cm_beamformer: zero composite channel");
        return g / n;
    }

    Beamformers cm_beamformers(const CascadedChannels &channels, const imat &association, const RisConfig &config)
    {
        const int B = channels.num_bs();
        const int K = channels.num_users();
        if (association.rows() != B || association.cols() != K)
            throw std::invalid_argument("cm_beamformers: association has the wrong shape");
        Beamformers w(B);
        for (int i = 0; i < B; ++i)
        {
            w[i].resize(K);
            for (int k = 0; k < K; ++k)
            {
                if (association(i, k))
                    w[i][k] = cm_beamformer(channels.cascade[i][k], channels.direct[i][k], config);
                else
                    w[i][k] = cvec::Zero(channels.bs_antennas(i));
            }
        }
        return w;
    }

    rvec evaluate_sinr(const CascadedChannels &channels, const Beamformers &beamformers, const rmat &powers,
                       const RisConfig &config, const imat &association, double noise_power)
    {
        check_shapes(channels, association, powers, "evaluate_sinr");
        if (!(noise_power > 0.0))
            throw std::invalid_argument("evaluate_sinr: noise power must be positive");
        const int B = channels.num_bs();
        const int K = channels.num_users();
        const std::vector<cmat> G = composite_matrices(channels, config.coefficients());

        // r(k, l) = sum_i sqrt(eta_il) g_ik^H w_il : amplitude of stream l at user k
        cmat r = cmat::Zero(K, K);
        for (int i = 0; i < B; ++i)
            for (int l = 0; l < K; ++l)
            {
                if (!association(i, l))
                    continue;
                const cvec &w = beamformers.at(i).at(l);
                if (w.size() != G[i].rows())
                    throw std::invalid_argument("evaluate_sinr: beamformer has the wrong length");
                r.col(l) += std::sqrt(powers(i, l)) * (G[i].adjoint() * w);
            }

        rvec sinr(K);
        for (int k = 0; k < K; ++k)
        {
            double interference = 0.0;
            for (int l = 0; l < K; ++l)
                if (l != k)
                    interference += std::norm(r(k, l));
            sinr(k) = std::norm(r(k, k)) / (interference + noise_power);
        }
        return sinr;
    }

    double geometric_mean(const rvec &values)
    {
        if (values.size() == 0)
            throw std::invalid_argument("geometric_mean: empty input");
        return std::exp(values.array().log().mean());
    }

    CouplingCoefficients coupling(const CascadedChannels &channels, const rmat &powers, const RisConfig &config,
                                  const imat &association)
    {
        check_shapes(channels, association, powers, "coupling");
        const int B = channels.num_bs();
        const int K = channels.num_users();
        const std::vector<cmat> G = composite_matrices(channels, config.coefficients());

        CouplingCoefficients out;
        out.F.resize(B);
        out.a.resize(B);
        for (int i = 0; i < B; ++i)
        {
            const cmat gram = G[i].adjoint() * G[i];
            rvec c(K), inv_norm(K);
            for (int l = 0; l < K; ++l)
            {
                c(l) = association(i, l) ? powers(i, l) : 0.0;
                const double n = std::sqrt(gram(l, l).real());
                inv_norm(l) = n > 0.0 ? 1.0 / n : 0.0;
            }
            out.F[i] = gram * c.asDiagonal();
            out.a[i] = gram * inv_norm.asDiagonal();
        }
        return out;
    }

    double objective_G(const rvec &phases, const CascadedChannels &channels, const DownlinkSetup &setup)
    {
        const Terms t = evaluate_terms(phases, channels, setup);
        double g = 0.0;
        for (Eigen::Index k = 0; k < t.S.size(); ++k)
        {
            if (!(t.S(k) > 0.0))
                return -std::numeric_limits<double>::infinity();
            g += std::log2(t.S(k) / t.T(k));
        }
        return g;
    }

    rvec grad_G(const rvec &phases, const CascadedChannels &channels, const DownlinkSetup &setup)
    {
        const Terms t = evaluate_terms(phases, channels, setup);
        const int B = channels.num_bs();
        const int K = channels.num_users();
        const Eigen::Index NR = phases.size();
        const cvec c = phase_coefficients(phases, setup.rho);
        const cvec cc = c.conjugate();
        const cd j(0.0, 1.0);

        for (int k = 0; k < K; ++k)
            if (!(t.S(k) > 0.0))
                throw std::domain_error("grad_G: user " + std::to_string(k) + " receives no signal");

        // P[i][l] = D_il^H G_i, column k is D_il^H g_ik
        std::vector<std::vector<cmat>> P(B, std::vector<cmat>(K));
        for (int i = 0; i < B; ++i)
            for (int l = 0; l < K; ++l)
                P[i][l] = channels.cascade[i][l].adjoint() * t.G[i];

        auto weight = [&](int i, int l) {
            return setup.association(i, l) ? setup.powers(i, l) : 0.0;
        };
        // dF[i](k, l)/dphases
        auto dF = [&](int i, int k, int l) -> cvec {
            return weight(i, l) * j *
                   (c.cwiseProduct(P[i][l].col(k).conjugate()) - cc.cwiseProduct(P[i][k].col(l)));
        };

        // d amp(i, l)
        std::vector<std::vector<rvec>> damp(B, std::vector<rvec>(K, rvec::Zero(NR)));
        for (int i = 0; i < B; ++i)
            for (int l = 0; l < K; ++l)
                if (t.amp(i, l) > 0.0)
                    damp[i][l] = dF(i, l, l).real() / (2.0 * t.amp(i, l));

        rvec grad = rvec::Zero(NR);
        for (int k = 0; k < K; ++k)
        {
            const double a = t.amp.col(k).sum();
            rvec dS = rvec::Zero(NR);
            for (int i = 0; i < B; ++i)
                dS += damp[i][k];
            dS *= 2.0 * a;

            rvec dT = rvec::Zero(NR);
            for (int l = 0; l < K; ++l)
            {
                if (l == k)
                    continue;
                cvec dz = cvec::Zero(NR);
                for (int i = 0; i < B; ++i)
                {
                    const double s = t.amp(i, l);
                    if (s > 0.0)
                        dz += dF(i, k, l) / s - (t.F[i](k, l) / (s * s)) * damp[i][l].cast<cd>();
                }
                dT += 2.0 * (std::conj(t.z(k, l)) * dz).real();
            }
            grad += dS / t.S(k) - dT / t.T(k);
        }
        return grad / std::log(2.0);
    }

    PhaseAscentResult optimize_phases(const RisConfig &init, const CascadedChannels &channels,
                                      const DownlinkSetup &setup, const PhaseAscentOptions &options)
    {
        if (init.size() != channels.ris_elements())
            throw std::invalid_argument("optimize_phases: initial configuration has the wrong size");
        if (!(options.shrink > 0.0 && options.shrink < 1.0) || !(options.initial_step > 0.0))
            throw std::invalid_argument("optimize_phases: invalid step parameters");

        PhaseAscentResult res;
        res.config = init;
        res.config.rho = setup.rho;
        double value = objective_G(res.config.phases, channels, setup);
        res.trace.push_back(value);
        if (!std::isfinite(value))
            throw std::domain_error("optimize_phases: objective is not finite at the starting point");

        double step = options.initial_step;
        for (int it = 0; it < options.max_iterations; ++it)
        {
            const rvec g = grad_G(res.config.phases, channels, setup);
            const double g2 = g.squaredNorm();
            if (!(g2 > 0.0))
                break;

            bool accepted = false;
            rvec candidate;
            double candidate_value = value;
            for (int bt = 0; bt <= options.max_backtracks; ++bt)
            {
                candidate = res.config.phases + step * g;
                candidate_value = objective_G(candidate, channels, setup);
                if (candidate_value >= value + options.armijo * step * g2)
                {
                    accepted = true;
                    break;
                }
                step *= options.shrink;
            }
            if (!accepted)
                break;

            const double gain = candidate_value - value;
            res.config.phases = candidate;
            value = candidate_value;
            res.trace.push_back(value);
            step = std::min(2.0 * step, options.initial_step);
            if (gain < options.tolerance)
                break;
        }
        res.config.canonicalize();
        return res;
    }

    // ----------------------------------------------------------------------
    // Alternating allocation

    AllocationResult allocate(const CascadedChannels &estimates, const imat &association,
                              const AllocationParams &params)
    {
        const int B = estimates.num_bs();
        const int K = estimates.num_users();
        if (association.rows() != B || association.cols() != K)
            throw std::invalid_argument("allocate: association has the wrong shape");
        if (params.budgets.size() != B)
            throw std::invalid_argument("allocate: one power budget per BS required");
        for (int k = 0; k < K; ++k)
            if (association.col(k).sum() == 0)
                throw std::invalid_argument("allocate: user " + std::to_string(k) + " is not served");
        if (params.max_outer_iterations < 1)
            throw std::invalid_argument("allocate: max_outer_iterations must be at least 1");

        AllocationResult res;
        res.config = params.initial_config.size() == 0 ? RisConfig::zeros(estimates.ris_elements(), params.rho)
                                                       : params.initial_config;
        res.config.rho = params.rho;
        res.powers = uniform_powers(association, params.budgets);

        DownlinkSetup setup{association, res.powers, params.rho, params.noise_power};
        double value = objective_G(res.config.phases, estimates, setup);
        res.trace.push_back(value);

        if (params.optimize_phases || params.optimize_powers)
        {
            for (int it = 0; it < params.max_outer_iterations; ++it)
            {
                const double previous = value;
                if (params.optimize_phases)
                {
                    setup.powers = res.powers;
                    res.config = optimize_phases(res.config, estimates, setup, params.phase).config;
                }
                if (params.optimize_powers)
                {
                    const CouplingCoefficients cc = coupling(estimates, res.powers, res.config, association);
                    res.powers =
                        optimize_powers(res.powers, cc.a, association, params.budgets, params.noise_power, params.power)
                            .powers;
                }
                setup.powers = res.powers;
                value = objective_G(res.config.phases, estimates, setup);
                res.trace.push_back(value);
                if (value - previous < params.tolerance)
                    break;
            }
        }

        res.beamformers = cm_beamformers(estimates, association, res.config);
        res.sinr = evaluate_sinr(estimates, res.beamformers, res.powers, res.config, association, params.noise_power);
        res.geometric_mean = geometric_mean(res.sinr);
        return res;
    }

    AllocationResult allocate(const CascadedChannels &estimates, const Scenario &scenario,
                              const AllocationParams &params)
    {
        if (scenario.association.size() == 0)
            throw std::invalid_argument("allocate: scenario has no association");
        return allocate(estimates, scenario.association, params);
    }

    AllocationParams method_params(MultiUserMethod method, AllocationParams base, const RisConfig &random_config)
    {
        switch (method)
        {
        case MultiUserMethod::joint:
            base.optimize_phases = true;
            base.optimize_powers = true;
            base.initial_config = RisConfig{};
            break;
        case MultiUserMethod::only_ris:
            base.optimize_phases = true;
            base.optimize_powers = false;
            base.initial_config = RisConfig{};
            break;
        case MultiUserMethod::only_powers:
            base.optimize_phases = false;
            base.optimize_powers = true;
            base.initial_config = random_config;
            break;
        case MultiUserMethod::none:
            base.optimize_phases = false;
            base.optimize_powers = false;
            base.initial_config = random_config;
            break;
        }
        return base;
    }
}
