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

#include "ris/single_user.hpp"

#include <cmath>
#include <stdexcept>

namespace ris
{
    std::string_view to_string(SingleUserMethod m)
    {
        switch (m)
        {
        case SingleUserMethod::upper_bound:
            return "UB";
        case SingleUserMethod::lower_bound:
            return "LB";
        case SingleUserMethod::alternating:
            return "AM";
        case SingleUserMethod::random:
            return "NoOpt";
        }
        return "?";
    }

    namespace
    {
        cvec unit_or_first_axis(const cvec &v)
        {
            const double n = v.norm();
            if (n > 0.0)
                return v / n;
            cvec e = cvec::Zero(v.size());
            if (e.size() > 0)
                e(0) = 1.0;
            return e;
        }

        void check_dims(const cmat &cascade, const cvec &direct, const char *who)
        {
            if (cascade.rows() != direct.size())
                throw std::invalid_argument(std::string(who) + ": cascade has " + std::to_string(cascade.rows()) +
                                            " rows, direct channel has " + std::to_string(direct.size()));
        }
    }

    double beamforming_gain(const cvec &beamformer, const cmat &cascade, const cvec &direct, const RisConfig &config)
    {
        return std::norm(beamformer.dot(composite_channel(cascade, direct, config)));
    }

    double snr(const cvec &beamformer, const cmat &cascade, const cvec &direct, const RisConfig &config,
               double tx_power, double noise_power)
    {
        return tx_power / noise_power * beamforming_gain(beamformer, cascade, direct, config);
    }

    RisConfig align_phases(const cvec &g, cd t, double rho)
    {
        // term n of g^H phi is conj(g_n) rho e^{j phi_n}; its angle is
        // phi_n - arg(g_n), which must equal arg(t).
        const double target = std::arg(t);
        RisConfig cfg = RisConfig::zeros(g.size(), rho);
        for (Eigen::Index n = 0; n < g.size(); ++n)
            cfg.phases(n) = wrap_phase(target + std::arg(g(n)));
        return cfg;
    }

    SingleUserSolution optimize_ub(const cmat &cascade, const cvec &direct, double rho)
    {
        check_dims(cascade, direct, "optimize_ub");
        const Eigen::Index NB = cascade.rows();
        const Eigen::Index NR = cascade.cols();

        SingleUserSolution sol;
        sol.method = SingleUserMethod::upper_bound;

        if (NR == 0 || cascade.cwiseAbs().maxCoeff() == 0.0)
        {
            sol.config = RisConfig::zeros(NR, rho);
            sol.beamformer = unit_or_first_axis(direct);
            sol.objective = beamforming_gain(sol.beamformer, cascade, direct, sol.config);
            sol.bound = double(NB) * direct.squaredNorm();
            return sol;
        }

        // Full U so that the bound covers every direction of C^{N_B}, including
        // the ones D cannot reach when N_R < N_B.
        Eigen::JacobiSVD<cmat> svd(cascade, Eigen::ComputeFullU | Eigen::ComputeThinV);
        const auto &U = svd.matrixU();
        const auto &V = svd.matrixV();
        const auto &lambda = svd.singularValues();
        const Eigen::Index rank = lambda.size();

        double best = -1.0;
        Eigen::Index best_i = 0;
        RisConfig best_cfg = RisConfig::zeros(NR, rho);
        for (Eigen::Index i = 0; i < NB; ++i)
        {
            const cd alpha = U.col(i).dot(direct);
            RisConfig cfg = RisConfig::zeros(NR, rho);
            double c = std::norm(alpha);
            if (i < rank)
            {
                const cvec g = lambda(i) * V.col(i);
                cfg = align_phases(g, alpha, rho);
                c = std::norm(g.dot(cfg.coefficients()) + alpha);
            }
            if (c > best) // strict: ties keep the smallest index
            {
                best = c;
                best_i = i;
                best_cfg = std::move(cfg);
            }
        }

        sol.beamformer = U.col(best_i);
        sol.config = std::move(best_cfg);
        sol.objective = beamforming_gain(sol.beamformer, cascade, direct, sol.config);
        sol.bound = double(NB) * best;
        return sol;
    }

    SingleUserSolution optimize_lb(const cmat &cascade, const cvec &direct, double rho)
    {
        check_dims(cascade, direct, "optimize_lb");
        SingleUserSolution sol;
        sol.method = SingleUserMethod::lower_bound;

        // Sum over the N_R cascade columns.
        const cvec summed = cascade.rowwise().sum() + direct;
        sol.beamformer = unit_or_first_axis(summed);
        sol.config = align_phases(cascade.adjoint() * sol.beamformer, sol.beamformer.dot(direct), rho);
        sol.objective = beamforming_gain(sol.beamformer, cascade, direct, sol.config);
        return sol;
    }

    SingleUserSolution optimize_am(const cmat &cascade, const cvec &direct, double rho, const RisConfig &init,
                                   const AlternatingOptions &options)
    {
        check_dims(cascade, direct, "optimize_am");
        if (options.max_iterations < 1)
            throw std::invalid_argument("optimize_am: max_iterations must be at least 1");
        if (init.size() != cascade.cols())
            throw std::invalid_argument("optimize_am: initial configuration has the wrong size");

        SingleUserSolution sol;
        sol.method = SingleUserMethod::alternating;
        sol.config = init;
        sol.config.rho = rho;
        sol.beamformer = unit_or_first_axis(composite_channel(cascade, direct, sol.config));
        sol.objective = beamforming_gain(sol.beamformer, cascade, direct, sol.config);
        sol.trace.push_back(sol.objective);

        for (int it = 0; it < options.max_iterations; ++it)
        {
            const double previous = sol.objective;

            sol.config = align_phases(cascade.adjoint() * sol.beamformer, sol.beamformer.dot(direct), rho);
            sol.beamformer = unit_or_first_axis(composite_channel(cascade, direct, sol.config));
            sol.objective = beamforming_gain(sol.beamformer, cascade, direct, sol.config);
            sol.trace.push_back(sol.objective);

            if (sol.objective - previous <= options.tolerance * std::max(previous, 1e-300))
                break;
        }
        sol.config.canonicalize();
        return sol;
    }

    SingleUserSolution random_configuration(const cmat &cascade, const cvec &direct, double rho, Rng &rng)
    {
        check_dims(cascade, direct, "random_configuration");
        SingleUserSolution sol;
        sol.method = SingleUserMethod::random;
        sol.config = RisConfig::random(cascade.cols(), rho, rng);
        sol.beamformer = unit_or_first_axis(composite_channel(cascade, direct, sol.config));
        sol.objective = beamforming_gain(sol.beamformer, cascade, direct, sol.config);
        return sol;
    }
}
