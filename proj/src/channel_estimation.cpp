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

#include "ris/channel_estimation.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ris
{
    std::string_view to_string(Estimator e)
    {
        switch (e)
        {
        case Estimator::ls:
            return "LS";
        case Estimator::mmse_q:
            return "MMSEQ";
        case Estimator::mmse_1:
            return "MMSE1";
        }
        return "?";
    }

    bool PilotBook::orthogonal() const
    {
        const cmat gram = sequences.adjoint() * sequences;
        return (gram - cmat::Identity(users(), users())).cwiseAbs().maxCoeff() < 1e-12;
    }

    PilotBook generate_pilot_book(int users, int length, double symbol_power_w, PilotMode mode, Rng *rng)
    {
        if (users < 1 || length < 1)
            throw std::invalid_argument("generate_pilot_book: users and length must be positive");
        if (!(symbol_power_w > 0.0))
            throw std::invalid_argument("generate_pilot_book: symbol power must be positive");

        PilotBook book;
        book.sequences.resize(length, users);
        if (mode == PilotMode::orthogonal)
        {
            if (length < users)
                throw std::invalid_argument("generate_pilot_book: orthogonal pilots need length >= users (" +
                                            std::to_string(length) + " < " + std::to_string(users) + ")");
            const double scale = 1.0 / std::sqrt(static_cast<double>(length));
            for (int k = 0; k < users; ++k)
                for (int t = 0; t < length; ++t)
                    book.sequences(t, k) = std::polar(scale, -two_pi * double(t) * double(k) / double(length));
        }
        else
        {
            if (rng == nullptr)
                throw std::invalid_argument("generate_pilot_book: random pilots need an RNG");
            for (int k = 0; k < users; ++k)
            {
                cvec p = sample_cn_vector(*rng, length);
                book.sequences.col(k) = p / p.norm();
            }
        }
        book.powers = rvec::Constant(users, double(length) * symbol_power_w);
        return book;
    }

    std::vector<RisConfig> generate_training_configs(int ris_elements, int count, double rho, Rng &rng)
    {
        if (count < 1)
            throw std::invalid_argument("generate_training_configs: need at least one configuration");
        if (ris_elements < 0)
            throw std::invalid_argument("generate_training_configs: negative RIS size");

        std::vector<RisConfig> configs;
        if (count == 1)
        {
            configs.push_back(RisConfig::random(ris_elements, rho, rng));
            return configs;
        }

        const int points = std::max(count, ris_elements + 1);
        for (int q = 0; q < count; ++q)
        {
            RisConfig cfg = RisConfig::zeros(ris_elements, rho);
            for (int n = 0; n < ris_elements; ++n)
                cfg.phases(n) = wrap_phase(-two_pi * double(q) * double(n + 1) / double(points));
            configs.push_back(std::move(cfg));
        }
        return configs;
    }

    cmat configuration_matrix(const std::vector<RisConfig> &configs)
    {
        if (configs.empty())
            throw std::invalid_argument("configuration_matrix: no configurations");
        const Eigen::Index NR = configs.front().size();
        cmat C(static_cast<Eigen::Index>(configs.size()), NR + 1);
        for (std::size_t q = 0; q < configs.size(); ++q)
        {
            if (configs[q].size() != NR)
                throw std::invalid_argument("configuration_matrix: configurations differ in size");
            C.row(Eigen::Index(q)).head(NR) = configs[q].coefficients().transpose();
            C(Eigen::Index(q), NR) = 1.0;
        }
        return C;
    }

    TrainingObservation simulate_training(const CascadedChannels &channels, int bs, const PilotBook &pilots,
                                          const std::vector<RisConfig> &configs, double noise_var, Rng &rng)
    {
        const int K = channels.num_users();
        if (pilots.users() != K)
            throw std::invalid_argument("simulate_training: pilot book has " + std::to_string(pilots.users()) +
                                        " sequences for " + std::to_string(K) + " users");
        if (noise_var < 0.0)
            throw std::invalid_argument("simulate_training: negative noise variance");

        const int NB = channels.bs_antennas(bs);
        TrainingObservation obs;
        obs.configs = configs;
        for (const auto &cfg : configs)
        {
            cmat Y = cmat::Zero(NB, pilots.length());
            for (int k = 0; k < K; ++k)
            {
                const cvec g = composite_channel(channels.cascade[bs][k], channels.direct[bs][k], cfg);
                Y += std::sqrt(pilots.powers(k)) * g * pilots.sequences.col(k).adjoint();
            }
            if (noise_var > 0.0)
                Y += sample_cn_matrix(rng, NB, pilots.length(), noise_var);
            obs.received.push_back(std::move(Y));
        }
        return obs;
    }

    namespace
    {
        void check_observation(const TrainingObservation &obs, const PilotBook &pilots)
        {
            if (obs.received.empty() || obs.received.size() != obs.configs.size())
                throw std::invalid_argument("training observation: need one received block per configuration");
            for (const auto &Y : obs.received)
                if (Y.cols() != pilots.length())
                    throw std::invalid_argument("training observation: block width differs from pilot length");
        }

        // Ybar_k: N_B x Q, column q = Y^(q) p_k / sqrt(eta_k).
        cmat project_onto_pilot(const TrainingObservation &obs, const PilotBook &pilots, int k)
        {
            const Eigen::Index NB = obs.received.front().rows();
            cmat out(NB, Eigen::Index(obs.received.size()));
            for (std::size_t q = 0; q < obs.received.size(); ++q)
                out.col(Eigen::Index(q)) = obs.received[q] * pilots.sequences.col(k) / std::sqrt(pilots.powers(k));
            return out;
        }

        // Solves A X = B for square or tall A.
        cmat solve_least_squares(const cmat &A, const cmat &B, const char *who)
        {
            if (A.rows() < A.cols())
            {
                std::ostringstream msg;
                msg << who << ": " << A.rows() << " observations cannot determine " << A.cols()
                    << " unknowns; LS needs at least N_R + 1 training configurations";
                throw std::runtime_error(msg.str());
            }

            double condition;
            cmat X;
            if (A.rows() == A.cols())
            {
                Eigen::PartialPivLU<cmat> lu(A);
                const double rcond = lu.rcond();
                condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
                if (condition <= max_condition)
                    X = lu.solve(B);
            }
            else
            {
                Eigen::ColPivHouseholderQR<cmat> qr(A);
                const auto diag = qr.matrixR().diagonal().cwiseAbs();
                const double smallest = diag(diag.size() - 1);
                condition = smallest > 0.0 ? diag(0) / smallest : std::numeric_limits<double>::infinity();
                if (condition <= max_condition)
                    X = qr.solve(B);
            }

            if (!(condition <= max_condition))
            {
                std::ostringstream msg;
                msg << who << ": training configurations are linearly dependent (condition estimate " << condition
                    << " exceeds " << max_condition << "); use distinct configurations such as the DFT set";
                throw std::runtime_error(msg.str());
            }
            return X;
        }

        // X^T rows: N_R cascade columns then the direct channel.
        void unpack_user(const cmat &Xt, EstimateSet &est)
        {
            const Eigen::Index NR = Xt.rows() - 1;
            est.cascade.push_back(Xt.topRows(NR).transpose());
            est.direct.push_back(Xt.row(NR).transpose());
        }

        void unpack_stacked(const cvec &d, const StackedSystem &sys, EstimateSet &est)
        {
            const Eigen::Index NB = sys.bs_antennas;
            const Eigen::Index NR = sys.ris_elements;
            const Eigen::Index block = sys.unknowns_per_user();
            for (int k = 0; k < sys.users; ++k)
            {
                const auto dk = d.segment(k * block, block);
                est.cascade.push_back(dk.head(NB * NR).reshaped(NB, NR));
                est.direct.push_back(dk.tail(NB));
            }
        }
    }

    StackedSystem build_stacked_system(const TrainingObservation &obs, const PilotBook &pilots)
    {
        check_observation(obs, pilots);

        StackedSystem sys;
        sys.users = pilots.users();
        sys.bs_antennas = static_cast<int>(obs.received.front().rows());
        sys.ris_elements = static_cast<int>(obs.configs.front().size());
        sys.configs = static_cast<int>(obs.configs.size());

        const Eigen::Index K = sys.users;
        const Eigen::Index NB = sys.bs_antennas;
        const Eigen::Index NR = sys.ris_elements;
        const Eigen::Index Q = sys.configs;
        const Eigen::Index block = sys.unknowns_per_user();

        sys.observations.resize(Q * K * NB);
        sys.design = cmat::Zero(Q * K * NB, K * block);
        sys.noise_covariance = cmat::Zero(Q * K * NB, Q * K * NB);

        // p_{j,k} = p_j^H p_k
        const cmat cross = pilots.sequences.adjoint() * pilots.sequences;
        const cmat I = cmat::Identity(NB, NB);

        for (Eigen::Index q = 0; q < Q; ++q)
        {
            const cvec phi = obs.configs[q].coefficients();
            // [phi^T kron I, I]
            cmat base(NB, block);
            for (Eigen::Index n = 0; n < NR; ++n)
                base.middleCols(n * NB, NB) = phi(n) * I;
            base.rightCols(NB) = I;

            for (Eigen::Index k = 0; k < K; ++k)
            {
                const Eigen::Index row = (q * K + k) * NB;
                sys.observations.segment(row, NB) =
                    obs.received[q] * pilots.sequences.col(k) / std::sqrt(pilots.powers(k));
                for (Eigen::Index j = 0; j < K; ++j)
                {
                    const cd coupling = std::sqrt(pilots.powers(j) / pilots.powers(k)) * cross(j, k);
                    if (coupling != cd(0.0))
                        sys.design.block(row, j * block, NB, block) = coupling * base;

                    // E[w_k w_j^H] = p_j^H p_k / sqrt(eta_k eta_j) I
                    sys.noise_covariance.block(row, (q * K + j) * NB, NB, NB) =
                        (cross(j, k) / std::sqrt(pilots.powers(k) * pilots.powers(j))) * I;
                }
            }
        }
        return sys;
    }

    EstimateSet estimate_ls(const StackedSystem &sys)
    {
        const cvec d = solve_least_squares(sys.design, sys.observations, "estimate_ls");
        EstimateSet est;
        est.method = Estimator::ls;
        unpack_stacked(d, sys, est);
        return est;
    }

    EstimateSet estimate_ls(const TrainingObservation &obs, const PilotBook &pilots)
    {
        check_observation(obs, pilots);
        if (!pilots.orthogonal())
            return estimate_ls(build_stacked_system(obs, pilots));

        const cmat C = configuration_matrix(obs.configs);
        EstimateSet est;
        est.method = Estimator::ls;
        for (int k = 0; k < pilots.users(); ++k)
        {
            const cmat Ybar = project_onto_pilot(obs, pilots, k);
            unpack_user(solve_least_squares(C, Ybar.transpose(), "estimate_ls"), est);
        }
        return est;
    }

    rvec PriorCovariance::user_diagonal(int k) const
    {
        const Eigen::Index NB = bs_antennas;
        const Eigen::Index NR = ris_elements;
        rvec diag(NB * (NR + 1));
        diag.head(NB * NR).setConstant(cascade_variance.at(k));
        diag.tail(NB).setConstant(direct_variance.at(k));
        return diag;
    }

    rvec PriorCovariance::diagonal() const
    {
        const Eigen::Index block = Eigen::Index(bs_antennas) * (ris_elements + 1);
        const Eigen::Index K = Eigen::Index(cascade_variance.size());
        rvec diag(K * block);
        for (Eigen::Index k = 0; k < K; ++k)
            diag.segment(k * block, block) = user_diagonal(int(k));
        return diag;
    }

    PriorCovariance build_prior_covariance(const Scenario &scenario, int bs, int bs_antennas, int ris_elements)
    {
        PriorCovariance prior;
        prior.bs_antennas = bs_antennas;
        prior.ris_elements = ris_elements;
        for (int k = 0; k < scenario.num_users(); ++k)
        {
            prior.cascade_variance.push_back(scenario.beta_reflected(bs, k));
            prior.direct_variance.push_back(scenario.beta_direct(bs, k));
        }
        return prior;
    }

    EstimateSet estimate_mmse(const StackedSystem &sys, const PriorCovariance &prior, double noise_var)
    {
        if (noise_var < 0.0)
            throw std::invalid_argument("estimate_mmse: negative noise variance");
        const rvec R = prior.diagonal();
        if (R.size() != sys.design.cols())
            throw std::invalid_argument("estimate_mmse: prior does not match the stacked system");

        const cmat AR = sys.design * R.asDiagonal();
        const cmat M = AR * sys.design.adjoint() + noise_var * sys.noise_covariance;

        cvec z;
        Eigen::LLT<cmat> llt(M);
        if (llt.info() == Eigen::Success)
            z = llt.solve(sys.observations);
        else
            z = Eigen::PartialPivLU<cmat>(M).solve(sys.observations);

        EstimateSet est;
        est.method = sys.configs == 1 ? Estimator::mmse_1 : Estimator::mmse_q;
        unpack_stacked(AR.adjoint() * z, sys, est);
        return est;
    }

    EstimateSet estimate_mmse(const TrainingObservation &obs, const PilotBook &pilots, const PriorCovariance &prior,
                              double noise_var)
    {
        check_observation(obs, pilots);
        if (!pilots.orthogonal())
            return estimate_mmse(build_stacked_system(obs, pilots), prior, noise_var);
        if (noise_var < 0.0)
            throw std::invalid_argument("estimate_mmse: negative noise variance");

        const cmat C = configuration_matrix(obs.configs);
        const Eigen::Index NR = C.cols() - 1;
        const Eigen::Index Q = C.rows();

        EstimateSet est;
        est.method = Q == 1 ? Estimator::mmse_1 : Estimator::mmse_q;
        for (int k = 0; k < pilots.users(); ++k)
        {
            rvec r(NR + 1);
            r.head(NR).setConstant(prior.cascade_variance.at(k));
            r(NR) = prior.direct_variance.at(k);

            // Projected noise on user k has variance noise_var / eta_k.
            const double s2 = noise_var / pilots.powers(k);
            const cmat CR = C * r.asDiagonal();
            const cmat M = CR * C.adjoint() + s2 * cmat::Identity(Q, Q);
            // gain = R C^H M^-1, (N_R + 1) x Q
            const cmat gain = Eigen::PartialPivLU<cmat>(M).solve(CR).adjoint();

            const cmat Ybar = project_onto_pilot(obs, pilots, k);
            unpack_user(gain * Ybar.transpose(), est);
        }
        return est;
    }

    double NmseTerms::value() const
    {
        if (!(energy > 0.0))
            throw std::domain_error("nmse: true channel energy is zero");
        return error / energy;
    }

    NmseTerms &NmseTerms::operator+=(const NmseTerms &other)
    {
        error += other.error;
        energy += other.energy;
        return *this;
    }

    NmseTerms nmse_terms(const CascadedChannels &truth, int bs, const EstimateSet &estimate)
    {
        const int K = truth.num_users();
        if (int(estimate.cascade.size()) != K || int(estimate.direct.size()) != K)
            throw std::invalid_argument("nmse: estimate covers a different number of users");

        NmseTerms t;
        for (int k = 0; k < K; ++k)
        {
            const cmat &D = truth.cascade[bs][k];
            const cvec &h = truth.direct[bs][k];
            if (estimate.cascade[k].rows() != D.rows() || estimate.cascade[k].cols() != D.cols() ||
                estimate.direct[k].size() != h.size())
                throw std::invalid_argument("nmse: estimate dimensions differ from the true channels");
            t.error += (h - estimate.direct[k]).squaredNorm() + (D - estimate.cascade[k]).squaredNorm();
            t.energy += h.squaredNorm() + D.squaredNorm();
        }
        return t;
    }

    double nmse(const CascadedChannels &truth, int bs, const EstimateSet &estimate)
    {
        return nmse_terms(truth, bs, estimate).value();
    }

    EstimateSet train_and_estimate(const CascadedChannels &truth, const Scenario &scenario, int bs,
                                   const TrainingSetup &setup, Rng &rng)
    {
        const int K = truth.num_users();
        const int NB = truth.bs_antennas(bs);
        const int NR = truth.ris_elements();

        const PilotBook pilots = generate_pilot_book(K, K, setup.symbol_power_w);
        const int Q = setup.estimator == Estimator::mmse_1 ? 1 : NR + 1;
        const auto configs = generate_training_configs(NR, Q, setup.rho, rng);
        const auto obs = simulate_training(truth, bs, pilots, configs, setup.noise_var, rng);

        EstimateSet est;
        if (setup.estimator == Estimator::ls)
            est = estimate_ls(obs, pilots);
        else
            est = estimate_mmse(obs, pilots, build_prior_covariance(scenario, bs, NB, NR), setup.noise_var);
        est.method = setup.estimator;
        return est;
    }

    CascadedChannels assemble(const std::vector<EstimateSet> &per_bs)
    {
        CascadedChannels out;
        for (const auto &est : per_bs)
        {
            out.cascade.push_back(est.cascade);
            out.direct.push_back(est.direct);
        }
        return out;
    }
}
