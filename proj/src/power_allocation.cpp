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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ris
{
    namespace
    {
        struct PowerModel
        {
            const std::vector<cmat> &a;
            const imat &association;
            double noise_power;
            int B, K;

            double useful(const rmat &x, int k) const
            {
                double u = 0.0;
                for (int i = 0; i < B; ++i)
                    if (association(i, k))
                        u += a[i](k, k).real() * x(i, k);
                return u;
            }

            cd cross(const rmat &x, int k, int l) const
            {
                cd z = 0.0;
                for (int i = 0; i < B; ++i)
                    if (association(i, l))
                        z += x(i, l) * a[i](k, l);
                return z;
            }

            double interference(const rmat &x, int k) const
            {
                double s = noise_power;
                for (int l = 0; l < K; ++l)
                    if (l != k)
                        s += std::norm(cross(x, k, l));
                return s;
            }

            double objective(const rmat &x) const
            {
                double v = 0.0;
                for (int k = 0; k < K; ++k)
                {
                    const double u = useful(x, k);
                    if (!(u > 0.0))
                        return -std::numeric_limits<double>::infinity();
                    v += std::log2(u * u / interference(x, k));
                }
                return v;
            }

            // Concave minorant of objective() around x0, up to a constant:
            //   sum_k 2 log2 u_k(x) - T_k(x) / (T_k(x0) ln 2)
            double surrogate(const rmat &x, const rvec &T0) const
            {
                double v = 0.0;
                for (int k = 0; k < K; ++k)
                {
                    const double u = useful(x, k);
                    if (!(u > 0.0))
                        return -std::numeric_limits<double>::infinity();
                    v += 2.0 * std::log2(u) - interference(x, k) / (T0(k) * std::log(2.0));
                }
                return v;
            }

            rmat surrogate_gradient(const rmat &x, const rvec &T0) const
            {
                const double ln2 = std::log(2.0);
                rmat g = rmat::Zero(B, K);
                for (int k = 0; k < K; ++k)
                {
                    const double u = useful(x, k);
                    for (int i = 0; i < B; ++i)
                        if (association(i, k))
                            g(i, k) += 2.0 * a[i](k, k).real() / (u * ln2);
                    for (int l = 0; l < K; ++l)
                    {
                        if (l == k)
                            continue;
                        const cd z = cross(x, k, l);
                        for (int i = 0; i < B; ++i)
                            if (association(i, l))
                                g(i, l) -= 2.0 * (std::conj(z) * a[i](k, l)).real() / (T0(k) * ln2);
                    }
                }
                return g;
            }
        };

        // Projection onto {x >= 0, x = 0 where not served, sum_l x_il^2 <= P_i}.
        rmat project(const rmat &x, const imat &association, const rvec &budgets)
        {
            rmat p = x.cwiseMax(0.0);
            for (Eigen::Index i = 0; i < p.rows(); ++i)
            {
                for (Eigen::Index l = 0; l < p.cols(); ++l)
                    if (!association(i, l))
                        p(i, l) = 0.0;
                const double e = p.row(i).squaredNorm();
                if (e > budgets(i))
                    p.row(i) *= std::sqrt(budgets(i) / e);
            }
            return p;
        }
    }

    double sum_log_sinr(const rmat &powers, const std::vector<cmat> &a, const imat &association, double noise_power)
    {
        const int B = static_cast<int>(powers.rows());
        const int K = static_cast<int>(powers.cols());
        if (static_cast<int>(a.size()) != B || association.rows() != B || association.cols() != K)
            throw std::invalid_argument("sum_log_sinr: shape mismatch");
        const PowerModel model{a, association, noise_power, B, K};
        return model.objective(powers.cwiseMax(0.0).cwiseSqrt());
    }

    PowerResult optimize_powers(const rmat &init, const std::vector<cmat> &a, const imat &association,
                                const rvec &budgets, double noise_power, const PowerOptions &options)
    {
        const int B = static_cast<int>(init.rows());
        const int K = static_cast<int>(init.cols());
        if (static_cast<int>(a.size()) != B || association.rows() != B || association.cols() != K ||
            budgets.size() != B)
            throw std::invalid_argument("optimize_powers: shape mismatch");
        for (int i = 0; i < B; ++i)
        {
            if (a[i].rows() != K || a[i].cols() != K)
                throw std::invalid_argument("optimize_powers: coupling matrix has the wrong shape");
            if (!(budgets(i) > 0.0))
                throw std::invalid_argument("optimize_powers: BS " + std::to_string(i) + " has no power budget");
        }
        if (!(noise_power > 0.0))
            throw std::invalid_argument("optimize_powers: noise power must be positive");
        if ((init.array() < 0.0).any())
            throw std::invalid_argument("optimize_powers: negative initial power");

        const PowerModel model{a, association, noise_power, B, K};
        rmat x = project(init.cwiseSqrt(), association, budgets);
        double value = model.objective(x);
        if (!std::isfinite(value))
            throw std::domain_error("optimize_powers: some user receives no signal at the starting point");

        PowerResult res;
        res.trace.push_back(value);
        double step = 1.0;
        for (int it = 0; it < options.max_iterations; ++it)
        {
            rvec T0(K);
            for (int k = 0; k < K; ++k)
                T0(k) = model.interference(x, k);

            // Projected gradient ascent on the surrogate.
            rmat y = x;
            double f = model.surrogate(y, T0);
            for (int inner = 0; inner < options.max_inner_iterations; ++inner)
            {
                const rmat g = model.surrogate_gradient(y, T0);
                bool accepted = false;
                rmat candidate;
                double candidate_f = f;
                for (int bt = 0; bt < 60; ++bt)
                {
                    candidate = project(y + step * g, association, budgets);
                    const rmat d = candidate - y;
                    candidate_f = model.surrogate(candidate, T0);
                    const double model_gain = (g.array() * d.array()).sum() - d.squaredNorm() / (2.0 * step);
                    if (std::isfinite(candidate_f) && candidate_f >= f && candidate_f >= f + model_gain)
                    {
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted)
                    break;
                const double gain = candidate_f - f;
                y = candidate;
                f = candidate_f;
                step *= 2.0;
                if (gain <= options.inner_tolerance * std::max(std::abs(f), 1.0))
                    break;
            }

            const double next = model.objective(y);
            // The surrogate is tight at x, so next >= value up to rounding.
            if (!(next >= value))
                break;
            const double gain = next - value;
            x = y;
            value = next;
            res.trace.push_back(value);
            if (gain < options.tolerance)
                break;
        }
        res.powers = x.cwiseAbs2();
        return res;
    }

    rmat uniform_powers(const imat &association, const rvec &budgets)
    {
        if (budgets.size() != association.rows())
            throw std::invalid_argument("uniform_powers: one budget per BS required");
        rmat p = rmat::Zero(association.rows(), association.cols());
        for (Eigen::Index i = 0; i < association.rows(); ++i)
        {
            const int served = association.row(i).sum();
            if (served == 0)
                continue;
            for (Eigen::Index l = 0; l < association.cols(); ++l)
                if (association(i, l))
                    p(i, l) = budgets(i) / served;
        }
        return p;
    }
}
