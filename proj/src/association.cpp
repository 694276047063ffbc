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
#include <stdexcept>
#include <vector>

namespace ris
{
    imat associate_users(const Scenario &scenario, double p_jt)
    {
        if (!(p_jt >= 0.0 && p_jt <= 1.0))
            throw std::invalid_argument("associate_users: p_jt must lie in [0, 1]");
        const int B = scenario.num_bs();
        const int K = scenario.num_users();
        if (B < 1)
            throw std::invalid_argument("associate_users: no base station");
        if (scenario.beta_direct.rows() != B || scenario.beta_direct.cols() != K)
            throw std::invalid_argument("associate_users: direct gains have the wrong shape");

        imat I = imat::Zero(B, K);
        std::vector<double> ratio(K);
        for (int k = 0; k < K; ++k)
        {
            Eigen::Index best = 0;
            scenario.beta_direct.col(k).maxCoeff(&best);
            I(best, k) = 1;
            ratio[k] = scenario.beta_direct.col(k).maxCoeff() / scenario.beta_direct.col(k).minCoeff();
        }
        if (B < 2)
            return I;

        const int joint = static_cast<int>(std::floor(p_jt * K + 0.5));
        std::vector<int> order(K);
        for (int k = 0; k < K; ++k)
            order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return ratio[x] < ratio[y]; });
        for (int n = 0; n < joint; ++n)
            I.col(order[n]).setOnes();
        return I;
    }
}
