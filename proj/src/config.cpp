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

#include "ris/config.hpp"
#include "ris/results.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ris
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split_list(const std::string &value)
        {
            std::vector<std::string> out;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                item = trim(item);
                if (!item.empty())
                    out.push_back(item);
            }
            return out;
        }

        template <typename T>
        T parse_number(const std::string &key, const std::string &text)
        {
            const std::string s = trim(text);
            T v{};
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
                throw std::invalid_argument("config key '" + key + "': cannot parse '" + text + "'");
            return v;
        }

        template <typename T>
        std::string join(const std::vector<T> &values)
        {
            std::string out;
            for (std::size_t n = 0; n < values.size(); ++n)
            {
                if (n)
                    out += ",";
                if constexpr (std::is_same_v<T, std::string>)
                    out += values[n];
                else if constexpr (std::is_floating_point_v<T>)
                    out += format_double(values[n]);
                else
                    out += std::to_string(values[n]);
            }
            return out;
        }

        struct Field
        {
            std::string key;
            std::function<void(ExperimentConfig &, const std::string &)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

        template <typename T>
        Field number_field(const std::string &key, T ExperimentConfig::*member)
        {
            return {key, [key, member](ExperimentConfig &c, const std::string &v) { c.*member = parse_number<T>(key, v); },
                    [member](const ExperimentConfig &c) {
                        if constexpr (std::is_floating_point_v<T>)
                            return format_double(c.*member);
                        else
                            return std::to_string(c.*member);
                    }};
        }

        template <typename T>
        Field constant_field(const std::string &key, T SystemConstants::*member)
        {
            return {key,
                    [key, member](ExperimentConfig &c, const std::string &v) {
                        c.constants.*member = parse_number<T>(key, v);
                    },
                    [member](const ExperimentConfig &c) {
                        if constexpr (std::is_floating_point_v<T>)
                            return format_double(c.constants.*member);
                        else
                            return std::to_string(c.constants.*member);
                    }};
        }

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> table = {
                {"experiment", [](ExperimentConfig &c, const std::string &v) { c.experiment = trim(v); },
                 [](const ExperimentConfig &c) { return c.experiment; }},
                number_field("trials", &ExperimentConfig::trials),
                number_field("seed", &ExperimentConfig::seed),
                constant_field("bs_antennas", &SystemConstants::bs_antennas),
                constant_field("ris_elements", &SystemConstants::ris_elements),
                constant_field("users", &SystemConstants::users),
                constant_field("base_stations", &SystemConstants::base_stations),
                constant_field("rho", &SystemConstants::ris_amplitude),
                {"nr_list",
                 [](ExperimentConfig &c, const std::string &v) {
                     c.nr_list.clear();
                     for (const auto &s : split_list(v))
                         c.nr_list.push_back(parse_number<int>("nr_list", s));
                 },
                 [](const ExperimentConfig &c) { return join(c.nr_list); }},
                {"estimators", [](ExperimentConfig &c, const std::string &v) { c.estimators = split_list(v); },
                 [](const ExperimentConfig &c) { return join(c.estimators); }},
                {"methods", [](ExperimentConfig &c, const std::string &v) { c.methods = split_list(v); },
                 [](const ExperimentConfig &c) { return join(c.methods); }},
                {"p_jt",
                 [](ExperimentConfig &c, const std::string &v) {
                     c.p_jt.clear();
                     for (const auto &s : split_list(v))
                         c.p_jt.push_back(parse_number<double>("p_jt", s));
                 },
                 [](const ExperimentConfig &c) { return join(c.p_jt); }},
                {"output", [](ExperimentConfig &c, const std::string &v) { c.output = trim(v); },
                 [](const ExperimentConfig &c) { return c.output; }},
                number_field("threads", &ExperimentConfig::threads),
                number_field("training_noise_scale", &ExperimentConfig::training_noise_scale),
                number_field("cdf_points", &ExperimentConfig::cdf_points),
                {"am_init", [](ExperimentConfig &c, const std::string &v) { c.am_init = trim(v); },
                 [](const ExperimentConfig &c) { return c.am_init; }},
                constant_field("carrier_freq_hz", &SystemConstants::carrier_freq_hz),
                constant_field("bandwidth_hz", &SystemConstants::bandwidth_hz),
                constant_field("noise_density_dbm_hz", &SystemConstants::noise_density_dbm_hz),
                constant_field("noise_figure_db", &SystemConstants::noise_figure_db),
                constant_field("inter_site_distance_m", &SystemConstants::inter_site_distance_m),
                constant_field("bs_height_m", &SystemConstants::bs_height_m),
                constant_field("ris_height_m", &SystemConstants::ris_height_m),
                constant_field("ms_height_m", &SystemConstants::ms_height_m),
                constant_field("min_ms_distance_m", &SystemConstants::min_ms_distance_m),
                constant_field("max_bs_power_w", &SystemConstants::max_bs_power_w),
                constant_field("pilot_power_w", &SystemConstants::pilot_power_w),
            };
            return table;
        }

        bool one_of(const std::string &v, std::initializer_list<const char *> names)
        {
            return std::any_of(names.begin(), names.end(), [&](const char *n) { return v == n; });
        }
    }

    SystemConstants ExperimentConfig::desk_constants()
    {
        SystemConstants c;
        c.bs_antennas = 8;
        c.ris_elements = 16;
        c.users = 4;
        return c;
    }

    void ExperimentConfig::apply_full_scale()
    {
        constants.bs_antennas = 64;
        constants.ris_elements = 64;
        constants.users = 20;
    }

    void ExperimentConfig::validate() const
    {
        const auto names = experiment_names();
        if (std::find(names.begin(), names.end(), experiment) == names.end())
            throw std::invalid_argument("unknown experiment '" + experiment + "'; valid: " + join(names));
        if (trials < 1)
            throw std::invalid_argument("trials must be at least 1");
        if (threads < 0)
            throw std::invalid_argument("threads must be non-negative");
        if (cdf_points < 2)
            throw std::invalid_argument("cdf_points must be at least 2");
        if (!(training_noise_scale >= 0.0))
            throw std::invalid_argument("training_noise_scale must be non-negative");
        if (am_init != "zero" && am_init != "random")
            throw std::invalid_argument("am_init must be 'zero' or 'random'");
        if (nr_list.empty())
            throw std::invalid_argument("nr_list must not be empty");
        for (int n : nr_list)
            if (n < 1)
                throw std::invalid_argument("nr_list entries must be positive");
        if (p_jt.empty())
            throw std::invalid_argument("p_jt must not be empty");
        for (double p : p_jt)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("p_jt entries must lie in [0, 1]");
        for (const auto &e : estimators)
            if (!one_of(e, {"PCSI", "LS", "MMSE1", "MMSEQ"}))
                throw std::invalid_argument("unknown estimator '" + e + "'; valid: PCSI,LS,MMSE1,MMSEQ");
        for (const auto &m : methods)
            if (!one_of(m, {"UB", "LB", "AM", "NoOpt", "JointOpt", "OnlyRIS", "OnlyPowers"}))
                throw std::invalid_argument("unknown method '" + m +
                                            "'; valid: UB,LB,AM,NoOpt,JointOpt,OnlyRIS,OnlyPowers");
        constants.validate();
    }

    std::vector<std::string> config_keys()
    {
        std::vector<std::string> keys;
        for (const auto &f : fields())
            keys.push_back(f.key);
        return keys;
    }

    std::vector<std::string> experiment_names()
    {
        return {"nmse-vs-nr", "su-cdf", "su-vs-nr", "mu-cdf", "mu-sinr-vs-nr", "jt-sweep"};
    }

    void set_config_value(ExperimentConfig &cfg, const std::string &key, const std::string &value)
    {
        for (const auto &f : fields())
            if (f.key == key)
            {
                f.set(cfg, value);
                return;
            }
        throw std::invalid_argument("unknown config key '" + key + "'; valid keys: " + join(config_keys()));
    }

    ExperimentConfig parse_config(std::istream &in, ExperimentConfig base)
    {
        std::string line;
        int number = 0;
        while (std::getline(in, line))
        {
            ++number;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
            try
            {
                set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument("config line " + std::to_string(number) + ": " + e.what());
            }
        }
        return base;
    }

    ExperimentConfig read_config(const std::string &path, ExperimentConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file '" + path + "'");
        return parse_config(in, std::move(base));
    }

    void write_config(std::ostream &out, const ExperimentConfig &cfg)
    {
        for (const auto &f : fields())
            out << f.key << " = " << f.get(cfg) << "\n";
    }

    void write_config(const std::string &path, const ExperimentConfig &cfg)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write config file '" + path + "'");
        write_config(out, cfg);
    }
}
