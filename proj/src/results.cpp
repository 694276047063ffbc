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

#include "ris/results.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ris
{
    namespace
    {
        bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

        std::vector<std::string> split_fields(const std::string &line)
        {
            std::vector<std::string> out;
            std::string::size_type start = 0;
            while (true)
            {
                const auto comma = line.find(',', start);
                out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
                if (comma == std::string::npos)
                    break;
                start = comma + 1;
            }
            return out;
        }

        template <typename T>
        T parse_field(const std::string &s, int line, const char *name)
        {
            T v{};
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
                throw std::runtime_error("results line " + std::to_string(line) + ": bad " + name + " '" + s + "'");
            return v;
        }

        double parse_real(const std::string &s, int line, const char *name)
        {
            if (s == "nan")
                return std::numeric_limits<double>::quiet_NaN();
            if (s == "inf")
                return std::numeric_limits<double>::infinity();
            if (s == "-inf")
                return -std::numeric_limits<double>::infinity();
            return parse_field<double>(s, line, name);
        }
    }

    bool ResultRow::operator==(const ResultRow &o) const
    {
        return experiment == o.experiment && method == o.method && estimator == o.estimator && n_r == o.n_r &&
               same_double(p_jt, o.p_jt) && trial == o.trial && user == o.user && metric == o.metric &&
               same_double(x, o.x) && same_double(value, o.value);
    }

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        if (ec != std::errc())
            throw std::runtime_error("format_double: conversion failed");
        return std::string(buf, ptr);
    }

    void write_results(std::ostream &out, const std::vector<ResultRow> &rows)
    {
        out << results_header << "\n";
        for (const auto &r : rows)
        {
            for (const std::string *s : {&r.experiment, &r.method, &r.estimator, &r.metric})
                if (s->find_first_of(",\n\"") != std::string::npos)
                    throw std::invalid_argument("write_results: field contains a separator: " + *s);
            out << r.experiment << ',' << r.method << ',' << r.estimator << ',' << r.n_r << ','
                << format_double(r.p_jt) << ',' << r.trial << ',' << r.user << ',' << r.metric << ','
                << (std::isnan(r.x) ? std::string() : format_double(r.x)) << ',' << format_double(r.value) << '\n';
        }
    }

    void write_results(const std::string &path, const std::vector<ResultRow> &rows)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write results file '" + path + "'");
        write_results(out, rows);
        if (!out)
            throw std::runtime_error("error while writing '" + path + "'");
    }

    std::vector<ResultRow> read_results(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error("results: empty input");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != results_header)
            throw std::runtime_error("results: unexpected header '" + line + "'");

        std::vector<ResultRow> rows;
        int number = 1;
        while (std::getline(in, line))
        {
            ++number;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            const auto f = split_fields(line);
            if (f.size() != 10)
                throw std::runtime_error("results line " + std::to_string(number) + ": expected 10 fields, got " +
                                         std::to_string(f.size()));
            ResultRow r;
            r.experiment = f[0];
            r.method = f[1];
            r.estimator = f[2];
            r.n_r = parse_field<int>(f[3], number, "n_r");
            r.p_jt = parse_real(f[4], number, "p_jt");
            r.trial = parse_field<int>(f[5], number, "trial");
            r.user = parse_field<int>(f[6], number, "user");
            r.metric = f[7];
            r.x = f[8].empty() ? std::numeric_limits<double>::quiet_NaN() : parse_real(f[8], number, "x");
            r.value = parse_real(f[9], number, "value");
            rows.push_back(std::move(r));
        }
        return rows;
    }

    std::vector<ResultRow> read_results(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open results file '" + path + "'");
        return read_results(in);
    }
}
