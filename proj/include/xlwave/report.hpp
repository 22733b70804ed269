// SPDX-License-Identifier: Apache-2.0
//
// xlwave: near-field / far-field demarcation toolkit for extremely large arrays
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

#ifndef XLWAVE_REPORT_HPP
#define XLWAVE_REPORT_HPP

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xlwave
{
    inline constexpr std::string_view version = "0.1.0";

    // 64-bit FNV-1a.
    inline std::uint64_t fnv1a64(std::string_view data) noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : data)
        {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

    inline std::string hex64(std::uint64_t v)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }

    // Shortest decimal representation that reads back to the same double.
    inline std::string format_double(double v)
    {
        char buf[32];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        if (ec != std::errc{})
            throw std::runtime_error("number formatting failed");
        return std::string(buf, end);
    }

    // Fixed-point with `digits` decimals, for human-facing tables.
    inline std::string format_fixed(double v, int digits = 2)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
        return buf;
    }

    inline double parse_double(std::string_view s)
    {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::invalid_argument("not a number: '" + std::string(s) + "'");
        return v;
    }

    // Minimal CSV table: a header and rows of preformatted cells.
    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

        void add_row(std::vector<std::string> row)
        {
            if (row.size() != header_.size())
                throw std::invalid_argument("CSV row width does not match the header");
            rows_.push_back(std::move(row));
        }

        std::size_t size() const noexcept { return rows_.size(); }

        std::string str() const
        {
            std::string out;
            auto line = [&](const std::vector<std::string> &cells)
            {
                for (std::size_t i = 0; i < cells.size(); ++i)
                {
                    if (i)
                        out += ',';
                    out += escape(cells[i]);
                }
                out += '\n';
            };
            line(header_);
            for (const auto &r : rows_)
                line(r);
            return out;
        }

    private:
        static std::string escape(const std::string &cell)
        {
            if (cell.find_first_of(",\"\n") == std::string::npos)
                return cell;
            std::string q = "\"";
            for (char c : cell)
            {
                if (c == '"')
                    q += '"';
                q += c;
            }
            return q + "\"";
        }

        std::vector<std::string> header_;
        std::vector<std::vector<std::string>> rows_;
    };

    inline std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open '" + path + "'");
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    inline void write_file(const std::string &path, std::string_view content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + path + "'");
        out.write(content.data(), std::streamsize(content.size()));
        if (!out)
            throw std::runtime_error("write failed for '" + path + "'");
    }

    struct OutputDigest
    {
        std::string path;
        std::string fnv1a64;
        std::size_t bytes = 0;
    };

    // Everything needed to re-run a command and check its outputs.
    struct RunManifest
    {
        std::string command;
        std::vector<std::string> argv;
        nlohmann::json params = nlohmann::json::object();
        std::uint64_t seed = 0;
        std::string tool_version{version};
        double wall_time_s = 0.0;
        std::vector<OutputDigest> outputs;

        void add_output(const std::string &path, std::string_view content)
        {
            outputs.push_back({path, hex64(fnv1a64(content)), content.size()});
        }

        nlohmann::json to_json() const
        {
            nlohmann::json j;
            j["command"] = command;
            j["argv"] = argv;
            j["params"] = params;
            j["seed"] = seed;
            j["tool_version"] = tool_version;
            j["wall_time_s"] = wall_time_s;
            j["outputs"] = nlohmann::json::array();
            for (const auto &o : outputs)
                j["outputs"].push_back({{"path", o.path}, {"fnv1a64", o.fnv1a64}, {"bytes", o.bytes}});
            return j;
        }

        static RunManifest from_json(const nlohmann::json &j)
        {
            RunManifest m;
            m.command = j.at("command").get<std::string>();
            m.argv = j.at("argv").get<std::vector<std::string>>();
            m.params = j.value("params", nlohmann::json::object());
            m.seed = j.value("seed", std::uint64_t{0});
            m.tool_version = j.value("tool_version", std::string{});
            m.wall_time_s = j.value("wall_time_s", 0.0);
            for (const auto &o : j.value("outputs", nlohmann::json::array()))
                m.outputs.push_back({o.at("path").get<std::string>(), o.at("fnv1a64").get<std::string>(), o.value("bytes", std::size_t{0})});
            return m;
        }
    };
}

#endif
