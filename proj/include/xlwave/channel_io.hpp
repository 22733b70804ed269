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

// Text layout of a channel matrix:
//
//   # xlwave-channel v1
//   rows,cols,model,wavelength,geometry_hash
//   <rows>,<cols>,<swm|pwm>,<lambda>,<16 hex digits>
//   re(0,0),im(0,0),re(0,1),im(0,1),...      one line per matrix row
//
// Numbers use the shortest round-trip decimal form, so reading a file back
// reproduces every entry bit for bit. Scatterer sets are not serialised.

#ifndef XLWAVE_CHANNEL_IO_HPP
#define XLWAVE_CHANNEL_IO_HPP

#include "xlwave/channel.hpp"
#include "xlwave/geometry.hpp"
#include "xlwave/report.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace xlwave
{
    inline constexpr std::string_view channel_magic = "# xlwave-channel v1";

    inline std::uint64_t geometry_hash(const UlaGeometry &g)
    {
        std::string key = "ula;" + std::to_string(g.num_elements) + ';' + format_double(g.spacing) + ';' +
                          (g.anchor == Anchor::midpoint ? "mid" : "first") + ';' + format_double(g.tilt) + ';' +
                          format_double(g.elevation) + ';' + format_double(g.origin.x()) + ';' + format_double(g.origin.y()) + ';' +
                          format_double(g.origin.z());
        return fnv1a64(key);
    }

    inline std::uint64_t geometry_hash(const UpaGeometry &g)
    {
        std::string key = "upa;" + std::to_string(g.num_y) + ';' + std::to_string(g.num_z) + ';' + format_double(g.spacing_y) + ';' +
                          format_double(g.spacing_z) + ';' + std::to_string(int(g.shape));
        return fnv1a64(key);
    }

    struct ChannelFile
    {
        ChannelMatrix channel;
        std::uint64_t geometry_hash = 0;
    };

    inline void write_channel_csv(std::ostream &out, const ChannelMatrix &h, std::uint64_t geom_hash)
    {
        out << channel_magic << '\n'
            << "rows,cols,model,wavelength,geometry_hash\n"
            << h.rows() << ',' << h.cols() << ',' << (h.model == WaveModel::spherical ? "swm" : "pwm") << ','
            << format_double(h.wavelength) << ',' << hex64(geom_hash) << '\n';
        for (Eigen::Index i = 0; i < h.rows(); ++i)
        {
            for (Eigen::Index j = 0; j < h.cols(); ++j)
            {
                if (j)
                    out << ',';
                out << format_double(h.entries(i, j).real()) << ',' << format_double(h.entries(i, j).imag());
            }
            out << '\n';
        }
    }

    inline std::string channel_to_csv(const ChannelMatrix &h, std::uint64_t geom_hash)
    {
        std::ostringstream os;
        write_channel_csv(os, h, geom_hash);
        return os.str();
    }

    namespace detail
    {
        inline std::vector<std::string> split_commas(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cell;
            std::istringstream is(line);
            while (std::getline(is, cell, ','))
                out.push_back(cell);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }
    }

    inline ChannelFile read_channel_csv(std::istream &in)
    {
        auto fail = [](const std::string &what) { return std::invalid_argument("channel file: " + what); };
        std::string line;
        if (!std::getline(in, line) || line != channel_magic)
            throw fail("missing header line");
        if (!std::getline(in, line) || line != "rows,cols,model,wavelength,geometry_hash")
            throw fail("missing column header");
        if (!std::getline(in, line))
            throw fail("missing shape line");
        const auto meta = detail::split_commas(line);
        if (meta.size() != 5)
            throw fail("shape line needs 5 fields");

        ChannelFile f;
        const long rows = std::stol(meta[0]);
        const long cols = std::stol(meta[1]);
        if (rows <= 0 || cols <= 0)
            throw fail("non-positive dimensions");
        if (meta[2] != "swm" && meta[2] != "pwm")
            throw fail("unknown model '" + meta[2] + "'");
        f.channel.model = meta[2] == "swm" ? WaveModel::spherical : WaveModel::planar;
        f.channel.wavelength = parse_double(meta[3]);
        f.geometry_hash = std::stoull(meta[4], nullptr, 16);
        f.channel.entries.resize(rows, cols);
        for (long i = 0; i < rows; ++i)
        {
            if (!std::getline(in, line))
                throw fail("truncated at row " + std::to_string(i));
            const auto cells = detail::split_commas(line);
            if (long(cells.size()) != 2 * cols)
                throw fail("row " + std::to_string(i) + " has the wrong width");
            for (long j = 0; j < cols; ++j)
                f.channel.entries(i, j) = {parse_double(cells[std::size_t(2 * j)]), parse_double(cells[std::size_t(2 * j + 1)])};
        }
        return f;
    }

    inline ChannelFile channel_from_csv(const std::string &text)
    {
        std::istringstream is(text);
        return read_channel_csv(is);
    }
}

#endif
