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

#ifndef XLWAVE_ERROR_HPP
#define XLWAVE_ERROR_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace xlwave
{
    // Precondition violations are reported with std::invalid_argument.
    // Singular evaluations (endfire, grazing, coincident points) use std::domain_error.
    // Everything that fails while solving numerically derives from NumericalError.
    class NumericalError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Raised when a threshold scan finds no crossing of the requested level.
    // The scan extremes are attached so callers can report how close the metric came.
    class NoCrossingError : public NumericalError
    {
    public:
        NoCrossingError(const std::string &what, double grid_min, double grid_max)
            : NumericalError(what + " (grid min " + std::to_string(grid_min) + ", grid max " + std::to_string(grid_max) + ")"),
              grid_min_(grid_min), grid_max_(grid_max) {}

        double grid_min() const noexcept { return grid_min_; }
        double grid_max() const noexcept { return grid_max_; }

    private:
        double grid_min_;
        double grid_max_;
    };

    namespace detail
    {
        inline void require(bool condition, const char *message)
        {
            if (!condition)
                throw std::invalid_argument(message);
        }

        inline void require_positive(double value, const char *name)
        {
            if (!(value > 0.0) || !std::isfinite(value))
                throw std::invalid_argument(std::string(name) + " must be positive and finite");
        }
    }
}

#endif
