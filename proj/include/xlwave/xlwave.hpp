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

#ifndef XLWAVE_XLWAVE_HPP
#define XLWAVE_XLWAVE_HPP

#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"
#include "xlwave/parallel.hpp"
#include "xlwave/channel.hpp"
#include "xlwave/channel_io.hpp"
#include "xlwave/integral_oracle.hpp"
#include "xlwave/power.hpp"
#include "xlwave/rank.hpp"
#include "xlwave/reference.hpp"
#include "xlwave/boundary.hpp"
#include "xlwave/montecarlo.hpp"
#include "xlwave/demarcation.hpp"
#include "xlwave/report.hpp"

#endif
