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

// Effective rank of a 100x16 ULA-to-ULA link as the user array moves away.

#include "xlwave/xlwave.hpp"

#include <cstdio>

int main()
{
    using namespace xlwave;
    UlaLinkConfig link;
    link.m = 16;
    const auto erank = ula_link_erank(link);

    for (double r : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0})
        std::printf("r=%6.2f m  erank=%.4f\n", r, erank(r));

    const auto b = equi_rank_threshold(erank, ula_link_search_limit(link), RankTarget{1.05});
    std::printf("erank falls to 1.05 at r=%.3f m (%zu evaluations)\n", b.threshold_r, b.evaluations);
}
