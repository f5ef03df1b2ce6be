// Copyright 2026 The qtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qtomo {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derived 64-bit seed for the substream identified by `stream` under `master`.
///
/// Pure integer arithmetic, so a (master, stream...) tuple yields the same
/// value on every platform and independently of thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream = {}) {
    std::uint64_t h = mix64(master);
    for (auto s : stream) h = mix64(h ^ mix64(s + 0x632be59bd9b4e019ULL));
    return h;
}

/// Generator for a substream. Single-value seeding of mt19937_64 is fixed by the standard.
inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> stream = {}) {
    return Rng(derive_seed(master, stream));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform random sign in {-1, +1}.
inline int random_sign(Rng& rng) { return (rng() >> 63) ? -1 : 1; }

}  // namespace qtomo
