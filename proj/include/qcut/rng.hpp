// Copyright 2026 The qcut Authors
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

#ifndef QCUT_RNG_HPP
#define QCUT_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qcut {

/// Random stream used throughout. Streams are owned by the caller and never shared.
using Rng = std::mt19937_64;

/// One step of the SplitMix64 output function.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a 64-bit stream seed from an ordered tuple of integers.
///
/// The hash folds each component into a running state as
/// `h = splitmix64(h ^ splitmix64(component + golden * (i + 1)))`, starting
/// from a fixed non-zero state. Order matters, so (seed, Q, F, instance) and
/// (seed, F, Q, instance) yield unrelated streams. The result depends only on
/// the tuple, never on scheduling, which keeps parallel sweeps reproducible.
std::uint64_t derive_stream_seed(std::initializer_list<std::uint64_t> components);

inline Rng make_rng(std::initializer_list<std::uint64_t> components) {
    return Rng(derive_stream_seed(components));
}

/// Domain tags separating the sub-streams of one circuit instance.
enum class StreamTag : std::uint64_t {
    Circuit = 0x43495243,  // "CIRC"
    Full = 0x46554c4c,     // "FULL"
    Variant = 0x56415249,  // "VARI"
};

}  // namespace qcut

#endif  // QCUT_RNG_HPP
