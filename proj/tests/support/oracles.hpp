/**
 * Copyright 2026 The ABRW Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <vector>

#include "abrw/graph.hpp"
#include "synthetic.hpp"

namespace abrw::testing {

/// Dense reference implementations, written from the defining formulas
/// without sharing code with the library.

/// W with every nonzero row divided by its sum.
Dense dense_row_normalize(const Dense& w);

/// Cosine similarity dot / (|a| |b|) with zero diagonal, negatives clamped,
/// zero-norm rows giving 0.
Dense dense_cosine(const Dense& a);

/// Keeps the k largest positive entries of each row by full sort (larger
/// value first, then smaller index) and renormalizes. Entries within tie_tol
/// of the cutoff count as tied; tie_hint, when given, says which of them to
/// prefer, so rounding-level ties cannot flip the comparison.
Dense dense_topk_transition(const Dense& similarity, std::size_t k, const Dense* tie_hint = nullptr,
                            double tie_tol = 0.0);

/// alpha * Tw + (1 - alpha) * Ta, falling back to the nonempty side.
Dense dense_fuse(const Dense& tw, const Dense& ta, double alpha);

/// tie_hint is compared against the attribute transition, not the fused one.
Dense dense_abrw_transition(const AttributedGraph& graph, double alpha, std::size_t k,
                            const Dense* tie_hint = nullptr, double tie_tol = 0.0);

/// Largest |x - y| over all entries; infinity on shape mismatch.
double max_abs_diff(const Dense& x, const Dense& y);

/// True when both matrices have nonzeros in exactly the same places.
bool same_support(const Dense& x, const Dense& y);

}  // namespace abrw::testing
