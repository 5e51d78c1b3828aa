// Copyright 2026-present the cdr project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cdr::kernels {

// Exhaustive top-k scan kernels. Each comes in a serial reference flavor and
// an OpenMP flavor that partitions rows across threads; per-row arithmetic is
// identical in both, so the two always return the same hits in the same
// order. Ties break toward the lower row index (callers lay rows out in
// ascending external-id order, or pass tie_rank to override).

struct DotHit {
    std::uint32_t row;
    float score;
};

struct HammingHit {
    std::uint32_t row;
    std::uint32_t dist;
};

float dot(const float* a, const float* b, std::size_t d);
std::uint32_t hamming(const std::uint8_t* a, const std::uint8_t* b, std::size_t bytes);
/// Sum of lut[m*k_centroids + code[m]] over the m subspaces.
float adc_score(const std::uint8_t* code, std::size_t m_subspaces, const float* lut,
                std::size_t k_centroids);

std::vector<DotHit> dot_topk_serial(const float* base, std::size_t n, std::size_t d,
                                    const float* query, std::size_t k,
                                    const std::uint32_t* tie_rank = nullptr);
std::vector<DotHit> dot_topk_parallel(const float* base, std::size_t n, std::size_t d,
                                      const float* query, std::size_t k,
                                      const std::uint32_t* tie_rank = nullptr);

std::vector<HammingHit> hamming_topk_serial(const std::uint8_t* codes, std::size_t n,
                                            std::size_t code_bytes, const std::uint8_t* query,
                                            std::size_t k,
                                            const std::uint32_t* tie_rank = nullptr);
std::vector<HammingHit> hamming_topk_parallel(const std::uint8_t* codes, std::size_t n,
                                              std::size_t code_bytes, const std::uint8_t* query,
                                              std::size_t k,
                                              const std::uint32_t* tie_rank = nullptr);

std::vector<DotHit> adc_topk_serial(const std::uint8_t* codes, std::size_t n,
                                    std::size_t m_subspaces, const float* lut,
                                    std::size_t k_centroids, std::size_t k,
                                    const std::uint32_t* tie_rank = nullptr);
std::vector<DotHit> adc_topk_parallel(const std::uint8_t* codes, std::size_t n,
                                      std::size_t m_subspaces, const float* lut,
                                      std::size_t k_centroids, std::size_t k,
                                      const std::uint32_t* tie_rank = nullptr);

/// Nearest centroid by squared L2, ties toward the lowest centroid index.
std::uint32_t assign_nearest(const float* v, const float* centroids, std::size_t k_centroids,
                             std::size_t d);

/// Pack elementwise signs into bits, LSB-first per byte, sign(0) = +1.
void pack_signs(const float* v, std::size_t d, std::uint8_t* out);

}  // namespace cdr::kernels
