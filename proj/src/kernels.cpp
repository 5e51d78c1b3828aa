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

#include "cdr/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cdr::kernels {

float dot(const float* a, const float* b, std::size_t d) {
    // four accumulators: fixed summation order, keeps the FP pipeline busy
    float acc0 = 0.f, acc1 = 0.f, acc2 = 0.f, acc3 = 0.f;
    std::size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        acc0 += a[i] * b[i];
        acc1 += a[i + 1] * b[i + 1];
        acc2 += a[i + 2] * b[i + 2];
        acc3 += a[i + 3] * b[i + 3];
    }
    for (; i < d; ++i) acc0 += a[i] * b[i];
    return (acc0 + acc1) + (acc2 + acc3);
}

std::uint32_t hamming(const std::uint8_t* a, const std::uint8_t* b, std::size_t bytes) {
    std::uint32_t total = 0;
    std::size_t i = 0;
    for (; i + 8 <= bytes; i += 8) {
        std::uint64_t wa, wb;
        std::memcpy(&wa, a + i, 8);
        std::memcpy(&wb, b + i, 8);
        total += static_cast<std::uint32_t>(std::popcount(wa ^ wb));
    }
    for (; i < bytes; ++i) {
        total += static_cast<std::uint32_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    }
    return total;
}

float adc_score(const std::uint8_t* code, std::size_t m_subspaces, const float* lut,
                std::size_t k_centroids) {
    float acc0 = 0.f, acc1 = 0.f, acc2 = 0.f, acc3 = 0.f;
    std::size_t m = 0;
    for (; m + 4 <= m_subspaces; m += 4) {
        acc0 += lut[m * k_centroids + code[m]];
        acc1 += lut[(m + 1) * k_centroids + code[m + 1]];
        acc2 += lut[(m + 2) * k_centroids + code[m + 2]];
        acc3 += lut[(m + 3) * k_centroids + code[m + 3]];
    }
    for (; m < m_subspaces; ++m) acc0 += lut[m * k_centroids + code[m]];
    return (acc0 + acc1) + (acc2 + acc3);
}

namespace {

// Bounded selection. The heap keeps the current worst hit on top so a scan
// can reject most rows with one comparison.
template <class Hit, class Better>
class TopK {
  public:
    TopK(std::size_t k, Better better) : k_(k), better_(better) {}

    void push(const Hit& h) {
        if (heap_.size() < k_) {
            heap_.push_back(h);
            std::push_heap(heap_.begin(), heap_.end(), better_);
        } else if (better_(h, heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), better_);
            heap_.back() = h;
            std::push_heap(heap_.begin(), heap_.end(), better_);
        }
    }

    std::vector<Hit> sorted() && {
        std::sort(heap_.begin(), heap_.end(), better_);
        return std::move(heap_);
    }

    std::vector<Hit>& raw() { return heap_; }

  private:
    std::size_t k_;
    Better better_;
    std::vector<Hit> heap_;
};

struct DotBetter {
    const std::uint32_t* rank;
    bool operator()(const DotHit& a, const DotHit& b) const {
        if (a.score != b.score) return a.score > b.score;
        return rank ? rank[a.row] < rank[b.row] : a.row < b.row;
    }
};

struct HammingBetter {
    const std::uint32_t* rank;
    bool operator()(const HammingHit& a, const HammingHit& b) const {
        if (a.dist != b.dist) return a.dist < b.dist;
        return rank ? rank[a.row] < rank[b.row] : a.row < b.row;
    }
};

template <class Hit, class Better, class ScoreRow>
std::vector<Hit> scan_serial(std::size_t n, std::size_t k, Better better, ScoreRow score_row) {
    TopK<Hit, Better> top(k, better);
    for (std::size_t row = 0; row < n; ++row) {
        top.push(score_row(row));
    }
    return std::move(top).sorted();
}

template <class Hit, class Better, class ScoreRow>
std::vector<Hit> scan_parallel(std::size_t n, std::size_t k, Better better, ScoreRow score_row) {
#if defined(_OPENMP)
    int threads = omp_get_max_threads();
    std::vector<std::vector<Hit>> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
        int t = omp_get_thread_num();
        TopK<Hit, Better> top(k, better);
#pragma omp for schedule(static)
        for (std::int64_t row = 0; row < static_cast<std::int64_t>(n); ++row) {
            top.push(score_row(static_cast<std::size_t>(row)));
        }
        partial[static_cast<std::size_t>(t)] = std::move(top.raw());
    }
    std::vector<Hit> merged;
    for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
    std::sort(merged.begin(), merged.end(), better);
    if (merged.size() > k) merged.resize(k);
    return merged;
#else
    return scan_serial<Hit>(n, k, better, score_row);
#endif
}

}  // namespace

std::vector<DotHit> dot_topk_serial(const float* base, std::size_t n, std::size_t d,
                                    const float* query, std::size_t k,
                                    const std::uint32_t* tie_rank) {
    return scan_serial<DotHit>(n, k, DotBetter{tie_rank}, [&](std::size_t row) {
        return DotHit{static_cast<std::uint32_t>(row), dot(base + row * d, query, d)};
    });
}

std::vector<DotHit> dot_topk_parallel(const float* base, std::size_t n, std::size_t d,
                                      const float* query, std::size_t k,
                                      const std::uint32_t* tie_rank) {
    return scan_parallel<DotHit>(n, k, DotBetter{tie_rank}, [&](std::size_t row) {
        return DotHit{static_cast<std::uint32_t>(row), dot(base + row * d, query, d)};
    });
}

std::vector<HammingHit> hamming_topk_serial(const std::uint8_t* codes, std::size_t n,
                                            std::size_t code_bytes, const std::uint8_t* query,
                                            std::size_t k, const std::uint32_t* tie_rank) {
    return scan_serial<HammingHit>(n, k, HammingBetter{tie_rank}, [&](std::size_t row) {
        return HammingHit{static_cast<std::uint32_t>(row),
                          hamming(codes + row * code_bytes, query, code_bytes)};
    });
}

std::vector<HammingHit> hamming_topk_parallel(const std::uint8_t* codes, std::size_t n,
                                              std::size_t code_bytes, const std::uint8_t* query,
                                              std::size_t k, const std::uint32_t* tie_rank) {
    return scan_parallel<HammingHit>(n, k, HammingBetter{tie_rank}, [&](std::size_t row) {
        return HammingHit{static_cast<std::uint32_t>(row),
                          hamming(codes + row * code_bytes, query, code_bytes)};
    });
}

std::vector<DotHit> adc_topk_serial(const std::uint8_t* codes, std::size_t n,
                                    std::size_t m_subspaces, const float* lut,
                                    std::size_t k_centroids, std::size_t k,
                                    const std::uint32_t* tie_rank) {
    return scan_serial<DotHit>(n, k, DotBetter{tie_rank}, [&](std::size_t row) {
        return DotHit{static_cast<std::uint32_t>(row),
                      adc_score(codes + row * m_subspaces, m_subspaces, lut, k_centroids)};
    });
}

std::vector<DotHit> adc_topk_parallel(const std::uint8_t* codes, std::size_t n,
                                      std::size_t m_subspaces, const float* lut,
                                      std::size_t k_centroids, std::size_t k,
                                      const std::uint32_t* tie_rank) {
    return scan_parallel<DotHit>(n, k, DotBetter{tie_rank}, [&](std::size_t row) {
        return DotHit{static_cast<std::uint32_t>(row),
                      adc_score(codes + row * m_subspaces, m_subspaces, lut, k_centroids)};
    });
}

std::uint32_t assign_nearest(const float* v, const float* centroids, std::size_t k_centroids,
                             std::size_t d) {
    std::uint32_t best = 0;
    float best_dist = 0.f;
    for (std::size_t c = 0; c < k_centroids; ++c) {
        const float* cent = centroids + c * d;
        float dist = 0.f;
        for (std::size_t i = 0; i < d; ++i) {
            float diff = v[i] - cent[i];
            dist += diff * diff;
        }
        if (c == 0 || dist < best_dist) {
            best = static_cast<std::uint32_t>(c);
            best_dist = dist;
        }
    }
    return best;
}

void pack_signs(const float* v, std::size_t d, std::uint8_t* out) {
    std::size_t bytes = d / 8;
    for (std::size_t j = 0; j < bytes; ++j) {
        std::uint8_t byte = 0;
        for (std::size_t b = 0; b < 8; ++b) {
            if (v[j * 8 + b] >= 0.f) {  // sign(0) = +1
                byte |= static_cast<std::uint8_t>(1u << b);
            }
        }
        out[j] = byte;
    }
}

}  // namespace cdr::kernels
