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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace cdr {

/// Row-major n x d table of float32 vectors with one external string id per
/// row. The universal exchange type: every index and trainer consumes one.
struct EmbeddingMatrix {
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    std::vector<std::string> ids;  // ids[i] names row i; unique
    std::vector<float> data;       // n * d floats, all finite

    std::span<const float> row(std::size_t i) const {
        return std::span<const float>(data.data() + i * d, d);
    }
    std::span<float> row(std::size_t i) {
        return std::span<float>(data.data() + i * d, d);
    }

    /// Throws if sizes disagree, ids repeat, or any value is non-finite.
    void validate() const;

    /// Row index of `id`, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const std::string& id) const;
};

/// Graded relevance judgments: (query-id, doc-id) -> grade >= 0.
struct Qrels {
    std::map<std::string, std::map<std::string, int>> judgments;

    bool empty() const { return judgments.empty(); }
    int grade(const std::string& qid, const std::string& did) const;
};

struct RunEntry {
    std::string doc_id;
    double score = 0.0;
};

/// Ranked retrieval output, per query, scores non-increasing.
struct RunResult {
    std::map<std::string, std::vector<RunEntry>> by_query;

    void validate() const;  // monotone scores, no duplicate doc ids
};

/// Sidecar record describing an index artifact. `size_bytes` is the byte
/// count of the whole file; `payload_bytes` counts only the vector payload
/// (codes, packed bits, raw floats), which is what the size tables report.
struct IndexManifest {
    std::string index_kind;  // flat-f32 | flat-fp16 | flat-fp8 | pca | pq | binary | jpq
    std::uint32_t dim = 0;
    nlohmann::json compression_params = nlohmann::json::object();
    std::uint64_t size_bytes = 0;
    std::uint64_t payload_bytes = 0;
    std::uint64_t created_with_seed = 0;
    std::string command;                             // producing CLI command, if any
    nlohmann::json config = nlohmann::json::object();  // resolved config echo

    nlohmann::json to_json() const;
    static IndexManifest from_json(const nlohmann::json& j);
};

}  // namespace cdr
