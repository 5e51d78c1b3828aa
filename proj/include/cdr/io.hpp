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
#include <iosfwd>
#include <string>
#include <vector>

#include "cdr/types.hpp"

namespace cdr {

/// Embedding file layout ("EMB1"):
///   magic "EMB1" | u32 n | u32 d | u8 dtype (0 = f32)
///   id block: n newline-terminated UTF-8 ids
///   payload: n*d little-endian f32
///
/// Self-describing and streamable; payload size is n*d*4 bytes exactly.
EmbeddingMatrix read_embeddings(const std::string& path);
IndexManifest write_embeddings(const EmbeddingMatrix& m, const std::string& path,
                               std::uint64_t seed = 0);

/// Qrels input: BEIR 3-column TSV with a header line, or 4-column TREC
/// (qid iter did grade). Duplicated (qid, did) pairs are rejected.
Qrels read_qrels(const std::string& path);

/// TREC 6-column run format: "qid Q0 did rank score tag".
void write_run(const RunResult& run, const std::string& path, const std::string& tag = "cdr");
RunResult read_run(const std::string& path);

struct CorpusDoc {
    std::string id;
    std::string title;
    std::string text;
};

/// BEIR-style JSON-lines corpus/queries: {"_id", "title", "text"} per line.
std::vector<CorpusDoc> read_corpus_jsonl(const std::string& path);

/// Manifest sidecars live at "<artifact>.manifest.json".
std::string manifest_path(const std::string& artifact_path);
void write_manifest(const IndexManifest& manifest, const std::string& artifact_path);
IndexManifest read_manifest(const std::string& artifact_path);

// Low-level binary helpers shared by the index formats.
namespace detail {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u8(std::ostream& out, std::uint8_t v);
void write_f32(std::ostream& out, float v);
void write_f64(std::ostream& out, double v);
void write_bytes(std::ostream& out, const void* p, std::size_t count);
std::uint32_t read_u32(std::istream& in, const std::string& what);
std::uint8_t read_u8(std::istream& in, const std::string& what);
float read_f32(std::istream& in, const std::string& what);
double read_f64(std::istream& in, const std::string& what);
void read_bytes(std::istream& in, void* p, std::size_t count, const std::string& what);
void expect_magic(std::istream& in, const char magic[4], const std::string& path);
void write_id_block(std::ostream& out, const std::vector<std::string>& ids);
std::vector<std::string> read_id_block(std::istream& in, std::size_t n, const std::string& path);
std::uint64_t file_size(const std::string& path);
}  // namespace detail

/// Shortest round-trip decimal rendering (deterministic across runs).
std::string format_double(double v);
/// Fixed two-decimal megabyte rendering used by the size tables.
std::string format_mb(std::uint64_t bytes);

}  // namespace cdr
