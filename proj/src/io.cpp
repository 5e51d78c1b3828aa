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

#include "cdr/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cdr/error.hpp"

namespace cdr {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian; big-endian hosts are unsupported");

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UsageError: return "UsageError";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::MalformedLine: return "MalformedLine";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFiniteValue: return "NonFiniteValue";
        case ErrorKind::DuplicateId: return "DuplicateId";
        case ErrorKind::IoFailure: return "IoFailure";
        case ErrorKind::OverflowToInfinity: return "OverflowToInfinity";
        case ErrorKind::NotDivisible: return "NotDivisible";
        case ErrorKind::TooFewTrainingPoints: return "TooFewTrainingPoints";
        case ErrorKind::DimensionNotByteAligned: return "DimensionNotByteAligned";
        case ErrorKind::EmptyIndex: return "EmptyIndex";
        case ErrorKind::UnknownCandidateId: return "UnknownCandidateId";
        case ErrorKind::NormalizationOfZero: return "NormalizationOfZero";
        case ErrorKind::MissingMarginLabel: return "MissingMarginLabel";
        case ErrorKind::DivergedLoss: return "DivergedLoss";
        case ErrorKind::UnknownPassageId: return "UnknownPassageId";
        case ErrorKind::NotEnoughCandidates: return "NotEnoughCandidates";
        case ErrorKind::MissingScore: return "MissingScore";
        case ErrorKind::EmptyPassage: return "EmptyPassage";
        case ErrorKind::EmptyQrels: return "EmptyQrels";
        case ErrorKind::EmptyQuerySet: return "EmptyQuerySet";
        case ErrorKind::Internal: return "InternalError";
    }
    return "InternalError";
}

int error_exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UsageError: return 2;
        case ErrorKind::Internal: return 4;
        default: return 3;  // data errors
    }
}

void EmbeddingMatrix::validate() const {
    require(data.size() == static_cast<std::size_t>(n) * d, ErrorKind::DimensionMismatch,
            "embedding data length " + std::to_string(data.size()) + " != n*d = " +
                std::to_string(static_cast<std::size_t>(n) * d));
    require(ids.size() == n, ErrorKind::DimensionMismatch,
            "id count " + std::to_string(ids.size()) + " != n = " + std::to_string(n));
    std::set<std::string> seen;
    for (const auto& id : ids) {
        require(!id.empty(), ErrorKind::DuplicateId, "empty id");
        require(id.find('\n') == std::string::npos, ErrorKind::DuplicateId,
                "id contains newline: " + id);
        require(seen.insert(id).second, ErrorKind::DuplicateId, "duplicate id: " + id);
    }
    for (float v : data) {
        require(std::isfinite(v), ErrorKind::NonFiniteValue, "non-finite embedding value");
    }
}

std::size_t EmbeddingMatrix::find(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return i;
    }
    return npos;
}

int Qrels::grade(const std::string& qid, const std::string& did) const {
    auto q = judgments.find(qid);
    if (q == judgments.end()) return 0;
    auto d = q->second.find(did);
    return d == q->second.end() ? 0 : d->second;
}

void RunResult::validate() const {
    for (const auto& [qid, entries] : by_query) {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            require(seen.insert(entries[i].doc_id).second, ErrorKind::DuplicateId,
                    "duplicate doc in run for query " + qid + ": " + entries[i].doc_id);
            if (i > 0) {
                require(entries[i].score <= entries[i - 1].score, ErrorKind::MalformedLine,
                        "run scores increase within query " + qid);
            }
        }
    }
}

nlohmann::json IndexManifest::to_json() const {
    return nlohmann::json{
        {"index_kind", index_kind},
        {"dim", dim},
        {"compression_params", compression_params},
        {"size_bytes", size_bytes},
        {"payload_bytes", payload_bytes},
        {"created_with_seed", created_with_seed},
        {"command", command},
        {"config", config},
    };
}

IndexManifest IndexManifest::from_json(const nlohmann::json& j) {
    IndexManifest m;
    m.index_kind = j.at("index_kind").get<std::string>();
    m.dim = j.at("dim").get<std::uint32_t>();
    m.compression_params = j.value("compression_params", nlohmann::json::object());
    m.size_bytes = j.at("size_bytes").get<std::uint64_t>();
    m.payload_bytes = j.value("payload_bytes", std::uint64_t{0});
    m.created_with_seed = j.value("created_with_seed", std::uint64_t{0});
    m.command = j.value("command", std::string{});
    m.config = j.value("config", nlohmann::json::object());
    return m;
}

namespace detail {

void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, 4); }
void write_u8(std::ostream& out, std::uint8_t v) { write_bytes(out, &v, 1); }
void write_f32(std::ostream& out, float v) { write_bytes(out, &v, 4); }
void write_f64(std::ostream& out, double v) { write_bytes(out, &v, 8); }

void write_bytes(std::ostream& out, const void* p, std::size_t count) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(count));
    require(out.good(), ErrorKind::IoFailure, "short write");
}

void read_bytes(std::istream& in, void* p, std::size_t count, const std::string& what) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(count));
    require(in.gcount() == static_cast<std::streamsize>(count), ErrorKind::MalformedHeader,
            "truncated file while reading " + what);
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
    std::uint32_t v;
    read_bytes(in, &v, 4, what);
    return v;
}

std::uint8_t read_u8(std::istream& in, const std::string& what) {
    std::uint8_t v;
    read_bytes(in, &v, 1, what);
    return v;
}

float read_f32(std::istream& in, const std::string& what) {
    float v;
    read_bytes(in, &v, 4, what);
    return v;
}

double read_f64(std::istream& in, const std::string& what) {
    double v;
    read_bytes(in, &v, 8, what);
    return v;
}

void expect_magic(std::istream& in, const char magic[4], const std::string& path) {
    char got[4];
    in.read(got, 4);
    require(in.gcount() == 4 && std::memcmp(got, magic, 4) == 0, ErrorKind::MalformedHeader,
            path + ": expected magic \"" + std::string(magic, 4) + "\"");
}

void write_id_block(std::ostream& out, const std::vector<std::string>& ids) {
    for (const auto& id : ids) {
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        out.put('\n');
    }
    require(out.good(), ErrorKind::IoFailure, "short write in id block");
}

std::vector<std::string> read_id_block(std::istream& in, std::size_t n, const std::string& path) {
    std::vector<std::string> ids;
    ids.reserve(n);
    std::string line;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            raise(ErrorKind::MalformedHeader,
                  path + ": id block ends after " + std::to_string(i) + " of " +
                      std::to_string(n) + " ids");
        }
        ids.push_back(line);
    }
    return ids;
}

std::uint64_t file_size(const std::string& path) {
    std::error_code ec;
    auto size = std::filesystem::file_size(path, ec);
    require(!ec, ErrorKind::IoFailure, "cannot stat " + path);
    return static_cast<std::uint64_t>(size);
}

}  // namespace detail

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_mb(std::uint64_t bytes) {
    double mb = static_cast<double>(bytes) / 1e6;  // decimal megabytes
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), mb, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr) + " MB";
}

EmbeddingMatrix read_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.is_open(), ErrorKind::IoFailure, "cannot open " + path);
    detail::expect_magic(in, "EMB1", path);
    EmbeddingMatrix m;
    m.n = detail::read_u32(in, "n");
    m.d = detail::read_u32(in, "d");
    std::uint8_t dtype = detail::read_u8(in, "dtype");
    require(dtype == 0, ErrorKind::MalformedHeader,
            path + ": unsupported dtype code " + std::to_string(dtype));
    require(m.d > 0, ErrorKind::MalformedHeader, path + ": dimension must be positive");
    m.ids = detail::read_id_block(in, m.n, path);

    std::size_t expected = static_cast<std::size_t>(m.n) * m.d;
    m.data.resize(expected);
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(expected * sizeof(float)));
    std::size_t got_floats = static_cast<std::size_t>(in.gcount()) / sizeof(float);
    bool tail_ok = static_cast<std::size_t>(in.gcount()) % sizeof(float) == 0;
    // any trailing bytes mean the declared n*d disagrees with the payload
    if (got_floats == expected && tail_ok) {
        char extra;
        if (in.read(&extra, 1)) {
            raise(ErrorKind::DimensionMismatch,
                  path + ": payload longer than declared " + std::to_string(m.n) + "x" +
                      std::to_string(m.d));
        }
    } else {
        raise(ErrorKind::DimensionMismatch,
              path + ": payload holds " + std::to_string(got_floats) + " floats, declared " +
                  std::to_string(expected));
    }
    m.validate();
    return m;
}

IndexManifest write_embeddings(const EmbeddingMatrix& m, const std::string& path,
                               std::uint64_t seed) {
    m.validate();
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        require(out.is_open(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
        out.write("EMB1", 4);
        detail::write_u32(out, m.n);
        detail::write_u32(out, m.d);
        detail::write_u8(out, 0);
        detail::write_id_block(out, m.ids);
        detail::write_bytes(out, m.data.data(), m.data.size() * sizeof(float));
    }
    IndexManifest manifest;
    manifest.index_kind = "flat-f32";
    manifest.dim = m.d;
    manifest.size_bytes = detail::file_size(path);
    manifest.payload_bytes = static_cast<std::uint64_t>(m.n) * m.d * 4;
    manifest.created_with_seed = seed;
    return manifest;
}

namespace {

// One judgment per line; fails with the 1-based line number on bad input.
void insert_judgment(Qrels& q, const std::string& qid, const std::string& did, int grade,
                     std::size_t line_no) {
    require(grade >= 0, ErrorKind::MalformedLine,
            "line " + std::to_string(line_no) + ": negative relevance grade");
    auto [it, inserted] = q.judgments[qid].emplace(did, grade);
    (void)it;
    require(inserted, ErrorKind::MalformedLine,
            "line " + std::to_string(line_no) + ": duplicate judgment (" + qid + ", " + did + ")");
}

int parse_grade(const std::string& s, std::size_t line_no) {
    int grade = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), grade);
    require(res.ec == std::errc{} && res.ptr == s.data() + s.size(), ErrorKind::MalformedLine,
            "line " + std::to_string(line_no) + ": bad relevance grade \"" + s + "\"");
    return grade;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) fields.push_back(tok);
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

Qrels read_qrels(const std::string& path) {
    std::ifstream in(path);
    require(in.is_open(), ErrorKind::IoFailure, "cannot open " + path);
    std::string line;
    Qrels q;
    std::size_t line_no = 0;
    bool format_known = false;
    bool tsv = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        if (!format_known) {
            auto tabs = split_tabs(line);
            auto ws = split_ws(line);
            if (tabs.size() == 3) {
                tsv = true;  // BEIR TSV, first line is the header
                format_known = true;
                continue;
            }
            if (ws.size() == 4) {
                tsv = false;
                format_known = true;
                insert_judgment(q, ws[0], ws[2], parse_grade(ws[3], line_no), line_no);
                continue;
            }
            raise(ErrorKind::MalformedLine,
                  "line " + std::to_string(line_no) + ": unknown qrels format in " + path);
        }
        if (tsv) {
            auto fields = split_tabs(line);
            require(fields.size() == 3, ErrorKind::MalformedLine,
                    "line " + std::to_string(line_no) + ": expected 3 tab-separated columns");
            insert_judgment(q, fields[0], fields[1], parse_grade(fields[2], line_no), line_no);
        } else {
            auto fields = split_ws(line);
            require(fields.size() == 4, ErrorKind::MalformedLine,
                    "line " + std::to_string(line_no) + ": expected 4 columns (TREC qrels)");
            insert_judgment(q, fields[0], fields[2], parse_grade(fields[3], line_no), line_no);
        }
    }
    return q;
}

void write_run(const RunResult& run, const std::string& path, const std::string& tag) {
    run.validate();
    std::ofstream out(path, std::ios::trunc);
    require(out.is_open(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
    for (const auto& [qid, entries] : run.by_query) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            out << qid << " Q0 " << entries[i].doc_id << ' ' << (i + 1) << ' '
                << format_double(entries[i].score) << ' ' << tag << '\n';
        }
    }
    require(out.good(), ErrorKind::IoFailure, "short write to " + path);
}

RunResult read_run(const std::string& path) {
    std::ifstream in(path);
    require(in.is_open(), ErrorKind::IoFailure, "cannot open " + path);
    RunResult run;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_ws(line);
        require(fields.size() == 6, ErrorKind::MalformedLine,
                "line " + std::to_string(line_no) + ": expected 6 columns (TREC run)");
        double score = 0.0;
        auto res = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), score);
        require(res.ec == std::errc{}, ErrorKind::MalformedLine,
                "line " + std::to_string(line_no) + ": bad score \"" + fields[4] + "\"");
        run.by_query[fields[0]].push_back(RunEntry{fields[2], score});
    }
    run.validate();
    return run;
}

std::vector<CorpusDoc> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    require(in.is_open(), ErrorKind::IoFailure, "cannot open " + path);
    std::vector<CorpusDoc> docs;
    std::string line;
    std::size_t line_no = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        require(!j.is_discarded() && j.contains("_id"), ErrorKind::MalformedLine,
                "line " + std::to_string(line_no) + ": bad corpus record in " + path);
        CorpusDoc doc;
        doc.id = j.at("_id").get<std::string>();
        doc.title = j.value("title", std::string{});
        doc.text = j.value("text", std::string{});
        require(seen.insert(doc.id).second, ErrorKind::DuplicateId,
                "line " + std::to_string(line_no) + ": duplicate _id " + doc.id);
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::string manifest_path(const std::string& artifact_path) {
    return artifact_path + ".manifest.json";
}

void write_manifest(const IndexManifest& manifest, const std::string& artifact_path) {
    std::ofstream out(manifest_path(artifact_path), std::ios::trunc);
    require(out.is_open(), ErrorKind::IoFailure,
            "cannot open " + manifest_path(artifact_path) + " for writing");
    out << manifest.to_json().dump(2) << '\n';
    require(out.good(), ErrorKind::IoFailure, "short write");
}

IndexManifest read_manifest(const std::string& artifact_path) {
    std::ifstream in(manifest_path(artifact_path));
    require(in.is_open(), ErrorKind::IoFailure, "cannot open " + manifest_path(artifact_path));
    nlohmann::json j;
    in >> j;
    return IndexManifest::from_json(j);
}

}  // namespace cdr
