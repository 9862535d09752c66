/*
 * Copyright 2026 The AssessKit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "assesskit/plagiarism/detector.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <tuple>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"
#include "assesskit/text/corpus.h"

namespace assesskit::plagiarism {

using nlohmann::json;

std::string_view SourceClassName(SourceClass c) {
  return c == SourceClass::kInternet ? "internet" : "historical";
}

std::string_view ClassificationName(Classification c) {
  return c == Classification::kSuspect ? "suspect" : "benign";
}

absl::StatusOr<std::vector<SourceDocument>> ParseSourceDocuments(std::string_view jsonl) {
  std::vector<SourceDocument> docs;
  size_t line_no = 0;
  for (std::string_view line : Split(jsonl, '\n')) {
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    json obj = json::parse(line.begin(), line.end(), nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("doc_id") ||
        !obj["doc_id"].is_string() || !obj.contains("text") || !obj["text"].is_string()) {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": expected {\"doc_id\",\"source_class\",\"text\"}"));
    }
    SourceDocument doc;
    doc.doc_id = obj["doc_id"].get<std::string>();
    doc.text = obj["text"].get<std::string>();
    const std::string cls = obj.value("source_class", "internet");
    if (cls == "internet") {
      doc.source_class = SourceClass::kInternet;
    } else if (cls == "historical") {
      doc.source_class = SourceClass::kHistorical;
    } else {
      return absl::InvalidArgumentError(
          StrCat("line ", line_no, ": unknown source_class '", cls, "'"));
    }
    doc.session_id = obj.value("session_id", "");
    docs.push_back(std::move(doc));
  }
  return docs;
}

absl::StatusOr<std::vector<SourceDocument>> LoadSourceDocuments(const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<SourceDocument> docs;
    for (const auto& file : files) {
      ASSIGN_OR_RETURN(std::string content, text::ReadFile(file.string()));
      docs.push_back({file.filename().string(), SourceClass::kInternet, "", std::move(content)});
    }
    return docs;
  }
  ASSIGN_OR_RETURN(std::string content, text::ReadFile(path));
  return ParseSourceDocuments(content);
}

absl::StatusOr<std::shared_ptr<const DocumentIndex>> DocumentIndex::Build(
    std::vector<SourceDocument> documents, const WinnowParams& params) {
  RETURN_IF_ERROR(params.Validate());
  std::shared_ptr<DocumentIndex> index(new DocumentIndex());
  index->params_ = params;
  for (size_t i = 0; i < documents.size(); ++i) {
    if (!index->by_id_.emplace(documents[i].doc_id, static_cast<int>(i)).second) {
      return absl::AlreadyExistsError(
          StrCat("duplicate document id '", documents[i].doc_id, "'"));
    }
  }
  index->documents_ = std::move(documents);
  index->normalized_.reserve(index->documents_.size());
  for (size_t i = 0; i < index->documents_.size(); ++i) {
    index->normalized_.push_back(Normalize(index->documents_[i].text));
    for (const Fingerprint& fp : FingerprintNormalized(index->normalized_[i], params)) {
      index->postings_[fp.hash].push_back(
          {static_cast<uint32_t>(i), static_cast<uint32_t>(fp.position)});
    }
  }
  return std::shared_ptr<const DocumentIndex>(std::move(index));
}

int DocumentIndex::Find(std::string_view doc_id) const {
  auto it = by_id_.find(std::string(doc_id));
  return it == by_id_.end() ? -1 : it->second;
}

const std::vector<Posting>* DocumentIndex::Lookup(uint64_t hash) const {
  auto it = postings_.find(hash);
  return it == postings_.end() ? nullptr : &it->second;
}

absl::StatusOr<std::vector<MatchSpan>> Scan(const DocumentIndex& index,
                                            std::string_view response,
                                            const WinnowParams& params) {
  if (!(params == index.params())) {
    return absl::InvalidArgumentError(
        StrCat("scan parameters k=", params.k, " w=", params.w,
               " differ from the index (k=", index.params().k,
               " w=", index.params().w, ")"));
  }
  const NormalizedText norm = Normalize(response);
  const std::string_view r = norm.text;
  const size_t k = static_cast<size_t>(params.k);
  // (doc, response_begin, response_end, source_begin, source_end)
  std::set<std::tuple<uint32_t, size_t, size_t, size_t, size_t>> found;
  for (const Fingerprint& fp : FingerprintNormalized(norm, params)) {
    const std::vector<Posting>* postings = index.Lookup(fp.hash);
    if (postings == nullptr) continue;
    for (const Posting& p : *postings) {
      const std::string_view s = index.normalized(p.doc).text;
      size_t rb = fp.position, sb = p.position;
      if (r.substr(rb, k) != s.substr(sb, k)) continue;  // hash collision
      size_t re = rb + k, se = sb + k;
      while (rb > 0 && sb > 0 && r[rb - 1] == s[sb - 1]) --rb, --sb;
      while (re < r.size() && se < s.size() && r[re] == s[se]) ++re, ++se;
      found.emplace(p.doc, rb, re, sb, se);
    }
  }
  std::vector<MatchSpan> spans;
  for (const auto& [doc, rb, re, sb, se] : found) {
    MatchSpan span;
    span.doc_id = index.document(doc).doc_id;
    span.response_begin = rb;
    span.response_end = re;
    span.source_begin = sb;
    span.source_end = se;
    std::tie(span.response_char_begin, span.response_char_end) = norm.SourceRange(rb, re);
    std::tie(span.source_char_begin, span.source_char_end) =
        index.normalized(doc).SourceRange(sb, se);
    spans.push_back(std::move(span));
  }
  std::sort(spans.begin(), spans.end(), [](const MatchSpan& a, const MatchSpan& b) {
    return std::tie(a.doc_id, a.response_begin, a.source_begin) <
           std::tie(b.doc_id, b.response_begin, b.source_begin);
  });
  // Drop spans whose response range lies inside another span of the same
  // document (repeated source text produces such echoes).
  std::vector<MatchSpan> kept;
  for (size_t i = 0; i < spans.size(); ++i) {
    bool contained = false;
    for (size_t j = 0; j < spans.size() && !contained; ++j) {
      if (i == j || spans[i].doc_id != spans[j].doc_id) continue;
      const bool inside = spans[j].response_begin <= spans[i].response_begin &&
                          spans[i].response_end <= spans[j].response_end;
      const bool same_range = spans[j].response_begin == spans[i].response_begin &&
                              spans[j].response_end == spans[i].response_end;
      // Among identical ranges keep the first (smallest source offset).
      contained = inside && (!same_range || j < i);
    }
    if (!contained) kept.push_back(spans[i]);
  }
  return kept;
}

PlagiarismFlag Classify(std::string response_id, std::string_view response,
                        std::vector<MatchSpan> spans, double threshold) {
  PlagiarismFlag flag;
  flag.response_id = std::move(response_id);
  flag.response_text = std::string(response);
  flag.threshold = threshold;
  const NormalizedText norm = Normalize(response);
  std::vector<std::pair<size_t, size_t>> ranges;
  for (const auto& s : spans) ranges.emplace_back(s.response_begin, s.response_end);
  std::sort(ranges.begin(), ranges.end());
  std::vector<std::pair<size_t, size_t>> merged;
  for (const auto& range : ranges) {
    if (!merged.empty() && range.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, range.second);
    } else {
      merged.push_back(range);
    }
  }
  size_t covered = 0;
  for (const auto& [b, e] : merged) {
    covered += e - b;
    if (e <= norm.text.size() && b < e) flag.covered_ranges.push_back(norm.SourceRange(b, e));
  }
  flag.coverage = norm.text.empty()
                      ? 0.0
                      : static_cast<double>(covered) / static_cast<double>(norm.text.size());
  flag.coverage = std::min(1.0, flag.coverage);
  flag.classification =
      flag.coverage >= threshold ? Classification::kSuspect : Classification::kBenign;
  flag.spans = std::move(spans);
  return flag;
}

std::vector<SourceHighlights> RenderHighlights(const PlagiarismFlag& flag,
                                               const DocumentIndex& index) {
  std::map<std::string, SourceHighlights> by_doc;
  for (const auto& span : flag.spans) {
    SourceHighlights& h = by_doc[span.doc_id];
    if (h.doc_id.empty()) {
      h.doc_id = span.doc_id;
      const int doc = index.Find(span.doc_id);
      h.available = doc >= 0;
      if (h.available) {
        h.source_class = index.document(doc).source_class;
        h.session_id = index.document(doc).session_id;
        h.source_text = index.document(doc).text;
      }
    }
    HighlightSpan hs;
    hs.response_begin = span.response_char_begin;
    hs.response_end = span.response_char_end;
    if (h.available) {
      hs.source_begin = span.source_char_begin;
      hs.source_end = span.source_char_end;
    }
    hs.length = span.length();
    h.spans.push_back(hs);
  }
  std::vector<SourceHighlights> out;
  for (auto& [id, h] : by_doc) {
    std::stable_sort(h.spans.begin(), h.spans.end(),
                     [](const HighlightSpan& a, const HighlightSpan& b) {
                       return a.length > b.length;
                     });
    out.push_back(std::move(h));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SourceHighlights& a, const SourceHighlights& b) {
                     return a.spans.front().length > b.spans.front().length;
                   });
  return out;
}

json ToJson(const MatchSpan& span) {
  return {{"doc_id", span.doc_id},
          {"response_range", {span.response_char_begin, span.response_char_end}},
          {"source_range", {span.source_char_begin, span.source_char_end}},
          {"normalized_response_range", {span.response_begin, span.response_end}},
          {"normalized_source_range", {span.source_begin, span.source_end}},
          {"length", span.length()}};
}

json ToJson(const PlagiarismFlag& flag) {
  json spans = json::array();
  for (const auto& s : flag.spans) spans.push_back(ToJson(s));
  json covered = json::array();
  for (const auto& [b, e] : flag.covered_ranges) covered.push_back({b, e});
  return {{"response_id", flag.response_id},
          {"spans", std::move(spans)},
          {"covered_ranges", std::move(covered)},
          {"coverage", flag.coverage},
          {"threshold", flag.threshold},
          {"classification", ClassificationName(flag.classification)}};
}

json ToJson(const std::vector<SourceHighlights>& highlights) {
  json out = json::array();
  for (const auto& h : highlights) {
    json spans = json::array();
    for (const auto& s : h.spans) {
      json span = {{"response_range", {s.response_begin, s.response_end}},
                   {"length", s.length}};
      if (h.available) span["source_range"] = {s.source_begin, s.source_end};
      spans.push_back(std::move(span));
    }
    json entry = {{"doc_id", h.doc_id}, {"available", h.available}, {"spans", std::move(spans)}};
    if (h.available) {
      entry["source_class"] = SourceClassName(h.source_class);
      entry["session_id"] = h.session_id;
      entry["source_text"] = h.source_text;
    } else {
      entry["marker"] = "source unavailable";
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace assesskit::plagiarism
