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

#include "assesskit/platform/store.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "assesskit/common/status_macros.h"
#include "assesskit/common/strings.h"

namespace assesskit::platform {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

absl::Status ErrnoStatus(std::string_view what, const std::string& path) {
  return absl::InternalError(StrCat(what, " ", path, ": ", std::strerror(errno)));
}

uint32_t Crc(std::string_view text) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size())));
}

// Parses one framed line (without its newline); nullopt when damaged.
std::optional<json> Unframe(std::string_view line) {
  if (line.size() < 10 || line[8] != ' ') return std::nullopt;
  uint32_t expected = 0;
  for (int i = 0; i < 8; ++i) {
    const char c = line[i];
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else {
      return std::nullopt;
    }
    expected = expected * 16 + static_cast<uint32_t>(v);
  }
  const std::string_view body = line.substr(9);
  if (Crc(body) != expected) return std::nullopt;
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

absl::Status WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return absl::InternalError(StrCat("write failed: ", std::strerror(errno)));
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
  return absl::OkStatus();
}

}  // namespace

std::string FrameRecord(const std::string& record_text) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08x", Crc(record_text));
  return StrCat(buf, " ", record_text, "\n");
}

json ToJson(const EntityEnvelope& e) {
  return {{"entity_id", e.entity_id}, {"kind", e.kind},
          {"version", e.version},      {"payload", e.payload},
          {"created_ms", e.created_ms}, {"updated_ms", e.updated_ms}};
}

absl::StatusOr<EntityEnvelope> EnvelopeFromJson(const json& j) {
  try {
    EntityEnvelope e;
    e.entity_id = j.at("entity_id").get<std::string>();
    e.kind = j.at("kind").get<std::string>();
    e.version = j.at("version").get<int>();
    e.payload = j.at("payload");
    e.created_ms = j.at("created_ms").get<int64_t>();
    e.updated_ms = j.at("updated_ms").get<int64_t>();
    return e;
  } catch (const json::exception& ex) {
    return absl::InvalidArgumentError(StrCat("bad envelope: ", ex.what()));
  }
}

Mutation Mutation::Put(std::string id, std::string kind, json payload) {
  Mutation m;
  m.op = Op::kPut;
  m.entity_id = std::move(id);
  m.kind = std::move(kind);
  m.payload = std::move(payload);
  return m;
}

Mutation Mutation::Update(std::string id, int expected_version, json payload) {
  Mutation m;
  m.op = Op::kUpdate;
  m.entity_id = std::move(id);
  m.expected_version = expected_version;
  m.payload = std::move(payload);
  return m;
}

absl::StatusOr<std::unique_ptr<Store>> Store::Open(const std::string& dir,
                                                   const StoreOptions& options) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return absl::InternalError(StrCat("cannot create ", dir, ": ", ec.message()));
  std::unique_ptr<Store> store(new Store(dir, options));
  RETURN_IF_ERROR(store->Recover());
  return store;
}

Store::~Store() {
  if (fd_ >= 0) ::close(fd_);
}

// Record layout: {"seq", "ts", "mutations": [{"op":"put","id","kind","payload"} |
// {"op":"update","id","version","payload"}]} where version is the new one.
absl::Status Store::Apply(const json& record, bool validate_only,
                          std::map<std::string, EntityEnvelope>* target) const {
  try {
    const int64_t ts = record.at("ts").get<int64_t>();
    const json& muts = record.at("mutations");
    if (!muts.is_array() || muts.empty()) return absl::DataLossError("empty record");
    std::map<std::string, EntityEnvelope> staged;
    auto current = [&](const std::string& id) -> const EntityEnvelope* {
      if (auto it = staged.find(id); it != staged.end()) return &it->second;
      if (auto it = target->find(id); it != target->end()) return &it->second;
      return nullptr;
    };
    for (const json& m : muts) {
      const std::string op = m.at("op").get<std::string>();
      const std::string id = m.at("id").get<std::string>();
      if (op == "put") {
        if (current(id) != nullptr) {
          return absl::AlreadyExistsError(StrCat("entity id collision: ", id));
        }
        staged[id] = EntityEnvelope{id, m.at("kind").get<std::string>(), 1, m.at("payload"),
                                    ts, ts};
      } else if (op == "update") {
        const EntityEnvelope* cur = current(id);
        if (cur == nullptr) return absl::NotFoundError(StrCat("unknown entity: ", id));
        const int version = m.at("version").get<int>();
        if (version != cur->version + 1) {
          return absl::AbortedError(StrCat("stale version for ", id, ": expected ",
                                           version - 1, ", current ", cur->version));
        }
        EntityEnvelope next = *cur;
        next.version = version;
        next.payload = m.at("payload");
        next.updated_ms = ts;
        staged[id] = std::move(next);
      } else {
        return absl::DataLossError(StrCat("unknown op ", op));
      }
    }
    if (!validate_only) {
      for (auto& [id, e] : staged) (*target)[id] = std::move(e);
    }
    return absl::OkStatus();
  } catch (const json::exception& ex) {
    return absl::DataLossError(StrCat("malformed record: ", ex.what()));
  }
}

absl::Status Store::Recover() {
  const std::string log_path = (fs::path(dir_) / kLogFile).string();
  const std::string snap_path = (fs::path(dir_) / kSnapshotFile).string();
  std::string log;
  {
    std::ifstream in(log_path, std::ios::binary);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      log = ss.str();
    }
  }

  uint64_t offset = 0;
  {
    std::ifstream in(snap_path, std::ios::binary);
    if (in) {
      std::string line;
      std::getline(in, line);
      std::optional<json> snap = Unframe(line);
      bool usable = snap.has_value();
      std::map<std::string, EntityEnvelope> loaded;
      uint64_t snap_offset = 0, snap_seq = 0;
      if (usable) {
        try {
          snap_offset = snap->at("log_offset").get<uint64_t>();
          snap_seq = snap->at("sequence").get<uint64_t>();
          for (const json& e : snap->at("entities")) {
            auto env = EnvelopeFromJson(e);
            if (!env.ok()) {
              usable = false;
              break;
            }
            loaded[env->entity_id] = *std::move(env);
          }
        } catch (const json::exception&) {
          usable = false;
        }
      }
      // The snapshot must end on a record boundary inside the log.
      if (usable && snap_offset <= log.size() &&
          (snap_offset == 0 || log[snap_offset - 1] == '\n')) {
        entities_ = std::move(loaded);
        offset = snap_offset;
        sequence_ = snap_seq;
        recovery_.snapshot_loaded = true;
      }
    }
  }

  while (offset < log.size()) {
    const size_t nl = log.find('\n', offset);
    if (nl == std::string::npos) {
      recovery_.corrupt_offset = offset;
      recovery_.detail = "truncated final record";
      break;
    }
    std::optional<json> record = Unframe(std::string_view(log).substr(offset, nl - offset));
    if (!record.has_value()) {
      recovery_.corrupt_offset = offset;
      recovery_.detail = "checksum or syntax error";
      break;
    }
    const uint64_t seq = record->value("seq", uint64_t{0});
    if (seq != sequence_ + 1) {
      recovery_.corrupt_offset = offset;
      recovery_.detail = StrCat("sequence gap at record ", seq);
      break;
    }
    if (absl::Status s = Apply(*record, false, &entities_); !s.ok()) {
      recovery_.corrupt_offset = offset;
      recovery_.detail = std::string(s.message());
      break;
    }
    sequence_ = seq;
    ++recovery_.records_replayed;
    offset = nl + 1;
  }

  fd_ = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) return ErrnoStatus("cannot open", log_path);
  if (offset < log.size()) {
    if (::ftruncate(fd_, static_cast<off_t>(offset)) != 0) {
      return ErrnoStatus("cannot truncate", log_path);
    }
  }
  log_size_ = offset;
  since_snapshot_ = recovery_.records_replayed;
  return absl::OkStatus();
}

absl::StatusOr<EntityEnvelope> Store::Put(const std::string& entity_id, const std::string& kind,
                                          json payload, int64_t now_ms) {
  ASSIGN_OR_RETURN(auto out,
                   Commit({Mutation::Put(entity_id, kind, std::move(payload))}, now_ms));
  return out.front();
}

absl::StatusOr<EntityEnvelope> Store::Update(const std::string& entity_id, int expected_version,
                                             json payload, int64_t now_ms) {
  ASSIGN_OR_RETURN(auto out, Commit({Mutation::Update(entity_id, expected_version,
                                                      std::move(payload))},
                                    now_ms));
  return out.front();
}

absl::StatusOr<std::vector<EntityEnvelope>> Store::Commit(const std::vector<Mutation>& mutations,
                                                          int64_t now_ms) {
  if (mutations.empty()) return absl::InvalidArgumentError("empty commit");
  std::lock_guard<std::mutex> lock(mu_);
  json record = {{"seq", sequence_ + 1}, {"ts", now_ms}, {"mutations", json::array()}};
  std::map<std::string, int> versions;
  for (const Mutation& m : mutations) {
    if (m.entity_id.empty()) return absl::InvalidArgumentError("empty entity id");
    if (m.op == Mutation::Op::kPut) {
      if (m.kind.empty()) return absl::InvalidArgumentError("empty entity kind");
      record["mutations"].push_back(
          {{"op", "put"}, {"id", m.entity_id}, {"kind", m.kind}, {"payload", m.payload}});
      versions[m.entity_id] = 1;
    } else {
      record["mutations"].push_back({{"op", "update"},
                                     {"id", m.entity_id},
                                     {"version", m.expected_version + 1},
                                     {"payload", m.payload}});
      versions[m.entity_id] = m.expected_version + 1;
    }
  }
  RETURN_IF_ERROR(Apply(record, true, &entities_));

  const std::string line = FrameRecord(record.dump());
  if (absl::Status s = WriteAll(fd_, line); !s.ok()) {
    // Drop whatever part of the record reached the file.
    if (::ftruncate(fd_, static_cast<off_t>(log_size_)) != 0) {
      return ErrnoStatus("cannot roll back", dir_);
    }
    return s;
  }
  if (options_.fsync && ::fdatasync(fd_) != 0) return ErrnoStatus("fdatasync", dir_);
  log_size_ += line.size();
  ++sequence_;
  RETURN_IF_ERROR(Apply(record, false, &entities_));

  std::vector<EntityEnvelope> out;
  for (const Mutation& m : mutations) out.push_back(entities_.at(m.entity_id));
  if (options_.snapshot_every > 0 &&
      ++since_snapshot_ >= static_cast<uint64_t>(options_.snapshot_every)) {
    RETURN_IF_ERROR(WriteSnapshotLocked());
  }
  return out;
}

absl::Status Store::WriteSnapshot() {
  std::lock_guard<std::mutex> lock(mu_);
  return WriteSnapshotLocked();
}

absl::Status Store::WriteSnapshotLocked() {
  json snap = {{"format", 1},
               {"log_offset", log_size_},
               {"sequence", sequence_},
               {"entities", json::array()}};
  for (const auto& [id, e] : entities_) snap["entities"].push_back(ToJson(e));
  const std::string final_path = (fs::path(dir_) / kSnapshotFile).string();
  const std::string tmp_path = final_path + ".tmp";
  const int fd = ::open(tmp_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) return ErrnoStatus("cannot open", tmp_path);
  absl::Status s = WriteAll(fd, FrameRecord(snap.dump()));
  if (s.ok() && options_.fsync && ::fsync(fd) != 0) s = ErrnoStatus("fsync", tmp_path);
  ::close(fd);
  if (!s.ok()) return s;
  if (std::rename(tmp_path.c_str(), final_path.c_str()) != 0) {
    return ErrnoStatus("cannot rename", tmp_path);
  }
  since_snapshot_ = 0;
  return absl::OkStatus();
}

absl::StatusOr<EntityEnvelope> Store::Get(const std::string& entity_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entities_.find(entity_id);
  if (it == entities_.end()) return absl::NotFoundError(StrCat("unknown entity: ", entity_id));
  return it->second;
}

std::vector<EntityEnvelope> Store::List(const std::string& kind, const std::string& after,
                                        size_t limit) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<EntityEnvelope> out;
  for (auto it = entities_.upper_bound(after); it != entities_.end(); ++it) {
    if (it->second.kind != kind) continue;
    out.push_back(it->second);
    if (limit > 0 && out.size() >= limit) break;
  }
  return out;
}

size_t Store::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entities_.size();
}

uint64_t Store::sequence() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sequence_;
}

}  // namespace assesskit::platform
