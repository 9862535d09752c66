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

#ifndef ASSESSKIT_PLATFORM_STORE_H_
#define ASSESSKIT_PLATFORM_STORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace assesskit::platform {

struct EntityEnvelope {
  std::string entity_id;
  std::string kind;
  int version = 1;
  nlohmann::json payload;
  int64_t created_ms = 0;
  int64_t updated_ms = 0;
  bool operator==(const EntityEnvelope&) const = default;
};

nlohmann::json ToJson(const EntityEnvelope& envelope);
absl::StatusOr<EntityEnvelope> EnvelopeFromJson(const nlohmann::json& j);

// One change inside an atomic commit. A put creates the entity at version 1;
// an update replaces the payload of an existing entity whose current version
// equals expected_version.
struct Mutation {
  enum class Op { kPut, kUpdate };
  Op op = Op::kPut;
  std::string entity_id;
  std::string kind;  // puts only
  int expected_version = 0;  // updates only
  nlohmann::json payload;

  static Mutation Put(std::string id, std::string kind, nlohmann::json payload);
  static Mutation Update(std::string id, int expected_version, nlohmann::json payload);
};

struct StoreOptions {
  // fsync the log after every commit. A killed process loses nothing either
  // way; this guards against power loss.
  bool fsync = true;
  // Write a snapshot after this many log records; 0 disables snapshots.
  int snapshot_every = 1000;
};

struct RecoveryReport {
  bool snapshot_loaded = false;
  uint64_t records_replayed = 0;
  // Byte offset of the first invalid log record; the log was cut there.
  std::optional<uint64_t> corrupt_offset;
  std::string detail;
};

// Entity store backed by an append-only JSON-lines log in `dir`. Every line
// is "<crc32 hex> <record json>"; a record holds one atomic commit. The
// snapshot is a rebuildable cache of the state at a log offset, replaced by
// rename.
class Store {
 public:
  static absl::StatusOr<std::unique_ptr<Store>> Open(const std::string& dir,
                                                     const StoreOptions& options = {});
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const RecoveryReport& recovery() const { return recovery_; }

  // AlreadyExists on an id collision.
  absl::StatusOr<EntityEnvelope> Put(const std::string& entity_id, const std::string& kind,
                                     nlohmann::json payload, int64_t now_ms);
  // Aborted when expected_version is stale, NotFound for an unknown id.
  absl::StatusOr<EntityEnvelope> Update(const std::string& entity_id, int expected_version,
                                        nlohmann::json payload, int64_t now_ms);
  // All or nothing; one log record.
  absl::StatusOr<std::vector<EntityEnvelope>> Commit(const std::vector<Mutation>& mutations,
                                                     int64_t now_ms);

  absl::StatusOr<EntityEnvelope> Get(const std::string& entity_id) const;
  // Entities of a kind in id order, starting after `after`; limit 0 is
  // unlimited.
  std::vector<EntityEnvelope> List(const std::string& kind, const std::string& after = "",
                                   size_t limit = 0) const;
  size_t size() const;
  // Log records committed so far.
  uint64_t sequence() const;
  absl::Status WriteSnapshot();

  static constexpr char kLogFile[] = "log.jsonl";
  static constexpr char kSnapshotFile[] = "snapshot.json";

 private:
  Store(std::string dir, StoreOptions options) : dir_(std::move(dir)), options_(options) {}
  absl::Status Recover();
  absl::Status Apply(const nlohmann::json& record, bool validate_only,
                     std::map<std::string, EntityEnvelope>* target) const;
  absl::Status WriteSnapshotLocked();

  std::string dir_;
  StoreOptions options_;
  RecoveryReport recovery_;
  mutable std::mutex mu_;
  std::map<std::string, EntityEnvelope> entities_;
  int fd_ = -1;
  uint64_t log_size_ = 0;
  uint64_t sequence_ = 0;
  uint64_t since_snapshot_ = 0;
};

// Framing used by the log: crc32 of the record text as 8 lowercase hex digits.
std::string FrameRecord(const std::string& record_text);

}  // namespace assesskit::platform

#endif  // ASSESSKIT_PLATFORM_STORE_H_
