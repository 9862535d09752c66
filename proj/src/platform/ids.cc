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

#include "assesskit/platform/ids.h"

namespace assesskit::platform {
namespace {

constexpr char kAlphabet[] = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

int DecodeChar(char c) {
  for (int i = 0; i < 32; ++i) {
    if (kAlphabet[i] == c) return i;
  }
  return -1;
}

}  // namespace

std::string EncodeUlid(uint64_t time_ms, uint16_t random_hi, uint64_t random_lo) {
  std::string out(26, '0');
  uint64_t t = time_ms & ((uint64_t{1} << 48) - 1);
  for (int i = 9; i >= 0; --i) {
    out[i] = kAlphabet[t & 31];
    t >>= 5;
  }
  // 80 random bits as 16 five-bit groups, most significant first.
  for (int i = 0; i < 16; ++i) {
    const int bit = 75 - 5 * i;  // low bit of this group within the 80
    uint32_t v;
    if (bit >= 64) {
      v = (random_hi >> (bit - 64)) & 31;
    } else if (bit > 59) {
      v = static_cast<uint32_t>(((random_lo >> bit) | (uint64_t{random_hi} << (64 - bit))) & 31);
    } else {
      v = static_cast<uint32_t>((random_lo >> bit) & 31);
    }
    out[10 + i] = kAlphabet[v];
  }
  return out;
}

int64_t UlidTime(const std::string& id) {
  if (id.size() != 26) return -1;
  for (char c : id) {
    if (DecodeChar(c) < 0) return -1;
  }
  if (DecodeChar(id[0]) > 7) return -1;
  int64_t t = 0;
  for (int i = 0; i < 10; ++i) t = t * 32 + DecodeChar(id[i]);
  return t;
}

}  // namespace assesskit::platform
