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

#ifndef ASSESSKIT_PLATFORM_IDS_H_
#define ASSESSKIT_PLATFORM_IDS_H_

#include <cstdint>
#include <string>

namespace assesskit::platform {

// 26-character Crockford base32 identifier: 48-bit millisecond time followed
// by 80 random bits, so byte order follows creation time.
std::string EncodeUlid(uint64_t time_ms, uint16_t random_hi, uint64_t random_lo);

// Decodes the time prefix; -1 when `id` is not a valid identifier.
int64_t UlidTime(const std::string& id);

}  // namespace assesskit::platform

#endif  // ASSESSKIT_PLATFORM_IDS_H_
