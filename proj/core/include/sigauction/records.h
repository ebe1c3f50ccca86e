// Copyright 2026 The sigauction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSONL persistence of round records: one JSON object per line, keys in
// lexicographic order, doubles printed with round-trip precision.

#ifndef SIGAUCTION_RECORDS_H_
#define SIGAUCTION_RECORDS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigauction/model.h"

namespace sigauction {

// Serialized form without the trailing newline.
std::string RecordToJson(const RoundRecord& record);

// Throws ParseError on malformed input.
RoundRecord RecordFromJson(std::string_view line);

// Writes one line per record. Throws IoError.
void WriteJsonl(const std::filesystem::path& path,
                std::span<const RoundRecord> records);

// Throws IoError / ParseError.
std::vector<RoundRecord> ReadJsonl(const std::filesystem::path& path);

// Hex FNV-1a 64 of the file's bytes. Throws IoError if unreadable.
std::string FileChecksum(const std::filesystem::path& path);

}  // namespace sigauction

#endif  // SIGAUCTION_RECORDS_H_
