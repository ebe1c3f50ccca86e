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

#ifndef SIGAUCTION_FORMAT_H_
#define SIGAUCTION_FORMAT_H_

#include <string>

namespace sigauction {

// Shortest decimal string that parses back to exactly `value`
// (e.g. 0.3568638462861372, 0.7, 1). Locale independent.
std::string FormatDouble(double value);

}  // namespace sigauction

#endif  // SIGAUCTION_FORMAT_H_
