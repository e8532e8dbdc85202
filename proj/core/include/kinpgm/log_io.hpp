// Copyright 2026 The kinpgm Authors.
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

#ifndef KINPGM_LOG_IO_HPP_
#define KINPGM_LOG_IO_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kinpgm/world_model.hpp"

namespace kinpgm {

class LogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON object per line, in log order.
std::string write_log_jsonl(const std::vector<LogEntry>& log);

/// Throws LogFormatError naming the offending line.
std::vector<LogEntry> read_log_jsonl(std::string_view text);

}  // namespace kinpgm

#endif  // KINPGM_LOG_IO_HPP_
