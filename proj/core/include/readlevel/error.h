// Copyright 2026 The Readlevel Authors.
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

#ifndef READLEVEL_ERROR_H_
#define READLEVEL_ERROR_H_

#include <stdexcept>
#include <string>

namespace readlevel {

// Every failure raised by the library. `code` is a short machine-readable
// identifier (e.g. "empty_document"); what() carries the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace readlevel

#endif  // READLEVEL_ERROR_H_
