// Copyright 2026 The ByoRISC Toolkit Authors.
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

#ifndef BYORISC_ERROR_H_
#define BYORISC_ERROR_H_

#include <stdexcept>
#include <string>

namespace byorisc {

// Malformed or out-of-range user input (config files, assembly, ISeq, BXIR).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input error carrying a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(std::string source, int line, int column, const std::string& msg)
      : InputError(source + ":" + std::to_string(line) + ":" +
                   std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace byorisc

#endif  // BYORISC_ERROR_H_
