// Copyright 2026 The aesfeat Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aes {

// Base of every error the library raises. The CLI maps ConfigError to exit
// code 2 and every other aes::Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `position` is a 1-based line number for corpus files
// and a 0-based character offset for bracket strings and patterns.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad flags, missing resources, impossible experiment settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A feature group needs an annotation layer the essay does not carry.
class MissingLayerError : public Error {
 public:
  MissingLayerError(const std::string& essay_id, const std::string& layer,
                    const std::string& group)
      : Error("essay '" + essay_id + "': feature group " + group +
              " requires the '" + layer + "' annotation layer"),
        layer_(layer),
        group_(group) {}
  const std::string& layer() const { return layer_; }
  const std::string& group() const { return group_; }

 private:
  std::string layer_;
  std::string group_;
};

// A quantity is mathematically undefined for the given input (zero tokens,
// constant vectors in a correlation, ...).
class UndefinedInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace aes
