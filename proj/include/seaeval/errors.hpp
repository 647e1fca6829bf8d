// Copyright 2026 The seaeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace seaeval {

// Base class for all recoverable evaluation errors. Callers that map errors
// to process exit codes treat InputError as "bad input" (exit 2) and
// InternalError as "engine bug" (exit 1).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

// io-formats
class MalformedJson : public InputError {
 public:
  using InputError::InputError;
};
class NegativeDimensions : public InputError {
 public:
  using InputError::InputError;
};
class UnknownCategory : public InputError {
 public:
  using InputError::InputError;
};
class DuplicatePair : public InputError {
 public:
  using InputError::InputError;
};
class BadMagic : public InputError {
 public:
  using InputError::InputError;
};
class IndexOutOfSet : public InputError {
 public:
  using InputError::InputError;
};

// metric modules
class UnknownClass : public InputError {
 public:
  using InputError::InputError;
};
class FrameMismatch : public InputError {
 public:
  using InputError::InputError;
};
class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};
class EmptyEdge : public InputError {
 public:
  using InputError::InputError;
};
class MissingEdgeForFrame : public InputError {
 public:
  using InputError::InputError;
};
class TooFewObstacles : public InputError {
 public:
  using InputError::InputError;
};
class EditTargetMissing : public InputError {
 public:
  using InputError::InputError;
};
class NoGroundVisible : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace seaeval
