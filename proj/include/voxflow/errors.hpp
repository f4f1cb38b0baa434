// Copyright 2026 The voxflow Authors
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

#include <stdexcept>
#include <string>

namespace voxflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor rank or extent violates a precondition.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value is structurally malformed (e.g. an affine with a bad last row).
class ValidityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A named entity (modality, record, output set, ...) does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked in the wrong lifecycle state.
class StateError : public Error {
 public:
  using Error::Error;
};

/// A node received inputs that break its declared contract.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A serialized container has the wrong format or version.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Patches do not sit on the integer voxel grid of a reference.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// An input size is incompatible with an architecture's downsampling chain.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace voxflow
