/*
 * Copyright 2026 The FCER Toolkit Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace fcer {

/// Root of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: malformed files, out-of-range values, inconsistent shapes.
/// The CLI maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ArgumentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Data that is well-formed but for which a quantity is undefined
/// (single-class region, empty mask, all-zero differences). Exit code 2.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcer
