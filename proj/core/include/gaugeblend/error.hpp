/*
 * Copyright 2026 The gaugeblend Authors.
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

#ifndef GAUGEBLEND_ERROR_HPP_
#define GAUGEBLEND_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gaugeblend {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or a violated precondition on data (maps to CLI exit 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not produce a finite answer (CLI exit 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace gaugeblend

#endif  // GAUGEBLEND_ERROR_HPP_
