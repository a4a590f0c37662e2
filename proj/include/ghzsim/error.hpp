/*
 * Copyright 2026 The ghzsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
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

namespace ghzsim {

/// Raised when an argument violates a documented precondition
/// (non-positive width, non-square matrix, negative mean, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a conditional probability is requested on an event of
/// probability zero.
class UndefinedConditional : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ghzsim
