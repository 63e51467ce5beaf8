/*
 * Copyright 2026 The PTS Traffic Authors
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

#ifndef PTS_ERRORS_HPP
#define PTS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pts {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite value, an out-of-range argument, or a violated precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The leader-follower law divides by the center-of-mass offset d.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

/// The sampling planner exhausted its budget without reaching the goal.
class PlanningFailure : public Error {
 public:
  PlanningFailure(const std::string& what, std::size_t iterations)
      : Error(what), iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// A scenario document failed validation. `field()` names the offending key.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// File system failures, always carrying the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pts

#endif  // PTS_ERRORS_HPP
