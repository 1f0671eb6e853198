// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace xlsched {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The columns of a channel matrix are (numerically) linearly dependent.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// The power allocation problem has no solution for the given user set.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// A channel vector with zero norm was supplied where a direction is needed.
class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// An estimator was asked to summarise an ensemble without scheduled users.
class EmptyEnsemble : public Error {
 public:
  using Error::Error;
};

/// A configuration field is missing, malformed or out of range.
class ConfigInvalid : public Error {
 public:
  ConfigInvalid(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Reading or writing an output artifact failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace xlsched
