// Copyright 2026 The mlocc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace mlocc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subsystem index out of range, mismatched dimensions, overlapping index sets.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix failed the density-matrix invariants (Hermitian, unit trace, PSD).
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class NonHermitianError : public Error {
 public:
  using Error::Error;
};

class NonUnitaryError : public Error {
 public:
  NonUnitaryError(const std::string& what, double residual)
      : Error(what + " (unitarity residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Transfer-matrix spectrum outside [-1, 1]; signals a non-unital or non-CPTP map upstream.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

/// A constructed object failed its own numerical certificate.
class CertificateError : public Error {
 public:
  using Error::Error;
};

class InsufficientResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input (JSON shape, field types, non-finite values).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Failure of one stage of the two-round protocol.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string stage, std::optional<std::size_t> outcome, const std::string& detail)
      : Error(format(stage, outcome, detail)), stage_(std::move(stage)), outcome_(outcome) {}

  const std::string& stage() const noexcept { return stage_; }
  std::optional<std::size_t> outcome() const noexcept { return outcome_; }

 private:
  static std::string format(const std::string& stage, std::optional<std::size_t> outcome,
                            const std::string& detail) {
    std::string s = "stage '" + stage + "'";
    if (outcome) s += " (outcome " + std::to_string(*outcome) + ")";
    return s + ": " + detail;
  }

  std::string stage_;
  std::optional<std::size_t> outcome_;
};

}  // namespace mlocc
