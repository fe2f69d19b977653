/*
 * Copyright 2026 The MSRAG Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msrag {

/// Root of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Vectors of different length were combined.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

// ---------------------------------------------------------------------------
// Provider failures

class ProviderError : public Error {
 public:
  using Error::Error;
};

/// Transport failure or retryable server error; raised after retries are exhausted.
class NetworkError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

/// The provider rejected the request with a non-retryable status.
class ProviderRefusal : public ProviderError {
 public:
  ProviderRefusal(int status, const std::string& detail)
      : ProviderError("provider refused request (status " + std::to_string(status) + "): " + detail),
        status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Rate-limit signal from the provider, distinct from a failure.
class QuotaExceeded : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

/// Strict replay was requested and the cache holds no entry for the request.
class ReplayMiss : public ProviderError {
 public:
  explicit ReplayMiss(std::string key)
      : ProviderError("replay miss: no cache entry for key " + key), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A stored cache entry failed digest verification.
class CacheCorruption : public ProviderError {
 public:
  CacheCorruption(std::string key, const std::string& detail)
      : ProviderError("cache entry " + key + " is corrupt: " + detail), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// ---------------------------------------------------------------------------
// Dataset and evaluation failures

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error("parse error at line " + std::to_string(line) + ": " + detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string field, std::size_t line)
      : Error("schema error at line " + std::to_string(line) + ": missing or invalid field \"" +
              field + "\""),
        field_(std::move(field)),
        line_(line) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// A run produced no scored records.
class EmptyRun : public Error {
 public:
  using Error::Error;
};

}  // namespace msrag
