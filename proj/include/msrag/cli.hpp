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

#include <atomic>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "msrag/config.hpp"

namespace msrag::cli {

enum ExitCode : int {
  kOk = 0,
  kFatal = 1,
  kUsage = 2,  // bad flags or configuration
  kInterrupted = 130,
};

/// Process-level hooks. Tests substitute providers and trigger interrupts.
struct Environment {
  /// Builds the providers for one run; defaults to config::build_providers.
  std::function<config::ProviderStack(const config::CliConfig&)> build_providers;
  /// When set and raised, workers drain and a partial manifest is written.
  const std::atomic<bool>* stop = nullptr;
};

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Environment& env = {});

}  // namespace msrag::cli
