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

#include "msrag/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace msrag::log {

namespace {
std::atomic<Level> g_level{Level::Warn};
std::mutex g_mu;

void emit(std::string_view tag, std::string_view message) {
  std::lock_guard lock(g_mu);
  std::cerr << "msrag " << tag << ": " << message << '\n';
}
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void warn(std::string_view message) {
  if (g_level.load() >= Level::Warn) emit("warning", message);
}

void info(std::string_view message) {
  if (g_level.load() >= Level::Info) emit("info", message);
}

}  // namespace msrag::log
