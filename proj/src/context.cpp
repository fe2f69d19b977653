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

#include "msrag/context.hpp"

namespace msrag {

providers::ChatRequest make_chat_request(const RunContext& ctx, const std::string& model_id,
                                         std::string user, std::string system) {
  providers::ChatRequest req;
  req.model_id = model_id;
  if (!system.empty()) req.messages.push_back({providers::Role::System, std::move(system)});
  req.messages.push_back({providers::Role::User, std::move(user)});
  req.temperature = 0.0;
  req.max_tokens = ctx.config.max_tokens;
  req.seed = ctx.seed;
  return req;
}

}  // namespace msrag
