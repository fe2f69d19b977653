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

#include <fstream>

#include <gtest/gtest.h>

#include "msrag/error.hpp"
#include "msrag/prompts.hpp"
#include "msrag/text.hpp"
#include "support/helpers.hpp"

namespace msrag {
namespace {

TEST(Text, TrimSplitJoin) {
  EXPECT_EQ(text::trim("  a b \n"), "a b");
  EXPECT_EQ(text::split_whitespace(" a  b\tc\n"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(text::join({"a", "b"}, ", "), "a, b");
  EXPECT_EQ(text::fold_for_compare("  What IS  this? "), "what is this?");
}

TEST(Text, TruncateWordsCutsAfterLastKeptWord) {
  auto t = text::truncate_words("one two  three four", 2);
  EXPECT_EQ(t.text, "one two");
  EXPECT_TRUE(t.truncated);
  t = text::truncate_words("one two", 2);
  EXPECT_EQ(t.text, "one two");
  EXPECT_FALSE(t.truncated);
  EXPECT_FALSE(text::truncate_words("a b c", 0).truncated);
}

TEST(Text, SanitizeReplacesInvalidUtf8) {
  EXPECT_EQ(text::sanitize_utf8("caf\xc3\xa9"), "caf\xc3\xa9");
  EXPECT_EQ(text::sanitize_utf8("a\xff" "b"), "a\xef\xbf\xbd" "b");
  EXPECT_EQ(text::sanitize_utf8("\xe2\x82"), "\xef\xbf\xbd");
}

TEST(Render, SubstitutesAndEscapesBraces) {
  EXPECT_EQ(prompts::render("Q: {question} {{x}}", {{"question", "why"}}), "Q: why {x}");
  EXPECT_THROW(prompts::render("{nope}", {}), InvalidInput);
  EXPECT_THROW(prompts::render("stray } brace", {}), InvalidInput);
  EXPECT_THROW(prompts::render("open { brace", {}), InvalidInput);
}

TEST(Prompts, EmbeddedContextPromptKeepsKeyPhrases) {
  auto p = prompts::PromptSet::embedded();
  auto rendered = prompts::render(p.gpt_retrieval, {{"question", "Who?"}});
  EXPECT_NE(rendered.find("at least 70 words"), std::string::npos);
  EXPECT_NE(rendered.find("The relevant information could not be retrieved."), std::string::npos);
  EXPECT_NE(rendered.find("{\n  \"question\": Who?\n"), std::string::npos);
  EXPECT_EQ(p.digests().size(), 5u);
}

TEST(Prompts, DirectoryOverridesEmbeddedSet) {
  testing::TempDir dir;
  const auto embedded = prompts::PromptSet::embedded();
  for (const auto& [name, body] : prompts::detail::embedded()) {
    std::ofstream(dir / (std::string(name) + ".txt")) << body;
  }
  std::ofstream(dir / "reader_direct.txt") << "Q={question} {instruction}";
  auto loaded = prompts::PromptSet::load(dir.path());
  EXPECT_EQ(loaded.reader_direct, "Q={question} {instruction}");
  EXPECT_EQ(loaded.segment, embedded.segment);
  EXPECT_NE(loaded.digests().at("reader_direct"), embedded.digests().at("reader_direct"));
}

}  // namespace
}  // namespace msrag
