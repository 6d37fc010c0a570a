// Copyright 2026 The MixTalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "mixtalk/catalog.h"

#include <algorithm>

#include "mixtalk/errors.h"

namespace mixtalk {
namespace {

std::vector<std::filesystem::path> JsonFiles(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void Catalog::LoadConfigDir(const std::filesystem::path& dir) {
  for (const auto& path : JsonFiles(dir)) AddConfig(LoadConfig(path));
}

void Catalog::LoadStoryDir(const std::filesystem::path& dir) {
  for (const auto& path : JsonFiles(dir)) {
    try {
      AddStory(LoadStory(path));
    } catch (const Error& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }
}

void Catalog::AddConfig(GameConfig config) {
  const std::string id = config.env_id;
  if (!configs_.emplace(id, std::move(config)).second) {
    throw ValidationError("env_id", "duplicate config " + id);
  }
}

void Catalog::AddStory(StoryLayer story) {
  const std::string id = story.story_id;
  if (!stories_.emplace(id, std::move(story)).second) {
    throw ValidationError("story_id", "duplicate story " + id);
  }
}

const GameConfig& Catalog::Config(const std::string& env_id) const {
  auto it = configs_.find(env_id);
  if (it == configs_.end()) throw ValidationError("env_id", "unknown environment " + env_id);
  return it->second;
}

ConfigLookup Catalog::Lookup() const {
  return [this](const std::string& env_id) -> const GameConfig& { return Config(env_id); };
}

std::vector<VariantKey> Catalog::CoveringVariants() const {
  std::vector<VariantKey> out;
  for (const auto& [env, config] : configs_) {
    for (const auto& [story_id, story] : stories_) {
      // A story written for a larger variant also covers a smaller one; only
      // exact matches are scheduled.
      if (story.Covers(config) && story.attr_names.size() == config.size()) {
        out.push_back({env, story_id});
      }
    }
  }
  return out;
}

const Variant& Catalog::Get(const std::string& env_id, const std::string& story_id,
                            Regime regime) {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_tuple(env_id, story_id, regime);
  auto it = variants_.find(key);
  if (it != variants_.end()) return *it->second;
  auto story = stories_.find(story_id);
  if (story == stories_.end()) throw ValidationError("story_id", "unknown story " + story_id);
  auto variant =
      std::make_unique<Variant>(MakeVariant(Config(env_id).WithRegime(regime), story->second));
  return *variants_.emplace(key, std::move(variant)).first->second;
}

}  // namespace mixtalk
