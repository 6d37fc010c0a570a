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


// Loaded configs and stories, with lazily built variants.

#ifndef MIXTALK_CATALOG_H_
#define MIXTALK_CATALOG_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "mixtalk/episode_engine.h"
#include "mixtalk/game_model.h"
#include "mixtalk/tournament.h"
#include "mixtalk/trace.h"

namespace mixtalk {

class Catalog {
 public:
  Catalog() = default;
  Catalog(const Catalog&) = delete;
  Catalog& operator=(const Catalog&) = delete;

  // Every *.json in each directory. Throws ParseError/ValidationError naming
  // the bad file.
  void LoadConfigDir(const std::filesystem::path& dir);
  void LoadStoryDir(const std::filesystem::path& dir);
  void AddConfig(GameConfig config);
  void AddStory(StoryLayer story);

  const std::map<std::string, GameConfig>& configs() const { return configs_; }
  const std::map<std::string, StoryLayer>& stories() const { return stories_; }
  // Throws ValidationError for an unknown env_id.
  const GameConfig& Config(const std::string& env_id) const;
  ConfigLookup Lookup() const;

  // (env_id, story_id) pairs where the story names exactly the config's
  // attributes, sorted.
  std::vector<VariantKey> CoveringVariants() const;

  // Cached; thread-safe.
  const Variant& Get(const std::string& env_id, const std::string& story_id, Regime regime);

 private:
  std::map<std::string, GameConfig> configs_;
  std::map<std::string, StoryLayer> stories_;
  std::mutex mu_;
  std::map<std::tuple<std::string, std::string, Regime>, std::unique_ptr<Variant>> variants_;
};

}  // namespace mixtalk

#endif  // MIXTALK_CATALOG_H_
