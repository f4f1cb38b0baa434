// Copyright 2026 The voxflow Authors
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

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "voxflow/bundle.hpp"
#include "voxflow/creator.hpp"
#include "voxflow/errors.hpp"

namespace voxflow {
namespace {

using testing::TempDir;

TEST(CreatorFileTest, RoundTripEvaluatesIdentically) {
  const auto mirc = testing::synthetic_catalog(2, {24, 24, 24});
  const auto t = testing::training_graph();
  TempDir dir;
  Creator original(t.graph, t.crops, 42);
  original.save(dir / "a.json");
  Creator loaded = Creator::load_file(dir / "a.json");
  EXPECT_EQ(loaded.names(), original.names());
  EXPECT_EQ(loaded.seed(), 42u);
  for (int c = 0; c < 2; ++c) {
    const auto id = testing::catalog_record(mirc, c);
    EXPECT_EQ(loaded.eval(id), original.eval(id));
  }
  loaded.save(dir / "b.json");
  EXPECT_EQ(testing::read_text(dir / "a.json"), testing::read_text(dir / "b.json"));
}

TEST(CreatorFileTest, KeepsOnlyTracedNodes) {
  const auto t = testing::training_graph();
  Creator creator(t.graph, {t.x});
  const auto j = creator.to_json();
  ASSERT_EQ(j["nodes"].size(), 2u);
  EXPECT_EQ(j["nodes"][0]["name"], "CatalogInput_0");
  EXPECT_EQ(j["nodes"][1]["name"], "Split_0");
}

TEST(CreatorFileTest, VersionMismatch) {
  const auto t = testing::training_graph();
  auto j = Creator(t.graph, t.crops).to_json();
  j["version"] = kCreatorFormatVersion + 1;
  EXPECT_THROW(Creator::from_json(j), FormatError);
  j["version"] = kCreatorFormatVersion;
  j["format"] = "voxflow-bundle";
  EXPECT_THROW(Creator::from_json(j), FormatError);
  TempDir dir;
  testing::write_text(dir / "bad.json", "{not json");
  EXPECT_THROW(Creator::load_file(dir / "bad.json"), FormatError);
  EXPECT_THROW(Creator::load_file(dir / "absent.json"), IoError);
}

TEST(CreatorFileTest, ModelWeightFile) {
  TempDir dir;
  const auto box = std::make_shared<BoxMeanModel>(Size3{3, 3, 3});
  save_model_file(dir / "box.json", *box);
  Graph g;
  const auto pred = g.model({g.direct_input()}, box, std::nullopt, "box.json");
  Creator original(g, pred);
  original.save(dir / "creator.json");
  const Identifier id(DirectIdentifier{{testing::ramp({6, 6, 6})}});

  Creator loaded = Creator::load_file(dir / "creator.json");
  EXPECT_TRUE(loaded.missing_models().empty());
  EXPECT_EQ(loaded.eval(id), original.eval(id));

  std::filesystem::remove(dir / "box.json");
  Creator orphan = Creator::load_file(dir / "creator.json");
  EXPECT_EQ(orphan.missing_models(), (std::vector<std::string>{"Model_0"}));
  EXPECT_THROW(orphan.eval(id), StateError);
  orphan.attach_models({{"Model_0", box}});
  EXPECT_EQ(orphan.eval(id), original.eval(id));
}

TEST(CreatorFileTest, MismatchedWeightFileIsNotAttached) {
  TempDir dir;
  const auto box = std::make_shared<BoxMeanModel>(Size3{3, 3, 3});
  Graph g;
  const auto pred = g.model({g.direct_input()}, box, std::nullopt, "box.json");
  Creator(g, pred).save(dir / "creator.json");
  save_model_file(dir / "box.json", BoxMeanModel({5, 5, 5}));
  EXPECT_EQ(Creator::load_file(dir / "creator.json").missing_models().size(), 1u);
}

PipelineBundle training_bundle() {
  auto t = testing::training_graph();
  const auto pred = t.graph.model({t.crops[0]}, std::make_shared<BoxMeanModel>(Size3{5, 5, 5}));
  PipelineBundle bundle(t.graph, 9);
  bundle.set("train", t.crops);
  bundle.set("full", {t.deformed[0]});
  bundle.set("predict", pred);
  return bundle;
}

TEST(BundleTest, RoundTripAllSets) {
  const auto mirc = testing::synthetic_catalog(1, {24, 24, 24});
  const auto id = testing::catalog_record(mirc, 0);
  const PipelineBundle bundle = training_bundle();
  TempDir dir;
  bundle.save(dir / "a.json");
  const PipelineBundle loaded = PipelineBundle::load(dir / "a.json");
  EXPECT_EQ(loaded.keys(), (std::vector<std::string>{"full", "predict", "train"}));
  EXPECT_EQ(loaded.node_names(), bundle.node_names());
  for (const auto& key : bundle.keys()) {
    EXPECT_EQ(loaded.creator(key).eval(id), bundle.creator(key).eval(id)) << key;
  }
  loaded.save(dir / "b.json");
  EXPECT_EQ(testing::read_text(dir / "a.json"), testing::read_text(dir / "b.json"));
}

TEST(BundleTest, SharedNodeTableIsStoredOnce) {
  const auto j = training_bundle().to_json();
  EXPECT_EQ(j["nodes"].size(), training_bundle().graph().size());
  EXPECT_EQ(j["models"].size(), 1u);
}

TEST(BundleTest, Errors) {
  auto j = training_bundle().to_json();
  auto tampered = j;
  tampered["version"] = 0;
  EXPECT_THROW(PipelineBundle::from_json(tampered), FormatError);
  tampered = j;
  tampered["models"].begin()->at("parameters")["window"] = {7, 7, 7};
  EXPECT_THROW(PipelineBundle::from_json(tampered), FormatError);
  EXPECT_THROW(training_bundle().creator("absent"), LookupError);
  PipelineBundle b = training_bundle();
  EXPECT_THROW(b.set("empty", {}), ArgumentError);
  EXPECT_THROW(b.set("dangling", {Connection{999, 0}}), ArgumentError);
}

}  // namespace
}  // namespace voxflow
