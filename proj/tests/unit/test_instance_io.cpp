#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

#include "cqht/error.hpp"
#include "cqht/instance_io.hpp"
#include "cqht/oracle.hpp"
#include "generators.hpp"

using namespace cqht;
using namespace cqht::testing;

namespace {

const char* kPurePair = R"({
  "schema_version": 1,
  "id": "pure-pair",
  "dim": 2, "p": 0.5, "delta": 0.01,
  "set1": [ [[1,0],[0,0]] ],
  "set2": [ [[1,0],[1,0]] ]
})";

std::string expect_parse_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InputParse);
    return e.detail();
  }
  ADD_FAILURE() << "parse succeeded";
  return {};
}

}  // namespace

TEST(InstanceIo, ParsesPureShorthandAndNormalizes) {
  const InstanceFile f = parse_instance(kPurePair);
  EXPECT_EQ(f.id, "pure-pair");
  ASSERT_EQ(f.set2.size(), 1u);
  EXPECT_LT((f.set2[0].mat() - ket_plus().mat()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(f.epsilon.has_value());
  EXPECT_NO_THROW(f.instance());
}

TEST(InstanceIo, ParsesMatricesAndDp) {
  const InstanceFile f = parse_instance(R"({
    "schema_version": 1, "dim": 2, "p": 0.5, "delta": 0.1, "dp": {"epsilon": 1.0},
    "tags": ["dp"],
    "set1": [ [[[1,0],[0,0]], [[0,0],[0,0]]] ],
    "set2": [ [[[0.5,0],[0,-0.1]], [[0,0.1],[0.5,0]]] ]
  })");
  ASSERT_TRUE(f.epsilon.has_value());
  EXPECT_DOUBLE_EQ(*f.epsilon, 1.0);
  EXPECT_TRUE(f.has_tag("dp"));
  EXPECT_DOUBLE_EQ(f.set2[0].mat()(0, 1).imag(), -0.1);
}

TEST(InstanceIo, ErrorsNameTheOffendingField) {
  EXPECT_NE(expect_parse_error(R"({"dim": 2})").find("schema_version"), std::string::npos);
  EXPECT_NE(expect_parse_error("{ not json").find("parse error"), std::string::npos);

  const std::string bad_row = R"({
    "schema_version": 1, "dim": 2, "p": 0.5, "delta": 0.1,
    "set1": [ [[[1,0],[0,0]], [[0,0],[0,0]]] ],
    "set2": [ [[[1,0],[0,0]], [[0,0],[0,0]]], [[[0.5,0],[0,0]], [[0,0]]] ]
  })";
  const std::string msg = expect_parse_error(bad_row);
  EXPECT_NE(msg.find("set2[1] row 1"), std::string::npos) << msg;

  const std::string bad_entry = R"({
    "schema_version": 1, "dim": 2, "p": 0.5, "delta": 0.1,
    "set1": [ [[1,0],[0,"x"]] ], "set2": [ [[0,0],[1,0]] ]
  })";
  EXPECT_NE(expect_parse_error(bad_entry).find("set1[0][1][1]"), std::string::npos);

  const std::string not_state = R"({
    "schema_version": 1, "dim": 2, "p": 0.5, "delta": 0.1,
    "set1": [ [[[1,0],[0,0]], [[0,0],[1,0]]] ], "set2": [ [[0,0],[1,0]] ]
  })";
  EXPECT_NE(expect_parse_error(not_state).find("NotUnitTrace"), std::string::npos);

  const std::string wrong_version = R"({
    "schema_version": 7, "dim": 2, "p": 0.5, "delta": 0.1, "set1": [], "set2": []
  })";
  EXPECT_NE(expect_parse_error(wrong_version).find("unsupported"), std::string::npos);
}

TEST(InstanceIo, RoundTripIsExact) {
  for (int t = 0; t < 20; ++t) {
    auto rng = stream(60, t);
    InstanceFile f;
    f.id = "rt-" + std::to_string(t);
    f.dim = 2 + t % 2;
    f.p = 0.37 + t * 0.01;
    f.delta = 0.013;
    if (t % 3 == 0) f.epsilon = 0.7;
    f.tags = {"generated"};
    for (int i = 0; i < 2; ++i) f.set1.push_back(random_state(f.dim, rng));
    f.set2.push_back(random_pure(f.dim, rng));
    const InstanceFile g = parse_instance(write_instance(f));
    EXPECT_EQ(g.id, f.id);
    EXPECT_EQ(g.p, f.p);
    EXPECT_EQ(g.delta, f.delta);
    EXPECT_EQ(g.epsilon, f.epsilon);
    EXPECT_EQ(g.tags, f.tags);
    for (std::size_t i = 0; i < f.set1.size(); ++i) {
      EXPECT_LE(max_entry_distance(g.set1[i].mat(), f.set1[i].mat()), 1e-15);
    }
    EXPECT_LE(max_entry_distance(g.set2[0].mat(), f.set2[0].mat()), 1e-15);
    EXPECT_EQ(write_instance(g), write_instance(f));
  }
}

TEST(Corpus, LoadsCheckedInInstances) {
  const Corpus c = load_corpus(CQHT_CORPUS_DIR);
  EXPECT_EQ(c.entries.size(), 12u);
  for (const auto& e : c.entries) {
    EXPECT_FALSE(e.file.id.empty());
    if (!e.file.has_tag("trivial")) {
      EXPECT_EQ(classify_trivial(e.instance, e.file.delta), TrivialKind::NonTrivial) << e.file.id;
    }
  }
}

TEST(Corpus, FilesAreInCanonicalForm) {
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CQHT_CORPUS_DIR)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(write_instance(parse_instance(text)), text) << entry.path();
    ++files;
  }
  EXPECT_EQ(files, 12);
}

TEST(Corpus, RejectsDuplicateIds) {
  const auto dir = std::filesystem::temp_directory_path() / "cqht_dup_corpus";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const char* name : {"a.json", "b.json"}) std::ofstream(dir / name) << kPurePair;
  try {
    load_corpus(dir);
    ADD_FAILURE() << "duplicate ids accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InputParse);
  }
  std::filesystem::remove_all(dir);
}
