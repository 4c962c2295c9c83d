#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <mutgen/embedding.hpp>
#include <mutgen/rng.hpp>

using namespace mutgen;

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  REQUIRE(na > 0.0);
  REQUIRE(nb > 0.0);
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::string> repeat(std::vector<std::string> pattern, int times) {
  std::vector<std::string> out;
  for (int i = 0; i < times; ++i)
    out.insert(out.end(), pattern.begin(), pattern.end());
  return out;
}

EmbedConfig small_config() {
  EmbedConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 40;
  return cfg;
}

// two vocabularies with no words in common
std::vector<ActionDoc> two_topic_docs() {
  const std::vector<std::string> ins = {"INS:MethodCall", "INS:Name", "INS:Argument"};
  const std::vector<std::string> del = {"DEL:Literal", "DEL:Return", "DEL:Operator"};
  return {
      {"ins-0", repeat(ins, 12)},
      {"ins-1", repeat({"INS:Name", "INS:Argument", "INS:MethodCall"}, 12)},
      {"ins-2", repeat({"INS:Argument", "INS:MethodCall", "INS:Name"}, 12)},
      {"del-0", repeat(del, 12)},
      {"del-1", repeat({"DEL:Return", "DEL:Operator", "DEL:Literal"}, 12)},
      {"del-2", repeat({"DEL:Operator", "DEL:Literal", "DEL:Return"}, 12)},
  };
}

}  // namespace

TEST_CASE("every embedding has the configured dimension") {
  const auto docs = two_topic_docs();
  const auto out = embed_documents(docs, small_config(), 7);
  REQUIRE(out.size() == docs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].doc_id == docs[i].id);
    CHECK(out[i].vector.size() == 16);
    for (double v : out[i].vector) CHECK(std::isfinite(v));
  }
}

TEST_CASE("documents with identical word lists embed nearly identically") {
  const std::vector<std::string> words =
      repeat({"UPD:Literal", "INS:MethodCall", "DEL:Return", "MOV:Statement"}, 15);
  std::vector<ActionDoc> docs = {{"twin-a", words}, {"twin-b", words}};
  // anchor docs give the shared words something to contrast against
  for (const auto& d : two_topic_docs()) docs.push_back(d);

  const auto out = embed_documents(docs, small_config(), 11);
  CHECK(cosine(out[0].vector, out[1].vector) > 0.95);
}

TEST_CASE("shared vocabulary pulls documents together") {
  const auto out = embed_documents(two_topic_docs(), small_config(), 3);

  double worst_intra = 1.0, best_inter = -1.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const double c = cosine(out[i].vector, out[j].vector);
      const bool same_topic = out[i].doc_id[0] == out[j].doc_id[0];
      if (same_topic)
        worst_intra = std::min(worst_intra, c);
      else
        best_inter = std::max(best_inter, c);
    }
  }
  CHECK(worst_intra > best_inter);
  CHECK(worst_intra > 0.5);
}

TEST_CASE("input order does not change any embedding") {
  const auto docs = two_topic_docs();
  const auto base = embed_documents(docs, small_config(), 21);

  std::vector<ActionDoc> shuffled = docs;
  Rng rng(derive_seed(0xD0C5, 1));
  rng.shuffle(shuffled);
  const auto moved = embed_documents(shuffled, small_config(), 21);

  for (const auto& e : moved) {
    const auto it = std::find_if(base.begin(), base.end(),
                                 [&](const DocEmbedding& b) { return b.doc_id == e.doc_id; });
    REQUIRE(it != base.end());
    CHECK(e.vector == it->vector);
  }
}

TEST_CASE("an empty document embeds to the zero vector") {
  auto docs = two_topic_docs();
  // sorts after every other id, so it cannot shift their init streams
  docs.push_back({"zzz-hollow", {}});
  const auto out = embed_documents(docs, small_config(), 5);
  REQUIRE(out.back().doc_id == "zzz-hollow");
  for (double v : out.back().vector) CHECK(v == 0.0);
  // and its presence does not perturb anyone else
  const auto without = embed_documents(two_topic_docs(), small_config(), 5);
  for (std::size_t i = 0; i < without.size(); ++i) CHECK(out[i].vector == without[i].vector);
}

TEST_CASE("same seed reproduces, different seed diverges") {
  const auto docs = two_topic_docs();
  const auto a = embed_documents(docs, small_config(), 42);
  const auto b = embed_documents(docs, small_config(), 42);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].vector == b[i].vector);

  const auto c = embed_documents(docs, small_config(), 43);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].vector != c[i].vector) any_differs = true;
  CHECK(any_differs);
}

TEST_CASE("duplicate document ids are rejected") {
  std::vector<ActionDoc> docs = {{"same", {"INS:Name"}}, {"same", {"DEL:Name"}}};
  CHECK_THROWS_AS(embed_documents(docs, small_config(), 1), std::runtime_error);
}
