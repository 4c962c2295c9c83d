#include <doctest.h>

#include <regex>
#include <sstream>

#include <mutgen/corpus.hpp>
#include <mutgen/rng.hpp>

using namespace mutgen;

namespace {

FileChange mod(std::string path, std::string before, std::string after) {
  return {std::move(path), ChangeKind::Modified, std::move(before), std::move(after)};
}
FileChange made(std::string path, std::string after) {
  return {std::move(path), ChangeKind::Created, std::nullopt, std::move(after)};
}
FileChange gone(std::string path, std::string before) {
  return {std::move(path), ChangeKind::Deleted, std::move(before), std::nullopt};
}

CommitRecord record(std::string id, std::string message, std::vector<FileChange> files) {
  return {std::move(id), "acme/widgets", std::move(message), std::move(files)};
}

// reference predicate built on a case-insensitive regex instead of manual
// lowercasing, for cross-checking the production rule
bool reference_bugfix(const std::string& message) {
  static const std::regex action("fix|solve", std::regex::icase);
  static const std::regex subject("bug|issue|problem|error", std::regex::icase);
  return std::regex_search(message, action) && std::regex_search(message, subject);
}

std::string random_casing(const std::string& s, Rng& rng) {
  std::string out = s;
  for (char& c : out) {
    if (rng.next_below(2) == 0) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::vector<CommitRecord> filtered(std::vector<CommitRecord> commits) {
  std::vector<CommitRecord> out;
  for (CommitRecord& c : commits) {
    if (!is_bugfix_message(c.message)) continue;
    if (!apply_structural_filters(c).keep) continue;
    out.push_back(std::move(c));
  }
  return out;
}

std::string java_source(const std::string& body) {
  return "class A { void m() { " + body + " } }";
}

}  // namespace

TEST_CASE("bug-fix messages need an action word and a subject word") {
  CHECK(is_bugfix_message("Fix NPE bug in parser"));
  CHECK(is_bugfix_message("solve the issue with cache eviction"));
  CHECK(is_bugfix_message("SOLVED a weird PROBLEM"));
  CHECK(is_bugfix_message("error handling fixup"));
  CHECK_FALSE(is_bugfix_message("Refactor module layout"));
  CHECK_FALSE(is_bugfix_message("fix typo in readme"));
  CHECK_FALSE(is_bugfix_message("document the known bug"));
  CHECK_FALSE(is_bugfix_message(""));

  // containment is substring based, so embedded words count
  CHECK(is_bugfix_message("prefixed the debugging output"));
  CHECK(is_bugfix_message("resolved tissue rendering"));
}

TEST_CASE("random casing never changes the message decision") {
  const char* fragments[] = {"fix",    "solve",  "bug",    "issue", "problem",
                             "error",  "update", "readme", "cache", "layout",
                             "parser", "speed",  "tests",  "minor", "cleanup"};
  Rng rng(derive_seed(0xC0DE, 1));
  int kept = 0;
  for (int i = 0; i < 300; ++i) {
    std::string message;
    const int words = 1 + static_cast<int>(rng.next_below(5));
    for (int w = 0; w < words; ++w) {
      if (w) message.push_back(' ');
      message += fragments[rng.next_below(std::size(fragments))];
    }
    message = random_casing(message, rng);
    const bool got = is_bugfix_message(message);
    REQUIRE(got == reference_bugfix(message));
    kept += got ? 1 : 0;
  }
  CHECK(kept > 20);
  CHECK(kept < 280);
}

TEST_CASE("structural filters count touched java files") {
  const std::string src = java_source("return ;");
  auto mods = [&](int n) {
    std::vector<FileChange> files;
    for (int i = 0; i < n; ++i)
      files.push_back(mod("src/F" + std::to_string(i) + ".java", src, src + " "));
    return files;
  };

  SUBCASE("six modified java files are too many") {
    auto d = apply_structural_filters(record("c1", "fix bug", mods(6)));
    CHECK_FALSE(d.keep);
    CHECK(d.reason == DropReason::TooManyJavaFiles);
    CHECK(drop_reason_name(*d.reason) == "too_many_files");
  }
  SUBCASE("five modified java files pass") {
    CHECK(apply_structural_filters(record("c2", "fix bug", mods(5))).keep);
  }
  SUBCASE("created and deleted java files count toward the limit") {
    auto files = mods(3);
    files.push_back(made("src/N1.java", src));
    files.push_back(made("src/N2.java", src));
    files.push_back(gone("src/G1.java", src));
    auto d = apply_structural_filters(record("c3", "fix bug", files));
    CHECK_FALSE(d.keep);
    CHECK(d.reason == DropReason::TooManyJavaFiles);
  }
  SUBCASE("non-java files never count") {
    auto files = mods(1);
    for (int i = 0; i < 8; ++i)
      files.push_back(mod("doc/d" + std::to_string(i) + ".txt", "a", "b"));
    CHECK(apply_structural_filters(record("c4", "fix bug", files)).keep);
  }
  SUBCASE("a commit with only created java files has nothing to learn from") {
    auto d = apply_structural_filters(
        record("c5", "fix bug", {made("src/New.java", src), mod("README.md", "a", "b")}));
    CHECK_FALSE(d.keep);
    CHECK(d.reason == DropReason::NoModifiedJavaFiles);
    CHECK(drop_reason_name(*d.reason) == "no_java_pairs");
  }
  SUBCASE("a commit with no java files at all is dropped") {
    auto d = apply_structural_filters(record("c6", "fix bug", {mod("a.py", "x", "y")}));
    CHECK_FALSE(d.keep);
    CHECK(d.reason == DropReason::NoModifiedJavaFiles);
  }
  SUBCASE("the limit is configurable") {
    CHECK_FALSE(apply_structural_filters(record("c7", "fix bug", mods(3)), 2).keep);
    CHECK(apply_structural_filters(record("c8", "fix bug", mods(2)), 2).keep);
  }
}

TEST_CASE("pair extraction keeps modified java files only") {
  const std::string before = java_source("int x = 0 ;");
  const std::string after = java_source("int x = 1 ;");
  CommitRecord c = record("abc123", "fix bug",
                          {mod("src/A.java", before, after),
                           made("src/B.java", after),
                           gone("src/C.java", before),
                           mod("notes.txt", "a", "b"),
                           mod("src/D.java", before, after)});

  auto pairs = extract_file_pairs(c);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].path == "src/A.java");
  CHECK(pairs[1].path == "src/D.java");
  CHECK(pairs[0].commit_id == "abc123");
  CHECK(pairs[0].repo == "acme/widgets");
  CHECK(pairs[0].buggy_source == before);
  CHECK(pairs[0].fixed_source == after);

  SUBCASE("an empty side produces no pair") {
    c.files.push_back(mod("src/E.java", "", after));
    CHECK(extract_file_pairs(c).size() == 2);
  }
  SUBCASE("a modified file missing a side is an error") {
    c.files.push_back({"src/F.java", ChangeKind::Modified, std::nullopt, after});
    CHECK_THROWS_AS(extract_file_pairs(c), std::runtime_error);
  }
  SUBCASE("pair count never exceeds the commit's java file count") {
    int java_files = 0;
    for (const FileChange& f : c.files) java_files += f.path.ends_with(".java") ? 1 : 0;
    CHECK(static_cast<int>(pairs.size()) <= java_files);
  }
}

TEST_CASE("filtering twice equals filtering once") {
  const std::string src = java_source("return ;");
  std::vector<CommitRecord> commits;
  commits.push_back(record("k1", "fix a bug", {mod("A.java", src, src + " ")}));
  commits.push_back(record("k2", "refactor", {mod("A.java", src, src + " ")}));
  commits.push_back(record("k3", "solve issue", {made("B.java", src)}));
  commits.push_back(record("k4", "fix error", {mod("C.java", src, src + " ")}));

  auto once = filtered(commits);
  auto twice = filtered(once);
  REQUIRE(once.size() == 2);
  REQUIRE(twice.size() == once.size());
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice[i].commit_id == once[i].commit_id);
  CHECK(once[0].commit_id == "k1");
  CHECK(once[1].commit_id == "k4");
}

TEST_CASE("corpus records must satisfy the documented shape") {
  Json good{{"commit_id", "deadbeef"},
            {"repo", "acme/widgets"},
            {"message", "fix bug"},
            {"files", Json::array({Json{{"path", "A.java"},
                                        {"kind", "modified"},
                                        {"before", "x"},
                                        {"after", "y"}}})}};

  SUBCASE("a well-formed record round-trips") {
    CommitRecord c = commit_from_json(good);
    CHECK(c.commit_id == "deadbeef");
    REQUIRE(c.files.size() == 1);
    CHECK(c.files[0].kind == ChangeKind::Modified);
    CHECK(*c.files[0].before == "x");
    CommitRecord again = commit_from_json(commit_to_json(c));
    CHECK(again.commit_id == c.commit_id);
    CHECK(again.files.size() == c.files.size());
    CHECK(*again.files[0].after == "y");
  }
  SUBCASE("missing commit_id") {
    good.erase("commit_id");
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("empty commit_id") {
    good["commit_id"] = "";
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("files must be an array") {
    good["files"] = "nope";
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("duplicate paths are rejected") {
    good["files"].push_back(good["files"][0]);
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("modified files need both sides") {
    good["files"][0].erase("before");
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("created files cannot carry a before side") {
    good["files"][0]["kind"] = "created";
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("deleted files cannot carry an after side") {
    good["files"][0]["kind"] = "deleted";
    good["files"][0].erase("before");
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
  SUBCASE("unknown kinds are rejected") {
    good["files"][0]["kind"] = "renamed";
    CHECK_THROWS_AS(commit_from_json(good), std::runtime_error);
  }
}

TEST_CASE("ingest skips bad lines and reports counts") {
  const std::string before = java_source("int x = 0 ;");
  const std::string after = java_source("int x = 1 ;");

  std::ostringstream corpus;
  auto emit = [&](const CommitRecord& c) { write_jsonl_line(corpus, commit_to_json(c)); };

  emit(record("g1", "fix off-by-one bug",
              {mod("src/A.java", before, after), mod("src/B.java", before, after)}));
  corpus << "{ this is not json\n";
  corpus << "\n";
  emit(record("n1", "refactor layout", {mod("src/A.java", before, after)}));
  // invariant violation: modified file with a missing side
  corpus << R"({"commit_id":"bad1","repo":"r","message":"fix bug",)"
         << R"("files":[{"path":"A.java","kind":"modified","after":"y"}]})" << "\n";
  {
    std::vector<FileChange> files;
    for (int i = 0; i < 6; ++i)
      files.push_back(mod("src/F" + std::to_string(i) + ".java", before, after));
    emit(record("big1", "fix the threading issue", std::move(files)));
  }
  emit(record("c_only", "solve problem", {made("src/New.java", after)}));
  emit(record("g2", "solved the cache issue",
              {made("src/Extra.java", after), mod("src/C.java", before, after)}));

  std::istringstream in(corpus.str());
  IngestStats stats;
  std::vector<std::pair<std::size_t, std::string>> diags;
  auto pairs = ingest_corpus(in, 5, &stats,
                             [&](std::size_t line, const std::string& what) {
                               diags.emplace_back(line, what);
                             });

  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].commit_id == "g1");
  CHECK(pairs[0].path == "src/A.java");
  CHECK(pairs[1].path == "src/B.java");
  CHECK(pairs[2].commit_id == "g2");
  CHECK(pairs[2].path == "src/C.java");
  for (const FilePair& p : pairs) {
    CHECK_FALSE(p.buggy_source.empty());
    CHECK_FALSE(p.fixed_source.empty());
    CHECK(p.path.ends_with(".java"));
  }

  CHECK(stats.lines == 8);
  CHECK(stats.malformed == 2);
  CHECK(stats.commits == 5);
  CHECK(stats.bugfix == 4);
  CHECK(stats.kept == 2);
  CHECK(stats.dropped_too_many_files == 1);
  CHECK(stats.dropped_no_java == 1);
  CHECK(stats.pairs == 3);

  REQUIRE(diags.size() == 2);
  CHECK(diags[0].first == 2);
  CHECK(diags[0].second == "invalid JSON");
  CHECK(diags[1].first == 5);
  CHECK(diags[1].second.find("missing a side") != std::string::npos);
}

TEST_CASE("pairs round-trip through json lines") {
  FilePair pair{"sha9", "acme/widgets", "src/Main.java", java_source("int a ;"),
                java_source("int b ;")};
  std::ostringstream out;
  write_jsonl_line(out, pair_to_json(pair));

  std::string line = out.str();
  REQUIRE(line.back() == '\n');
  line.pop_back();
  FilePair back = pair_from_json(Json::parse(line));
  CHECK(back.commit_id == pair.commit_id);
  CHECK(back.repo == pair.repo);
  CHECK(back.path == pair.path);
  CHECK(back.buggy_source == pair.buggy_source);
  CHECK(back.fixed_source == pair.fixed_source);

  SUBCASE("an empty side is rejected on read") {
    Json j = pair_to_json(pair);
    j["buggy_source"] = "";
    CHECK_THROWS_AS(pair_from_json(j), std::runtime_error);
  }
}
