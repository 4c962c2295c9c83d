#include "mutgen/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace mutgen {
namespace {

std::string lowered(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains_any(const std::string& haystack, std::initializer_list<const char*> needles) {
  for (const char* n : needles)
    if (haystack.find(n) != std::string::npos) return true;
  return false;
}

bool is_java_path(const std::string& path) { return path.ends_with(".java"); }

ChangeKind kind_from_string(const std::string& s) {
  if (s == "modified") return ChangeKind::Modified;
  if (s == "created") return ChangeKind::Created;
  if (s == "deleted") return ChangeKind::Deleted;
  throw std::runtime_error("unknown file change kind: " + s);
}

std::string_view kind_name(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Modified: return "modified";
    case ChangeKind::Created: return "created";
    case ChangeKind::Deleted: return "deleted";
  }
  return "modified";
}

std::string require_string(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw std::runtime_error(std::string("missing or non-string field: ") + key);
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::runtime_error(std::string("non-string field: ") + key);
  return it->get<std::string>();
}

void check_sides(const FileChange& f) {
  switch (f.kind) {
    case ChangeKind::Modified:
      if (!f.before || !f.after)
        throw std::runtime_error("modified file missing a side: " + f.path);
      break;
    case ChangeKind::Created:
      if (f.before) throw std::runtime_error("created file carries a before side: " + f.path);
      break;
    case ChangeKind::Deleted:
      if (f.after) throw std::runtime_error("deleted file carries an after side: " + f.path);
      break;
  }
}

}  // namespace

bool is_bugfix_message(const std::string& message) {
  const std::string m = lowered(message);
  return contains_any(m, {"fix", "solve"}) &&
         contains_any(m, {"bug", "issue", "problem", "error"});
}

std::string_view drop_reason_name(DropReason reason) {
  switch (reason) {
    case DropReason::TooManyJavaFiles: return "too_many_files";
    case DropReason::NoModifiedJavaFiles: return "no_java_pairs";
  }
  return "";
}

FilterDecision apply_structural_filters(const CommitRecord& commit, int max_java_files) {
  int touched = 0;
  int modified = 0;
  for (const FileChange& f : commit.files) {
    if (!is_java_path(f.path)) continue;
    ++touched;
    if (f.kind == ChangeKind::Modified) ++modified;
  }
  if (touched > max_java_files) return {false, DropReason::TooManyJavaFiles};
  if (modified == 0) return {false, DropReason::NoModifiedJavaFiles};
  return {true, std::nullopt};
}

std::vector<FilePair> extract_file_pairs(const CommitRecord& commit) {
  std::vector<FilePair> pairs;
  for (const FileChange& f : commit.files) {
    if (f.kind != ChangeKind::Modified || !is_java_path(f.path)) continue;
    if (!f.before || !f.after)
      throw std::runtime_error("modified file missing a side: " + f.path);
    if (f.before->empty() || f.after->empty()) continue;
    pairs.push_back({commit.commit_id, commit.repo, f.path, *f.before, *f.after});
  }
  return pairs;
}

CommitRecord commit_from_json(const Json& value) {
  if (!value.is_object()) throw std::runtime_error("commit record is not an object");
  CommitRecord commit;
  commit.commit_id = require_string(value, "commit_id");
  if (commit.commit_id.empty()) throw std::runtime_error("empty commit_id");
  commit.repo = require_string(value, "repo");
  commit.message = require_string(value, "message");
  auto files = value.find("files");
  if (files == value.end() || !files->is_array())
    throw std::runtime_error("missing or non-array field: files");
  std::set<std::string> seen;
  for (const Json& entry : *files) {
    if (!entry.is_object()) throw std::runtime_error("file change is not an object");
    FileChange f;
    f.path = require_string(entry, "path");
    if (f.path.empty()) throw std::runtime_error("empty file path");
    if (!seen.insert(f.path).second)
      throw std::runtime_error("duplicate file path: " + f.path);
    f.kind = kind_from_string(require_string(entry, "kind"));
    f.before = optional_string(entry, "before");
    f.after = optional_string(entry, "after");
    check_sides(f);
    commit.files.push_back(std::move(f));
  }
  return commit;
}

Json commit_to_json(const CommitRecord& commit) {
  Json files = Json::array();
  for (const FileChange& f : commit.files) {
    Json entry{{"path", f.path}, {"kind", std::string(kind_name(f.kind))}};
    if (f.before) entry["before"] = *f.before;
    if (f.after) entry["after"] = *f.after;
    files.push_back(std::move(entry));
  }
  return Json{{"commit_id", commit.commit_id},
              {"repo", commit.repo},
              {"message", commit.message},
              {"files", std::move(files)}};
}

Json pair_to_json(const FilePair& pair) {
  return Json{{"commit_id", pair.commit_id},
              {"repo", pair.repo},
              {"path", pair.path},
              {"buggy_source", pair.buggy_source},
              {"fixed_source", pair.fixed_source}};
}

FilePair pair_from_json(const Json& value) {
  if (!value.is_object()) throw std::runtime_error("file pair is not an object");
  FilePair pair;
  pair.commit_id = require_string(value, "commit_id");
  pair.repo = require_string(value, "repo");
  pair.path = require_string(value, "path");
  pair.buggy_source = require_string(value, "buggy_source");
  pair.fixed_source = require_string(value, "fixed_source");
  if (pair.buggy_source.empty() || pair.fixed_source.empty())
    throw std::runtime_error("file pair with an empty side: " + pair.path);
  return pair;
}

std::vector<FilePair> ingest_corpus(
    std::istream& in, int max_java_files, IngestStats* stats,
    const std::function<void(std::size_t, const std::string&)>& diag) {
  std::vector<FilePair> pairs;
  IngestStats local;
  JsonlStats js = for_each_jsonl(
      in,
      [&](std::size_t line_no, Json&& value) {
        CommitRecord commit;
        try {
          commit = commit_from_json(value);
        } catch (const std::exception& e) {
          ++local.malformed;
          if (diag) diag(line_no, e.what());
          return;
        }
        ++local.commits;
        if (!is_bugfix_message(commit.message)) return;
        ++local.bugfix;
        FilterDecision decision = apply_structural_filters(commit, max_java_files);
        if (!decision.keep) {
          if (decision.reason == DropReason::TooManyJavaFiles)
            ++local.dropped_too_many_files;
          else
            ++local.dropped_no_java;
          return;
        }
        ++local.kept;
        std::vector<FilePair> extracted = extract_file_pairs(commit);
        local.pairs += extracted.size();
        for (FilePair& p : extracted) pairs.push_back(std::move(p));
      },
      diag);
  local.lines = js.lines;
  local.malformed += js.malformed;
  if (stats) *stats = local;
  return pairs;
}

}  // namespace mutgen
