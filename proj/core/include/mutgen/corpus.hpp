#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mutgen/jsonl.hpp"

namespace mutgen {

enum class ChangeKind { Modified, Created, Deleted };

struct FileChange {
  std::string path;
  ChangeKind kind = ChangeKind::Modified;
  std::optional<std::string> before;  // absent for created files
  std::optional<std::string> after;   // absent for deleted files
};

struct CommitRecord {
  std::string commit_id;
  std::string repo;
  std::string message;
  std::vector<FileChange> files;
};

// A buggy/fixed source pair from one modified Java file of one commit.
struct FilePair {
  std::string commit_id;
  std::string repo;
  std::string path;
  std::string buggy_source;  // pre-fix
  std::string fixed_source;  // post-fix
};

// true when the lowercased message contains one of {fix, solve} and one of
// {bug, issue, problem, error} as substrings
bool is_bugfix_message(const std::string& message);

enum class DropReason { TooManyJavaFiles, NoModifiedJavaFiles };

std::string_view drop_reason_name(DropReason reason);

struct FilterDecision {
  bool keep = false;
  std::optional<DropReason> reason;
};

// Drops commits touching more than `max_java_files` Java files (created and
// deleted files count as touched) and commits with no modified Java file
// left after excluding created, deleted and non-Java entries.
FilterDecision apply_structural_filters(const CommitRecord& commit, int max_java_files = 5);

// One pair per modified Java file, in record order; created, deleted and
// non-Java files produce nothing, as does a file with an empty side. Throws
// std::runtime_error when a modified file is missing a side.
std::vector<FilePair> extract_file_pairs(const CommitRecord& commit);

// Validates shape and the kind/side invariants (modified needs both sides,
// created has no before, deleted has no after, paths unique and non-empty,
// commit_id non-empty); throws std::runtime_error on violations.
CommitRecord commit_from_json(const Json& value);
Json commit_to_json(const CommitRecord& commit);

Json pair_to_json(const FilePair& pair);
FilePair pair_from_json(const Json& value);

struct IngestStats {
  std::size_t lines = 0;       // input lines, blank ones included
  std::size_t malformed = 0;   // unparsable lines plus invariant-violating records
  std::size_t commits = 0;     // well-formed records
  std::size_t bugfix = 0;      // passed the message filter
  std::size_t kept = 0;        // passed the structural filters
  std::size_t dropped_too_many_files = 0;
  std::size_t dropped_no_java = 0;
  std::size_t pairs = 0;
};

// Full pass over a JSONL corpus: parse each line as a CommitRecord, keep
// bug-fix messages, apply the structural filters, extract pairs. Bad lines
// and bad records are reported through `diag` (if set) and skipped; the
// stream is never aborted. Output order follows the input.
std::vector<FilePair> ingest_corpus(
    std::istream& in, int max_java_files = 5, IngestStats* stats = nullptr,
    const std::function<void(std::size_t line_no, const std::string& what)>& diag = {});

}  // namespace mutgen
