#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hardrank/types.hpp"

namespace hardrank::io {

/// TREC run: `<qid> Q0 <docid> <rank> <score> <tag>`. Records are regrouped
/// by qid, re-sorted by score (doc_id ascending on ties) and re-ranked 1..n.
/// The run tag is taken from the first record.
RunList parse_run(std::istream& in);
/// Writes `run` with `tag` (falls back to run.tag when empty). Scores use
/// the shortest representation that reads back bit-identically.
void write_run(std::ostream& out, const RunList& run, const std::string& tag = {});

/// `<qid> <iteration> <docid> <grade>`; duplicates are an error.
Qrels parse_qrels(std::istream& in);
void write_qrels(std::ostream& out, const Qrels& qrels);

/// `<qid>\t<text>`; exactly one tab per line, blank lines skipped.
std::vector<Query> parse_queries(std::istream& in);
void write_queries(std::ostream& out, const std::vector<Query>& queries);

/// One JSON object per line with keys `doc_id`, `text` and optionally
/// `passages` (array of strings).
std::vector<Document> parse_corpus(std::istream& in);
void write_corpus(std::ostream& out, const std::vector<Document>& corpus);

/// `<qid>\t<score>` with score in [0,1].
std::map<std::string, double> parse_qpp_scores(std::istream& in);
void write_qpp_scores(std::ostream& out, const std::map<std::string, double>& scores);

// File wrappers. Open failures throw InputError naming the path; parse
// errors are rethrown with the path prepended.
RunList load_run(const std::filesystem::path& path);
void save_run(const std::filesystem::path& path, const RunList& run, const std::string& tag = {});
Qrels load_qrels(const std::filesystem::path& path);
std::vector<Query> load_queries(const std::filesystem::path& path);
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::map<std::string, double> load_qpp_scores(const std::filesystem::path& path);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

} // namespace hardrank::io
