#include "hardrank/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hardrank/errors.hpp"
#include "hardrank/log.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

void sort_and_rank(RankedList& list)
{
    std::sort(list.begin(), list.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < list.size(); ++i) list[i].rank = static_cast<int>(i + 1);
}

void check_ranked_list(const RankedList& list)
{
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& r = list[i];
        if (r.rank != static_cast<int>(i + 1))
            throw InputError("rank " + std::to_string(r.rank) + " at position " + std::to_string(i + 1));
        if (i > 0) {
            const auto& prev = list[i - 1];
            if (prev.score < r.score || (prev.score == r.score && !(prev.doc_id < r.doc_id)))
                throw InputError("ranked list out of order at rank " + std::to_string(r.rank));
        }
        if (!seen.insert(r.doc_id).second) throw DuplicateError("duplicate doc_id '" + r.doc_id + "' in ranked list");
    }
}

DocumentStore::DocumentStore(std::vector<Document> docs) : docs_(std::move(docs))
{
    for (std::size_t i = 0; i < docs_.size(); ++i)
        if (!by_id_.emplace(docs_[i].doc_id, i).second)
            throw DuplicateError("duplicate doc_id '" + docs_[i].doc_id + "'");
}

const Document* DocumentStore::find(const std::string& doc_id) const
{
    auto it = by_id_.find(doc_id);
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& DocumentStore::at(const std::string& doc_id) const
{
    const auto* d = find(doc_id);
    if (!d) throw InputError("doc_id '" + doc_id + "' not in corpus");
    return *d;
}

void Qrels::add(const std::string& query_id, const std::string& doc_id, int grade)
{
    if (grade < 0) throw InputError("negative grade for (" + query_id + ", " + doc_id + ")");
    auto [it, inserted] = by_query_[query_id].emplace(doc_id, grade);
    if (!inserted) throw DuplicateError("duplicate judgment for (" + query_id + ", " + doc_id + ")");
}

std::optional<int> Qrels::grade(const std::string& query_id, const std::string& doc_id) const
{
    auto q = by_query_.find(query_id);
    if (q == by_query_.end()) return std::nullopt;
    auto d = q->second.find(doc_id);
    if (d == q->second.end()) return std::nullopt;
    return d->second;
}

int Qrels::grade_or_zero(const std::string& query_id, const std::string& doc_id) const
{
    return grade(query_id, doc_id).value_or(0);
}

const std::map<std::string, int>* Qrels::judgments(const std::string& query_id) const
{
    auto q = by_query_.find(query_id);
    return q == by_query_.end() ? nullptr : &q->second;
}

bool Qrels::has_positive(const std::string& query_id, int threshold) const
{
    const auto* j = judgments(query_id);
    if (!j) return false;
    return std::any_of(j->begin(), j->end(), [&](const auto& kv) { return kv.second >= threshold; });
}

std::size_t Qrels::size() const
{
    std::size_t n = 0;
    for (const auto& [q, docs] : by_query_) n += docs.size();
    return n;
}

namespace io {

namespace {

bool is_blank(std::string_view line) { return trim(line).empty(); }

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

void check_token(const std::string& s, const char* what)
{
    if (s.empty() || std::any_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }))
        throw InputError(std::string(what) + " '" + s + "' is empty or contains whitespace");
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    return in;
}

template <typename F>
auto with_path(const std::filesystem::path& path, F&& fn)
{
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    } catch (const DuplicateError& e) {
        throw DuplicateError(path.string() + ": " + e.what());
    }
}

} // namespace

RunList parse_run(std::istream& in)
{
    RunList run;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t lineno = 0;
    bool have_tag = false;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            log::warn("run: skipping blank line " + std::to_string(lineno));
            continue;
        }
        auto fields = split_whitespace(line);
        if (fields.size() != 6)
            throw ParseError(lineno, "expected 6 fields, got " + std::to_string(fields.size()));
        if (fields[1] != "Q0") throw ParseError(lineno, "second field must be Q0");
        if (!parse_int(fields[3])) throw ParseError(lineno, "non-numeric rank '" + fields[3] + "'");
        auto score = parse_double(fields[4]);
        if (!score) throw ParseError(lineno, "non-numeric score '" + fields[4] + "'");
        if (!seen.emplace(fields[0], fields[2]).second)
            throw DuplicateError("line " + std::to_string(lineno) + ": duplicate (" + fields[0] + ", " + fields[2] + ")");
        if (!have_tag) {
            run.tag = fields[5];
            have_tag = true;
        }
        run.queries[fields[0]].push_back(RunRecord{fields[2], *score, 0});
    }
    for (auto& [qid, list] : run.queries) sort_and_rank(list);
    return run;
}

void write_run(std::ostream& out, const RunList& run, const std::string& tag)
{
    const std::string& t = tag.empty() ? run.tag : tag;
    check_token(t, "run tag");
    for (const auto& [qid, list] : run.queries) {
        check_token(qid, "query id");
        check_ranked_list(list);
        for (const auto& r : list) {
            check_token(r.doc_id, "doc id");
            out << qid << " Q0 " << r.doc_id << ' ' << r.rank << ' ' << format_double(r.score) << ' ' << t << '\n';
        }
    }
}

Qrels parse_qrels(std::istream& in)
{
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            log::warn("qrels: skipping blank line " + std::to_string(lineno));
            continue;
        }
        auto fields = split_whitespace(line);
        if (fields.size() != 4)
            throw ParseError(lineno, "expected 4 fields, got " + std::to_string(fields.size()));
        auto grade = parse_int(fields[3]);
        if (!grade) throw ParseError(lineno, "non-integer grade '" + fields[3] + "'");
        if (*grade < 0) throw ParseError(lineno, "negative grade");
        try {
            qrels.add(fields[0], fields[2], static_cast<int>(*grade));
        } catch (const DuplicateError& e) {
            throw DuplicateError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return qrels;
}

void write_qrels(std::ostream& out, const Qrels& qrels)
{
    for (const auto& [qid, docs] : qrels.all()) {
        check_token(qid, "query id");
        for (const auto& [doc, grade] : docs) {
            check_token(doc, "doc id");
            out << qid << " 0 " << doc << ' ' << grade << '\n';
        }
    }
}

std::vector<Query> parse_queries(std::istream& in)
{
    std::vector<Query> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            log::warn("queries: skipping blank line " + std::to_string(lineno));
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(lineno, "missing TAB");
        if (line.find('\t', tab + 1) != std::string::npos) throw ParseError(lineno, "more than one TAB");
        Query q;
        q.query_id = std::string(trim(std::string_view(line).substr(0, tab)));
        q.text = std::string(trim(std::string_view(line).substr(tab + 1)));
        if (q.query_id.empty()) throw ParseError(lineno, "empty query id");
        if (q.text.empty()) throw ParseError(lineno, "empty query text");
        if (!seen.insert(q.query_id).second)
            throw DuplicateError("line " + std::to_string(lineno) + ": duplicate query id '" + q.query_id + "'");
        out.push_back(std::move(q));
    }
    return out;
}

void write_queries(std::ostream& out, const std::vector<Query>& queries)
{
    for (const auto& q : queries) {
        check_token(q.query_id, "query id");
        if (q.text.find_first_of("\t\n\r") != std::string::npos)
            throw InputError("query text for '" + q.query_id + "' contains a tab or newline");
        out << q.query_id << '\t' << q.text << '\n';
    }
}

std::vector<Document> parse_corpus(std::istream& in)
{
    std::vector<Document> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("doc_id") || !j.contains("text") || !j["doc_id"].is_string() ||
            !j["text"].is_string())
            throw ParseError(lineno, "expected object with string keys doc_id and text");
        Document d;
        d.doc_id = j["doc_id"].get<std::string>();
        d.text = j["text"].get<std::string>();
        if (d.doc_id.empty()) throw ParseError(lineno, "empty doc_id");
        if (j.contains("passages")) {
            if (!j["passages"].is_array()) throw ParseError(lineno, "passages must be an array");
            for (const auto& p : j["passages"]) {
                if (!p.is_string()) throw ParseError(lineno, "passages must be strings");
                d.passages.push_back(p.get<std::string>());
            }
            // Passages are verbatim, in-order spans of the text.
            std::size_t pos = 0;
            for (const auto& p : d.passages) {
                auto at = d.text.find(p, pos);
                if (p.empty() || at == std::string::npos)
                    throw ParseError(lineno, "passages must be non-empty, in-order spans of text");
                pos = at + p.size();
            }
        }
        if (!seen.insert(d.doc_id).second)
            throw DuplicateError("line " + std::to_string(lineno) + ": duplicate doc_id '" + d.doc_id + "'");
        out.push_back(std::move(d));
    }
    return out;
}

void write_corpus(std::ostream& out, const std::vector<Document>& corpus)
{
    for (const auto& d : corpus) {
        nlohmann::json j{{"doc_id", d.doc_id}, {"text", d.text}};
        if (!d.passages.empty()) j["passages"] = d.passages;
        out << j.dump() << '\n';
    }
}

std::map<std::string, double> parse_qpp_scores(std::istream& in)
{
    std::map<std::string, double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (is_blank(line)) {
            log::warn("qpp scores: skipping blank line " + std::to_string(lineno));
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw ParseError(lineno, "expected <qid>\\t<score>");
        std::string qid(trim(std::string_view(line).substr(0, tab)));
        if (qid.empty()) throw ParseError(lineno, "empty query id");
        auto score = parse_double(trim(std::string_view(line).substr(tab + 1)));
        if (!score) throw ParseError(lineno, "non-numeric score");
        if (*score < 0.0 || *score > 1.0) throw ParseError(lineno, "score " + format_double(*score) + " outside [0,1]");
        if (!out.emplace(qid, *score).second)
            throw DuplicateError("line " + std::to_string(lineno) + ": duplicate query id '" + qid + "'");
    }
    return out;
}

void write_qpp_scores(std::ostream& out, const std::map<std::string, double>& scores)
{
    for (const auto& [qid, s] : scores) {
        check_token(qid, "query id");
        if (!(s >= 0.0 && s <= 1.0)) throw InputError("score for '" + qid + "' outside [0,1]");
        out << qid << '\t' << format_double(s) << '\n';
    }
}

RunList load_run(const std::filesystem::path& path)
{
    return with_path(path, [&] {
        auto in = open_in(path);
        return parse_run(in);
    });
}

void save_run(const std::filesystem::path& path, const RunList& run, const std::string& tag)
{
    std::ostringstream out;
    write_run(out, run, tag);
    write_file_atomic(path, out.str());
}

Qrels load_qrels(const std::filesystem::path& path)
{
    return with_path(path, [&] {
        auto in = open_in(path);
        return parse_qrels(in);
    });
}

std::vector<Query> load_queries(const std::filesystem::path& path)
{
    return with_path(path, [&] {
        auto in = open_in(path);
        return parse_queries(in);
    });
}

std::vector<Document> load_corpus(const std::filesystem::path& path)
{
    return with_path(path, [&] {
        auto in = open_in(path);
        return parse_corpus(in);
    });
}

std::map<std::string, double> load_qpp_scores(const std::filesystem::path& path)
{
    return with_path(path, [&] {
        auto in = open_in(path);
        return parse_qpp_scores(in);
    });
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw RuntimeFailure("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out) throw RuntimeFailure("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace io
} // namespace hardrank
