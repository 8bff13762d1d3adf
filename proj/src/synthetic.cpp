#include "hardrank/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "hardrank/errors.hpp"
#include "hardrank/io.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

namespace {

// Frequent enough that BM25 idf floors them to 0.
const std::vector<std::string> kGlue = {"the", "of", "and", "a", "to", "in", "is", "for", "on", "with", "as", "what"};

class Vocabulary {
public:
    explicit Vocabulary(std::mt19937_64& rng) : rng_(rng) {}

    std::string word()
    {
        static constexpr std::string_view consonants = "bcdfghklmnprstvz";
        static constexpr std::string_view vowels = "aeiou";
        for (;;) {
            std::string w;
            auto syllables = 2 + rng_() % 2;
            for (std::size_t s = 0; s < syllables; ++s) {
                w.push_back(consonants[rng_() % consonants.size()]);
                w.push_back(vowels[rng_() % vowels.size()]);
            }
            if (rng_() % 2) w.push_back(consonants[rng_() % consonants.size()]);
            if (used_.insert(w).second) return w;
        }
    }

    std::string acronym()
    {
        for (;;) {
            std::string a;
            auto len = 3 + rng_() % 2;
            for (std::size_t i = 0; i < len; ++i) a.push_back(static_cast<char>('A' + rng_() % 26));
            std::string lower = a;
            std::transform(lower.begin(), lower.end(), lower.begin(), [](char c) { return static_cast<char>(c - 'A' + 'a'); });
            if (is_stopword(lower)) continue;
            if (used_.insert(lower).second) return a;
        }
    }

    std::vector<std::string> words(std::size_t n)
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(word());
        return out;
    }

private:
    std::mt19937_64& rng_;
    std::set<std::string> used_;
};

class TextBuilder {
public:
    TextBuilder(std::mt19937_64& rng, const std::vector<std::string>& filler) : rng_(rng), filler_(filler) {}

    /// `n` tokens: glue with p_glue, a topic word with p_topic, filler otherwise.
    std::vector<std::string> body(std::size_t n, const std::vector<std::string>& topic, double p_glue, double p_topic)
    {
        std::vector<std::string> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double u = uniform();
            if (u < p_glue) out.push_back(kGlue[rng_() % kGlue.size()]);
            else if (u < p_glue + p_topic && !topic.empty()) out.push_back(topic[rng_() % topic.size()]);
            else out.push_back(filler_[rng_() % filler_.size()]);
        }
        return out;
    }

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

private:
    std::mt19937_64& rng_;
    const std::vector<std::string>& filler_;
};

std::string sentence_case(std::vector<std::string> tokens)
{
    if (tokens.empty()) return {};
    std::ostringstream out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out << ((i % 12 == 0) ? ". " : " ");
        out << tokens[i];
    }
    out << '.';
    return out.str();
}

} // namespace

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options)
{
    std::mt19937_64 rng(options.seed);
    Vocabulary vocab(rng);
    const auto filler = vocab.words(300);
    TextBuilder text(rng, filler);

    SyntheticBenchmark bench;
    std::size_t doc_counter = 0;
    auto add_doc = [&](std::string body) {
        char id[16];
        std::snprintf(id, sizeof id, "D%03zu", doc_counter++);
        bench.corpus.push_back(Document{id, std::move(body), {}});
        return std::string(id);
    };

    // interleave the populations so file order does not reveal them
    std::vector<bool> pattern;
    for (std::size_t h = 0, e = 0; h < options.hard_queries || e < options.easy_queries;) {
        if (h < options.hard_queries) pattern.push_back(true), ++h;
        if (e < options.easy_queries) pattern.push_back(false), ++e;
    }
    std::size_t hard_seen = 0;
    for (std::size_t qi = 0; qi < pattern.size(); ++qi) {
        const bool hard = pattern[qi];
        char qid[16];
        std::snprintf(qid, sizeof qid, "Q%02zu", qi + 1);

        if (hard) {
            const auto acr = vocab.acronym();
            std::string acr_lower = acr;
            std::transform(acr_lower.begin(), acr_lower.end(), acr_lower.begin(),
                           [](char c) { return static_cast<char>(c - 'A' + 'a'); });
            const auto expansion = vocab.words(3);
            static const char* kTemplates[] = {"what is %s", "%s", "what is the %s", "%s for"};
            char qtext[64];
            std::snprintf(qtext, sizeof qtext, kTemplates[hard_seen++ % 4], acr.c_str());
            bench.queries.push_back(Query{qid, qtext, Hardness::hard});

            // Relevant: the acronym opens the document, then its expansion.
            auto rel = text.body(80, expansion, 0.3, 0.2);
            std::vector<std::string> head = {acr, "is", "the", expansion[0], expansion[1], expansion[2]};
            rel.insert(rel.begin(), head.begin(), head.end());
            bench.qrels.add(qid, add_doc(sentence_case(rel)), 3);

            auto partial = text.body(70, expansion, 0.3, 0.1);
            partial.insert(partial.begin() + 3, acr);
            bench.qrels.add(qid, add_doc(sentence_case(partial)), 1);

            // Off-topic senses of the acronym: repeated, but never in the lead.
            for (std::size_t d = 0; d < options.hard_distractors; ++d) {
                auto other = vocab.words(3);
                auto body = text.body(60, other, 0.3, 0.15);
                for (int rep = 0; rep < 4; ++rep) body.insert(body.begin() + 25 + text.below(body.size() - 25), acr_lower);
                bench.qrels.add(qid, add_doc(sentence_case(body)), 0);
            }
        } else {
            const auto topic = vocab.words(8);
            std::vector<std::string> qterms(topic.begin(), topic.begin() + 7);
            bench.queries.push_back(Query{qid, join(qterms, " "), Hardness::easy});

            auto rel = text.body(90, topic, 0.25, 0.3);
            bench.qrels.add(qid, add_doc(sentence_case(rel)), 3);

            std::vector<std::string> partial_topic = {topic[0], topic[1], topic[2], topic[3], topic[7]};
            auto partial = text.body(80, partial_topic, 0.25, 0.15);
            bench.qrels.add(qid, add_doc(sentence_case(partial)), 1);

            // Keyword-stuffed lead, unrelated body.
            for (std::size_t d = 0; d < options.easy_distractors; ++d) {
                auto lead = qterms;
                for (std::size_t i = lead.size(); i > 1; --i) std::swap(lead[i - 1], lead[text.below(i)]);
                auto body = text.body(100, {}, 0.3, 0.0);
                body.insert(body.begin(), lead.begin(), lead.end());
                bench.qrels.add(qid, add_doc(sentence_case(body)), 0);
            }
        }
    }
    return bench;
}

void write_synthetic_benchmark(const SyntheticBenchmark& bench, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::ostringstream corpus, queries, qrels, labels;
    io::write_corpus(corpus, bench.corpus);
    io::write_queries(queries, bench.queries);
    io::write_qrels(qrels, bench.qrels);
    for (const auto& q : bench.queries)
        labels << q.query_id << '\t' << (q.hardness == Hardness::hard ? "hard" : "easy") << '\n';
    io::write_file_atomic(dir / "corpus.jsonl", corpus.str());
    io::write_file_atomic(dir / "queries.tsv", queries.str());
    io::write_file_atomic(dir / "qrels.txt", qrels.str());
    io::write_file_atomic(dir / "hardness.tsv", labels.str());
}

std::map<std::string, Hardness> load_hardness_labels(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::map<std::string, Hardness> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_whitespace(line);
        if (fields.size() != 2 || (fields[1] != "hard" && fields[1] != "easy"))
            throw ParseError(lineno, "expected <qid>\\t<hard|easy>", path.string());
        out[fields[0]] = fields[1] == "hard" ? Hardness::hard : Hardness::easy;
    }
    return out;
}

} // namespace hardrank
