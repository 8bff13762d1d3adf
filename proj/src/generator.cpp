#include "hardrank/generator.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "hardrank/enrichment.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

std::string StubGenerator::complete(const std::string& prompt, int /*max_tokens*/)
{
    auto parts = parse_prompt(prompt);
    if (!parts) throw GeneratorError("stub generator: prompt does not follow the enrichment template", false);
    auto words = split_whitespace(parts->passage);
    if (words.size() > 3) words.resize(3);
    return "REWRITTEN: " + parts->query + " | " + join(words, " ");
}

HttpGenerator::HttpGenerator(HttpGeneratorOptions options)
    : options_(std::move(options)), in_flight_(std::clamp(options_.max_in_flight, 1, 1024))
{
    const auto& url = options_.url;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InputError("generator url must start with http:// or https://");
    auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw InputError("unsupported generator url scheme '" + scheme + "'");
    auto path_start = url.find('/', scheme_end + 3);
    origin_ = path_start == std::string::npos ? url : url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (options_.max_retries < 0) throw InputError("generator max_retries must be >= 0");
}

std::string HttpGenerator::id() const { return "http:" + origin_ + path_; }

std::string HttpGenerator::attempt(const std::string& body)
{
    httplib::Client client(origin_);
    auto secs = options_.timeout.count() / 1000;
    auto usecs = (options_.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!options_.token.empty()) headers.emplace("Authorization", "Bearer " + options_.token);

    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) throw GeneratorError("request to " + id() + " failed: " + httplib::to_string(res.error()), true);
    if (res->status == 429 || res->status >= 500)
        throw GeneratorError("generator returned HTTP " + std::to_string(res->status), true);
    if (res->status != 200) throw GeneratorError("generator returned HTTP " + std::to_string(res->status), false);

    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw GeneratorError(std::string("generator reply is not JSON: ") + e.what(), false);
    }
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
        throw GeneratorError("generator reply lacks a string 'text' field", false);
    return reply["text"].get<std::string>();
}

std::string HttpGenerator::complete(const std::string& prompt, int max_tokens)
{
    const std::string body = nlohmann::json{{"prompt", prompt}, {"max_tokens", max_tokens}}.dump();

    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<1024>& sem;
        ~Release() { sem.release(); }
    } release{in_flight_};

    auto backoff = options_.initial_backoff;
    for (int attempt_no = 0;; ++attempt_no) {
        try {
            return attempt(body);
        } catch (const GeneratorError& e) {
            if (!e.transient() || attempt_no >= options_.max_retries) throw;
        }
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
    }
}

} // namespace hardrank
