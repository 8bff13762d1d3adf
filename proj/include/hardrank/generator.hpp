#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "hardrank/errors.hpp"

namespace hardrank {

class GeneratorError : public RuntimeFailure {
public:
    GeneratorError(const std::string& what, bool transient) : RuntimeFailure(what), transient_(transient) {}
    bool transient() const noexcept { return transient_; }

private:
    bool transient_;
};

/// Prompt in, completion out. Implementations must be callable concurrently.
class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual std::string complete(const std::string& prompt, int max_tokens) = 0;
    virtual std::string id() const = 0;
};

/// Deterministic generator for tests and offline runs. Reads the query and
/// context back out of a prompt built by build_prompt and answers
/// "REWRITTEN: <query> | <first 3 whitespace tokens of the context>".
class StubGenerator final : public TextGenerator {
public:
    std::string complete(const std::string& prompt, int max_tokens) override;
    std::string id() const override { return "stub"; }
};

struct HttpGeneratorOptions {
    // e.g. "http://127.0.0.1:8000/generate"
    std::string url;
    // Sent as "Authorization: Bearer <token>" when non-empty.
    std::string token;
    int max_in_flight = 4;
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{200};
    std::chrono::milliseconds timeout{30000};
};

/// Client for a completion endpoint: POST {"prompt", "max_tokens"} and
/// expects {"text"} back. Connection errors, 429 and 5xx are retried with
/// exponential backoff; other failures are reported immediately.
class HttpGenerator final : public TextGenerator {
public:
    explicit HttpGenerator(HttpGeneratorOptions options);

    std::string complete(const std::string& prompt, int max_tokens) override;
    std::string id() const override;

private:
    std::string attempt(const std::string& body);

    HttpGeneratorOptions options_;
    std::string origin_;
    std::string path_;
    std::counting_semaphore<1024> in_flight_;
};

} // namespace hardrank
