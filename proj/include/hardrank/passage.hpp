#pragma once

#include <cstddef>
#include <string>

#include "hardrank/index.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

struct Passage {
    std::string text;
    double score = 0.0;
    // Byte range of `text` inside the document.
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Picks the part of a document used as enrichment context.
class PassageSelector {
public:
    virtual ~PassageSelector() = default;
    virtual Passage select(const Document& doc, const Query& query) const = 0;
    virtual std::string id() const = 0;
};

/// Sliding windows of `window` tokens at 50% overlap. The winner has the
/// most distinct query terms; ties go to the higher saturated-tf sum, then
/// to the earlier window. Documents with pre-segmented passages are scored
/// passage by passage instead.
class LexicalPassageSelector final : public PassageSelector {
public:
    explicit LexicalPassageSelector(std::size_t window = 120, Bm25Params params = {});

    Passage select(const Document& doc, const Query& query) const override;
    std::string id() const override;

private:
    std::size_t window_;
    Bm25Params params_;
};

inline Passage select_passage(const Document& doc, const Query& query, std::size_t window)
{
    return LexicalPassageSelector(window).select(doc, query);
}

} // namespace hardrank
