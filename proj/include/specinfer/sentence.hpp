#pragma once

// Sentence splitting and clause structure of API descriptions. The rule-based
// analyzer recognizes compound sentences (coordinating conjunction or
// semicolon between verb-bearing clauses) and complex sentences (a
// subordinate clause attached to one independent clause).

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specinfer/name_semantics.hpp"

namespace specinfer {

/// Splits text on '.', '!' and '?' followed by whitespace or end of text,
/// ignoring terminators inside parentheses or double quotes and after common
/// abbreviations. Segments are trimmed; empty ones are dropped.
inline std::vector<std::string> split_sentences(std::string_view text)
{
    static constexpr std::array<std::string_view, 6> kAbbrev{"e.g", "i.e", "etc", "vs", "cf", "approx"};
    std::vector<std::string> out;
    std::size_t start = 0;
    int depth = 0;
    bool quoted = false;
    auto emit = [&](std::size_t end) {
        auto piece = trim(text.substr(start, end - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = end;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '"') {
            quoted = !quoted;
        } else if (c == '(' && !quoted) {
            ++depth;
        } else if (c == ')' && !quoted && depth > 0) {
            --depth;
        } else if ((c == '.' || c == '!' || c == '?') && depth == 0 && !quoted) {
            bool boundary = i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
            if (!boundary) continue;
            if (c == '.') {
                std::size_t w = i;
                while (w > start && !std::isspace(static_cast<unsigned char>(text[w - 1]))) --w;
                std::string word = to_lower(text.substr(w, i - w));
                bool abbrev = false;
                for (auto a : kAbbrev) abbrev = abbrev || word == a;
                if (abbrev) continue;
            }
            emit(i + 1);
        }
    }
    emit(text.size());
    return out;
}

enum class SentenceStructure { simple, compound, complex };

inline std::string_view to_string(SentenceStructure s)
{
    switch (s) {
    case SentenceStructure::simple: return "Simple";
    case SentenceStructure::compound: return "Compound";
    case SentenceStructure::complex: return "Complex";
    }
    return "Simple";
}

struct Clause {
    std::string text;
    bool independent = true;

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct SentenceAnalysis {
    std::string original;
    SentenceStructure structure = SentenceStructure::simple;
    std::vector<Clause> clauses;

    /// Clauses whose operations describe the primary action.
    std::vector<std::string> independent_clauses() const
    {
        std::vector<std::string> out;
        for (const auto& c : clauses) {
            if (c.independent) out.push_back(c.text);
        }
        return out;
    }
};

/// Replaceable clause analyzer (e.g. a dependency-parser backed one).
class ClauseAnalyzer {
public:
    virtual ~ClauseAnalyzer() = default;
    virtual SentenceAnalysis analyze(std::string_view sentence) const = 0;
};

class RuleClauseAnalyzer final : public ClauseAnalyzer {
public:
    explicit RuleClauseAnalyzer(const TagLexicon& lexicon) : lexicon_(&lexicon) {}

    /// Clause texts are returned as standalone sentences: capitalized and
    /// terminated with a period.
    SentenceAnalysis analyze(std::string_view sentence) const override
    {
        SentenceAnalysis result = split(sentence);
        for (auto& c : result.clauses) c.text = as_sentence(c.text);
        return result;
    }

private:
    SentenceAnalysis split(std::string_view sentence) const
    {
        SentenceAnalysis result;
        result.original = std::string(sentence);
        std::string_view body = trim(sentence);
        while (!body.empty() && (body.back() == '.' || body.back() == '!' || body.back() == '?')) {
            body.remove_suffix(1);
        }
        auto toks = tokenize(body);
        if (toks.empty()) {
            result.clauses.push_back({std::string(trim(sentence)), true});
            return result;
        }

        auto segments = compound_segments(toks);
        if (segments.size() == 1) {
            if (auto split = subordinate_split(toks, segments[0])) {
                result.structure = SentenceStructure::complex;
                Range indep = split->independent;
                Range dep = split->dependent;
                if (dep.first < indep.first) {
                    result.clauses.push_back({text_of(body, toks, dep), false});
                    result.clauses.push_back({text_of(body, toks, indep), true});
                } else {
                    result.clauses.push_back({text_of(body, toks, indep), true});
                    result.clauses.push_back({text_of(body, toks, dep), false});
                }
                return result;
            }
            result.clauses.push_back({text_of(body, toks, segments[0]), true});
            return result;
        }

        result.structure = SentenceStructure::compound;
        std::string subject = shared_subject(body, toks, segments[0]);
        for (std::size_t k = 0; k < segments.size(); ++k) {
            Range seg = segments[k];
            if (auto split = subordinate_split(toks, seg)) seg = split->independent;
            std::string text = text_of(body, toks, seg);
            if (k > 0 && !subject.empty() && is_verb(toks[seg.first])) {
                text = subject + " " + text;
            }
            result.clauses.push_back({std::move(text), true});
        }
        return result;
    }

    static std::string as_sentence(std::string text)
    {
        if (text.empty()) return text;
        if (std::islower(static_cast<unsigned char>(text.front()))) {
            text.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
        }
        char last = text.back();
        if (last != '.' && last != '!' && last != '?') text += '.';
        return text;
    }

    struct Token {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::string word;  // lowercased, surrounding punctuation removed
        bool comma_after = false;
        bool semicolon_after = false;
        bool in_parens = false;
    };

    // Half-open token range.
    struct Range {
        std::size_t first = 0;
        std::size_t last = 0;
        bool empty() const { return first >= last; }
    };

    struct Split {
        Range independent;
        Range dependent;
    };

    static std::vector<Token> tokenize(std::string_view s)
    {
        std::vector<Token> out;
        int depth = 0;
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            if (i >= s.size()) break;
            std::size_t b = i;
            while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            Token t;
            t.begin = b;
            t.end = i;
            std::string_view raw = s.substr(b, i - b);
            bool inside = depth > 0;
            for (char c : raw) {
                if (c == '(') ++depth;
                if (c == ')' && depth > 0) --depth;
            }
            t.in_parens = inside || depth > 0 || raw.front() == '(';
            t.comma_after = raw.back() == ',';
            t.semicolon_after = raw.back() == ';';
            std::size_t wb = 0, we = raw.size();
            auto core = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'; };
            while (wb < we && !core(raw[wb])) ++wb;
            while (we > wb && !core(raw[we - 1])) --we;
            t.word = to_lower(raw.substr(wb, we - wb));
            out.push_back(std::move(t));
        }
        return out;
    }

    bool is_verb(const Token& t) const { return !t.word.empty() && lexicon_->is_verb_candidate(t.word); }

    static bool is_subject_word(std::string_view w)
    {
        static constexpr std::array<std::string_view, 22> kWords{
            "it",  "they", "he",   "she",   "we",    "you",   "i",    "this",  "that", "these", "those",
            "the", "a",    "an",   "its",   "their", "each",  "every", "any",  "some", "no",    "there"};
        for (auto k : kWords) {
            if (k == w) return true;
        }
        return false;
    }

    // Whether tokens starting at j open a clause: a bare verb, or a short
    // subject phrase followed by a verb.
    bool clause_starts_at(const std::vector<Token>& toks, std::size_t j, std::size_t limit) const
    {
        if (j >= limit) return false;
        if (is_verb(toks[j])) return true;
        // Noun-leaning forms such as "sets" still open a clause when a
        // determiner follows ("and sets the flag").
        if (lexicon_->has_tag(toks[j].word, "VERB") && j + 1 < limit && is_subject_word(toks[j + 1].word) &&
            toks[j + 1].word != "that") {
            return true;
        }
        if (!is_subject_word(toks[j].word)) return false;
        for (std::size_t k = j + 1; k < limit && k <= j + 4; ++k) {
            if (is_verb(toks[k])) return true;
            if (toks[k - 1].comma_after || toks[k - 1].semicolon_after) break;
        }
        return false;
    }

    bool has_verb(const std::vector<Token>& toks, Range r) const
    {
        if (clause_starts_at(toks, r.first, r.last)) return true;
        for (std::size_t k = r.first; k < r.last; ++k) {
            if (is_verb(toks[k])) return true;
        }
        return false;
    }

    std::vector<Range> compound_segments(const std::vector<Token>& toks) const
    {
        std::vector<Range> out;
        std::size_t seg_start = 0;
        const std::size_t n = toks.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Token& t = toks[i];
            if (t.in_parens) continue;
            if (t.semicolon_after && i + 1 < n) {
                Range left{seg_start, i + 1};
                if (has_verb(toks, left) && clause_starts_at(toks, i + 1, n)) {
                    out.push_back(left);
                    seg_start = i + 1;
                }
                continue;
            }
            if (i == seg_start || i + 1 >= n) continue;
            const std::string& w = t.word;
            bool plain = w == "and" || w == "or" || w == "but" || w == "nor";
            bool comma_only = (w == "for" || w == "so" || w == "yet") && toks[i - 1].comma_after;
            if (w == "so" && toks[i + 1].word == "that") comma_only = false;
            if (!plain && !comma_only) continue;
            Range left{seg_start, i};
            if (has_verb(toks, left) && clause_starts_at(toks, i + 1, n)) {
                out.push_back(left);
                seg_start = i + 1;
            }
        }
        out.push_back(Range{seg_start, n});
        return out;
    }

    std::optional<Split> subordinate_split(const std::vector<Token>& toks, Range seg) const
    {
        static constexpr std::array<std::string_view, 6> kStrong{"if", "when", "because", "although", "unless",
                                                                 "whereas"};
        static constexpr std::array<std::string_view, 6> kWeak{"while", "after", "before", "since", "that", "which"};
        auto in = [](auto& list, std::string_view w) {
            for (auto k : list) {
                if (k == w) return true;
            }
            return false;
        };
        auto subordinator_len = [&](std::size_t i) -> std::size_t {
            const std::string& w = toks[i].word;
            if (w == "so" && i + 1 < seg.last && toks[i + 1].word == "that") return 2;
            if (in(kStrong, w)) return 1;
            if (in(kWeak, w) && clause_starts_at(toks, i + 1, seg.last)) return 1;
            return 0;
        };

        if (seg.empty()) return std::nullopt;
        if (subordinator_len(seg.first) > 0) {
            for (std::size_t k = seg.first; k + 1 < seg.last; ++k) {
                if (toks[k].comma_after) {
                    return Split{Range{k + 1, seg.last}, Range{seg.first, k + 1}};
                }
            }
            return std::nullopt;
        }
        for (std::size_t i = seg.first + 1; i < seg.last; ++i) {
            if (toks[i].in_parens) continue;
            if (subordinator_len(i) > 0) {
                return Split{Range{seg.first, i}, Range{i, seg.last}};
            }
        }
        return std::nullopt;
    }

    // Subject phrase opening the first clause, up to its first verb.
    std::string shared_subject(std::string_view body, const std::vector<Token>& toks, Range first) const
    {
        if (first.empty() || is_verb(toks[first.first]) || !is_subject_word(toks[first.first].word)) return {};
        for (std::size_t k = first.first + 1; k < first.last; ++k) {
            if (is_verb(toks[k])) return text_of(body, toks, Range{first.first, k});
        }
        return {};
    }

    static std::string text_of(std::string_view body, const std::vector<Token>& toks, Range r)
    {
        if (r.empty()) return {};
        std::string_view s = body.substr(toks[r.first].begin, toks[r.last - 1].end - toks[r.first].begin);
        while (!s.empty() && (s.back() == ',' || s.back() == ';' || s.back() == ':' || s.back() == '.')) {
            s.remove_suffix(1);
        }
        return std::string(trim(s));
    }

    const TagLexicon* lexicon_;
};

}  // namespace specinfer
