#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vitmem/error.hpp"

namespace vitmem::semantics {

struct CaptionRecord {
    std::string id;
    std::string caption;
};

// CSV `id,caption` (UTF-8, quoted).
std::vector<CaptionRecord> load_captions(const std::string& path);

// Noun wordlist plus plural->singular lemmatization. A candidate singular
// is accepted only if the lexicon contains it.
struct Lexicon {
    std::unordered_set<std::string> nouns;
    std::unordered_map<std::string, std::string> irregular_plurals;

    // lowercase lemma, or nullopt when the token is not a known noun
    std::optional<std::string> lemma(const std::string& word) const;

    // Compiled-in common-noun wordlist with standard plural rules.
    static const Lexicon& builtin();
    // File: one lemma per line; `@irregular <plural> <singular>` lines
    // extend the plural table; `#` comments.
    static Lexicon load(const std::string& path);
};

// Lowercased, lemmatized, de-duplicated per caption, first-appearance order.
std::vector<std::string> extract_nouns(const std::string& caption, const Lexicon& lexicon);

struct NounStat {
    std::string noun;
    std::size_t count = 0;    // images whose caption contains it
    double mean_score = 0.0;  // mean memorability over those images
};

// An image contributes its score once per distinct noun in its caption.
// Throws when a caption id has no score.
std::vector<NounStat> noun_stats(const std::vector<CaptionRecord>& captions,
                                 const std::unordered_map<std::string, double>& scores,
                                 const Lexicon& lexicon);

// Keeps nouns whose count is strictly greater than the nearest-rank
// pct-th percentile of counts.
std::vector<NounStat> filter_percentile(const std::vector<NounStat>& stats, double pct);

struct MatchedNoun {
    std::string noun;
    std::size_t count_a = 0;
    double mean_a = 0.0;
    std::size_t count_b = 0;
    double mean_b = 0.0;
};

struct MatchResult {
    std::vector<MatchedNoun> table;
    std::optional<double> spearman_rho;
    std::optional<double> r_squared;
};

// Intersection on lemma; metrics over the paired mean scores.
MatchResult match_and_correlate(const std::vector<NounStat>& a, const std::vector<NounStat>& b);

// CSV `noun,count_a,mean_a,count_b,mean_b`.
void save_noun_csv(const std::vector<MatchedNoun>& table, const std::string& path);
std::vector<MatchedNoun> load_noun_csv(const std::string& path);

// Scatter of mean_a vs mean_b with a least-squares line; the fit line
// carries data-slope / data-intercept attributes.
void save_noun_svg(const std::vector<MatchedNoun>& table, const std::string& path);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit least_squares(const std::vector<MatchedNoun>& table);

}  // namespace vitmem::semantics
