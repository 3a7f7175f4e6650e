// Part-of-speech and lemma annotation of raw tokens, plus the discard flags
// (unprocessable tokens, proper nouns) applied before sampling.
#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polysemy/chat.hpp"
#include "polysemy/lexicon.hpp"

namespace polysemy::annotation {

using lexicon::ContentCategory;

struct TaggedToken {
    std::string surface;
    std::string tag;    // tagger tagset symbol, or %mor category code
    std::string lemma;  // canonical form
    int index = 0;      // position in the speaker stream
};

struct AnnotatedToken {
    std::string surface;
    std::string lemma;
    std::optional<ContentCategory> category;
    bool unprocessable = false;
    bool proper_noun = false;
};

// Maps tagset symbols to content categories. Exact match first; codes with a
// ":" subtype (%mor) fall back to their base code.
class TagTable {
 public:
    // Content tags of the standard English tagger tagset: JJ/JJR/JJS,
    // RB/RBR/RBS, NN/NNS, MD + the VB*/VD*/VH*/VV* verb families. Bare "VB"
    // is included but audited separately (see annotate stats).
    static TagTable treetagger();

    // CHAT %mor category codes (n, v, aux, mod, cop, part, adj, adv, ...).
    // "n:prop" marks proper nouns directly.
    static TagTable chat_mor();

    // Extension rows "tag<TAB>category-code"; later rows override.
    void extend_with_tsv(std::string_view text);

    std::optional<ContentCategory> map(std::string_view tag) const;
    bool is_proper_tag(std::string_view tag) const;

 private:
    std::unordered_map<std::string, ContentCategory> table_;
    std::set<std::string, std::less<>> proper_tags_;
};

// Reads 3-column tagger output: token<TAB>tag<TAB>lemma. A "<unknown>" lemma
// falls back to the lowercase surface form. Throws DataError with the line
// number on malformed rows.
std::vector<TaggedToken> read_tagged_stream(std::string_view file_text);

// One name per line; stored lowercase.
std::set<std::string> load_name_list(std::string_view text);

// True for tokens with bytes outside printable ASCII or equal to one of the
// special transcript tags "@", "xxx", "xx", "yyy", "yy", "www".
bool is_unprocessable(std::string_view surface);

void mark_proper_nouns(std::vector<AnnotatedToken>& tokens, const std::set<std::string>& names);

struct AnnotateStats {
    std::size_t bare_vb_tokens = 0;  // audit count for the bare "VB" tag
};

// Applies the unprocessable check, tag mapping and proper-noun marking.
// Order and length are preserved; nothing is deleted here so the pipeline
// can tally every discard.
std::vector<AnnotatedToken> annotate(std::span<const TaggedToken> tagged,
                                     const std::set<std::string>& names, const TagTable& table,
                                     AnnotateStats* stats = nullptr);

struct MorStream {
    std::vector<TaggedToken> tokens;
    std::size_t utterances_without_mor = 0;
};

// Derives a tagged stream for one role from the %mor tiers of a transcript.
// Utterances lacking an aligned %mor tier are skipped and counted.
MorStream tagged_from_mor(const chat::Transcript& transcript, chat::RoleClass role);

}  // namespace polysemy::annotation
