#include "polysemy/annotation.hpp"

#include <algorithm>
#include <cctype>

#include "polysemy/util.hpp"

namespace polysemy::annotation {

namespace {

using util::lower;
using util::split;
using util::trim;

}  // namespace

TagTable TagTable::treetagger() {
    TagTable t;
    const auto add = [&](std::initializer_list<const char*> tags, ContentCategory cat) {
        for (const char* tag : tags) t.table_.emplace(tag, cat);
    };
    add({"JJ", "JJR", "JJS"}, ContentCategory::Adjective);
    add({"RB", "RBR", "RBS"}, ContentCategory::Adverb);
    add({"NN", "NNS"}, ContentCategory::Noun);
    add({"MD", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "VD", "VDD", "VDG", "VDN", "VDP",
         "VDZ", "VH", "VHD", "VHG", "VHN", "VHP", "VHZ", "VV", "VVD", "VVG", "VVN", "VVP",
         "VVZ"},
        ContentCategory::Verb);
    return t;
}

TagTable TagTable::chat_mor() {
    TagTable t;
    const auto add = [&](std::initializer_list<const char*> tags, ContentCategory cat) {
        for (const char* tag : tags) t.table_.emplace(tag, cat);
    };
    add({"n"}, ContentCategory::Noun);
    add({"v", "aux", "mod", "cop", "part"}, ContentCategory::Verb);
    add({"adj"}, ContentCategory::Adjective);
    add({"adv"}, ContentCategory::Adverb);
    t.table_.emplace("n:prop", ContentCategory::Noun);
    t.proper_tags_.insert("n:prop");
    return t;
}

void TagTable::extend_with_tsv(std::string_view text) {
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || line.front() == '#') continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 2)
            throw DataError("tag map line " + std::to_string(line_no) +
                            ": expected tag<TAB>category-code");
        const auto cat = lexicon::category_from_code(trim(fields[1]));
        if (!cat)
            throw DataError("tag map line " + std::to_string(line_no) + ": bad category code \"" +
                            std::string(fields[1]) + "\"");
        table_[std::string(trim(fields[0]))] = *cat;
    }
}

std::optional<ContentCategory> TagTable::map(std::string_view tag) const {
    auto it = table_.find(std::string(tag));
    if (it != table_.end()) return it->second;
    const std::size_t colon = tag.find(':');
    if (colon != std::string_view::npos) {
        it = table_.find(std::string(tag.substr(0, colon)));
        if (it != table_.end()) return it->second;
    }
    return std::nullopt;
}

bool TagTable::is_proper_tag(std::string_view tag) const {
    return proper_tags_.find(tag) != proper_tags_.end();
}

std::vector<TaggedToken> read_tagged_stream(std::string_view file_text) {
    std::vector<TaggedToken> out;
    std::size_t line_no = 0;
    for (std::string_view line : split(file_text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 3)
            throw DataError("tagged stream line " + std::to_string(line_no) +
                            ": expected token<TAB>tag<TAB>lemma");
        TaggedToken t;
        t.surface = std::string(fields[0]);
        t.tag = std::string(fields[1]);
        t.lemma = fields[2] == "<unknown>" ? lower(fields[0]) : std::string(fields[2]);
        t.index = static_cast<int>(out.size());
        out.push_back(std::move(t));
    }
    return out;
}

std::set<std::string> load_name_list(std::string_view text) {
    std::set<std::string> names;
    for (std::string_view line : split(text, '\n')) {
        const std::string_view name = trim(line);
        if (!name.empty()) names.insert(lower(name));
    }
    return names;
}

bool is_unprocessable(std::string_view surface) {
    for (unsigned char c : surface)
        if (c < 0x20 || c > 0x7E) return true;
    const std::string low = lower(surface);
    return low == "@" || low == "xxx" || low == "xx" || low == "yyy" || low == "yy" ||
           low == "www";
}

void mark_proper_nouns(std::vector<AnnotatedToken>& tokens, const std::set<std::string>& names) {
    if (names.empty()) return;
    for (AnnotatedToken& t : tokens)
        if (names.count(lower(t.surface))) t.proper_noun = true;
}

std::vector<AnnotatedToken> annotate(std::span<const TaggedToken> tagged,
                                     const std::set<std::string>& names, const TagTable& table,
                                     AnnotateStats* stats) {
    std::vector<AnnotatedToken> out;
    out.reserve(tagged.size());
    AnnotateStats local;
    for (const TaggedToken& t : tagged) {
        AnnotatedToken a;
        a.surface = t.surface;
        a.lemma = t.lemma;
        a.category = table.map(t.tag);
        a.unprocessable = is_unprocessable(t.surface);
        a.proper_noun = table.is_proper_tag(t.tag);
        if (t.tag == "VB") ++local.bare_vb_tokens;
        out.push_back(std::move(a));
    }
    mark_proper_nouns(out, names);
    if (stats) *stats = local;
    return out;
}

MorStream tagged_from_mor(const chat::Transcript& transcript, chat::RoleClass role) {
    MorStream result;
    for (const chat::Utterance& u : transcript.utterances) {
        const auto it = transcript.participants.find(u.speaker_code);
        if (it == transcript.participants.end() || it->second.role != role) continue;
        if (!u.mor) {
            if (!u.tokens.empty()) ++result.utterances_without_mor;
            continue;
        }
        for (std::size_t i = 0; i < u.tokens.size(); ++i) {
            TaggedToken t;
            t.surface = u.tokens[i];
            t.tag = (*u.mor)[i].category_code;
            t.lemma = (*u.mor)[i].lemma.empty() ? lower(u.tokens[i]) : (*u.mor)[i].lemma;
            t.index = static_cast<int>(result.tokens.size());
            result.tokens.push_back(std::move(t));
        }
    }
    return result;
}

}  // namespace polysemy::annotation
