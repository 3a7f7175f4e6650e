#include "polysemy/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "polysemy/util.hpp"

namespace polysemy::lexicon {

namespace {

using util::lower;
using util::split;
using util::split_whitespace;
using util::starts_with;
using util::trim;

std::optional<int> parse_positive_int(std::string_view s) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || value < 1) return std::nullopt;
    return value;
}

const char* source_tag(InventorySource source) {
    return source == InventorySource::WordNetFull ? "wordnet" : "semcor";
}

}  // namespace

char category_code(ContentCategory cat) {
    switch (cat) {
        case ContentCategory::Noun: return 'n';
        case ContentCategory::Verb: return 'v';
        case ContentCategory::Adjective: return 'a';
        case ContentCategory::Adverb: return 'r';
    }
    return '?';
}

const char* category_name(ContentCategory cat) {
    switch (cat) {
        case ContentCategory::Noun: return "noun";
        case ContentCategory::Verb: return "verb";
        case ContentCategory::Adjective: return "adjective";
        case ContentCategory::Adverb: return "adverb";
    }
    return "?";
}

std::optional<ContentCategory> category_from_code(std::string_view code) {
    if (code.size() != 1) return std::nullopt;
    switch (code[0]) {
        case 'n': return ContentCategory::Noun;
        case 'v': return ContentCategory::Verb;
        case 'a': return ContentCategory::Adjective;
        case 'r': return ContentCategory::Adverb;
        default: return std::nullopt;
    }
}

std::string normalize_lemma(std::string_view lemma) {
    std::string out = lower(lemma);
    std::replace(out.begin(), out.end(), ' ', '_');
    return out;
}

std::size_t LemmaKeyHash::operator()(const LemmaKey& k) const {
    return std::hash<std::string>{}(k.lemma) * 4 + static_cast<std::size_t>(k.category);
}

std::optional<int> SenseInventory::count(std::string_view lemma, ContentCategory category) const {
    const auto it = entries_.find(LemmaKey{std::string(lemma), category});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void SenseInventory::insert(std::string lemma, ContentCategory category, int count,
                            const std::string& context) {
    if (count < 1) throw DataError(context + ": sense count must be >= 1");
    const auto [it, inserted] =
        entries_.emplace(LemmaKey{std::move(lemma), category}, count);
    if (!inserted)
        throw DataError(context + ": duplicate entry for \"" + it->first.lemma + "\" (" +
                        category_name(category) + ")");
}

std::vector<std::pair<LemmaKey, int>> SenseInventory::sorted_entries() const {
    std::vector<std::pair<LemmaKey, int>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.lemma != b.first.lemma) return a.first.lemma < b.first.lemma;
        return category_code(a.first.category) < category_code(b.first.category);
    });
    return out;
}

SenseInventory load_wordnet_index(const std::map<ContentCategory, std::string>& index_texts) {
    SenseInventory inv(InventorySource::WordNetFull);
    for (const auto& [category, text] : index_texts) {
        const std::string file_tag = std::string("index.") + category_name(category);
        std::size_t line_no = 0;
        for (std::string_view line : split(text, '\n')) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty() || starts_with(line, "  ")) continue;  // license header
            const auto fields = split_whitespace(line);
            const std::string context = file_tag + " line " + std::to_string(line_no);
            if (fields.size() < 3) throw DataError(context + ": too few fields");
            const std::string lemma = normalize_lemma(fields[0]);
            if (fields[1].size() != 1 || fields[1][0] != category_code(category))
                throw DataError(context + ": unexpected pos field \"" + std::string(fields[1]) +
                                "\"");
            const auto count = parse_positive_int(fields[2]);
            if (!count)
                throw DataError(context + ": bad synset count \"" + std::string(fields[2]) +
                                "\"");
            inv.insert(lemma, category, *count, context);
        }
    }
    return inv;
}

namespace {

// Category of one sense-tagged SemCor element; nullopt means unmappable.
std::optional<ContentCategory> semcor_category(std::string_view pos, std::string_view lexsn) {
    if (starts_with(lexsn, "5:")) return ContentCategory::Adjective;  // adjective satellite
    if (starts_with(pos, "NN")) return ContentCategory::Noun;
    if (starts_with(pos, "VB") || starts_with(pos, "VV") || starts_with(pos, "VH") ||
        starts_with(pos, "VD") || pos == "MD")
        return ContentCategory::Verb;
    if (starts_with(pos, "JJ")) return ContentCategory::Adjective;
    if (starts_with(pos, "RB")) return ContentCategory::Adverb;
    return std::nullopt;
}

}  // namespace

SenseInventory ingest_semcor(std::span<const std::string> tag_file_texts,
                             SemCorIngestStats* stats) {
    SemCorIngestStats local;
    std::map<LemmaKey, std::set<std::string>> senses;
    for (const std::string& text : tag_file_texts) {
        std::size_t pos = 0;
        while ((pos = text.find("<wf ", pos)) != std::string::npos) {
            const std::size_t end = text.find('>', pos);
            if (end == std::string::npos) break;
            const std::string_view attrs = std::string_view(text).substr(pos + 4, end - pos - 4);
            pos = end + 1;

            std::string_view cmd, wf_pos, lemma, wnsn, lexsn;
            for (std::string_view field : split_whitespace(attrs)) {
                const std::size_t eq = field.find('=');
                if (eq == std::string_view::npos) continue;
                const std::string_view key = field.substr(0, eq);
                const std::string_view value = field.substr(eq + 1);
                if (key == "cmd") cmd = value;
                else if (key == "pos") wf_pos = value;
                else if (key == "lemma") lemma = value;
                else if (key == "wnsn") wnsn = value;
                else if (key == "lexsn") lexsn = value;
            }
            if (cmd != "done" || lemma.empty() || (wnsn.empty() && lexsn.empty())) continue;
            ++local.sense_tagged;
            const auto category = semcor_category(wf_pos, lexsn);
            if (!category) {
                ++local.skipped_unmappable;
                continue;
            }
            const std::string sense_id = std::string(wnsn.empty() ? lexsn : wnsn);
            senses[LemmaKey{normalize_lemma(lemma), *category}].insert(sense_id);
        }
    }
    SenseInventory inv(InventorySource::SemCorAttested);
    for (const auto& [key, ids] : senses)
        inv.insert(key.lemma, key.category, static_cast<int>(ids.size()), "semcor");
    if (stats) *stats = local;
    return inv;
}

SenseInventory load_tsv(std::string_view text) {
    const auto lines = split(text, '\n');
    if (lines.empty() || !starts_with(lines[0], "#source="))
        throw DataError("lexicon TSV line 1: missing #source=wordnet|semcor directive");
    const std::string_view source_value = trim(lines[0]).substr(8);
    InventorySource source;
    if (source_value == "wordnet")
        source = InventorySource::WordNetFull;
    else if (source_value == "semcor")
        source = InventorySource::SemCorAttested;
    else
        throw DataError("lexicon TSV line 1: unknown source \"" + std::string(source_value) +
                        "\"");
    SenseInventory inv(source);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        if (line == "lemma\tpos\tcount") continue;  // optional header
        const std::string context = "lexicon TSV line " + std::to_string(i + 1);
        const auto fields = split(line, '\t');
        if (fields.size() != 3) throw DataError(context + ": expected 3 tab-separated fields");
        const auto category = category_from_code(fields[1]);
        if (!category)
            throw DataError(context + ": bad category code \"" + std::string(fields[1]) + "\"");
        const auto count = parse_positive_int(fields[2]);
        if (!count) throw DataError(context + ": bad count \"" + std::string(fields[2]) + "\"");
        const std::string lemma = normalize_lemma(trim(fields[0]));
        if (lemma.empty()) throw DataError(context + ": empty lemma");
        inv.insert(lemma, *category, *count, context);
    }
    return inv;
}

std::string export_tsv(const SenseInventory& inventory) {
    std::string out = std::string("#source=") + source_tag(inventory.source()) + "\n";
    out += "lemma\tpos\tcount\n";
    for (const auto& [key, count] : inventory.sorted_entries()) {
        out += key.lemma;
        out += '\t';
        out += category_code(key.category);
        out += '\t';
        out += std::to_string(count);
        out += '\n';
    }
    return out;
}

std::optional<int> lookup_wordnet(const SenseInventory& inv, std::string_view surface,
                                  std::string_view lemma, ContentCategory category) {
    if (const auto hit = inv.count(normalize_lemma(surface), category)) return hit;
    return inv.count(normalize_lemma(lemma), category);
}

std::optional<int> lookup_semcor(const SenseInventory& inv, std::string_view lemma,
                                 ContentCategory category) {
    return inv.count(normalize_lemma(lemma), category);
}

}  // namespace polysemy::lexicon
