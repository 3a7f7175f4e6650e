// Sense inventories: how many senses a (lemma, category) pair has, either in
// the full WordNet index or attested in the sense-tagged SemCor corpus.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polysemy::lexicon {

enum class ContentCategory { Noun, Verb, Adjective, Adverb };

inline constexpr ContentCategory kAllCategories[] = {
    ContentCategory::Noun, ContentCategory::Verb, ContentCategory::Adjective,
    ContentCategory::Adverb};

char category_code(ContentCategory cat);                              // n v a r
const char* category_name(ContentCategory cat);                       // noun ...
std::optional<ContentCategory> category_from_code(std::string_view);  // "n" -> Noun

// Lowercase, with internal spaces collapsed to underscores (index convention).
std::string normalize_lemma(std::string_view lemma);

enum class InventorySource { WordNetFull, SemCorAttested };

struct LemmaKey {
    std::string lemma;
    ContentCategory category;
    auto operator<=>(const LemmaKey&) const = default;
};

struct LemmaKeyHash {
    std::size_t operator()(const LemmaKey& k) const;
};

class SenseInventory {
 public:
    explicit SenseInventory(InventorySource source) : source_(source) {}

    InventorySource source() const { return source_; }
    std::size_t size() const { return entries_.size(); }

    // `lemma` must already be normalized; absent pairs return nullopt.
    std::optional<int> count(std::string_view lemma, ContentCategory category) const;

    // Throws DataError on duplicate keys or counts < 1.
    void insert(std::string lemma, ContentCategory category, int count,
                const std::string& context);

    std::vector<std::pair<LemmaKey, int>> sorted_entries() const;

 private:
    InventorySource source_;
    std::unordered_map<LemmaKey, int, LemmaKeyHash> entries_;
};

// WordNet 3.0 index.{noun,verb,adj,adv} reader; the third field of each data
// line is the synset count. License lines begin with two spaces.
SenseInventory load_wordnet_index(const std::map<ContentCategory, std::string>& index_texts);

struct SemCorIngestStats {
    std::size_t sense_tagged = 0;        // elements carrying a sense tag
    std::size_t skipped_unmappable = 0;  // sense-tagged but with unknown pos
};

// SemCor tagfile reader: counts DISTINCT sense identifiers (the wnsn
// attribute when present, else the full lexsn string) per (lemma, category).
SenseInventory ingest_semcor(std::span<const std::string> tag_file_texts,
                             SemCorIngestStats* stats = nullptr);

// Canonical TSV interchange: "#source=wordnet|semcor" directive, optional
// "lemma<TAB>pos<TAB>count" header, then one entry per line.
SenseInventory load_tsv(std::string_view text);
std::string export_tsv(const SenseInventory& inventory);

// Two-step query: surface form first, lemma as fallback. Absence means the
// caller discards the token.
std::optional<int> lookup_wordnet(const SenseInventory& inv, std::string_view surface,
                                  std::string_view lemma, ContentCategory category);

// Lemma-only query against the attested inventory.
std::optional<int> lookup_semcor(const SenseInventory& inv, std::string_view lemma,
                                 ContentCategory category);

}  // namespace polysemy::lexicon
