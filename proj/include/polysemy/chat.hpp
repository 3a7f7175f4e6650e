// CHAT transcript parsing: session headers, participant roles, child age and
// per-utterance token streams (with the %mor dependent tier when present).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polysemy::chat {

enum class RoleClass { TargetChild, Mother, Father, Investigator, Other };

const char* role_name(RoleClass role);

struct Participant {
    std::string code;        // uppercase speaker code
    std::string role_label;  // role string as written in the file
    RoleClass role = RoleClass::Other;
};

struct MorEntry {
    std::string category_code;  // morphology-tier category, e.g. "n", "v", "pro:per"
    std::string lemma;
};

struct Utterance {
    std::string speaker_code;
    std::string raw_text;
    std::vector<std::string> tokens;
    std::optional<std::vector<MorEntry>> mor;  // aligned 1:1 with tokens when present
};

struct Transcript {
    std::string session_id;
    std::string corpus_name;
    std::map<std::string, Participant> participants;  // keyed by uppercase code
    double child_age_months = 0.0;
    std::string child_age_raw;  // age field as written, kept for normalization
    std::vector<Utterance> utterances;
    int mor_dropped_misaligned = 0;  // %mor tiers discarded for length mismatch
};

// Age fields look like "2;06.14" (years;months.days) or "3;02". Days use the
// mean Gregorian month of 30.4375 days. Throws DataError otherwise.
double parse_age_months(std::string_view age_field);

// The role label (e.g. "Target_Child", "Mother") decides when present;
// otherwise the speaker code (CHI, MOT, FAT/PAT, INV) does. Anything
// unrecognized is Other. Total function, case-insensitive.
RoleClass map_role(std::string_view code, std::string_view role_label);

// Tokenizes one main-tier line: whitespace split, angle/square bracket
// characters stripped, tokens without any ASCII letter or digit (utterance
// terminators, retracing markers) dropped.
std::vector<std::string> clean_tokens(std::string_view tier_text);

// Parses "%mor:" tier content; punctuation entries are dropped and clitic
// groups keep their head entry, mirroring clean_tokens on the main tier.
std::vector<MorEntry> parse_mor_entries(std::string_view tier_text);

// Parses a whole .cha file. Throws DataError on malformed input (naming the
// line) and when no target-child age can be established for the session.
Transcript parse(std::string_view file_text, std::string_view session_id);

// Cleaned tokens of all utterances spoken by the given role, document order.
std::vector<std::string> tokens_by_role(const Transcript& transcript, RoleClass role);

// Canonical CHAT rendering of a parsed transcript; parsing it again yields
// the same structure (raw utterance text becomes the joined token list).
std::string to_normalized_chat(const Transcript& transcript);

// One JSON object per session, used by the debug dump.
std::string to_json(const Transcript& transcript);

}  // namespace polysemy::chat
