#include "polysemy/chat.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "polysemy/util.hpp"

namespace polysemy::chat {

namespace {

using util::lower;
using util::split;
using util::split_whitespace;
using util::starts_with;
using util::trim;
using util::upper;

bool has_alnum(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0;
    });
}

RoleClass classify_label(std::string_view label) {
    std::string norm = lower(label);
    for (char& c : norm)
        if (c == ' ' || c == '-') c = '_';
    if (norm == "target_child") return RoleClass::TargetChild;
    if (norm == "mother") return RoleClass::Mother;
    if (norm == "father") return RoleClass::Father;
    if (norm == "investigator") return RoleClass::Investigator;
    return RoleClass::Other;
}

RoleClass classify_code(std::string_view code) {
    const std::string up = upper(code);
    if (up == "CHI") return RoleClass::TargetChild;
    if (up == "MOT") return RoleClass::Mother;
    if (up == "FAT" || up == "PAT") return RoleClass::Father;
    if (up == "INV") return RoleClass::Investigator;
    return RoleClass::Other;
}

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
}

struct LogicalLine {
    std::string text;
    std::size_t line_no = 0;
};

// Physical lines starting with a tab continue the previous tier.
std::vector<LogicalLine> logical_lines(std::string_view text) {
    if (starts_with(text, "\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<LogicalLine> lines;
    std::size_t line_no = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (raw.empty()) continue;
        if (raw.front() == '\t' && !lines.empty()) {
            lines.back().text += ' ';
            lines.back().text += trim(raw);
        } else {
            lines.push_back({std::string(raw), line_no});
        }
    }
    return lines;
}

}  // namespace

const char* role_name(RoleClass role) {
    switch (role) {
        case RoleClass::TargetChild: return "target_child";
        case RoleClass::Mother: return "mother";
        case RoleClass::Father: return "father";
        case RoleClass::Investigator: return "investigator";
        case RoleClass::Other: return "other";
    }
    return "other";
}

double parse_age_months(std::string_view age_field) {
    const std::string_view field = trim(age_field);
    const auto bad = [&] {
        throw DataError("unparseable age field: \"" + std::string(age_field) + "\"");
    };
    const std::size_t semi = field.find(';');
    if (semi == std::string_view::npos || semi == 0) bad();
    const auto digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) != 0;
        });
    };
    const std::string_view years = field.substr(0, semi);
    std::string_view rest = field.substr(semi + 1);
    std::string_view months = rest, days;
    const std::size_t dot = rest.find('.');
    if (dot != std::string_view::npos) {
        months = rest.substr(0, dot);
        days = rest.substr(dot + 1);
        if (!digits(days)) bad();
    }
    if (!digits(years) || !digits(months)) bad();
    const double y = std::stod(std::string(years));
    const double m = std::stod(std::string(months));
    const double d = days.empty() ? 0.0 : std::stod(std::string(days));
    return 12.0 * y + m + d / 30.4375;
}

RoleClass map_role(std::string_view code, std::string_view role_label) {
    if (!trim(role_label).empty()) return classify_label(trim(role_label));
    return classify_code(trim(code));
}

std::vector<std::string> clean_tokens(std::string_view tier_text) {
    std::vector<std::string> tokens;
    for (std::string_view piece : split_whitespace(tier_text)) {
        std::string tok;
        tok.reserve(piece.size());
        for (char c : piece)
            if (c != '<' && c != '>' && c != '[' && c != ']') tok.push_back(c);
        if (has_alnum(tok)) tokens.push_back(std::move(tok));
    }
    return tokens;
}

std::vector<MorEntry> parse_mor_entries(std::string_view tier_text) {
    std::vector<MorEntry> entries;
    for (std::string_view group : split_whitespace(tier_text)) {
        // clitic groups like "pro|he~cop|be&3S" keep their head entry
        const std::size_t tilde = group.find('~');
        std::string_view head = tilde == std::string_view::npos ? group : group.substr(0, tilde);
        const std::size_t bar = head.find('|');
        if (bar == std::string_view::npos) continue;  // punctuation entry
        MorEntry entry;
        entry.category_code = std::string(head.substr(0, bar));
        std::string_view lemma = head.substr(bar + 1);
        const std::size_t cut = lemma.find_first_of("&-=+");
        if (cut != std::string_view::npos) lemma = lemma.substr(0, cut);
        entry.lemma = lower(lemma);
        entries.push_back(std::move(entry));
    }
    return entries;
}

Transcript parse(std::string_view file_text, std::string_view session_id) {
    Transcript t;
    t.session_id = std::string(session_id);

    bool saw_participants = false;
    std::map<std::string, std::string> age_by_code;
    std::size_t participants_line = 0;

    for (const LogicalLine& line : logical_lines(file_text)) {
        const std::string& text = line.text;
        if (text[0] == '@') {
            const std::size_t colon = text.find(':');
            const std::string key = colon == std::string::npos ? text : text.substr(0, colon);
            const std::string_view value =
                colon == std::string::npos ? std::string_view{} : trim(text).substr(colon + 1);
            if (key == "@Participants") {
                saw_participants = true;
                participants_line = line.line_no;
                for (std::string_view entry : split(value, ',')) {
                    const auto fields = split_whitespace(entry);
                    if (fields.empty()) continue;
                    if (fields.size() < 2)
                        fail_at(line.line_no, "participant entry needs code and role: \"" +
                                                  std::string(trim(entry)) + "\"");
                    Participant p;
                    p.code = upper(fields.front());
                    p.role_label = std::string(fields.back());
                    p.role = map_role(p.code, p.role_label);
                    t.participants[p.code] = std::move(p);
                }
                if (t.participants.empty())
                    fail_at(line.line_no, "@Participants header lists no speakers");
            } else if (key == "@ID") {
                const auto fields = split(value, '|');
                if (fields.size() >= 4) {
                    const std::string code = upper(trim(fields[2]));
                    if (t.corpus_name.empty()) t.corpus_name = std::string(trim(fields[1]));
                    age_by_code[code] = std::string(trim(fields[3]));
                    if (!saw_participants && !code.empty()) {
                        // tolerate @ID-only files by synthesizing the participant
                        Participant p;
                        p.code = code;
                        p.role_label = fields.size() >= 8 ? std::string(trim(fields[7])) : "";
                        p.role = map_role(p.code, p.role_label);
                        t.participants[p.code] = std::move(p);
                    }
                }
            }
            // all other headers (@UTF8, @Begin, @End, @Media, ...) are ignored
        } else if (text[0] == '*') {
            const std::size_t colon = text.find(':');
            if (colon == std::string::npos || colon == 1)
                fail_at(line.line_no, "malformed main tier: \"" + text + "\"");
            if (!saw_participants && t.participants.empty())
                fail_at(line.line_no, "main tier before @Participants header");
            Utterance u;
            u.speaker_code = upper(trim(text.substr(1, colon - 1)));
            if (!t.participants.count(u.speaker_code))
                fail_at(line.line_no, "speaker " + u.speaker_code + " not in @Participants");
            u.raw_text = std::string(trim(text.substr(colon + 1)));
            u.tokens = clean_tokens(u.raw_text);
            t.utterances.push_back(std::move(u));
        } else if (text[0] == '%') {
            const std::size_t colon = text.find(':');
            const std::string key = colon == std::string::npos ? text : text.substr(0, colon);
            if (key == "%mor" && !t.utterances.empty()) {
                Utterance& u = t.utterances.back();
                if (!u.mor) {
                    auto entries =
                        parse_mor_entries(colon == std::string::npos
                                              ? std::string_view{}
                                              : std::string_view(text).substr(colon + 1));
                    if (entries.size() == u.tokens.size())
                        u.mor = std::move(entries);
                    else
                        ++t.mor_dropped_misaligned;
                }
            }
        } else {
            fail_at(line.line_no, "unrecognized line: \"" + text + "\"");
        }
    }

    if (!saw_participants)
        throw DataError("no @Participants header found (file ends at line " +
                        std::to_string(participants_line) + ")");

    const Participant* target = nullptr;
    for (const auto& [code, p] : t.participants)
        if (p.role == RoleClass::TargetChild && !target) target = &p;
    if (!target)
        throw DataError("session rejected: no target-child participant");
    const auto age_it = age_by_code.find(target->code);
    if (age_it == age_by_code.end() || trim(age_it->second).empty())
        throw DataError("session rejected: no @ID age for target child " + target->code);
    t.child_age_raw = age_it->second;
    try {
        t.child_age_months = parse_age_months(t.child_age_raw);
    } catch (const DataError&) {
        throw DataError("session rejected: unparseable target-child age \"" + t.child_age_raw +
                        "\"");
    }
    if (!(t.child_age_months > 0.0))
        throw DataError("session rejected: non-positive target-child age");
    return t;
}

std::vector<std::string> tokens_by_role(const Transcript& transcript, RoleClass role) {
    std::vector<std::string> out;
    for (const Utterance& u : transcript.utterances) {
        const auto it = transcript.participants.find(u.speaker_code);
        if (it != transcript.participants.end() && it->second.role == role)
            out.insert(out.end(), u.tokens.begin(), u.tokens.end());
    }
    return out;
}

std::string to_normalized_chat(const Transcript& transcript) {
    std::string out = "@UTF8\n@Begin\n@Participants:\t";
    bool first = true;
    for (const auto& [code, p] : transcript.participants) {
        if (!first) out += ", ";
        out += code + " " + (p.role_label.empty() ? "Other" : p.role_label);
        first = false;
    }
    out += '\n';
    for (const auto& [code, p] : transcript.participants) {
        out += "@ID:\teng|" + transcript.corpus_name + "|" + code + "|";
        if (p.role == RoleClass::TargetChild) out += transcript.child_age_raw;
        out += "||||" + p.role_label + "|||\n";
    }
    for (const Utterance& u : transcript.utterances) {
        out += "*" + u.speaker_code + ":\t";
        for (std::size_t i = 0; i < u.tokens.size(); ++i) {
            if (i) out += ' ';
            out += u.tokens[i];
        }
        out += '\n';
        if (u.mor) {
            out += "%mor:\t";
            for (std::size_t i = 0; i < u.mor->size(); ++i) {
                if (i) out += ' ';
                out += (*u.mor)[i].category_code + "|" + (*u.mor)[i].lemma;
            }
            out += '\n';
        }
    }
    out += "@End\n";
    return out;
}

std::string to_json(const Transcript& transcript) {
    nlohmann::ordered_json j;
    j["session_id"] = transcript.session_id;
    j["corpus"] = transcript.corpus_name;
    j["child_age_months"] = transcript.child_age_months;
    j["participants"] = nlohmann::ordered_json::array();
    for (const auto& [code, p] : transcript.participants)
        j["participants"].push_back({{"code", code},
                                     {"role_label", p.role_label},
                                     {"role", role_name(p.role)}});
    j["utterances"] = nlohmann::ordered_json::array();
    for (const Utterance& u : transcript.utterances) {
        nlohmann::ordered_json ju;
        ju["speaker"] = u.speaker_code;
        ju["raw"] = u.raw_text;
        ju["tokens"] = u.tokens;
        if (u.mor) {
            ju["mor"] = nlohmann::ordered_json::array();
            for (const MorEntry& e : *u.mor)
                ju["mor"].push_back({{"category", e.category_code}, {"lemma", e.lemma}});
        }
        j["utterances"].push_back(std::move(ju));
    }
    return j.dump(2);
}

}  // namespace polysemy::chat
